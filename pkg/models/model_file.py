"""
Versioned little-endian model file.

Layout:
    magic 'DSTG' | version u32 (=1)
    metadata: decoders u32, bits u32, height u32, width u32,
              lambda_i, lambda_m_outer, lambda_a, lambda_m, lambda_b as f64
    tensor count u32
    per tensor: name length u32, UTF-8 name, rank u32, dims u64 * rank,
                values as f32

Decoders built without a sigmoid add a scalar `decoders.<i>.linear_output`
tensor; the layout itself is the same for both variants.
"""

import logging
import os
import struct

import numpy as np
import torch

from models.networks import LINEAR_OUTPUT_MARKER, DeniableStegoModel
from utils.errors import StegoError
from utils.losses import LossWeights

logger = logging.getLogger(__name__)

MAGIC = b'DSTG'
FORMAT_VERSION = 1
MAX_TENSOR_ELEMENTS = 1 << 31
# BN batch counters are unused with a fixed momentum.
SKIPPED_SUFFIX = 'num_batches_tracked'


def _persistent_tensors(model):
    return [(name, tensor) for name, tensor in model.state_dict().items()
            if not name.endswith(SKIPPED_SUFFIX)]


def save_model(path, model):
    """Write every parameter, running statistic and the metadata block."""
    tensors = _persistent_tensors(model)
    weights = model.weights
    chunks = [
        MAGIC,
        struct.pack('<I', FORMAT_VERSION),
        struct.pack('<4I', model.n_decoders, model.bits, *model.image_size),
        struct.pack('<5d', weights.lambda_i, weights.lambda_m_outer, weights.lambda_a,
                    weights.lambda_m, weights.lambda_b),
        struct.pack('<I', len(tensors)),
    ]
    for name, tensor in tensors:
        encoded = name.encode('utf-8')
        chunks.append(struct.pack('<I', len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack('<I', tensor.dim()))
        chunks.append(struct.pack(f'<{tensor.dim()}Q', *tensor.shape))
        values = tensor.detach().to(torch.float32).contiguous().numpy()
        chunks.append(values.astype('<f4').tobytes())

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(b''.join(chunks))
    logger.debug("Saved %d tensors to %s", len(tensors), path)


class _Reader:

    def __init__(self, payload):
        self.payload = payload
        self.offset = 0

    @property
    def remaining(self):
        return len(self.payload) - self.offset

    def take(self, size):
        if size > self.remaining:
            raise StegoError.from_code('FILE_003', f'need {size} bytes at offset {self.offset}')
        chunk = self.payload[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load_model(path):
    """
    Rebuild a DeniableStegoModel from a model file.

    Raises:
        StegoError: FILE_001 bad magic, FILE_002 unsupported version,
            FILE_003 truncated, FILE_004 dim overflow, FILE_005 layout mismatch
    """
    if not os.path.isfile(path):
        raise StegoError.from_code('FILE_006', path)
    with open(path, 'rb') as f:
        reader = _Reader(f.read())

    if reader.take(4) != MAGIC:
        raise StegoError.from_code('FILE_001', path)
    (version,) = reader.unpack('<I')
    if version != FORMAT_VERSION:
        raise StegoError.from_code('FILE_002', f'version {version}, reader supports {FORMAT_VERSION}')
    decoders, bits, height, width = reader.unpack('<4I')
    lambda_i, lambda_m_outer, lambda_a, lambda_m, lambda_b = reader.unpack('<5d')
    (count,) = reader.unpack('<I')

    tensors = {}
    for _ in range(count):
        (name_length,) = reader.unpack('<I')
        try:
            name = reader.take(name_length).decode('utf-8')
        except UnicodeDecodeError:
            raise StegoError.from_code(
                'FILE_005', f'tensor name at offset {reader.offset - name_length} is not UTF-8')
        (rank,) = reader.unpack('<I')
        dims = reader.unpack(f'<{rank}Q') if rank else ()
        elements = 1
        for dim in dims:
            elements *= dim
            if elements > MAX_TENSOR_ELEMENTS or elements * 4 > reader.remaining:
                raise StegoError.from_code('FILE_004', f'{name}: dims {dims}')
        values = np.frombuffer(reader.take(elements * 4), dtype='<f4', count=elements)
        tensors[name] = torch.from_numpy(values.astype(np.float32)).reshape(dims)

    # Decoders without a sigmoid are recognised by their marker buffer
    linear_head = f'decoders.0.{LINEAR_OUTPUT_MARKER}' in tensors
    weights = LossWeights(lambda_i=lambda_i, lambda_m_outer=lambda_m_outer, lambda_a=lambda_a,
                          lambda_m=lambda_m, lambda_b=lambda_b)
    with torch.random.fork_rng():
        model = DeniableStegoModel(bits=bits, decoders=decoders, image_size=(height, width),
                                   weights=weights, decoder_sigmoid=not linear_head)

    expected = {name for name, _ in _persistent_tensors(model)}
    if expected != set(tensors):
        missing = sorted(expected - set(tensors))[:3]
        extra = sorted(set(tensors) - expected)[:3]
        raise StegoError.from_code('FILE_005', f'missing {missing}, unexpected {extra}')
    state = model.state_dict()
    for name, value in tensors.items():
        if tuple(state[name].shape) != tuple(value.shape):
            raise StegoError.from_code('FILE_005', f'{name}: {tuple(value.shape)}')
        state[name].copy_(value)
    return model
