"""
Image I/O, dataset listing, byte/float conversion and quality metrics.

Metrics:
- PSNR: Peak Signal-to-Noise Ratio over all channels, L = 255
- SSIM: Gaussian-window structural similarity, per channel then averaged

Both metrics run on 8-bit buffers, i.e. on what would actually be transmitted.
"""

import io
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import torch
from PIL import Image, UnidentifiedImageError
from skimage.metrics import structural_similarity

from utils.errors import StegoError

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = ('.png', '.bmp', '.jpg', '.jpeg', '.tif', '.tiff')
SSIM_SIGMA = 1.5
SSIM_WINDOW = 11
PSNR_IDENTICAL = math.inf


@dataclass
class ImageBuffer:
    """8-bit RGB image, row-major, data shape (height, width, 3)."""
    width: int
    height: int
    data: np.ndarray

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.uint8)
        if self.data.shape != (self.height, self.width, 3):
            raise StegoError.from_code(
                'IMG_003', f'data shape {self.data.shape} vs {self.width}x{self.height}x3'
            )

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array, dtype=np.uint8)
        return cls(width=array.shape[1], height=array.shape[0], data=array)

    @property
    def size(self):
        return self.height, self.width

    def copy(self):
        return ImageBuffer(self.width, self.height, self.data.copy())


def _decode(source, label):
    try:
        with Image.open(source) as img:
            img.load()
            return img.convert('RGB')
    except (UnidentifiedImageError, OSError, SyntaxError) as e:
        raise StegoError.from_code('IMG_002', f'{label}: {e}')


def _resize(img, target):
    height, width = target
    if height <= 0 or width <= 0:
        raise StegoError.from_code('IMG_005', f'{target}')
    if img.size != (width, height):
        img = img.resize((width, height), Image.BILINEAR)
    return ImageBuffer.from_array(np.array(img))


def load_image(path, target=None):
    """
    Load an image as 8-bit RGB, bilinearly resized to target.

    Args:
        path (str): Image file path
        target (tuple, optional): (height, width); None keeps the stored size

    Returns:
        ImageBuffer: Decoded image; grayscale is promoted to RGB by channel copy

    Raises:
        StegoError: IMG_001 missing file, IMG_002 undecodable, IMG_005 bad target
    """
    if target is not None and (target[0] <= 0 or target[1] <= 0):
        raise StegoError.from_code('IMG_005', f'{target}')
    if not os.path.isfile(path):
        raise StegoError.from_code('IMG_001', path)
    img = _decode(path, path)
    if target is None:
        return ImageBuffer.from_array(np.array(img))
    return _resize(img, target)


def save_image(path, image):
    """Write an ImageBuffer as PNG (8-bit RGB)."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    Image.fromarray(image.data).save(path, format='PNG')


def encode_png(image):
    """PNG bytes of an image; used to simulate transmission."""
    buffer = io.BytesIO()
    Image.fromarray(image.data).save(buffer, format='PNG')
    return buffer.getvalue()


def decode_png(payload):
    img = _decode(io.BytesIO(payload), 'in-memory PNG')
    return ImageBuffer.from_array(np.array(img))


# ============================================================
# BYTE / FLOAT CONVERSION
# ============================================================

def to_tensor(image):
    """ImageBuffer -> float32 tensor (3, H, W) holding v / 255."""
    array = torch.from_numpy(image.data.astype(np.float32) / 255.0)
    return array.permute(2, 0, 1).contiguous()


def from_tensor(tensor):
    """
    Float tensor (3, H, W) -> ImageBuffer: clamp to [0, 1], then round-half-up of v * 255.

    Raises:
        StegoError: IMG_006 if the tensor has NaN or infinite values
    """
    values = tensor.detach().to(torch.float64)
    if not torch.isfinite(values).all():
        raise StegoError.from_code('IMG_006')
    if values.dim() != 3 or values.shape[0] != 3:
        raise StegoError.from_code('IMG_003', f'tensor shape {tuple(values.shape)}')
    quantized = torch.floor(values.clamp(0.0, 1.0) * 255.0 + 0.5).to(torch.uint8)
    return ImageBuffer.from_array(quantized.permute(1, 2, 0).numpy())


def quantize(tensor):
    """Round-trip a float image through 8 bits, as transmission would."""
    return to_tensor(from_tensor(tensor))


# ============================================================
# QUALITY METRICS
# ============================================================

def _check_same_dims(a, b):
    if a.data.shape != b.data.shape:
        raise StegoError.from_code('IMG_003', f'{a.data.shape} vs {b.data.shape}')


def psnr(a, b):
    """
    PSNR in dB: 10 * log10(255^2 / MSE) over every channel value.

    Returns:
        float: math.inf when the images are identical
    """
    _check_same_dims(a, b)
    diff = a.data.astype(np.float64) - b.data.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return PSNR_IDENTICAL
    return 10.0 * math.log10(255.0 ** 2 / mse)


def ssim(a, b):
    """
    SSIM with an 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03, L=255,
    computed per channel and averaged.
    """
    _check_same_dims(a, b)
    if min(a.height, a.width) < SSIM_WINDOW:
        raise StegoError.from_code('IMG_004', f'{a.width}x{a.height} < {SSIM_WINDOW}')
    return float(structural_similarity(
        a.data.astype(np.float64),
        b.data.astype(np.float64),
        gaussian_weights=True,
        sigma=SSIM_SIGMA,
        use_sample_covariance=False,
        data_range=255.0,
        channel_axis=-1,
    ))


# ============================================================
# DATASETS
# ============================================================

@dataclass
class DatasetHandle:
    """Deterministically ordered image directory."""
    root: str
    names: list = field(default_factory=list)
    target: tuple = (32, 32)

    def __len__(self):
        return len(self.names)

    def path(self, index):
        return os.path.join(self.root, self.names[index])

    def load(self, index):
        return load_image(self.path(index), self.target)

    def load_tensors(self, workers=4):
        """
        All images as one float tensor (count, 3, H, W), in listing order.

        Loading is prefetched on a thread pool; map() keeps listing order.
        """
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            images = list(pool.map(self.load, range(len(self.names))))
        return torch.stack([to_tensor(img) for img in images])


def list_dataset(directory, target):
    """
    List the decodable images of a directory in lexicographic file-name order.

    Raises:
        StegoError: IMG_001 missing directory, IMG_007 nothing decodable
    """
    if not os.path.isdir(directory):
        raise StegoError.from_code('IMG_001', directory)
    names = []
    for name in sorted(os.listdir(directory)):
        path = os.path.join(directory, name)
        if not os.path.isfile(path) or not name.lower().endswith(IMAGE_SUFFIXES):
            continue
        try:
            with Image.open(path) as img:
                img.verify()
        except (UnidentifiedImageError, OSError, SyntaxError):
            logger.warning("Skipping undecodable file %s", path)
            continue
        names.append(name)
    if not names:
        raise StegoError.from_code('IMG_007', directory)
    return DatasetHandle(root=directory, names=names, target=tuple(target))
