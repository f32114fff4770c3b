"""
Bit-level secret messages: hex codec, seeded generation and bit-error measurement.

All packing is most-significant bit first.
"""

from dataclasses import dataclass

import torch

from utils.errors import StegoError
from utils.splitmix import BitStream

HEX_DIGITS = '0123456789abcdefABCDEF'


@dataclass(frozen=True)
class BitMessage:
    """Fixed-length binary secret (real or fake)."""
    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits or any(b not in (0, 1) for b in bits):
            raise StegoError.from_code('MSG_005')
        object.__setattr__(self, 'bits', bits)

    def __len__(self):
        return len(self.bits)

    @classmethod
    def from_tensor(cls, values):
        """Exact 0/1 tensor (any float/int dtype) to a message."""
        return cls(tuple(int(v) for v in values.flatten().tolist()))

    def as_tensor(self, dtype=torch.float32):
        return torch.tensor(self.bits, dtype=dtype)


def parse_hex(hex_text, nbits):
    """
    Parse a hex string into a message of nbits bits.

    Args:
        hex_text (str): ceil(nbits/4) hex digits
        nbits (int): Message length in bits

    Returns:
        BitMessage: Bits taken MSB-first, truncated to nbits

    Raises:
        StegoError: MSG_001 wrong length, MSG_002 bad character, MSG_003 nonzero pad
    """
    if nbits < 1:
        raise StegoError.from_code('MSG_005', f'nbits={nbits}')
    expected = (nbits + 3) // 4
    if len(hex_text) != expected:
        raise StegoError.from_code('MSG_001', f'expected {expected} digits, got {len(hex_text)}')
    bad = [c for c in hex_text if c not in HEX_DIGITS]
    if bad:
        raise StegoError.from_code('MSG_002', repr(bad[0]))

    bits = []
    for digit in hex_text:
        value = int(digit, 16)
        bits.extend((value >> shift) & 1 for shift in (3, 2, 1, 0))
    if any(bits[nbits:]):
        raise StegoError.from_code('MSG_003', hex_text)
    return BitMessage(tuple(bits[:nbits]))


def to_hex(message):
    """Pack bits MSB-first into uppercase hex, zero-padding the final nibble."""
    bits = list(message.bits)
    bits.extend([0] * (-len(bits) % 4))
    digits = []
    for i in range(0, len(bits), 4):
        value = bits[i] << 3 | bits[i + 1] << 2 | bits[i + 2] << 1 | bits[i + 3]
        digits.append('0123456789ABCDEF'[value])
    return ''.join(digits)


def random_message(seed, nbits):
    """Deterministic message: the first nbits of the SplitMix64 stream keyed by seed."""
    if nbits < 1:
        raise StegoError.from_code('MSG_005', f'nbits={nbits}')
    return BitMessage(tuple(BitStream(seed).take(nbits)))


def bit_error(a, b):
    """Fraction of differing positions between two equal-length messages."""
    if len(a) != len(b):
        raise StegoError.from_code('MSG_004', f'{len(a)} vs {len(b)}')
    differing = sum(x != y for x, y in zip(a.bits, b.bits))
    return differing / len(a)


class MessageStream:
    """Seeded source of message batches for training and evaluation."""

    def __init__(self, seed):
        self._bits = BitStream(seed)

    def next_batch(self, batch, n_messages, nbits):
        """Tensor [batch, n_messages, nbits] of 0/1 floats; sample-major, then decoder order."""
        flat = self._bits.take(batch * n_messages * nbits)
        return torch.tensor(flat, dtype=torch.float32).view(batch, n_messages, nbits)
