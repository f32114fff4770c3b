"""
Exact receiver-deniable constructions: a one-time-pad layer with key forgery,
and keyed location-split LSB embedding of a real and a fake message.

Both parties derive one shared slot permutation from seed_real XOR seed_fake.
The first t slots carry the real ciphertext, the next t the fake one; the
pads, not the positions, carry the secrecy, so a coerced receiver only ever
surrenders the fake pad.
"""

from dataclasses import dataclass

import numpy as np

from utils.bitmsg import BitMessage
from utils.errors import StegoError
from utils.splitmix import MASK64, fisher_yates, fisher_yates_prefix


@dataclass(frozen=True)
class DeniableKey:
    """Public 64-bit position seed plus a t-bit pad."""
    seed: int
    pad: BitMessage

    def __post_init__(self):
        object.__setattr__(self, 'seed', int(self.seed) & MASK64)


@dataclass(frozen=True)
class DeniableKeyPair:
    real: DeniableKey
    fake: DeniableKey

    @property
    def position_seed(self):
        return self.real.seed ^ self.fake.seed

    def key_for(self, which):
        return self.real if which == 'real' else self.fake


def _check_lengths(a, b, code='MSG_004'):
    if len(a) != len(b):
        raise StegoError.from_code(code, f'{len(a)} vs {len(b)}')


# ============================================================
# ONE-TIME PAD
# ============================================================

def xor_encrypt(plain, pad):
    """Bitwise XOR of message and pad; the ciphertext is again a BitMessage."""
    _check_lengths(plain, pad)
    return BitMessage(tuple(p ^ k for p, k in zip(plain.bits, pad.bits)))


xor_decrypt = xor_encrypt


def forge_key(ciphertext, fake_plain):
    """
    Pad that decrypts ciphertext to fake_plain: ciphertext XOR fake_plain.

    decrypt(ciphertext, forge_key(ciphertext, p)) == p for every p of equal length.
    """
    _check_lengths(ciphertext, fake_plain)
    return xor_encrypt(ciphertext, fake_plain)


# ============================================================
# LOCATION SPLIT
# ============================================================

def permute_locations(seed, n):
    """Keyed permutation of [0, n): forward Fisher-Yates over SplitMix64(seed)."""
    if n < 1:
        raise StegoError.from_code('CLS_001', f'n={n}')
    return fisher_yates(seed, n)


def _slots(n, t, position_seed, which):
    if 2 * t > n:
        raise StegoError.from_code('CLS_001', f'2*{t} bits > {n} channel bytes')
    positions = fisher_yates_prefix(position_seed, n, 2 * t)
    if which == 'real':
        return np.asarray(positions[:t], dtype=np.int64)
    if which == 'fake':
        return np.asarray(positions[t:2 * t], dtype=np.int64)
    raise StegoError.from_code('VAL_002', f'which={which!r}')


def classic_embed(cover, real, fake, keys):
    """
    Write the real and fake ciphertexts into the LSBs of their slots.

    Args:
        cover (ImageBuffer): Carrier; never modified
        real (BitMessage): m_r, t bits
        fake (BitMessage): m_f, t bits
        keys (DeniableKeyPair): Seeds and pads, pads of length t

    Returns:
        ImageBuffer: Stego; every byte differs from the cover by 0 or 1

    Raises:
        StegoError: CLS_001 capacity exceeded, CLS_002 pad length mismatch
    """
    t = len(real)
    _check_lengths(real, fake)
    _check_lengths(keys.real.pad, real, 'CLS_002')
    _check_lengths(keys.fake.pad, fake, 'CLS_002')

    stego = cover.copy()
    flat = stego.data.reshape(-1)
    for which, message in (('real', real), ('fake', fake)):
        cipher = xor_encrypt(message, keys.key_for(which).pad)
        slots = _slots(flat.size, t, keys.position_seed, which)
        bits = np.asarray(cipher.bits, dtype=np.uint8)
        flat[slots] = (flat[slots] & 0xFE) | bits
    return stego


def read_ciphertext(stego, position_seed, which, t):
    """LSBs of the real or fake slot range, before any pad is applied."""
    flat = stego.data.reshape(-1)
    slots = _slots(flat.size, t, position_seed, which)
    return BitMessage(tuple(int(b) for b in flat[slots] & 1))


def classic_extract(stego, key, which, t, other_seed):
    """
    Recover one message: read the slot LSBs and XOR with the supplied pad.

    Args:
        stego (ImageBuffer): Received image
        key (DeniableKey): The extracting party's seed and pad
        which (str): 'real' or 'fake' slot range
        t (int): Message length in bits
        other_seed (int): The other party's public position seed
    """
    if len(key.pad) != t:
        raise StegoError.from_code('CLS_002', f'pad {len(key.pad)} vs t={t}')
    cipher = read_ciphertext(stego, key.seed ^ (int(other_seed) & MASK64), which, t)
    return xor_decrypt(cipher, key.pad)
