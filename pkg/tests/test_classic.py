import random

import numpy as np
import pytest

from utils import classic, imaging
from utils.bitmsg import BitMessage, random_message
from utils.classic import DeniableKey, DeniableKeyPair
from utils.errors import BadInput, CapacityError
from utils.imaging import ImageBuffer


def bits(text):
    return BitMessage(tuple(int(c) for c in text))


def _keys(seed, t):
    gen = random.Random(seed)
    return DeniableKeyPair(
        real=DeniableKey(gen.getrandbits(64), random_message(seed * 2 + 1, t)),
        fake=DeniableKey(gen.getrandbits(64), random_message(seed * 2 + 2, t)),
    )


class TestOneTimePad:

    def test_xor(self):
        assert classic.xor_encrypt(bits('1010'), bits('0110')) == bits('1100')
        assert classic.xor_decrypt(bits('1100'), bits('0110')) == bits('1010')

    def test_forged_key_decrypts_to_fake(self):
        cipher = bits('1100')
        key = classic.forge_key(cipher, bits('0011'))
        assert key == bits('1111')
        assert classic.xor_decrypt(cipher, key) == bits('0011')

    def test_forge_identity_for_random_messages(self):
        gen = random.Random(17)
        for _ in range(1000):
            t = gen.randint(1, 64)
            plain = random_message(gen.getrandbits(32), t)
            pad = random_message(gen.getrandbits(32), t)
            fake = random_message(gen.getrandbits(32), t)
            cipher = classic.xor_encrypt(plain, pad)
            assert classic.xor_decrypt(cipher, pad) == plain
            assert classic.xor_decrypt(cipher, classic.forge_key(cipher, fake)) == fake

    def test_length_mismatch(self):
        with pytest.raises(BadInput):
            classic.xor_encrypt(bits('101'), bits('10'))


class TestLocations:

    def test_permutation(self):
        perm = classic.permute_locations(1234, 50)
        assert sorted(perm) == list(range(50))
        assert perm == classic.permute_locations(1234, 50)

    def test_empty_permutation_rejected(self):
        with pytest.raises(CapacityError):
            classic.permute_locations(1, 0)

    def test_position_seed_is_shared(self):
        keys = _keys(3, 8)
        assert keys.position_seed == keys.real.seed ^ keys.fake.seed


class TestEmbedExtract:

    def test_lsb_write(self):
        cover = ImageBuffer.from_array(np.full((1, 2, 3), 0b10110100, dtype=np.uint8))
        keys = DeniableKeyPair(DeniableKey(5, bits('000')), DeniableKey(9, bits('000')))
        stego = classic.classic_embed(cover, bits('111'), bits('000'), keys)
        perm = classic.permute_locations(5 ^ 9, 6)
        flat = stego.data.reshape(-1)
        assert all(flat[i] == 0b10110101 for i in perm[:3])
        assert all(flat[i] == 0b10110100 for i in perm[3:])

    def test_cover_not_modified(self, random_image):
        cover = random_image()
        before = cover.data.copy()
        classic.classic_embed(cover, random_message(1, 20), random_message(2, 20), _keys(1, 20))
        assert np.array_equal(cover.data, before)

    def test_round_trips(self, rng):
        gen = random.Random(8)
        for case in range(1000):
            t = gen.randint(1, 64)
            cover = ImageBuffer.from_array(rng.integers(0, 256, size=(8, 8, 3), dtype=np.uint8))
            keys = _keys(case, t)
            real, fake = random_message(case + 10000, t), random_message(case + 20000, t)
            stego = classic.classic_embed(cover, real, fake, keys)

            assert np.abs(stego.data.astype(int) - cover.data.astype(int)).max() <= 1
            assert classic.classic_extract(stego, keys.real, 'real', t, keys.fake.seed) == real
            assert classic.classic_extract(stego, keys.fake, 'fake', t, keys.real.seed) == fake

    def test_psnr_floor(self, random_image):
        cover = random_image(32, 32)
        t = 64
        stego = classic.classic_embed(cover, random_message(1, t), random_message(2, t), _keys(4, t))
        assert imaging.psnr(cover, stego) >= 51.0

    def test_one_flip_changes_one_bit(self, random_image):
        cover = random_image(32, 32)
        t = 30
        keys = _keys(6, t)
        real, fake = random_message(3, t), random_message(4, t)
        stego = classic.classic_embed(cover, real, fake, keys)
        slot = classic.permute_locations(keys.position_seed, 32 * 32 * 3)[7]
        stego.data.reshape(-1)[slot] ^= 1

        got_real = classic.classic_extract(stego, keys.real, 'real', t, keys.fake.seed)
        got_fake = classic.classic_extract(stego, keys.fake, 'fake', t, keys.real.seed)
        assert [i for i in range(t) if got_real.bits[i] != real.bits[i]] == [7]
        assert got_fake == fake

    def test_coerced_receiver_reveals_fake(self, random_image):
        cover = random_image()
        t = 16
        keys = _keys(2, t)
        real, fake = random_message(5, t), random_message(6, t)
        stego = classic.classic_embed(cover, real, fake, keys)
        cipher = classic.read_ciphertext(stego, keys.position_seed, 'real', t)
        forged = DeniableKey(keys.real.seed, classic.forge_key(cipher, fake))
        assert classic.classic_extract(stego, forged, 'real', t, keys.fake.seed) == fake

    def test_capacity(self):
        cover = ImageBuffer.from_array(np.zeros((2, 2, 3), dtype=np.uint8))
        keys = _keys(1, 7)
        with pytest.raises(CapacityError) as err:
            classic.classic_embed(cover, random_message(1, 7), random_message(2, 7), keys)
        assert err.value.error_code == 'CLS_001'

    def test_exact_capacity_fits(self):
        cover = ImageBuffer.from_array(np.zeros((2, 2, 3), dtype=np.uint8))
        keys = _keys(1, 6)
        real, fake = random_message(1, 6), random_message(2, 6)
        stego = classic.classic_embed(cover, real, fake, keys)
        assert classic.classic_extract(stego, keys.real, 'real', 6, keys.fake.seed) == real

    def test_pad_length_mismatch(self, random_image):
        keys = _keys(1, 5)
        with pytest.raises(BadInput) as err:
            classic.classic_embed(random_image(), random_message(1, 6), random_message(2, 6), keys)
        assert err.value.error_code == 'CLS_002'
        with pytest.raises(BadInput):
            classic.classic_extract(random_image(), keys.real, 'real', 6, keys.fake.seed)
