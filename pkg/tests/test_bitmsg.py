import pytest
import torch

from utils.bitmsg import BitMessage, MessageStream, bit_error, parse_hex, random_message, to_hex
from utils.errors import BadInput


class TestHexCodec:

    def test_golden_vectors(self, golden):
        vectors = golden('messages')
        nibble = vectors['hex_nibble']
        assert list(parse_hex(nibble['inputs']['hex'], nibble['inputs']['nbits']).bits) == nibble['expected']
        partial = vectors['hex_partial_nibble']
        assert to_hex(BitMessage(tuple(partial['inputs']['bits']))) == partial['expected']

    def test_all_ones_nibble(self):
        assert parse_hex('F', 4).bits == (1, 1, 1, 1)
        assert to_hex(BitMessage((1, 1, 1, 1))) == 'F'

    def test_lowercase_accepted(self):
        assert parse_hex('a5', 8) == parse_hex('A5', 8)

    @pytest.mark.parametrize('text,nbits,code', [
        ('F1', 4, 'MSG_001'),
        ('FG', 8, 'MSG_002'),
        ('F', 3, 'MSG_003'),
        ('7', 3, 'MSG_003'),
    ])
    def test_rejections(self, text, nbits, code):
        with pytest.raises(BadInput) as err:
            parse_hex(text, nbits)
        assert err.value.error_code == code

    def test_pad_bits_zero_is_valid(self):
        assert parse_hex('E', 3).bits == (1, 1, 1)

    @pytest.mark.parametrize('nbits', [1, 3, 4, 30, 61])
    def test_codec_is_inverse_on_random_messages(self, nbits):
        for seed in range(20):
            message = random_message(seed, nbits)
            assert parse_hex(to_hex(message), nbits) == message


class TestRandomMessage:

    def test_golden_values(self, golden):
        vectors = golden('messages')
        for name in ('random_message_16_bits', 'random_message_30_bits'):
            vector = vectors[name]
            message = random_message(vector['inputs']['seed'], vector['inputs']['nbits'])
            assert to_hex(message) == vector['expected']

    def test_deterministic(self):
        assert random_message(42, 30) == random_message(42, 30)

    def test_neighbouring_seeds_differ(self):
        differing = sum(random_message(s, 30) != random_message(s + 1, 30) for s in range(1000))
        assert differing >= 999

    def test_bits_are_balanced(self):
        ones = sum(sum(random_message(s, 30).bits) for s in range(10000))
        assert 0.45 <= ones / (30 * 10000) <= 0.55


class TestBitError:

    def test_identity_and_complement(self):
        m = random_message(1, 30)
        assert bit_error(m, m) == 0.0
        assert bit_error(BitMessage((0,) * 30), BitMessage((1,) * 30)) == 1.0

    def test_three_of_thirty(self):
        m = random_message(9, 30)
        flipped = list(m.bits)
        for i in (0, 10, 29):
            flipped[i] ^= 1
        assert bit_error(m, BitMessage(tuple(flipped))) == pytest.approx(0.1)

    def test_symmetric(self):
        a, b = random_message(1, 17), random_message(2, 17)
        assert bit_error(a, b) == bit_error(b, a)

    def test_length_mismatch(self):
        with pytest.raises(BadInput):
            bit_error(BitMessage((1, 0)), BitMessage((1, 0, 1)))


def test_message_rejects_empty_and_non_binary():
    with pytest.raises(BadInput):
        BitMessage(())
    with pytest.raises(BadInput):
        BitMessage((0, 2))


def test_message_stream_shape_and_order():
    batch = MessageStream(4).next_batch(3, 2, 5)
    assert batch.shape == (3, 2, 5)
    assert batch.dtype == torch.float32
    first = BitMessage.from_tensor(batch[0, 0])
    assert first == random_message(4, 5)
