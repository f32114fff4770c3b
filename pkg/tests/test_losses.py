import itertools
import math
import random

import pytest
import torch

from utils import losses
from utils.bitmsg import BitMessage
from utils.errors import BadInput
from utils.losses import LossWeights


def t(value):
    return torch.tensor(value, dtype=torch.float64)


class TestComponentLosses:

    def test_image_loss(self):
        c = torch.rand(3, 8, 8, dtype=torch.float64)
        assert losses.image_loss(c, c).item() == 0.0
        assert losses.image_loss(c, c + 0.1).item() == pytest.approx(0.01)

    def test_image_loss_matches_brute_force_sum(self):
        c = torch.rand(3, 5, 7, dtype=torch.float64)
        s = torch.rand(3, 5, 7, dtype=torch.float64)
        brute = sum((a - b) ** 2 for a, b in zip(c.flatten().tolist(), s.flatten().tolist())) / c.numel()
        assert losses.image_loss(c, s).item() == pytest.approx(brute, rel=1e-9)

    def test_image_loss_shape_mismatch(self):
        with pytest.raises(BadInput):
            losses.image_loss(torch.zeros(3, 4, 4), torch.zeros(3, 4, 5))

    def test_message_loss(self):
        m = BitMessage((1, 0))
        assert losses.message_loss(m, t([1.0, 0.0])).item() == 0.0
        assert losses.message_loss(BitMessage((0, 0, 0)), t([1.0, 1.0, 1.0])).item() == 1.0
        assert losses.message_loss(m, t([0.5, 0.5])).item() == pytest.approx(0.25)

    def test_message_loss_length_mismatch(self):
        with pytest.raises(BadInput):
            losses.message_loss(BitMessage((1, 0, 1)), t([0.5, 0.5]))


class TestBalanceLoss:

    def test_two_decoder_cases(self):
        assert losses.balance_loss([t(0.4), t(0.4)]).item() == 0.0
        assert losses.balance_loss([t(0.2), t(0.5)]).item() == pytest.approx(0.3)

    def test_three_decoders_count_unordered_pairs(self):
        assert losses.balance_loss([t(0.1), t(0.2), t(0.4)]).item() == pytest.approx(0.6)

    def test_needs_two_losses(self):
        with pytest.raises(BadInput):
            losses.balance_loss([t(0.1)])

    def test_zero_at_equality_and_permutation_symmetric(self):
        gen = random.Random(5)
        for _ in range(2000):
            n = gen.randint(2, 5)
            values = [gen.random() for _ in range(n)]
            equal = [values[0]] * n
            assert losses.balance_loss([t(v) for v in equal]).item() == 0.0
            shuffled = values[:]
            gen.shuffle(shuffled)
            a = losses.balance_loss([t(v) for v in values]).item()
            b = losses.balance_loss([t(v) for v in shuffled]).item()
            assert a >= 0.0
            assert a == pytest.approx(b, abs=1e-12)


class TestCombinedLosses:

    def test_balanced_message_loss_unit_weights(self):
        value = losses.balanced_message_loss([t(0.2), t(0.5)], LossWeights())
        assert value.item() == pytest.approx(1.0)

    def test_balanced_message_loss_without_balance(self):
        weights = LossWeights(lambda_b=0.0)
        assert losses.balanced_message_loss([t(0.2), t(0.5)], weights).item() == pytest.approx(0.7)

    def test_three_decoder_weighting(self):
        weights = LossWeights(lambda_m=2 / 3, lambda_b=1 / 3)
        ls = [t(0.1), t(0.2), t(0.4)]
        assert losses.balanced_message_loss(ls, weights).item() == pytest.approx(2 / 3 * 0.7 + 1 / 3 * 0.6)

    def test_adversary_bce(self):
        assert losses.adversary_bce(t(0.5), 1.0).item() == pytest.approx(math.log(2), abs=1e-4)
        assert losses.adversary_bce(t(0.5), 0.0).item() == pytest.approx(math.log(2), abs=1e-4)
        assert losses.adversary_bce(t(1 - 1e-6), 1.0).item() == pytest.approx(1e-6, rel=1e-3)

    def test_adversarial_loss(self):
        assert losses.adversarial_loss(t(0.5)).item() == pytest.approx(math.log(2))
        assert losses.adversarial_loss(t(1e-6)).item() == pytest.approx(0.0, abs=2e-6)
        assert losses.adversarial_loss(t(1.0)).item() == pytest.approx(-math.log(1e-6), rel=1e-6)

    def test_total_loss_reference_weights(self, golden):
        vector = golden('metrics')['total_loss_reference_weights']
        # L_M = 1.0 from equal decoder losses 0.5 + 0.5 and no imbalance
        report = losses.total_loss(t(0.01), [t(0.5), t(0.5)], t(0.6931),
                                   LossWeights(lambda_i=0.7, lambda_m_outer=1.0, lambda_a=0.001))
        assert report.message.item() == pytest.approx(1.0)
        assert report.total.item() == pytest.approx(vector['expected'], abs=1e-12)

    def test_total_loss_zero(self):
        report = losses.total_loss(t(0.0), [t(0.0), t(0.0)], t(0.0), LossWeights())
        assert report.total.item() == 0.0

    def test_total_is_weighted_sum(self):
        gen = random.Random(3)
        for _ in range(100):
            weights = LossWeights(*(gen.random() for _ in range(5)))
            report = losses.total_loss(t(gen.random()), [t(gen.random()) for _ in range(3)],
                                       t(gen.random()), weights)
            expected = (weights.lambda_i * report.image + weights.lambda_m_outer * report.message
                        + weights.lambda_a * report.adversarial)
            assert report.total.item() == expected.item()

    def test_zero_adversarial_weight_removes_its_gradient(self):
        adversarial = t(0.3).requires_grad_(True)
        report = losses.total_loss(t(0.1), [t(0.2), t(0.4)], adversarial, LossWeights(lambda_a=0.0))
        report.total.backward()
        assert adversarial.grad.item() == 0.0

    def test_negative_weight_rejected(self):
        with pytest.raises(BadInput):
            LossWeights(lambda_b=-1.0)

    def test_record_keys(self):
        record = losses.total_loss(t(0.1), [t(0.2), t(0.4)], t(0.3), LossWeights()).as_record()
        assert set(record) == {'L_I', 'L_m', 'L_b', 'L_M', 'L_A', 'total'}
        assert record['L_m'] == pytest.approx([0.2, 0.4])


def test_total_gradient_is_weighted_sum_of_components():
    weights = LossWeights(lambda_i=0.3, lambda_m_outer=0.8, lambda_a=0.05, lambda_m=1.0, lambda_b=0.5)
    w = torch.randn(4, dtype=torch.float64, requires_grad=True)
    target = torch.randn(4, dtype=torch.float64)

    def components(param):
        image = ((param - target) ** 2).mean()
        messages = [(param[:2] ** 2).mean(), (param[2:] - 1).pow(2).mean()]
        adversarial = -torch.log(1 - torch.sigmoid(param.sum()).clamp(1e-6, 1 - 1e-6))
        return image, messages, adversarial

    image, messages, adversarial = components(w)
    total_grad, = torch.autograd.grad(losses.total_loss(image, messages, adversarial, weights).total, w)

    parts = [
        (weights.lambda_i, lambda p: components(p)[0]),
        (weights.lambda_m_outer, lambda p: losses.balanced_message_loss(components(p)[1], weights)),
        (weights.lambda_a, lambda p: components(p)[2]),
    ]
    combined = torch.zeros(4, dtype=torch.float64)
    for scale, fn in parts:
        grad, = torch.autograd.grad(fn(w), w)
        combined += scale * grad
    assert torch.allclose(total_grad, combined, atol=1e-12)


def test_pairs_enumerated_once():
    values = [0.3, 0.1, 0.7, 0.2]
    expected = sum(abs(a - b) for a, b in itertools.combinations(values, 2))
    assert losses.balance_loss([t(v) for v in values]).item() == pytest.approx(expected)
