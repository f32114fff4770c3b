import math

import pytest

from config.config import TrainConfig
from utils.errors import BadInput
from utils.experiments import balance_ablation, decoder_gap, scaled_weights, sigmoid_ablation
from utils.losses import LossWeights
from utils.training import MetricsReport


@pytest.mark.parametrize('n,lambda_m,lambda_b', [
    (2, 1.0, 1.0),
    (3, 2 / 3, 1 / 3),
    (4, 0.5, 1 / 6),
])
def test_scaled_weights(n, lambda_m, lambda_b):
    weights = scaled_weights(n)
    assert weights.lambda_m == pytest.approx(lambda_m)
    assert weights.lambda_b == pytest.approx(lambda_b)


def test_scaled_weights_keep_outer_weights():
    base = LossWeights(lambda_i=0.3, lambda_a=0.02)
    weights = scaled_weights(5, base)
    assert (weights.lambda_i, weights.lambda_a) == (0.3, 0.02)
    assert weights.lambda_b == pytest.approx(1 / math.comb(5, 2))


def test_scaled_weights_need_two_decoders():
    with pytest.raises(BadInput):
        scaled_weights(1)


def test_decoder_gap():
    report = MetricsReport(psnr=40.0, ssim=0.9, bit_errors=[0.1, 0.25], samples=4)
    assert decoder_gap(report) == pytest.approx(0.15)


def test_ablation_runs_both_arms(tiny_dataset):
    config = TrainConfig(decoders=2, bits=4, image_size=(16, 16), epochs=1, batch_size=3)
    result = balance_ablation(config, tiny_dataset, tiny_dataset, seeds=[0, 1])
    assert result['lambda_b'] == 1.0
    assert [row['seed'] for row in result['runs']] == [0, 1]
    for row in result['runs']:
        assert set(row) == {'seed', 'balanced', 'unbalanced'}
        assert len(row['balanced']['bit_errors']) == 2
    assert result['mean_gap_balanced'] >= 0.0
    assert result['mean_gap_unbalanced'] >= 0.0


def test_sigmoid_ablation_runs_both_arms(tiny_dataset):
    config = TrainConfig(decoders=2, bits=4, image_size=(16, 16), epochs=1, batch_size=3)
    result = sigmoid_ablation(config, tiny_dataset, tiny_dataset, seeds=[2])
    row = result['runs'][0]
    assert set(row) == {'seed', 'sigmoid', 'linear'}
    assert len(result['mean_bit_errors_sigmoid']) == 2
    assert len(result['mean_bit_errors_linear']) == 2
    assert all(0.0 <= e <= 1.0 for e in result['mean_bit_errors_linear'])
    assert result['mean_bit_errors_sigmoid'] == row['sigmoid']['bit_errors']
