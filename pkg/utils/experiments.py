"""
Multi-decoder weighting and the ablations of the balance loss and of the
decoder sigmoid.
"""

import logging
from dataclasses import replace
from math import comb

from utils.errors import StegoError
from utils.losses import LossWeights
from utils.training import evaluate, train

logger = logging.getLogger(__name__)


def scaled_weights(n_decoders, base=None):
    """
    Inner message weights that keep L_M on the two-decoder scale:
    lambda_m = 2 / N and lambda_b = 1 / C(N, 2).
    """
    if n_decoders < 2:
        raise StegoError.from_code('LOSS_001', f'N={n_decoders}')
    base = base or LossWeights()
    return replace(base, lambda_m=2.0 / n_decoders, lambda_b=1.0 / comb(n_decoders, 2))


def decoder_gap(report):
    """|bit error of the real decoder - bit error of the fake decoder|."""
    return abs(report.bit_errors[0] - report.bit_errors[1])


def _run_arms(config, train_set, val_set, seeds, arms):
    runs = []
    for seed in seeds:
        row = {'seed': seed}
        for arm, changes in arms:
            arm_config = replace(config, seed=seed, out=None, history=None, **changes)
            model, _ = train(arm_config, train_set)
            report = evaluate(model, val_set, seed)
            row[arm] = {'bit_errors': report.bit_errors, 'gap': decoder_gap(report)}
            logger.info("Seed %d %s: bit errors %s", seed, arm, report.bit_errors)
        runs.append(row)
    return runs


def _mean(runs, arm, key):
    return sum(r[arm][key] for r in runs) / len(runs)


def _mean_bit_errors(runs, arm):
    n_decoders = len(runs[0][arm]['bit_errors'])
    return [sum(r[arm]['bit_errors'][i] for r in runs) / len(runs) for i in range(n_decoders)]


def balance_ablation(config, train_set, val_set, seeds):
    """
    Train with the configured lambda_b and with lambda_b = 0 for every seed.

    Returns:
        dict: per-seed bit errors and gaps plus the mean gap of each arm
    """
    runs = _run_arms(config, train_set, val_set, seeds, (
        ('balanced', {'weights': config.weights}),
        ('unbalanced', {'weights': replace(config.weights, lambda_b=0.0)}),
    ))
    return {
        'lambda_b': config.weights.lambda_b,
        'runs': runs,
        'mean_gap_balanced': _mean(runs, 'balanced', 'gap'),
        'mean_gap_unbalanced': _mean(runs, 'unbalanced', 'gap'),
    }


def sigmoid_ablation(config, train_set, val_set, seeds):
    """
    Train every seed with and without the sigmoid after the decoder heads.

    Decoders without the sigmoid are scored on their outputs clamped to
    [0, 1], so both arms are hardened at the same 0.5 threshold.

    Returns:
        dict: per-seed bit errors plus the mean bit error per decoder of each arm
    """
    runs = _run_arms(config, train_set, val_set, seeds, (
        ('sigmoid', {'decoder_sigmoid': True}),
        ('linear', {'decoder_sigmoid': False}),
    ))
    return {
        'runs': runs,
        'mean_bit_errors_sigmoid': _mean_bit_errors(runs, 'sigmoid'),
        'mean_bit_errors_linear': _mean_bit_errors(runs, 'linear'),
    }
