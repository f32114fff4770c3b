"""
Training objective: image loss, per-decoder message losses, the pairwise balance
loss, the adversary's cross-entropy and the encoder's adversarial loss.

total = lambda_i * L_I + lambda_m_outer * L_M + lambda_a * L_A, where
L_M = lambda_m * sum(L_m_i) + lambda_b * sum_{i<j} |L_m_i - L_m_j|.
"""

from dataclasses import dataclass
from itertools import combinations

import torch

from utils import autodiff
from utils.errors import StegoError


@dataclass(frozen=True)
class LossWeights:
    lambda_i: float = 0.7
    lambda_m_outer: float = 1.0
    lambda_a: float = 0.001
    lambda_m: float = 1.0
    lambda_b: float = 1.0

    def __post_init__(self):
        for name in ('lambda_i', 'lambda_m_outer', 'lambda_a', 'lambda_m', 'lambda_b'):
            if getattr(self, name) < 0:
                raise StegoError.from_code('LOSS_002', f'{name}={getattr(self, name)}')


@dataclass
class LossReport:
    """Component losses of one batch; tensors so the total stays differentiable."""
    image: torch.Tensor
    messages: list
    balance: torch.Tensor
    message: torch.Tensor
    adversarial: torch.Tensor
    total: torch.Tensor

    def as_record(self):
        """Plain floats, keyed like the training-history JSON lines."""
        return {
            'L_I': float(self.image),
            'L_m': [float(m) for m in self.messages],
            'L_b': float(self.balance),
            'L_M': float(self.message),
            'L_A': float(self.adversarial),
            'total': float(self.total),
        }


def image_loss(cover, stego):
    """Mean squared error over every channel value."""
    return autodiff.mse(cover, stego)


def message_loss(bits, soft):
    """
    (1/t) * sum (m[i] - soft[i])^2, averaged over the batch when batched.

    bits may be a BitMessage or a 0/1 tensor shaped like soft.
    """
    if hasattr(bits, 'as_tensor'):
        bits = bits.as_tensor(dtype=soft.dtype)
    if bits.shape != soft.shape:
        raise StegoError.from_code('MSG_004', f'{tuple(bits.shape)} vs {tuple(soft.shape)}')
    return autodiff.mse(bits.to(soft.dtype), soft)


def balance_loss(losses):
    """Sum over unordered decoder pairs i < j of |L_i - L_j|."""
    if len(losses) < 2:
        raise StegoError.from_code('LOSS_001', f'got {len(losses)}')
    losses = [torch.as_tensor(l) for l in losses]
    terms = [autodiff.abs_diff(a, b) for a, b in combinations(losses, 2)]
    return torch.stack(terms).sum()


def balanced_message_loss(losses, weights):
    if len(losses) < 2:
        raise StegoError.from_code('LOSS_001', f'got {len(losses)}')
    stacked = torch.stack([torch.as_tensor(l) for l in losses])
    return weights.lambda_m * stacked.sum() + weights.lambda_b * balance_loss(losses)


def adversary_bce(pred, label):
    """Cross-entropy for the adversary; label 1 = stego, 0 = cover."""
    return autodiff.bce(pred, label)


def adversarial_loss(pred_on_stego):
    """-log(1 - A(s)), averaged; pushes the encoder towards cover-like stegos."""
    p = autodiff.clamp_probability(torch.as_tensor(pred_on_stego))
    return autodiff.ensure_finite(-torch.log(1.0 - p).mean(), 'adversarial_loss')


def total_loss(image, messages, adversarial, weights):
    """
    Combine the components into a LossReport.

    Args:
        image: L_I
        messages (list): L_m_i per decoder, in decoder order
        adversarial: L_A
        weights (LossWeights): Inner and outer weights

    Returns:
        LossReport: total = lambda_i*L_I + lambda_m_outer*L_M + lambda_a*L_A
    """
    image = torch.as_tensor(image)
    adversarial = torch.as_tensor(adversarial)
    messages = [torch.as_tensor(m) for m in messages]
    balance = balance_loss(messages)
    message = balanced_message_loss(messages, weights)
    total = (weights.lambda_i * image
             + weights.lambda_m_outer * message
             + weights.lambda_a * adversarial)
    return LossReport(
        image=image,
        messages=messages,
        balance=balance,
        message=message,
        adversarial=adversarial,
        total=total,
    )
