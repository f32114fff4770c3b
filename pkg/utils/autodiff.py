"""
Differentiable primitives used by the networks, Adam, and a finite-difference
gradient checker.

torch supplies the reverse-mode tape; this module pins down the exact
contracts (shapes, padding, clamping, finite outputs) that the encoder,
decoders and adversary rely on, and verifies every adjoint numerically.
"""

import logging
import math
import random
from dataclasses import dataclass

import torch
import torch.nn.functional as F

from utils.enums import NormMode
from utils.errors import StegoError

logger = logging.getLogger(__name__)

BN_EPS = 1e-5
BN_MOMENTUM = 0.1
LOG_EPS = 1e-6
FD_STEP = 1e-5
# Gradients smaller than this are compared absolutely rather than relatively.
REL_FLOOR = 1e-2


def seed_everything(seed, num_threads=1):
    """Seed every generator training touches and force deterministic kernels."""
    random.seed(seed)
    torch.manual_seed(seed & 0xFFFFFFFFFFFFFFFF)
    torch.use_deterministic_algorithms(True)
    torch.set_num_threads(max(1, int(num_threads)))


def ensure_finite(tensor, op_name):
    if not torch.isfinite(tensor).all():
        raise StegoError.from_code('AD_002', op_name)
    return tensor


def _shape_error(detail):
    return StegoError.from_code('AD_001', detail)


# ============================================================
# LAYER PRIMITIVES
# ============================================================

def conv2d(x, kernel, bias=None, stride=1, pad=1):
    """
    Zero-padded cross-correlation.

    x is (C_in, H, W) or (B, C_in, H, W); kernel is (C_out, C_in, kh, kw) with
    odd kh, kw. Output spatial size is (H + 2*pad - kh) / stride + 1, which must
    be a whole number.
    """
    if kernel.dim() != 4:
        raise _shape_error(f'kernel rank {kernel.dim()}')
    c_out, c_in, kh, kw = kernel.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise _shape_error(f'kernel {kh}x{kw} must be odd')
    unbatched = x.dim() == 3
    if unbatched:
        x = x.unsqueeze(0)
    if x.dim() != 4 or x.shape[1] != c_in:
        raise _shape_error(f'input {tuple(x.shape)} vs kernel {tuple(kernel.shape)}')
    if bias is not None and tuple(bias.shape) != (c_out,):
        raise _shape_error(f'bias {tuple(bias.shape)} vs {c_out} filters')
    height, width = x.shape[2], x.shape[3]
    for extent, k in ((height, kh), (width, kw)):
        span = extent + 2 * pad - k
        if span < 0 or span % stride != 0:
            raise _shape_error(f'non-integer output size for extent {extent}, kernel {k}')
    out = F.conv2d(x, kernel, bias, stride=stride, padding=pad)
    ensure_finite(out, 'conv2d')
    return out.squeeze(0) if unbatched else out


def batch_norm(x, gamma, beta, running_mean=None, running_var=None, mode='train',
               momentum=BN_MOMENTUM, eps=BN_EPS):
    """
    Per-channel batch normalization followed by the affine gamma, beta.

    train: batch statistics; running statistics (when given) are updated in
    place with the momentum. eval: running statistics only.
    """
    if x.dim() != 4:
        raise _shape_error(f'batch_norm expects (B, C, H, W), got {tuple(x.shape)}')
    channels = x.shape[1]
    if tuple(gamma.shape) != (channels,) or tuple(beta.shape) != (channels,):
        raise _shape_error(f'affine shape vs {channels} channels')
    training = NormMode(mode) is NormMode.TRAIN
    if training:
        if x.shape[0] * x.shape[2] * x.shape[3] < 2:
            raise _shape_error('batch statistics need at least two values per channel')
    elif running_mean is None or running_var is None:
        raise StegoError.from_code('AD_003')
    out = F.batch_norm(x, running_mean, running_var, gamma, beta,
                       training=training, momentum=momentum, eps=eps)
    return ensure_finite(out, 'batch_norm')


def relu(x):
    return torch.relu(x)


def sigmoid(x):
    return ensure_finite(torch.sigmoid(x), 'sigmoid')


def linear(x, weight, bias=None):
    """Affine map over the last dimension: (..., F_in) -> (..., F_out)."""
    if weight.dim() != 2 or x.shape[-1] != weight.shape[1]:
        raise _shape_error(f'input {tuple(x.shape)} vs weight {tuple(weight.shape)}')
    if bias is not None and tuple(bias.shape) != (weight.shape[0],):
        raise _shape_error(f'bias {tuple(bias.shape)}')
    return ensure_finite(F.linear(x, weight, bias), 'linear')


def concat_channels(tensors):
    """Concatenate (C, H, W) or (B, C, H, W) tensors along channels, in order."""
    if not tensors:
        raise _shape_error('nothing to concatenate')
    rank = tensors[0].dim()
    reference = tensors[0].shape
    for t in tensors[1:]:
        if t.dim() != rank or t.shape[:rank - 3] != reference[:rank - 3] \
                or t.shape[-2:] != reference[-2:]:
            raise _shape_error(f'{tuple(t.shape)} vs {tuple(reference)}')
    return torch.cat(list(tensors), dim=-3)


def replicate_bits(bits, height, width):
    """
    Broadcast each bit to a constant height x width plane.

    bits: a BitMessage, a (t,) tensor, or a (B, t) tensor.
    """
    if hasattr(bits, 'as_tensor'):
        bits = bits.as_tensor()
    if bits.dim() not in (1, 2):
        raise _shape_error(f'bits rank {bits.dim()}')
    return bits[..., None, None].expand(*bits.shape, height, width)


def adaptive_avg_pool(x):
    """Per-channel spatial mean: (C, H, W) -> (C,), (B, C, H, W) -> (B, C)."""
    if x.dim() < 3 or x.shape[-1] < 1 or x.shape[-2] < 1:
        raise _shape_error(f'pool input {tuple(x.shape)}')
    return x.mean(dim=(-2, -1))


# ============================================================
# LOSS PRIMITIVES
# ============================================================

def mse(a, b):
    if a.shape != b.shape:
        raise _shape_error(f'{tuple(a.shape)} vs {tuple(b.shape)}')
    return ensure_finite(torch.mean((a - b) ** 2), 'mse')


def clamp_probability(p):
    return p.clamp(LOG_EPS, 1.0 - LOG_EPS)


def bce(p, y):
    """Mean binary cross-entropy with probabilities clamped to [1e-6, 1 - 1e-6]."""
    p = torch.as_tensor(p, dtype=torch.get_default_dtype()) if not torch.is_tensor(p) else p
    y = torch.as_tensor(y, dtype=p.dtype).expand_as(p)
    p = clamp_probability(p)
    loss = -(y * torch.log(p) + (1.0 - y) * torch.log(1.0 - p))
    return ensure_finite(loss.mean(), 'bce')


def abs_diff(a, b):
    """|a - b|; the subgradient at a == b is 0."""
    return torch.abs(a - b)


# ============================================================
# OPTIMIZER
# ============================================================

@dataclass
class AdamSettings:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def make_optimizer(parameters, settings=None):
    """Adam with bias correction; its state_dict is the OptimizerState."""
    settings = settings or AdamSettings()
    return torch.optim.Adam(
        parameters, lr=settings.lr, betas=(settings.beta1, settings.beta2), eps=settings.eps
    )


def adam_step(optimizer):
    """
    One Adam update over every parameter holding a gradient.

    Raises:
        StegoError: AD_001 gradient shape mismatch, AD_004 non-finite gradient
    """
    for group in optimizer.param_groups:
        for param in group['params']:
            if param.grad is None:
                continue
            if param.grad.shape != param.shape:
                raise _shape_error(f'grad {tuple(param.grad.shape)} vs {tuple(param.shape)}')
            if not torch.isfinite(param.grad).all():
                raise StegoError.from_code('AD_004', f'parameter of shape {tuple(param.shape)}')
    optimizer.step()


# ============================================================
# GRADIENT CHECKING
# ============================================================

@dataclass
class GradCheckReport:
    op: str
    max_relative_error: float
    tolerance: float
    passed: bool
    elements_checked: int = 0
    expect_failure: bool = False

    @property
    def verified(self):
        """True when the outcome is the expected one (negative controls must fail)."""
        return self.passed != self.expect_failure


def _normal(shape, generator):
    return torch.randn(shape, generator=generator, dtype=torch.float64)


def _unit_interval(shape, generator):
    return 0.05 + 0.9 * torch.rand(shape, generator=generator, dtype=torch.float64)


def grad_check(op, input_shapes, tolerance, seed=0, name=None, samplers=None,
               near_kink=None, step=FD_STEP, max_resamples=20):
    """
    Compare autograd gradients of op against central finite differences.

    The op output is reduced with fixed random weights to a scalar objective;
    each input element is perturbed by +/- step in double precision.

    Args:
        op (callable): Differentiable function of the inputs
        input_shapes (list): One shape per input
        tolerance (float): Pass iff max relative error <= tolerance
        samplers (list, optional): Per-input callables (shape, generator) -> tensor
        near_kink (callable, optional): Returns True when sampled inputs sit too
            close to a non-differentiable point; the inputs are then resampled

    Returns:
        GradCheckReport: Failures are reported, never raised
    """
    generator = torch.Generator().manual_seed(seed)
    samplers = samplers or [_normal] * len(input_shapes)
    for _ in range(max_resamples):
        inputs = [sample(shape, generator) for sample, shape in zip(samplers, input_shapes)]
        if near_kink is None or not near_kink(inputs):
            break

    with torch.no_grad():
        sample_output = op(*inputs)
    weights = _normal(sample_output.shape, generator)

    def objective(*xs):
        return (op(*xs) * weights).sum()

    leaves = [x.clone().requires_grad_(True) for x in inputs]
    analytic = torch.autograd.grad(objective(*leaves), leaves, allow_unused=True)

    worst = 0.0
    checked = 0
    with torch.no_grad():
        for index, x in enumerate(inputs):
            grad = analytic[index]
            grad = torch.zeros_like(x) if grad is None else grad
            flat = x.view(-1)
            for k in range(flat.numel()):
                original = flat[k].item()
                flat[k] = original + step
                upper = objective(*inputs).item()
                flat[k] = original - step
                lower = objective(*inputs).item()
                flat[k] = original
                numeric = (upper - lower) / (2.0 * step)
                exact = grad.reshape(-1)[k].item()
                scale = max(abs(numeric), abs(exact), REL_FLOOR)
                worst = max(worst, abs(numeric - exact) / scale)
                checked += 1

    report = GradCheckReport(
        op=name or getattr(op, '__name__', 'op'),
        max_relative_error=worst if math.isfinite(worst) else float('inf'),
        tolerance=tolerance,
        passed=worst <= tolerance,
        elements_checked=checked,
    )
    logger.debug("grad_check %s: max rel err %.3e (tol %.1e)", report.op, worst, tolerance)
    return report


class _BrokenReLU(torch.autograd.Function):
    """ReLU whose backward pass is the identity; used as a negative control."""

    @staticmethod
    def forward(ctx, x):
        return x.clamp(min=0)

    @staticmethod
    def backward(ctx, grad_output):
        return grad_output


def broken_relu(x):
    return _BrokenReLU.apply(x)


def _near_zero(inputs, margin=1e-3):
    return any((x.abs() < margin).any() for x in inputs)


def _near_equal(inputs, margin=1e-3):
    return bool(((inputs[0] - inputs[1]).abs() < margin).any())


def _bn_train(x, gamma, beta):
    return batch_norm(x, gamma, beta, mode='train')


def _bn_eval(x, gamma, beta):
    stats_mean = torch.linspace(-0.5, 0.5, x.shape[1], dtype=x.dtype)
    stats_var = torch.linspace(0.5, 2.0, x.shape[1], dtype=x.dtype)
    return batch_norm(x, gamma, beta, stats_mean, stats_var, mode='eval')


def gradient_suite(tolerance=1e-4, seed=0):
    """
    Check every primitive plus the broken-adjoint negative control.

    Structured ops (conv2d, batch_norm) use tolerance; elementwise ops and
    losses use min(tolerance, 1e-6).

    Returns:
        list: GradCheckReport per case
    """
    fine = min(tolerance, 1e-6)
    cases = [
        ('conv2d', lambda x, k, b: conv2d(x, k, b), [(2, 3, 5, 5), (4, 3, 3, 3), (4,)],
         tolerance, {}),
        ('conv2d_stride2', lambda x, k, b: conv2d(x, k, b, stride=2, pad=1),
         [(1, 2, 5, 5), (3, 2, 3, 3), (3,)], tolerance, {}),
        ('batch_norm_train', _bn_train, [(3, 2, 3, 3), (2,), (2,)], tolerance, {}),
        ('batch_norm_eval', _bn_eval, [(2, 2, 3, 3), (2,), (2,)], tolerance, {}),
        ('relu', relu, [(4, 5)], fine, {'near_kink': _near_zero}),
        ('sigmoid', sigmoid, [(4, 5)], fine, {}),
        ('linear', linear, [(3, 6), (4, 6), (4,)], fine, {}),
        ('concat_channels', lambda a, b: concat_channels([a, b]),
         [(2, 2, 3, 3), (2, 3, 3, 3)], fine, {}),
        ('replicate_bits', lambda m: replicate_bits(m, 3, 2), [(2, 4)], fine, {}),
        ('adaptive_avg_pool', adaptive_avg_pool, [(2, 3, 4, 5)], fine, {}),
        ('mse', mse, [(3, 4), (3, 4)], fine, {}),
        ('bce', lambda p: bce(p, torch.tensor([1.0, 0.0, 1.0, 0.0, 1.0], dtype=torch.float64)),
         [(5,)], fine, {'samplers': [_unit_interval]}),
        ('abs_diff', abs_diff, [(6,), (6,)], fine, {'near_kink': _near_equal}),
    ]
    reports = []
    for offset, (name, op, shapes, tol, options) in enumerate(cases):
        reports.append(grad_check(op, shapes, tol, seed=seed + offset, name=name, **options))

    control = grad_check(broken_relu, [(4, 5)], fine, seed=seed, name='relu_broken_adjoint',
                         near_kink=_near_zero)
    control.expect_failure = True
    reports.append(control)
    return reports
