"""
Procedural cover corpus: small textures standing in for natural thumbnails so
training and demos need no dataset download.
"""

import logging
import os

import numpy as np
from PIL import Image

from utils import audit_logging
from utils.errors import StegoError
from utils.imaging import ImageBuffer, save_image

logger = logging.getLogger(__name__)

TEXTURE_KINDS = ('grating', 'checkerboard', 'gradient', 'noise', 'mixture')


def _grid(size):
    y, x = np.meshgrid(np.linspace(0.0, 1.0, size), np.linspace(0.0, 1.0, size), indexing='ij')
    return x, y


def _colorize(plane, rng):
    """Map a [0, 1] plane to RGB between two random colors."""
    low, high = rng.uniform(0.0, 1.0, size=3), rng.uniform(0.0, 1.0, size=3)
    return low + plane[..., None] * (high - low)


def _grating(size, rng):
    x, y = _grid(size)
    angle = rng.uniform(0.0, np.pi)
    frequency = rng.uniform(1.0, size / 4.0)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    wave = np.sin(2.0 * np.pi * frequency * (x * np.cos(angle) + y * np.sin(angle)) + phase)
    return _colorize(0.5 + 0.5 * wave, rng)


def _checkerboard(size, rng):
    cell = int(rng.integers(2, max(3, size // 4) + 1))
    rows, cols = np.indices((size, size))
    board = ((rows // cell + cols // cell) % 2).astype(np.float64)
    return _colorize(board, rng)


def _gradient(size, rng):
    x, y = _grid(size)
    weights = rng.uniform(-1.0, 1.0, size=2)
    plane = weights[0] * x + weights[1] * y
    span = plane.max() - plane.min()
    plane = (plane - plane.min()) / span if span > 0 else np.zeros_like(plane)
    return _colorize(plane, rng)


def _value_noise(size, rng):
    coarse = int(rng.integers(2, max(3, size // 4) + 1))
    channels = []
    for _ in range(3):
        lattice = (rng.uniform(0.0, 1.0, size=(coarse, coarse)) * 255.0).astype(np.uint8)
        smooth = Image.fromarray(lattice).resize((size, size), Image.BILINEAR)
        channels.append(np.asarray(smooth, dtype=np.float64) / 255.0)
    return np.stack(channels, axis=-1)


def _mixture(size, rng):
    first, second = rng.choice(TEXTURE_KINDS[:-1], size=2, replace=False)
    alpha = rng.uniform(0.25, 0.75)
    return alpha * _GENERATORS[first](size, rng) + (1.0 - alpha) * _GENERATORS[second](size, rng)


_GENERATORS = {
    'grating': _grating,
    'checkerboard': _checkerboard,
    'gradient': _gradient,
    'noise': _value_noise,
    'mixture': _mixture,
}


def make_texture(rng, size, kind=None):
    """One size x size RGB texture as an ImageBuffer."""
    kind = kind or TEXTURE_KINDS[int(rng.integers(len(TEXTURE_KINDS)))]
    pixels = _GENERATORS[kind](size, rng)
    data = np.clip(np.floor(pixels * 255.0 + 0.5), 0, 255).astype(np.uint8)
    return ImageBuffer.from_array(data)


def generate_corpus(out_dir, count, size=32, seed=0):
    """
    Write count PNG textures img_00000.png ... into out_dir.

    The same (count, size, seed) always produces byte-identical files.

    Returns:
        list: Written paths in file-name order
    """
    if count < 1 or size < 1:
        raise StegoError.from_code('VAL_002', f'count={count}, size={size}')
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    paths = []
    for index in range(count):
        path = os.path.join(out_dir, f'img_{index:05d}.png')
        save_image(path, make_texture(rng, size))
        paths.append(path)
    logger.info("Wrote %d textures to %s", count, out_dir)
    audit_logging.log_corpus_generated(out_dir, count, seed)
    return paths
