import json
import os

import numpy as np
import pytest
import torch

from models.networks import DeniableStegoModel
from utils.corpus import generate_corpus
from utils.imaging import ImageBuffer, list_dataset
from utils.schemas import golden_vectors_schema

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), 'golden')

TINY_SIZE = 16
TINY_BITS = 6


@pytest.fixture
def golden():
    """Load tests/golden/<name>.json, validated, keyed by vector name."""
    def load(name):
        with open(os.path.join(GOLDEN_DIR, f'{name}.json'), encoding='utf-8') as f:
            vectors = golden_vectors_schema.load(json.load(f))
        return {vector['name']: vector for vector in vectors}
    return load


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_image(rng):
    def make(height=TINY_SIZE, width=TINY_SIZE):
        return ImageBuffer.from_array(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))
    return make


@pytest.fixture
def tiny_model():
    torch.manual_seed(7)
    return DeniableStegoModel(bits=TINY_BITS, decoders=2, image_size=(TINY_SIZE, TINY_SIZE))


@pytest.fixture
def corpus_dir(tmp_path):
    directory = tmp_path / 'covers'
    generate_corpus(str(directory), count=6, size=TINY_SIZE, seed=3)
    return str(directory)


@pytest.fixture
def tiny_dataset(corpus_dir):
    return list_dataset(corpus_dir, (TINY_SIZE, TINY_SIZE))


# ============================================================
# LONG RUNS (only requested by tests marked slow)
# ============================================================

@pytest.fixture(scope='session')
def acceptance_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp('acceptance')
    generate_corpus(str(root / 'train'), count=500, size=32, seed=11)
    generate_corpus(str(root / 'val'), count=100, size=32, seed=12)
    return (list_dataset(str(root / 'train'), (32, 32)),
            list_dataset(str(root / 'val'), (32, 32)))


@pytest.fixture(scope='session')
def trained_model_path(tmp_path_factory, acceptance_corpus):
    """Two 30-bit decoders on 32x32 covers, trained once per session."""
    from config.config import TrainConfig
    from utils.training import train

    path = str(tmp_path_factory.mktemp('trained') / 'model.dstg')
    config = TrainConfig(decoders=2, bits=30, image_size=(32, 32), epochs=300, batch_size=12,
                         seed=1, checkpoint_interval=50, out=path)
    train(config, acceptance_corpus[0])
    return path
