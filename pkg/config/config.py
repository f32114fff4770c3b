import os
from dataclasses import dataclass, field, replace

from dotenv import load_dotenv

from utils.autodiff import AdamSettings
from utils.losses import LossWeights

load_dotenv()


class Config:
    """Toolkit configuration settings"""

    # Logging goes to stderr; stdout carries hex, JSON and transcripts only
    LOG_LEVEL = os.environ.get('DSTG_LOG_LEVEL', 'INFO')
    NUM_THREADS = int(os.environ.get('DSTG_NUM_THREADS', 1))

    # Network shape
    IMAGE_SIZE = int(os.environ.get('DSTG_IMAGE_SIZE', 32))
    BITS = int(os.environ.get('DSTG_BITS', 30))
    DECODERS = int(os.environ.get('DSTG_DECODERS', 2))

    # Training schedule
    BATCH_SIZE = int(os.environ.get('DSTG_BATCH_SIZE', 12))
    EPOCHS = int(os.environ.get('DSTG_EPOCHS', 300))
    CHECKPOINT_INTERVAL = int(os.environ.get('DSTG_CHECKPOINT_INTERVAL', 10))

    # Loss weights
    LAMBDA_I = float(os.environ.get('DSTG_LAMBDA_I', 0.7))
    LAMBDA_M_OUTER = float(os.environ.get('DSTG_LAMBDA_M_OUTER', 1.0))
    LAMBDA_M = float(os.environ.get('DSTG_LAMBDA_M', 1.0))
    LAMBDA_B = float(os.environ.get('DSTG_LAMBDA_B', 1.0))
    LAMBDA_A = float(os.environ.get('DSTG_LAMBDA_A', 0.001))

    # Adam
    LEARNING_RATE = float(os.environ.get('DSTG_LEARNING_RATE', 1e-3))
    ADAM_BETA1 = float(os.environ.get('DSTG_ADAM_BETA1', 0.9))
    ADAM_BETA2 = float(os.environ.get('DSTG_ADAM_BETA2', 0.999))
    ADAM_EPS = float(os.environ.get('DSTG_ADAM_EPS', 1e-8))

    # Scenario pass criterion for the learned path
    BIT_ERROR_BUDGET = float(os.environ.get('DSTG_BIT_ERROR_BUDGET', 0.05))

    @classmethod
    def default_weights(cls):
        return LossWeights(
            lambda_i=cls.LAMBDA_I,
            lambda_m_outer=cls.LAMBDA_M_OUTER,
            lambda_a=cls.LAMBDA_A,
            lambda_m=cls.LAMBDA_M,
            lambda_b=cls.LAMBDA_B,
        )

    @classmethod
    def default_adam(cls):
        return AdamSettings(lr=cls.LEARNING_RATE, beta1=cls.ADAM_BETA1,
                            beta2=cls.ADAM_BETA2, eps=cls.ADAM_EPS)


@dataclass
class TrainConfig:
    """Everything one training run depends on."""
    decoders: int = Config.DECODERS
    bits: int = Config.BITS
    image_size: tuple = (Config.IMAGE_SIZE, Config.IMAGE_SIZE)
    epochs: int = Config.EPOCHS
    batch_size: int = Config.BATCH_SIZE
    weights: LossWeights = field(default_factory=Config.default_weights)
    adam: AdamSettings = field(default_factory=Config.default_adam)
    seed: int = 0
    checkpoint_interval: int = Config.CHECKPOINT_INTERVAL
    decoder_sigmoid: bool = True
    train_dir: str = None
    val_dir: str = None
    out: str = None
    history: str = None

    def with_weights(self, **changes):
        return replace(self, weights=replace(self.weights, **changes))

    @property
    def history_path(self):
        if self.history:
            return self.history
        return f'{self.out}.history.jsonl' if self.out else None
