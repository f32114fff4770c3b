from config.config import Config, TrainConfig

__all__ = ['Config', 'TrainConfig']
