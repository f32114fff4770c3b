# Import models for easy access
from models.networks import (
    DeniableStegoModel, Encoder, Decoder, Adversary, encode, decode, discriminate, harden
)
from models.model_file import save_model, load_model

__all__ = ['DeniableStegoModel', 'Encoder', 'Decoder', 'Adversary', 'encode', 'decode',
           'discriminate', 'harden', 'save_model', 'load_model']
