"""
Coercion walkthrough: embed a real and a fake message, transmit the stego as a
PNG, extract normally (real) and under coercion (fake), and check both against
what was sent.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import torch

from config.config import Config
from models.networks import decode, encode, harden
from utils import audit_logging, imaging
from utils.bitmsg import bit_error, random_message, to_hex
from utils.classic import (
    DeniableKey, DeniableKeyPair, classic_embed, classic_extract, forge_key, read_ciphertext
)
from utils.corpus import make_texture
from utils.enums import ScenarioMode
from utils.errors import StegoError
from utils.splitmix import SplitMix64

logger = logging.getLogger(__name__)

DEFAULT_COVER_SIZE = 32


@dataclass
class Transcript:
    mode: str
    lines: list = field(default_factory=list)
    passed: bool = False

    def say(self, text):
        self.lines.append(text)
        logger.debug(text)

    def render(self):
        verdict = 'PASS' if self.passed else 'FAIL'
        return '\n'.join(self.lines + [f'result: {verdict}']) + '\n'


def _transmit(stego):
    return imaging.decode_png(imaging.encode_png(stego))


def _default_cover(seed, size):
    return make_texture(np.random.default_rng(seed), size)


def _classic(seed, cover, bits):
    transcript = Transcript(ScenarioMode.CLASSIC.value)
    rng = SplitMix64(seed)
    m_real = random_message(rng.next_u64(), bits)
    m_fake = random_message(rng.next_u64(), bits)
    keys = DeniableKeyPair(
        real=DeniableKey(rng.next_u64(), random_message(rng.next_u64(), bits)),
        fake=DeniableKey(rng.next_u64(), random_message(rng.next_u64(), bits)),
    )
    transcript.say(f'cover: {cover.width}x{cover.height} RGB, {bits}-bit messages')
    transcript.say(f'sender embeds real={to_hex(m_real)} fake={to_hex(m_fake)}')
    transcript.say(f'public seeds: real={keys.real.seed:#018x} fake={keys.fake.seed:#018x}')

    stego = classic_embed(cover, m_real, m_fake, keys)
    transcript.say(f'stego PSNR vs cover: {imaging.psnr(cover, stego):.4f} dB')
    received = _transmit(stego)
    transcript.say('stego transmitted as PNG')

    got_real = classic_extract(received, keys.real, 'real', bits, keys.fake.seed)
    transcript.say(f'receiver extracts with its real pad: {to_hex(got_real)}')
    got_fake = classic_extract(received, keys.fake, 'fake', bits, keys.real.seed)
    transcript.say(f'coerced receiver surrenders the fake pad: {to_hex(got_fake)}')

    ciphertext = read_ciphertext(received, keys.position_seed, 'real', bits)
    forged = DeniableKey(keys.real.seed, forge_key(ciphertext, m_fake))
    got_forged = classic_extract(received, forged, 'real', bits, keys.fake.seed)
    transcript.say(f'forged pad {to_hex(forged.pad)} opens the real slots as: {to_hex(got_forged)}')

    transcript.passed = got_real == m_real and got_fake == m_fake and got_forged == m_fake
    transcript.say(f'real recovered exactly: {got_real == m_real}; '
                   f'fake recovered exactly: {got_fake == m_fake}; '
                   f'forgery convincing: {got_forged == m_fake}')
    return transcript


def _dnn(seed, model, cover):
    transcript = Transcript(ScenarioMode.DNN.value)
    rng = SplitMix64(seed)
    messages = [random_message(rng.next_u64(), model.bits) for _ in range(model.n_decoders)]
    transcript.say(f'cover: {cover.width}x{cover.height} RGB, {model.n_decoders} decoders, '
                   f'{model.bits}-bit messages')
    for index, message in enumerate(messages):
        transcript.say(f'sender embeds message {index}: {to_hex(message)}')

    model.eval()
    with torch.no_grad():
        stego = imaging.from_tensor(encode(model, imaging.to_tensor(cover), messages))
        transcript.say(f'stego PSNR vs cover: {imaging.psnr(cover, stego):.4f} dB')
        received = imaging.to_tensor(_transmit(stego))
        transcript.say('stego transmitted as PNG')
        recovered = [harden(decode(model, i, received)) for i in range(model.n_decoders)]

    budget = Config.BIT_ERROR_BUDGET
    errors = [bit_error(got, sent) for got, sent in zip(recovered, messages)]
    labels = ['normal extraction (real decoder)', 'coerced extraction (fake decoder)']
    for index, (got, error) in enumerate(zip(recovered, errors)):
        label = labels[index] if index < len(labels) else f'decoder {index}'
        transcript.say(f'{label}: {to_hex(got)} bit error {error:.4f}')
    transcript.passed = all(error < budget for error in errors)
    verdict = 'met by every decoder' if transcript.passed else 'exceeded'
    transcript.say(f'bit-error budget {budget}: {verdict}')
    return transcript


def run_scenario(mode, seed=0, model=None, cover=None, bits=None):
    """
    Run the coercion walkthrough.

    Args:
        mode (str|ScenarioMode): 'classic' or 'dnn'
        seed (int): Drives messages, keys and the default cover
        model (DeniableStegoModel): Required for 'dnn'
        cover (ImageBuffer, optional): Defaults to a procedural texture
        bits (int, optional): Message length for 'classic'

    Returns:
        Transcript: passed is False on any mismatch or exceeded budget
    """
    mode = ScenarioMode(mode)
    if mode is ScenarioMode.DNN:
        if model is None:
            raise StegoError.from_code('VAL_002', 'dnn scenario needs a model')
        if cover is None:
            height, width = model.image_size
            if height != width:
                raise StegoError.from_code('VAL_002', 'pass --cover for non-square models')
            cover = _default_cover(seed, height)
        elif cover.size != model.image_size:
            raise StegoError.from_code('NET_003', f'cover {cover.size} vs model {model.image_size}')
        transcript = _dnn(seed, model, cover)
    else:
        cover = cover if cover is not None else _default_cover(seed, DEFAULT_COVER_SIZE)
        transcript = _classic(seed, cover, bits or Config.BITS)

    audit_logging.log_scenario_completed(mode.value, transcript.passed)
    return transcript
