"""
Encoder, N decoders and adversary of the deniable hiding network.

Every 'Conv-BN-ReLU' block is a 3x3, stride-1, pad-1 convolution with 64
filters unless stated otherwise, followed by batch normalization and ReLU.
"""

import torch
from torch import nn

from utils import autodiff
from utils.bitmsg import BitMessage
from utils.enums import NormMode
from utils.errors import StegoError
from utils.losses import LossWeights

HIDDEN_CHANNELS = 64
ENCODER_BLOCKS = 4
DECODER_BLOCKS = 8
ADVERSARY_BLOCKS = 3
LINEAR_OUTPUT_MARKER = 'linear_output'


class ConvBNReLU(nn.Module):

    def __init__(self, in_channels, out_channels):
        super().__init__()
        self.conv = nn.Conv2d(in_channels, out_channels, kernel_size=3, stride=1, padding=1)
        self.bn = nn.BatchNorm2d(out_channels, eps=autodiff.BN_EPS, momentum=autodiff.BN_MOMENTUM)

    def forward(self, x):
        x = autodiff.conv2d(x, self.conv.weight, self.conv.bias, stride=1, pad=1)
        x = autodiff.batch_norm(
            x, self.bn.weight, self.bn.bias, self.bn.running_mean, self.bn.running_var,
            mode=NormMode.TRAIN if self.training else NormMode.EVAL,
            momentum=self.bn.momentum, eps=self.bn.eps,
        )
        return autodiff.relu(x)


def _blocks(in_channels, count, last_channels=HIDDEN_CHANNELS):
    layers = []
    channels = in_channels
    for index in range(count):
        out = last_channels if index == count - 1 else HIDDEN_CHANNELS
        layers.append(ConvBNReLU(channels, out))
        channels = out
    return nn.Sequential(*layers)


class Encoder(nn.Module):
    """
    The Encoder module takes a cover image and N messages and combines them
    into a stego image of the same size.
    Input: (B, 3, H, W), (B, N, t)
    Output: (B, 3, H, W), raw (not clamped)
    """

    def __init__(self, bits, decoders):
        super().__init__()
        self.bits = bits
        self.decoders = decoders
        self.features = _blocks(3, ENCODER_BLOCKS)
        self.fuse = ConvBNReLU(self.concat_channels, HIDDEN_CHANNELS)
        self.to_image = nn.Conv2d(HIDDEN_CHANNELS, 3, kernel_size=3, stride=1, padding=1)

    @property
    def concat_channels(self):
        return HIDDEN_CHANNELS + 3 + self.decoders * self.bits

    def forward(self, cover, messages):
        batch, _, height, width = cover.shape
        if messages.shape != (batch, self.decoders, self.bits):
            raise StegoError.from_code(
                'NET_001', f'messages {tuple(messages.shape)}, expected '
                           f'{(batch, self.decoders, self.bits)}'
            )
        planes = autodiff.replicate_bits(messages.reshape(batch, -1), height, width)
        volume = autodiff.concat_channels([self.features(cover), cover, planes])
        x = self.fuse(volume)
        return autodiff.conv2d(x, self.to_image.weight, self.to_image.bias, stride=1, pad=1)


class Decoder(nn.Module):
    """
    Eight Conv-BN-ReLU blocks (the last one with t filters), global average
    pooling, a t -> t linear head and a sigmoid.
    Input: (B, 3, H, W) of any spatial size
    Output: (B, t) soft bits in (0, 1)

    With sigmoid=False the head output is returned as is (unbounded); such a
    decoder carries a `linear_output` marker buffer so its model file says so.
    """

    def __init__(self, bits, sigmoid=True):
        super().__init__()
        self.bits = bits
        self.sigmoid = sigmoid
        self.body = _blocks(3, DECODER_BLOCKS, last_channels=bits)
        self.head = nn.Linear(bits, bits)
        if not sigmoid:
            self.register_buffer(LINEAR_OUTPUT_MARKER, torch.ones(()))

    def forward(self, stego):
        x = autodiff.adaptive_avg_pool(self.body(stego))
        x = autodiff.linear(x, self.head.weight, self.head.bias)
        return autodiff.sigmoid(x) if self.sigmoid else x


class Adversary(nn.Module):
    """
    Discriminator network. Receives an image and has to figure out whether it
    has messages hidden in it, or not.
    Output: (B,) probability of 'stego'
    """

    def __init__(self):
        super().__init__()
        self.body = _blocks(3, ADVERSARY_BLOCKS)
        self.head = nn.Linear(HIDDEN_CHANNELS, 1)

    def forward(self, img):
        if img.dim() != 4 or img.shape[1] != 3:
            raise StegoError.from_code('NET_003', f'adversary input {tuple(img.shape)}')
        x = autodiff.adaptive_avg_pool(self.body(img))
        return autodiff.sigmoid(autodiff.linear(x, self.head.weight, self.head.bias)).squeeze(-1)


def init_weights(module):
    """Kaiming fan-in scaling for convolutions and linear layers; BN gamma=1, beta=0."""
    if isinstance(module, (nn.Conv2d, nn.Linear)):
        nn.init.kaiming_normal_(module.weight, mode='fan_in', nonlinearity='relu')
        nn.init.zeros_(module.bias)
    elif isinstance(module, nn.BatchNorm2d):
        nn.init.ones_(module.weight)
        nn.init.zeros_(module.bias)


class DeniableStegoModel(nn.Module):
    """
    All learnable tensors (encoder, N independent decoders, adversary) plus
    batch-norm running statistics and the hyperparameters they were built with.
    Decoder 0 extracts the real message, decoder 1 the fake one.
    """

    def __init__(self, bits=30, decoders=2, image_size=(32, 32), weights=None, decoder_sigmoid=True):
        super().__init__()
        if decoders < 2:
            raise StegoError.from_code('NET_001', f'need at least two decoders, got {decoders}')
        if bits < 1:
            raise StegoError.from_code('MSG_005', f'bits={bits}')
        self.bits = bits
        self.n_decoders = decoders
        self.image_size = tuple(image_size)
        self.weights = weights or LossWeights()
        self.decoder_sigmoid = decoder_sigmoid
        self.encoder = Encoder(bits, decoders)
        self.decoders = nn.ModuleList(Decoder(bits, decoder_sigmoid) for _ in range(decoders))
        self.adversary = Adversary()
        self.apply(init_weights)

    def encoder_decoder_parameters(self):
        yield from self.encoder.parameters()
        for decoder in self.decoders:
            yield from decoder.parameters()

    def check_image(self, images):
        if images.dim() != 4 or images.shape[1] != 3 or tuple(images.shape[2:]) != self.image_size:
            raise StegoError.from_code(
                'NET_003', f'{tuple(images.shape)} vs (B, 3, {self.image_size[0]}, {self.image_size[1]})'
            )

    def decoder(self, which):
        if not 0 <= which < self.n_decoders:
            raise StegoError.from_code('NET_002', f'{which} not in [0, {self.n_decoders})')
        return self.decoders[which]


# ============================================================
# SINGLE-IMAGE OPERATIONS
# ============================================================

def _message_tensor(model, messages):
    if len(messages) != model.n_decoders:
        raise StegoError.from_code('NET_001', f'{len(messages)} messages for {model.n_decoders} decoders')
    for message in messages:
        if len(message) != model.bits:
            raise StegoError.from_code('MSG_004', f'{len(message)} bits, model uses {model.bits}')
    return torch.stack([m.as_tensor() for m in messages]).unsqueeze(0)


def encode(model, cover, messages):
    """
    Stego for one cover tensor (3, H, W) and one message per decoder.

    Runs in the model's current mode; callers use eval mode for inference.
    """
    batch = cover.unsqueeze(0)
    model.check_image(batch)
    return model.encoder(batch, _message_tensor(model, messages)).squeeze(0)


def decode(model, which, stego):
    """Soft bits (t,) of decoder `which` for one stego tensor (3, H, W) of any size."""
    decoder = model.decoder(which)
    soft = decoder(stego.unsqueeze(0)).squeeze(0)
    return soft if decoder.sigmoid else soft.clamp(0.0, 1.0)


def discriminate(model, img):
    """Probability in (0, 1) that one image (3, H, W) is a stego."""
    if img.dim() != 3 or img.shape[0] != 3:
        raise StegoError.from_code('NET_003', f'{tuple(img.shape)}')
    return model.adversary(img.unsqueeze(0)).squeeze(0)


def harden(soft):
    """Threshold soft bits at 0.5 (>= 0.5 -> 1)."""
    values = torch.as_tensor(soft).detach().flatten().tolist()
    return BitMessage(tuple(int(v >= 0.5) for v in values))
