"""
Alternating adversarial training of the encoder, its decoders and the adversary,
plus dataset evaluation on 8-bit stegos.

Every batch runs one adversary step followed by one encoder/decoder step on the
same covers and messages. Messages are drawn fresh for every sample of every
epoch from a SplitMix64 stream keyed by the run seed.
"""

import json
import logging
import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

import torch

from config.config import Config
from models.model_file import save_model
from models.networks import DeniableStegoModel, decode, harden
from utils import audit_logging, autodiff, imaging
from utils.bitmsg import BitMessage, MessageStream, bit_error
from utils.errors import StegoError
from utils.losses import (
    adversarial_loss, adversary_bce, image_loss, message_loss, total_loss
)
from utils.schemas import history_record_schema, metrics_report_schema, validate_train_config

logger = logging.getLogger(__name__)

COVER_LABEL = 0.0
STEGO_LABEL = 1.0
EVAL_CHUNK = 32


@dataclass
class MetricsReport:
    psnr: float
    ssim: float
    bit_errors: list = field(default_factory=list)
    samples: int = 0

    def as_dict(self):
        return metrics_report_schema.dump(asdict(self))


@contextmanager
def frozen_running_stats(module):
    """Restore every batch-norm running statistic of module on exit."""
    saved = {name: buf.detach().clone() for name, buf in module.named_buffers()}
    try:
        yield
    finally:
        with torch.no_grad():
            for name, buf in module.named_buffers():
                buf.copy_(saved[name])


def _check_finite_loss(value, name):
    if not torch.isfinite(value).all():
        raise StegoError.from_code('TRN_001', name)


class Trainer:
    """
    Owns one model and its two Adam optimizers for a training session.

    The encoder/decoder optimizer never sees adversary parameters and the
    adversary optimizer never sees encoder or decoder parameters.
    """

    def __init__(self, model, adam=None):
        self.model = model
        self.generator_optimizer = autodiff.make_optimizer(
            list(model.encoder_decoder_parameters()), adam)
        self.adversary_optimizer = autodiff.make_optimizer(
            list(model.adversary.parameters()), adam)

    def _check_batch(self, covers, messages):
        if covers.shape[0] < 2:
            raise StegoError.from_code('TRN_002', f'got {covers.shape[0]}')
        self.model.check_image(covers)
        expected = (covers.shape[0], self.model.n_decoders, self.model.bits)
        if tuple(messages.shape) != expected:
            raise StegoError.from_code('NET_001', f'messages {tuple(messages.shape)}, expected {expected}')

    def train_step_adversary(self, covers, messages):
        """
        Update the adversary on covers (label 0) and stegos (label 1).

        Stegos come from the encoder in training mode without gradient; the
        encoder's running statistics are restored afterwards.

        Returns:
            float: BCE(covers) + BCE(stegos)
        """
        self._check_batch(covers, messages)
        model = self.model
        model.train()
        with torch.no_grad(), frozen_running_stats(model.encoder):
            stegos = model.encoder(covers, messages)

        self.adversary_optimizer.zero_grad(set_to_none=True)
        pred_cover = model.adversary(covers)
        pred_stego = model.adversary(stegos)
        loss = (adversary_bce(pred_cover, torch.full_like(pred_cover, COVER_LABEL))
                + adversary_bce(pred_stego, torch.full_like(pred_stego, STEGO_LABEL)))
        _check_finite_loss(loss, 'adversary')
        loss.backward()
        autodiff.adam_step(self.adversary_optimizer)
        return float(loss.detach())

    def train_step_encoder(self, covers, messages):
        """
        Update the encoder and every decoder by the weighted total loss.

        The adversary only scores the stegos; its parameters and running
        statistics are left as they were.

        Returns:
            LossReport
        """
        self._check_batch(covers, messages)
        model = self.model
        model.train()
        self.generator_optimizer.zero_grad(set_to_none=True)

        stegos = model.encoder(covers, messages)
        l_image = image_loss(covers, stegos)
        l_messages = [message_loss(messages[:, i], decoder(stegos))
                      for i, decoder in enumerate(model.decoders)]
        # Buffers are restored only after backward has consumed the saved stats
        with frozen_running_stats(model.adversary):
            l_adv = adversarial_loss(model.adversary(stegos))
            report = total_loss(l_image, l_messages, l_adv, model.weights)
            _check_finite_loss(report.total, 'total')
            report.total.backward()
        autodiff.adam_step(self.generator_optimizer)
        # Adversary grads from the adversarial term are never applied
        self.adversary_optimizer.zero_grad(set_to_none=True)
        return report

    def optimizer_state(self):
        return {
            'generator': self.generator_optimizer.state_dict(),
            'adversary': self.adversary_optimizer.state_dict(),
        }


# ============================================================
# TRAINING LOOP
# ============================================================

def _mean_record(reports, adv_losses):
    count = len(reports)
    records = [r.as_record() for r in reports]
    mean = {key: sum(rec[key] for rec in records) / count
            for key in ('L_I', 'L_b', 'L_M', 'L_A', 'total')}
    n_decoders = len(records[0]['L_m'])
    mean['L_m'] = [sum(rec['L_m'][i] for rec in records) / count for i in range(n_decoders)]
    mean['adv_loss'] = sum(adv_losses) / count
    return mean


def checkpoint_paths(out, epoch):
    return f'{out}.epoch{epoch:04d}.dstg', f'{out}.epoch{epoch:04d}.optim.pt'


def train(config, dataset, val_dataset=None):
    """
    Train a fresh model on dataset.

    Args:
        config (TrainConfig): Shape, schedule, weights, optimizer and seed
        dataset (DatasetHandle): Training covers
        val_dataset (DatasetHandle, optional): Evaluated at every checkpoint

    Returns:
        tuple: (DeniableStegoModel, list of per-epoch history records)

    Raises:
        StegoError: VAL_001 invalid config, IMG_004 validation images smaller
            than the SSIM window, IMG_007 empty dataset, TRN_002 fewer than two
            images, TRN_001 non-finite loss
    """
    validate_train_config(config)
    if val_dataset is not None and min(config.image_size) < imaging.SSIM_WINDOW:
        raise StegoError.from_code(
            'IMG_004', f'validation needs at least {imaging.SSIM_WINDOW}px, '
                       f'got {config.image_size[0]}x{config.image_size[1]}'
        )
    if dataset is None or len(dataset) == 0:
        raise StegoError.from_code('IMG_007', getattr(dataset, 'root', None))
    if len(dataset) < 2:
        raise StegoError.from_code('TRN_002', f'dataset has {len(dataset)} image')

    autodiff.seed_everything(config.seed, Config.NUM_THREADS)
    model = DeniableStegoModel(bits=config.bits, decoders=config.decoders,
                               image_size=config.image_size, weights=config.weights,
                               decoder_sigmoid=config.decoder_sigmoid)
    trainer = Trainer(model, config.adam)
    covers = dataset.load_tensors()
    messages = MessageStream(config.seed)
    shuffle = torch.Generator().manual_seed(config.seed & 0xFFFFFFFFFFFFFFFF)

    history_path = config.history_path
    history_file = None
    if history_path:
        os.makedirs(os.path.dirname(os.path.abspath(history_path)), exist_ok=True)
        history_file = open(history_path, 'w', encoding='utf-8')

    audit_logging.log_training_started(config.out, {
        'decoders': config.decoders, 'bits': config.bits, 'epochs': config.epochs,
        'batch_size': config.batch_size, 'seed': config.seed, 'images': len(dataset),
    })

    history = []
    try:
        for epoch in range(1, config.epochs + 1):
            order = torch.randperm(len(dataset), generator=shuffle)
            reports, adv_losses = [], []
            for start in range(0, len(order), config.batch_size):
                index = order[start:start + config.batch_size]
                # A trailing singleton batch has no batch statistics
                if len(index) < 2:
                    continue
                batch = covers[index]
                batch_messages = messages.next_batch(len(index), config.decoders, config.bits)
                adv_losses.append(trainer.train_step_adversary(batch, batch_messages))
                reports.append(trainer.train_step_encoder(batch, batch_messages))

            record = {'epoch': epoch, **_mean_record(reports, adv_losses)}
            if epoch % config.checkpoint_interval == 0 or epoch == config.epochs:
                _checkpoint(config, trainer, epoch, record, val_dataset)

            history.append(history_record_schema.dump(record))
            if history_file:
                history_file.write(json.dumps(history[-1]) + '\n')
                history_file.flush()
            logger.info("Epoch %d/%d total=%.6f adv=%.6f", epoch, config.epochs,
                        record['total'], record['adv_loss'])
            audit_logging.log_epoch_completed(config.out, epoch, record['total'], record['adv_loss'])
    finally:
        if history_file:
            history_file.close()

    model.eval()
    if config.out:
        save_model(config.out, model)
    return model, history


def _checkpoint(config, trainer, epoch, record, val_dataset):
    if config.out:
        model_path, optim_path = checkpoint_paths(config.out, epoch)
        save_model(model_path, trainer.model)
        torch.save(trainer.optimizer_state(), optim_path)
        audit_logging.log_checkpoint_saved(model_path, epoch)
    if val_dataset is not None:
        report = evaluate(trainer.model, val_dataset, config.seed)
        record['val'] = report.as_dict()
        logger.info("Validation at epoch %d: %s", epoch, record['val'])


# ============================================================
# EVALUATION
# ============================================================

def evaluate(model, dataset, seed):
    """
    Measure extraction and image quality on 8-bit stegos.

    For each cover: fresh messages from the seeded stream, encode, quantize
    to bytes, decode with every decoder, harden and compare.

    Returns:
        MetricsReport
    """
    if dataset is None or len(dataset) == 0:
        raise StegoError.from_code('IMG_007', getattr(dataset, 'root', None))

    was_training = model.training
    model.eval()
    stream = MessageStream(seed)
    errors = [0.0] * model.n_decoders
    psnr_total = ssim_total = 0.0
    try:
        with torch.no_grad():
            for start in range(0, len(dataset), EVAL_CHUNK):
                indices = range(start, min(start + EVAL_CHUNK, len(dataset)))
                cover_images = [dataset.load(i) for i in indices]
                covers = torch.stack([imaging.to_tensor(img) for img in cover_images])
                model.check_image(covers)
                messages = stream.next_batch(len(cover_images), model.n_decoders, model.bits)
                stegos = model.encoder(covers, messages)
                for k, cover_image in enumerate(cover_images):
                    stego_image = imaging.from_tensor(stegos[k])
                    psnr_total += imaging.psnr(cover_image, stego_image)
                    ssim_total += imaging.ssim(cover_image, stego_image)
                    received = imaging.to_tensor(stego_image)
                    for i in range(model.n_decoders):
                        bits = harden(decode(model, i, received))
                        errors[i] += bit_error(bits, BitMessage.from_tensor(messages[k, i]))
    finally:
        model.train(was_training)

    count = len(dataset)
    report = MetricsReport(
        psnr=psnr_total / count,
        ssim=ssim_total / count,
        bit_errors=[e / count for e in errors],
        samples=count,
    )
    audit_logging.log_evaluation_completed(dataset.root, report.as_dict())
    return report
