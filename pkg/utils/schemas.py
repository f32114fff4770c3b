"""
Marshmallow schemas for the toolkit.
Validates training configuration and serializes history records, metrics and
gradient-check reports with field-level error details.
"""

import math
from dataclasses import replace

from marshmallow import (
    Schema, fields, validate, ValidationError as MarshmallowValidationError, post_dump, post_load
)

from utils.enums import Provenance
from utils.errors import ValidationError

MAX_SEED = (1 << 64) - 1


# ============================================================
# CUSTOM FIELD VALIDATORS
# ============================================================

def validate_positive(value):
    """Ensure value is positive"""
    if value <= 0:
        raise MarshmallowValidationError("Must be positive")


def validate_beta(value):
    """Adam decay rates live in [0, 1)"""
    if not 0.0 <= value < 1.0:
        raise MarshmallowValidationError("Must be in [0, 1)")


def validate_provenance(value):
    """Ensure provenance tag is valid"""
    valid_tags = Provenance.all_tags()
    if value not in valid_tags:
        raise MarshmallowValidationError(f"Invalid provenance. Must be one of: {', '.join(valid_tags)}")


# ============================================================
# TRAINING CONFIGURATION
# ============================================================

class TrainConfigSchema(Schema):
    """Flat key/value view of a TrainConfig (RunConfig files and CLI flags)"""
    decoders = fields.Integer(validate=validate.Range(min=2),
                              metadata={'description': 'Number of decoders N'})
    bits = fields.Integer(validate=validate.Range(min=1),
                          metadata={'description': 'Bits per message t'})
    image_height = fields.Integer(validate=validate.Range(min=1))
    image_width = fields.Integer(validate=validate.Range(min=1))
    epochs = fields.Integer(validate=validate.Range(min=1))
    batch_size = fields.Integer(validate=validate.Range(min=2),
                                metadata={'description': 'At least 2 for batch statistics'})
    lambda_i = fields.Float(validate=validate.Range(min=0))
    lambda_m_outer = fields.Float(validate=validate.Range(min=0))
    lambda_a = fields.Float(validate=validate.Range(min=0))
    lambda_m = fields.Float(validate=validate.Range(min=0))
    lambda_b = fields.Float(validate=validate.Range(min=0))
    lr = fields.Float(validate=validate_positive)
    beta1 = fields.Float(validate=validate_beta)
    beta2 = fields.Float(validate=validate_beta)
    eps = fields.Float(validate=validate_positive)
    seed = fields.Integer(validate=validate.Range(min=0, max=MAX_SEED))
    checkpoint_interval = fields.Integer(validate=validate.Range(min=1))
    decoder_sigmoid = fields.Boolean(metadata={'description': 'Sigmoid after the decoder head'})
    train_dir = fields.String(allow_none=True)
    val_dir = fields.String(allow_none=True)
    out = fields.String(allow_none=True)
    history = fields.String(allow_none=True)

    @post_load
    def make_config(self, data, **kwargs):
        # Import here to avoid circular imports
        from config.config import TrainConfig
        return config_from_flat(TrainConfig(), data)


_WEIGHT_KEYS = ('lambda_i', 'lambda_m_outer', 'lambda_a', 'lambda_m', 'lambda_b')
_ADAM_KEYS = {'lr': 'lr', 'beta1': 'beta1', 'beta2': 'beta2', 'eps': 'eps'}
_PLAIN_KEYS = ('decoders', 'bits', 'epochs', 'batch_size', 'seed', 'checkpoint_interval',
               'decoder_sigmoid', 'train_dir', 'val_dir', 'out', 'history')


def config_from_flat(base, data):
    """Apply flat keys to a TrainConfig, leaving the rest of base untouched."""
    weights = {k: data[k] for k in _WEIGHT_KEYS if k in data}
    adam = {attr: data[k] for k, attr in _ADAM_KEYS.items() if k in data}
    plain = {k: data[k] for k in _PLAIN_KEYS if k in data}
    height = data.get('image_height', base.image_size[0])
    width = data.get('image_width', base.image_size[1])
    return replace(
        base,
        weights=replace(base.weights, **weights),
        adam=replace(base.adam, **adam),
        image_size=(height, width),
        **plain,
    )


def config_to_flat(config):
    """TrainConfig to the flat key/value form TrainConfigSchema loads."""
    flat = {
        'decoders': config.decoders,
        'bits': config.bits,
        'image_height': config.image_size[0],
        'image_width': config.image_size[1],
        'epochs': config.epochs,
        'batch_size': config.batch_size,
        'seed': config.seed,
        'checkpoint_interval': config.checkpoint_interval,
        'decoder_sigmoid': config.decoder_sigmoid,
        'lr': config.adam.lr,
        'beta1': config.adam.beta1,
        'beta2': config.adam.beta2,
        'eps': config.adam.eps,
    }
    for key in _WEIGHT_KEYS:
        flat[key] = getattr(config.weights, key)
    for key in ('train_dir', 'val_dir', 'out', 'history'):
        if getattr(config, key) is not None:
            flat[key] = getattr(config, key)
    return flat


# ============================================================
# REPORT SCHEMAS
# ============================================================

class MetricsReportSchema(Schema):
    """Evaluation summary over a dataset"""
    psnr = fields.Float(metadata={'description': 'Mean PSNR (dB) between covers and 8-bit stegos'})
    ssim = fields.Float(metadata={'description': 'Mean SSIM between covers and 8-bit stegos'})
    bit_errors = fields.List(fields.Float(validate=validate.Range(min=0, max=1)),
                             metadata={'description': 'Mean bit error per decoder index'})
    samples = fields.Integer(validate=validate.Range(min=1))

    @post_dump
    def null_unbounded_psnr(self, data, **kwargs):
        # Identical cover and stego give infinite PSNR; JSON has no token for it
        psnr = data.get('psnr')
        if psnr is not None and not math.isfinite(psnr):
            data['psnr'] = None
        return data


class LossReportSchema(Schema):
    """Per-epoch mean of the training objective's components"""
    L_I = fields.Float()
    L_m = fields.List(fields.Float())
    L_b = fields.Float()
    L_M = fields.Float()
    L_A = fields.Float()
    total = fields.Float()


class HistoryRecordSchema(LossReportSchema):
    """One JSON line of training history"""
    epoch = fields.Integer(required=True, validate=validate.Range(min=1))
    adv_loss = fields.Float()
    val = fields.Nested(MetricsReportSchema, allow_none=True)


class GradCheckReportSchema(Schema):
    """Outcome of one finite-difference gradient check"""
    op = fields.String()
    max_relative_error = fields.Float()
    tolerance = fields.Float()
    passed = fields.Boolean()
    elements_checked = fields.Integer()
    expect_failure = fields.Boolean()
    verified = fields.Boolean()


class GoldenVectorSchema(Schema):
    """Frozen reference value with its provenance"""
    name = fields.String(required=True, validate=validate.Length(min=1))
    inputs = fields.Dict(required=True)
    expected = fields.Raw(required=True)
    provenance = fields.String(required=True, validate=validate_provenance)
    note = fields.String()


# ============================================================
# SCHEMA INSTANCES
# ============================================================

train_config_schema = TrainConfigSchema()
metrics_report_schema = MetricsReportSchema()
history_record_schema = HistoryRecordSchema()
grad_check_reports_schema = GradCheckReportSchema(many=True)
golden_vectors_schema = GoldenVectorSchema(many=True)


# ============================================================
# HELPER FUNCTIONS
# ============================================================

def validate_request_data(data, schema):
    """
    Validate data against schema.

    Args:
        data (dict): Data to validate
        schema: Marshmallow schema instance

    Returns:
        tuple: (validated_data, errors_dict or None)
    """
    try:
        validated = schema.load(data)
        return validated, None
    except MarshmallowValidationError as err:
        return None, err.messages


def load_train_config(data):
    """
    Validate a flat mapping and build a TrainConfig.

    Raises:
        ValidationError: VAL_001 with field-level messages
    """
    validated, errors = validate_request_data(data, train_config_schema)
    if errors:
        raise ValidationError('Configuration validation failed', 'VAL_001', fields=errors)
    return validated


def validate_train_config(config):
    """
    Check an already-built TrainConfig against the same rules as flat input.

    Raises:
        ValidationError: VAL_001 with field-level messages
    """
    errors = train_config_schema.validate(config_to_flat(config))
    if errors:
        raise ValidationError('Configuration validation failed', 'VAL_001', fields=errors)
