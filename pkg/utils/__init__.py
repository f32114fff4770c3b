"""
Utils package for the deniable steganography toolkit.
Contains the domain modules plus error handling, enums and audit logging.
"""

from utils.errors import (
    StegoError,
    BadInput,
    NotFoundError,
    CapacityError,
    FormatError,
    NumericalError,
    ScenarioFailure,
    ValidationError,
    InternalError
)

from utils.enums import DecoderRole, NormMode, ScenarioMode, Provenance, ActionType

from utils.audit_logging import (
    log_action,
    log_training_started,
    log_epoch_completed,
    log_checkpoint_saved,
    log_model_loaded,
    log_stego_embedded,
    log_message_extracted,
    log_key_forged,
    log_evaluation_completed,
    log_scenario_completed,
    log_corpus_generated
)

__all__ = [
    # Error handling
    'StegoError',
    'BadInput',
    'NotFoundError',
    'CapacityError',
    'FormatError',
    'NumericalError',
    'ScenarioFailure',
    'ValidationError',
    'InternalError',
    # Enums
    'DecoderRole',
    'NormMode',
    'ScenarioMode',
    'Provenance',
    'ActionType',
    # Audit logging
    'log_action',
    'log_training_started',
    'log_epoch_completed',
    'log_checkpoint_saved',
    'log_model_loaded',
    'log_stego_embedded',
    'log_message_extracted',
    'log_key_forged',
    'log_evaluation_completed',
    'log_scenario_completed',
    'log_corpus_generated'
]
