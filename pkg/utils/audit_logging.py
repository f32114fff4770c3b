"""
Audit logging utility for the steganography toolkit.
Records domain events (training progress, embedding, extraction, key forgery)
as one structured JSON log line per event.
"""

import json
import logging
from datetime import datetime, timezone

from utils.enums import ActionType

logger = logging.getLogger('dstg.audit')


def log_action(action_type, entity_type, entity_id=None, details=None):
    """
    Log a toolkit event to the audit trail.

    Args:
        action_type (str|ActionType): Type of action (use ActionType enum or string)
        entity_type (str): Type of entity affected (e.g., 'MODEL', 'STEGO', 'DATASET')
        entity_id (str, optional): Identifier of the entity, usually a path
        details (dict, optional): Additional details about the action

    Returns:
        dict: The emitted record

    Raises:
        ValueError: If entity_type is empty or the action is unknown
    """
    if not entity_type:
        raise ValueError("entity_type is required for audit logging")

    # Convert ActionType enum to string if necessary
    if isinstance(action_type, ActionType):
        action_type_str = action_type.value
    else:
        action_type_str = str(action_type)
    if action_type_str not in ActionType.all_actions():
        raise ValueError(f"Unknown action type {action_type_str}")

    record = {
        'timestamp': datetime.now(timezone.utc).isoformat(),
        'action': action_type_str,
        'entity_type': entity_type,
        'entity_id': entity_id,
        'details': details or {},
    }
    logger.info(json.dumps(record, sort_keys=True, default=str))
    return record


def log_training_started(out, config_summary):
    """Log the start of a training run"""
    return log_action(
        action_type=ActionType.TRAINING_STARTED,
        entity_type='MODEL',
        entity_id=out,
        details=config_summary
    )


def log_epoch_completed(out, epoch, total, adv_loss):
    """Log one finished epoch"""
    return log_action(
        action_type=ActionType.EPOCH_COMPLETED,
        entity_type='MODEL',
        entity_id=out,
        details={'epoch': epoch, 'total': total, 'adv_loss': adv_loss}
    )


def log_checkpoint_saved(path, epoch):
    """Log a checkpoint write"""
    return log_action(
        action_type=ActionType.CHECKPOINT_SAVED,
        entity_type='MODEL',
        entity_id=path,
        details={'epoch': epoch}
    )


def log_model_loaded(path, decoders, bits):
    """Log a model file read"""
    return log_action(
        action_type=ActionType.MODEL_LOADED,
        entity_type='MODEL',
        entity_id=path,
        details={'decoders': decoders, 'bits': bits}
    )


def log_stego_embedded(out, method, messages):
    """Log a stego image write; messages are counted, never recorded"""
    return log_action(
        action_type=ActionType.STEGO_EMBEDDED,
        entity_type='STEGO',
        entity_id=out,
        details={'method': method, 'messages': messages}
    )


def log_message_extracted(stego, method, which):
    """Log an extraction"""
    return log_action(
        action_type=ActionType.MESSAGE_EXTRACTED,
        entity_type='STEGO',
        entity_id=stego,
        details={'method': method, 'which': which}
    )


def log_key_forged(stego, which):
    """Log a key forgery"""
    return log_action(
        action_type=ActionType.KEY_FORGED,
        entity_type='STEGO',
        entity_id=stego,
        details={'which': which}
    )


def log_evaluation_completed(dataset, report):
    """Log an evaluation summary"""
    return log_action(
        action_type=ActionType.EVALUATION_COMPLETED,
        entity_type='DATASET',
        entity_id=dataset,
        details=report
    )


def log_scenario_completed(mode, passed):
    """Log a scenario outcome"""
    return log_action(
        action_type=ActionType.SCENARIO_COMPLETED,
        entity_type='SCENARIO',
        entity_id=mode,
        details={'passed': passed}
    )


def log_corpus_generated(out_dir, count, seed):
    """Log a procedural corpus write"""
    return log_action(
        action_type=ActionType.CORPUS_GENERATED,
        entity_type='DATASET',
        entity_id=out_dir,
        details={'count': count, 'seed': seed}
    )
