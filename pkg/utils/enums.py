from enum import Enum


class DecoderRole(Enum):
    """Named decoders; indices >= 2 are addressed numerically"""
    REAL = 'real'
    FAKE = 'fake'

    @classmethod
    def all_roles(cls):
        """Get list of all role names"""
        return [role.value for role in cls]

    @classmethod
    def resolve(cls, value):
        """Map 'real'/'fake'/'K' to a decoder index, or None if unparseable"""
        if value == cls.REAL.value:
            return 0
        if value == cls.FAKE.value:
            return 1
        try:
            index = int(value)
        except (TypeError, ValueError):
            return None
        return index if index >= 0 else None


class NormMode(Enum):
    """Batch normalization modes"""
    TRAIN = 'train'
    EVAL = 'eval'


class ScenarioMode(Enum):
    """Deniability walkthrough backends"""
    CLASSIC = 'classic'
    DNN = 'dnn'

    @classmethod
    def all_modes(cls):
        return [mode.value for mode in cls]


class Provenance(Enum):
    """Where a golden value comes from"""
    PAPER = 'PAPER'
    TRIVIAL = 'TRIVIAL'
    DERIVED = 'DERIVED'

    @classmethod
    def all_tags(cls):
        return [tag.value for tag in cls]


class ActionType(Enum):
    """Types of toolkit events for audit logging"""
    TRAINING_STARTED = 'TRAINING_STARTED'
    EPOCH_COMPLETED = 'EPOCH_COMPLETED'
    CHECKPOINT_SAVED = 'CHECKPOINT_SAVED'
    MODEL_LOADED = 'MODEL_LOADED'
    STEGO_EMBEDDED = 'STEGO_EMBEDDED'
    MESSAGE_EXTRACTED = 'MESSAGE_EXTRACTED'
    KEY_FORGED = 'KEY_FORGED'
    EVALUATION_COMPLETED = 'EVALUATION_COMPLETED'
    SCENARIO_COMPLETED = 'SCENARIO_COMPLETED'
    CORPUS_GENERATED = 'CORPUS_GENERATED'

    @classmethod
    def all_actions(cls):
        """Get list of all valid actions as strings"""
        return [action.value for action in cls]
