"""
Input validation utilities for the command-line surface.
Provides validation functions for numbers, seeds, hex messages, choices and paths.
"""

import os

from utils.bitmsg import parse_hex
from utils.enums import DecoderRole
from utils.errors import BadInput, StegoError

MAX_SEED = (1 << 64) - 1


def validate_integer_field(value, field_name, min_value=None, max_value=None):
    """
    Validate an integer field.

    Args:
        value: The value to validate
        field_name (str): Name of the field (for error messages)
        min_value (int): Minimum allowed value
        max_value (int): Maximum allowed value

    Returns:
        int: The validated integer

    Raises:
        BadInput: If validation fails
    """
    try:
        int_value = int(value)
    except (TypeError, ValueError):
        raise BadInput(f'{field_name} must be an integer', 'VAL_002')

    if min_value is not None and int_value < min_value:
        raise BadInput(f'{field_name} must be at least {min_value}', 'VAL_002')

    if max_value is not None and int_value > max_value:
        raise BadInput(f'{field_name} must be at most {max_value}', 'VAL_002')

    return int_value


def validate_seed_field(value, field_name='seed'):
    """64-bit unsigned seed, decimal or 0x-prefixed hex."""
    if isinstance(value, int):
        int_value = value
    else:
        try:
            int_value = int(str(value), 0)
        except ValueError:
            raise BadInput(f'{field_name} must be a decimal or 0x-prefixed integer', 'VAL_002')
    if not 0 <= int_value <= MAX_SEED:
        raise BadInput(f'{field_name} must fit in 64 unsigned bits', 'VAL_002')
    return int_value


def validate_float_field(value, field_name, min_value=None, max_value=None):
    """
    Validate a float field.

    Raises:
        BadInput: If validation fails
    """
    try:
        float_value = float(value)
    except (TypeError, ValueError):
        raise BadInput(f'{field_name} must be a number', 'VAL_002')

    if min_value is not None and float_value < min_value:
        raise BadInput(f'{field_name} must be at least {min_value}', 'VAL_002')

    if max_value is not None and float_value > max_value:
        raise BadInput(f'{field_name} must be at most {max_value}', 'VAL_002')

    return float_value


def validate_hex_field(value, field_name, nbits):
    """Hex message of nbits bits; codec errors keep their MSG_* codes."""
    if not isinstance(value, str):
        raise BadInput(f'{field_name} must be a hex string', 'VAL_002')
    try:
        return parse_hex(value.strip(), nbits)
    except StegoError as e:
        raise type(e)(f'{field_name}: {e.message}', e.error_code)


def validate_hex_list(value, field_name, nbits, count):
    """Comma-separated hex messages, exactly count of them."""
    parts = [part for part in value.split(',')] if isinstance(value, str) else []
    if len(parts) != count:
        raise StegoError.from_code('NET_001', f'{field_name}: {len(parts)} messages for {count} decoders')
    return [validate_hex_field(part, f'{field_name}[{i}]', nbits) for i, part in enumerate(parts)]


def validate_choice_field(value, choices, field_name):
    """
    Validate that a value is one of the allowed choices.

    Raises:
        BadInput: If the value is not allowed
    """
    if value not in choices:
        raise BadInput(f'{field_name} must be one of: {", ".join(choices)}', 'VAL_002')
    return value


def validate_decoder_field(value, n_decoders, field_name='decoder'):
    """'real', 'fake' or a numeric index below n_decoders."""
    index = DecoderRole.resolve(value)
    if index is None:
        raise BadInput(
            f'{field_name} must be {", ".join(DecoderRole.all_roles())} or an index', 'VAL_002'
        )
    if index >= n_decoders:
        raise StegoError.from_code('NET_002', f'{value} with {n_decoders} decoders')
    return index


def validate_path_exists(path, field_name, directory=False):
    """
    Validate that a file (or directory) exists.

    Raises:
        StegoError: IMG_001 when missing
    """
    exists = os.path.isdir(path) if directory else os.path.isfile(path)
    if not exists:
        raise StegoError.from_code('IMG_001', f'{field_name}: {path}')
    return path
