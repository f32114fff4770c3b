"""
RunConfig files: one `key = value` per line mirroring TrainConfig.

Blank lines and lines starting with '#' are ignored; unknown keys are rejected.
"""

from utils.errors import StegoError
from utils.schemas import TrainConfigSchema, config_to_flat, load_train_config

KNOWN_KEYS = tuple(TrainConfigSchema().fields)


def parse_pairs(text):
    """Raw key/value strings of a RunConfig, in file order."""
    pairs = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise StegoError.from_code('VAL_002', f'line {number}: {raw!r}')
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in KNOWN_KEYS:
            raise StegoError.from_code('VAL_003', f'line {number}: {key}')
        pairs[key] = value
    return pairs


def parse(text, overrides=None):
    """
    Build a validated TrainConfig from RunConfig text.

    Args:
        text (str): RunConfig contents
        overrides (dict, optional): Flat values that win over the file (CLI flags)

    Returns:
        TrainConfig
    """
    pairs = parse_pairs(text)
    if overrides:
        pairs.update({k: v for k, v in overrides.items() if v is not None})
    return load_train_config(pairs)


def render(config):
    """TrainConfig to RunConfig text; floats use repr so parse(render(c)) == c."""
    lines = ['# deniable steganography run configuration']
    for key, value in config_to_flat(config).items():
        lines.append(f'{key} = {value!r}' if isinstance(value, float) else f'{key} = {value}')
    return '\n'.join(lines) + '\n'


def load(path, overrides=None):
    try:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    except FileNotFoundError:
        raise StegoError.from_code('FILE_006', path)
    return parse(text, overrides)


def save(path, config):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(render(config))
