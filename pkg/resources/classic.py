from decorators.decorators import handle_errors
from utils import audit_logging, imaging
from utils.bitmsg import to_hex
from utils.classic import (
    DeniableKey, DeniableKeyPair, classic_embed, classic_extract, forge_key, read_ciphertext
)
from utils.enums import DecoderRole
from utils.validation import (
    validate_choice_field, validate_hex_field, validate_integer_field, validate_seed_field
)


def _bits(args, hex_text):
    if args.bits is not None:
        return validate_integer_field(args.bits, 'bits', min_value=1)
    return 4 * len(hex_text.strip())


@handle_errors
def classic_embed_command(args):
    bits = _bits(args, args.real)
    keys = DeniableKeyPair(
        real=DeniableKey(validate_seed_field(args.seed_real, 'seed-real'),
                         validate_hex_field(args.pad_real, 'pad-real', bits)),
        fake=DeniableKey(validate_seed_field(args.seed_fake, 'seed-fake'),
                         validate_hex_field(args.pad_fake, 'pad-fake', bits)),
    )
    real = validate_hex_field(args.real, 'real', bits)
    fake = validate_hex_field(args.fake, 'fake', bits)
    cover = imaging.load_image(args.cover)
    imaging.save_image(args.out, classic_embed(cover, real, fake, keys))
    audit_logging.log_stego_embedded(args.out, 'classic', 2)
    return 0


@handle_errors
def classic_extract_command(args):
    which = validate_choice_field(args.which, DecoderRole.all_roles(), 'which')
    bits = validate_integer_field(args.bits, 'bits', min_value=1)
    seed_real = validate_seed_field(args.seed_real, 'seed-real')
    seed_fake = validate_seed_field(args.seed_fake, 'seed-fake')
    own, other = (seed_real, seed_fake) if which == DecoderRole.REAL.value else (seed_fake, seed_real)
    key = DeniableKey(own, validate_hex_field(args.pad, 'pad', bits))
    stego = imaging.load_image(args.stego)
    print(to_hex(classic_extract(stego, key, which, bits, other)))
    audit_logging.log_message_extracted(args.stego, 'classic', which)
    return 0


@handle_errors
def forge_key_command(args):
    """Pad that opens the chosen slot range as the supplied fake message."""
    which = validate_choice_field(args.which, DecoderRole.all_roles(), 'which')
    bits = validate_integer_field(args.bits, 'bits', min_value=1)
    seed_real = validate_seed_field(args.seed_real, 'seed-real')
    seed_fake = validate_seed_field(args.seed_fake, 'seed-fake')
    fake = validate_hex_field(args.fake, 'fake', bits)
    stego = imaging.load_image(args.stego)
    ciphertext = read_ciphertext(stego, seed_real ^ seed_fake, which, bits)
    print(to_hex(forge_key(ciphertext, fake)))
    audit_logging.log_key_forged(args.stego, which)
    return 0


def _add_seeds(parser):
    parser.add_argument('--seed-real', required=True, help='Public position seed of the real key')
    parser.add_argument('--seed-fake', required=True, help='Public position seed of the fake key')


def register(subparsers):
    parser = subparsers.add_parser('classic-embed', help='LSB-embed real and fake ciphertexts')
    parser.add_argument('--cover', required=True)
    parser.add_argument('--real', required=True, help='Real message, hex')
    parser.add_argument('--fake', required=True, help='Fake message, hex')
    _add_seeds(parser)
    parser.add_argument('--pad-real', required=True)
    parser.add_argument('--pad-fake', required=True)
    parser.add_argument('--bits', type=int, help='Message length (default: 4 bits per hex digit)')
    parser.add_argument('--out', required=True)
    parser.set_defaults(handler=classic_embed_command)

    parser = subparsers.add_parser('classic-extract', help='Read one slot range and remove its pad')
    parser.add_argument('--stego', required=True)
    parser.add_argument('--which', required=True, choices=DecoderRole.all_roles())
    _add_seeds(parser)
    parser.add_argument('--pad', required=True)
    parser.add_argument('--bits', required=True, type=int)
    parser.set_defaults(handler=classic_extract_command)

    parser = subparsers.add_parser('forge-key', help='Forge a pad that reveals a chosen message')
    parser.add_argument('--stego', required=True)
    parser.add_argument('--which', default='real', choices=DecoderRole.all_roles())
    _add_seeds(parser)
    parser.add_argument('--fake', required=True, help='Message the forged pad must reveal, hex')
    parser.add_argument('--bits', required=True, type=int)
    parser.set_defaults(handler=forge_key_command)
