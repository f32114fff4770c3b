import logging

import torch

from decorators.decorators import handle_errors, model_required
from models.networks import decode, encode, harden
from utils import audit_logging, imaging
from utils.bitmsg import to_hex
from utils.validation import validate_decoder_field, validate_hex_list

logger = logging.getLogger(__name__)


@handle_errors
@model_required
def embed_command(args, model):
    """Hide one message per decoder in a cover and write the 8-bit stego."""
    messages = validate_hex_list(args.msg, 'msg', model.bits, model.n_decoders)
    cover = imaging.load_image(args.cover, model.image_size)
    with torch.no_grad():
        stego = encode(model, imaging.to_tensor(cover), messages)
    imaging.save_image(args.out, imaging.from_tensor(stego))
    audit_logging.log_stego_embedded(args.out, 'dnn', len(messages))
    return 0


@handle_errors
@model_required
def extract_command(args, model):
    """Print the hardened output of one decoder as hex."""
    which = validate_decoder_field(args.decoder, model.n_decoders)
    stego = imaging.load_image(args.stego)
    with torch.no_grad():
        soft = decode(model, which, imaging.to_tensor(stego))
    print(to_hex(harden(soft)))
    audit_logging.log_message_extracted(args.stego, 'dnn', args.decoder)
    return 0


def register(subparsers):
    parser = subparsers.add_parser('embed', help='Embed messages with a trained encoder')
    parser.add_argument('--model', required=True)
    parser.add_argument('--cover', required=True)
    parser.add_argument('--msg', required=True, help='HEX[,HEX...], one per decoder in index order')
    parser.add_argument('--out', required=True)
    parser.set_defaults(handler=embed_command)

    parser = subparsers.add_parser('extract', help='Extract one message with a trained decoder')
    parser.add_argument('--model', required=True)
    parser.add_argument('--stego', required=True)
    parser.add_argument('--decoder', default='real', help='real, fake or a decoder index')
    parser.set_defaults(handler=extract_command)
