import json
import logging

from decorators.decorators import handle_errors
from models.model_file import load_model
from utils import audit_logging
from utils.autodiff import gradient_suite
from utils.corpus import generate_corpus
from utils.enums import ScenarioMode
from utils.errors import StegoError
from utils.imaging import load_image
from utils.scenario import run_scenario
from utils.schemas import grad_check_reports_schema
from utils.validation import validate_float_field, validate_integer_field, validate_seed_field

logger = logging.getLogger(__name__)


@handle_errors
def gradcheck_command(args):
    """Exit 1 unless every check ends as expected (the broken-adjoint control must fail)."""
    tolerance = validate_float_field(args.tolerance, 'tolerance', min_value=0)
    reports = gradient_suite(tolerance=tolerance, seed=validate_seed_field(args.seed))
    passed = all(report.verified for report in reports)
    rows = [dict(vars(report), verified=report.verified) for report in reports]
    print(json.dumps({'passed': passed, 'tolerance': tolerance,
                      'reports': grad_check_reports_schema.dump(rows)}, indent=2))
    for report in reports:
        if not report.verified:
            logger.error("Gradient check %s: max relative error %.3e (tolerance %.1e)",
                         report.op, report.max_relative_error, report.tolerance)
    return 0 if passed else 1


@handle_errors
def scenario_command(args):
    seed = validate_seed_field(args.seed)
    model = None
    if args.mode == ScenarioMode.DNN.value:
        if not args.model:
            raise StegoError.from_code('VAL_002', '--model is required for --mode dnn')
        model = load_model(args.model)
        audit_logging.log_model_loaded(args.model, model.n_decoders, model.bits)
    cover = load_image(args.cover, model.image_size if model else None) if args.cover else None
    transcript = run_scenario(args.mode, seed=seed, model=model, cover=cover, bits=args.bits)
    print(transcript.render(), end='')
    if not transcript.passed:
        raise StegoError.from_code('TRN_003', f'{args.mode} walkthrough')
    return 0


@handle_errors
def generate_corpus_command(args):
    count = validate_integer_field(args.count, 'count', min_value=1)
    size = validate_integer_field(args.size, 'size', min_value=1)
    paths = generate_corpus(args.out, count, size, validate_seed_field(args.seed))
    print(json.dumps({'out': args.out, 'count': len(paths), 'size': size}))
    return 0


def register(subparsers):
    parser = subparsers.add_parser('gradcheck', help='Finite-difference check of every primitive')
    parser.add_argument('--tolerance', default=1e-4, type=float)
    parser.add_argument('--seed', default='0')
    parser.set_defaults(handler=gradcheck_command)

    parser = subparsers.add_parser('scenario', help='Coercion walkthrough, real and fake extraction')
    parser.add_argument('--mode', required=True, choices=ScenarioMode.all_modes())
    parser.add_argument('--model', help='Trained model file (dnn mode)')
    parser.add_argument('--cover', help='Cover image (default: procedural texture)')
    parser.add_argument('--bits', type=int, help='Message length for classic mode')
    parser.add_argument('--seed', default='0')
    parser.set_defaults(handler=scenario_command)

    parser = subparsers.add_parser('generate-corpus', help='Write procedural cover textures')
    parser.add_argument('--out', required=True)
    parser.add_argument('--count', default=500, type=int)
    parser.add_argument('--size', default=32, type=int)
    parser.add_argument('--seed', default='0')
    parser.set_defaults(handler=generate_corpus_command)
