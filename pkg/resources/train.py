import json
import logging
from dataclasses import replace

from config import run_config
from decorators.decorators import handle_errors, model_required
from utils.experiments import balance_ablation, scaled_weights, sigmoid_ablation
from utils.imaging import list_dataset
from utils.training import evaluate, train
from utils.validation import validate_integer_field, validate_path_exists, validate_seed_field

logger = logging.getLogger(__name__)

# CLI flag -> flat TrainConfig key
TRAINING_FLAGS = {
    'decoders': 'decoders',
    'bits': 'bits',
    'epochs': 'epochs',
    'batch': 'batch_size',
    'lambda_i': 'lambda_i',
    'lambda_m_outer': 'lambda_m_outer',
    'lambda_a': 'lambda_a',
    'lambda_m': 'lambda_m',
    'lambda_b': 'lambda_b',
    'lr': 'lr',
    'checkpoint_interval': 'checkpoint_interval',
    'decoder_sigmoid': 'decoder_sigmoid',
}


def add_training_arguments(parser):
    parser.add_argument('--config', help='RunConfig file (key = value lines); flags win')
    parser.add_argument('--decoders', type=int, help='Number of decoders N')
    parser.add_argument('--bits', type=int, help='Bits per message t')
    parser.add_argument('--image-size', type=int, help='Square cover size in pixels')
    parser.add_argument('--epochs', type=int)
    parser.add_argument('--batch', type=int, help='Batch size (>= 2)')
    parser.add_argument('--lambda-i', type=float, help='Image loss weight')
    parser.add_argument('--lambda-m-outer', type=float, help='Weight of the balanced message loss')
    parser.add_argument('--lambda-a', type=float, help='Adversarial loss weight')
    parser.add_argument('--lambda-m', type=float, help='Weight of the summed message losses')
    parser.add_argument('--lambda-b', type=float, help='Balance loss weight')
    parser.add_argument('--lr', type=float, help='Adam learning rate')
    parser.add_argument('--checkpoint-interval', type=int)
    parser.add_argument('--no-decoder-sigmoid', dest='decoder_sigmoid', action='store_const', const=False,
                        default=None, help='Use the raw linear output as soft bits')
    parser.add_argument('--scaled-weights', action='store_true',
                        help='Use lambda_m = 2/N and lambda_b = 1/C(N,2)')
    parser.add_argument('--seed', default=None, help='64-bit seed, decimal or 0x-hex')


def config_from_args(args, **paths):
    """TrainConfig from defaults, an optional RunConfig file and CLI flags."""
    overrides = {key: getattr(args, flag) for flag, key in TRAINING_FLAGS.items()}
    if args.image_size is not None:
        overrides['image_height'] = overrides['image_width'] = args.image_size
    if args.seed is not None:
        overrides['seed'] = validate_seed_field(args.seed)
    overrides.update(paths)
    if args.config:
        config = run_config.load(args.config, overrides)
    else:
        config = run_config.parse('', overrides)
    if args.scaled_weights:
        config = replace(config, weights=scaled_weights(config.decoders, config.weights))
    return config


@handle_errors
def train_command(args):
    config = config_from_args(args, train_dir=args.data, val_dir=args.val,
                              out=args.out, history=args.history)
    dataset = list_dataset(validate_path_exists(config.train_dir, 'data', directory=True), config.image_size)
    val_dataset = list_dataset(config.val_dir, config.image_size) if config.val_dir else None
    logger.info("Training on %d images from %s", len(dataset), config.train_dir)
    _, history = train(config, dataset, val_dataset)
    print(json.dumps(history[-1]))
    return 0


@handle_errors
@model_required
def evaluate_command(args, model):
    dataset = list_dataset(validate_path_exists(args.data, 'data', directory=True), model.image_size)
    report = evaluate(model, dataset, validate_seed_field(args.seed))
    print(json.dumps(report.as_dict()))
    return 0


def _seed_list(text):
    seeds = [validate_seed_field(s.strip()) for s in text.split(',') if s.strip()]
    validate_integer_field(len(seeds), 'seeds', min_value=1)
    return seeds


@handle_errors
def ablate_balance_command(args):
    config = config_from_args(args, train_dir=args.data, val_dir=args.val)
    seeds = _seed_list(args.seeds)
    dataset = list_dataset(validate_path_exists(config.train_dir, 'data', directory=True), config.image_size)
    val_dataset = list_dataset(config.val_dir, config.image_size)
    print(json.dumps(balance_ablation(config, dataset, val_dataset, seeds)))
    return 0


@handle_errors
def ablate_sigmoid_command(args):
    config = config_from_args(args, train_dir=args.data, val_dir=args.val)
    seeds = _seed_list(args.seeds)
    dataset = list_dataset(validate_path_exists(config.train_dir, 'data', directory=True), config.image_size)
    val_dataset = list_dataset(config.val_dir, config.image_size)
    print(json.dumps(sigmoid_ablation(config, dataset, val_dataset, seeds)))
    return 0


def register(subparsers):
    parser = subparsers.add_parser('train', help='Train encoder, decoders and adversary')
    parser.add_argument('--data', required=True, help='Training image directory')
    parser.add_argument('--val', help='Validation image directory, evaluated at checkpoints')
    parser.add_argument('--out', required=True, help='Model file to write')
    parser.add_argument('--history', help='JSON-lines history (default <out>.history.jsonl)')
    add_training_arguments(parser)
    parser.set_defaults(handler=train_command)

    parser = subparsers.add_parser('evaluate', help='Bit errors, PSNR and SSIM on a dataset')
    parser.add_argument('--model', required=True)
    parser.add_argument('--data', required=True)
    parser.add_argument('--seed', default='0')
    parser.set_defaults(handler=evaluate_command)

    parser = subparsers.add_parser('ablate-balance', help='Compare lambda_b against lambda_b = 0')
    parser.add_argument('--data', required=True)
    parser.add_argument('--val', required=True)
    parser.add_argument('--seeds', default='1,2,3', help='Comma-separated seeds')
    add_training_arguments(parser)
    parser.set_defaults(handler=ablate_balance_command)

    parser = subparsers.add_parser('ablate-sigmoid', help='Compare decoders with and without the sigmoid')
    parser.add_argument('--data', required=True)
    parser.add_argument('--val', required=True)
    parser.add_argument('--seeds', default='1,2,3', help='Comma-separated seeds')
    add_training_arguments(parser)
    parser.set_defaults(handler=ablate_sigmoid_command)
