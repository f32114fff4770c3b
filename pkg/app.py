import argparse
import logging
import sys

from config.config import Config


def configure_logging(level=None):
    """Log to stderr so stdout stays machine-readable (hex, JSON, transcripts)."""
    logging.basicConfig(
        level=(level or Config.LOG_LEVEL).upper(),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
        force=True,
    )


def create_app():
    """
    Application factory for the command-line parser.

    Every resource module registers its own subcommands.
    """
    parser = argparse.ArgumentParser(
        prog='dstg',
        description='Receiver-deniable image steganography: learned encoder with real and '
                    'fake decoders, plus exact XOR/LSB constructions',
    )
    parser.add_argument('--log-level', default=None, help=f'Default {Config.LOG_LEVEL}')
    subparsers = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')

    from resources.train import register as register_train
    from resources.stego import register as register_stego
    from resources.classic import register as register_classic
    from resources.diagnostics import register as register_diagnostics

    register_train(subparsers)
    register_stego(subparsers)
    register_classic(subparsers)
    register_diagnostics(subparsers)
    return parser


def main(argv=None):
    parser = create_app()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
