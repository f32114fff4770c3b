import json
import logging
import sys
from functools import wraps

from utils.errors import StegoError

logger = logging.getLogger(__name__)


def handle_errors(fn):
    """Turn toolkit errors into a JSON diagnostic on stderr and an exit status."""
    @wraps(fn)
    def wrapper(args, *extra, **kwargs):
        try:
            status = fn(args, *extra, **kwargs)
            return 0 if status is None else status
        except StegoError as e:
            logger.error("%s failed: %s (%s)", fn.__name__, e.message, e.error_code)
            print(json.dumps(e.to_dict()), file=sys.stderr)
            return e.exit_status
        except Exception as e:
            logger.exception("Unexpected error in %s", fn.__name__)
            error = StegoError.from_code('SRV_001', str(e))
            print(json.dumps(error.to_dict()), file=sys.stderr)
            return error.exit_status
    return wrapper


def model_required(fn):
    """Load args.model into the `model` keyword argument before running the command."""
    @wraps(fn)
    def wrapper(args, *extra, **kwargs):
        from models.model_file import load_model
        from utils.audit_logging import log_model_loaded

        model = load_model(args.model)
        model.eval()
        log_model_loaded(args.model, model.n_decoders, model.bits)
        return fn(args, *extra, model=model, **kwargs)
    return wrapper
