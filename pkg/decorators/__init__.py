from decorators.decorators import handle_errors, model_required

__all__ = ['handle_errors', 'model_required']
