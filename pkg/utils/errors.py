"""
Centralized error handling module for the steganography toolkit.
Provides standardized errors with error codes, messages, and process exit statuses.
"""

from utils.error_catalog import get_error_details


class StegoError(Exception):
    """Base exception class for toolkit errors"""
    def __init__(self, message, error_code, exit_status=1):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.exit_status = exit_status

    def to_dict(self):
        """Convert error to standardized JSON diagnostic"""
        return {
            'error_code': self.error_code,
            'message': self.message,
            'status': self.exit_status
        }

    @staticmethod
    def from_code(error_code, detail=None):
        """
        Build the matching error subclass from the error catalog.

        Args:
            error_code (str): Catalog code (e.g., 'CLS_001')
            detail (str, optional): Context appended to the catalog message

        Returns:
            StegoError: Instance of the subclass registered for the code's status
        """
        details = get_error_details(error_code)
        message = details['message'] if not detail else f"{details['message']}: {detail}"
        error_class = _STATUS_CLASSES.get(details['status'], StegoError)
        if error_class is StegoError:
            return StegoError(message, error_code, details['status'])
        return error_class(message, error_code)


class BadInput(StegoError):
    """2 - Invalid input or violated precondition"""
    def __init__(self, message, error_code='bad_input'):
        super().__init__(message, error_code, 2)


class NotFoundError(StegoError):
    """3 - File or directory does not exist"""
    def __init__(self, message, error_code='not_found'):
        super().__init__(message, error_code, 3)


class CapacityError(StegoError):
    """4 - Cover cannot carry the requested payload"""
    def __init__(self, message, error_code='capacity_exceeded'):
        super().__init__(message, error_code, 4)


class FormatError(StegoError):
    """5 - Malformed file"""
    def __init__(self, message, error_code='bad_format'):
        super().__init__(message, error_code, 5)


class NumericalError(StegoError):
    """6 - Non-finite values in a computation"""
    def __init__(self, message, error_code='non_finite'):
        super().__init__(message, error_code, 6)


class ScenarioFailure(StegoError):
    """7 - Deniability scenario did not verify"""
    def __init__(self, message, error_code='scenario_failed'):
        super().__init__(message, error_code, 7)


class ValidationError(StegoError):
    """2 - Validation failed with field-level details"""
    def __init__(self, message, error_code='validation_error', fields=None):
        super().__init__(message, error_code, 2)
        self.fields = fields or {}

    def to_dict(self):
        """Convert validation error to standardized JSON diagnostic with field details"""
        response = {
            'error_code': self.error_code,
            'message': self.message,
            'status': self.exit_status
        }
        if self.fields:
            response['field_errors'] = self.fields
        return response


class InternalError(StegoError):
    """1 - Unexpected error"""
    def __init__(self, message, error_code='internal_error'):
        super().__init__(message, error_code, 1)


_STATUS_CLASSES = {
    1: InternalError,
    2: BadInput,
    3: NotFoundError,
    4: CapacityError,
    5: FormatError,
    6: NumericalError,
    7: ScenarioFailure,
}
