"""
Error hierarchy shared by the services and the command line
"""


class TauberError(Exception):
    """Base error; exit_code is what the CLI returns for it"""

    exit_code: int = 1

    def __init__(self, message: str, **context):
        self.message = message
        self.context = context
        super().__init__(message)

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{k}={v!r}" for k, v in sorted(self.context.items()))
        return f"{self.message} ({details})"


class ArgumentError(TauberError, ValueError):
    """Argument out of range or inconsistent with other arguments"""
    exit_code = 2


class DomainError(TauberError, ValueError):
    """Input outside the mathematical domain of the operation"""
    exit_code = 2


class SpecValidationError(TauberError, ValueError):
    """Input data violates its declared bounds"""
    exit_code = 2


class PreconditionError(TauberError, ValueError):
    """A theorem hypothesis required by contract does not hold"""
    exit_code = 2


class ResourceError(TauberError, RuntimeError):
    """Enumeration guard exceeded"""
    exit_code = 3


class SeriesOverflowError(TauberError, ArithmeticError):
    """A computation produced non-finite coefficients"""
    exit_code = 4
