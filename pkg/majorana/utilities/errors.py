# majorana/utilities/errors.py

from typing import Any, List, Optional

# Process exit statuses
EXIT_OK: int = 0
EXIT_VALIDATION: int = 1
EXIT_COMPUTATION: int = 2
EXIT_IO: int = 3


class MajoranaError(Exception):
    """Base class for every error raised by the package."""


class DomainError(MajoranaError, ValueError):
    """An argument lies outside the domain of a formula."""


class DispatchError(DomainError):
    """A rate formula was asked for a spin of the wrong parity."""


class SingularFrameError(DomainError):
    """The adiabatic frame is undefined where the field vanishes."""


class ValidationError(MajoranaError, ValueError):
    """A user supplied input failed a numerical check."""


class ConfigurationError(MajoranaError, ValueError):
    """A trap file or run configuration is invalid.

    Args:
        key: offending config key
        constraint: the rule that was broken
    """

    def __init__(self, key: str, constraint: str):
        self.key = key
        self.constraint = constraint
        super().__init__(f"{key}: {constraint}")


class OracleFailure(MajoranaError):
    """A brute-force oracle did not converge.

    Args:
        message: what failed
        trace: partial results gathered before giving up
    """

    def __init__(self, message: str, trace: Optional[List[Any]] = None):
        self.trace: List[Any] = list(trace) if trace is not None else []
        super().__init__(message)


def exit_status(error: BaseException) -> int:
    """
    Map an exception onto the documented process exit status.

    Args:
        error: exception that stopped a command

    Returns:
        int: exit status
    """
    if isinstance(error, (ConfigurationError, ValidationError)):
        return EXIT_VALIDATION
    if isinstance(error, (DomainError, OracleFailure)):
        return EXIT_COMPUTATION
    if isinstance(error, OSError):
        return EXIT_IO
    return EXIT_COMPUTATION
