"""Exception hierarchy shared by the library, the CLI and the MCP tools."""

from typing import Optional


EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class RbfCertifyError(Exception):
    """Base class for every error raised by rbf_certify."""
    exit_code: int = EXIT_NUMERICAL


class InvalidArgumentError(RbfCertifyError, ValueError):
    """Argument has the wrong shape, dimension or kind."""
    exit_code = EXIT_USAGE


class DomainError(RbfCertifyError, ValueError):
    """Argument lies outside the mathematical domain of the operation."""
    exit_code = EXIT_USAGE


class RangeError(RbfCertifyError, ValueError):
    """Integer parameter outside the supported range."""
    exit_code = EXIT_USAGE


class ResourceGuardError(RbfCertifyError):
    """Requested cell or grid count exceeds the memory guard."""
    exit_code = EXIT_USAGE


class CertificateRangeError(RbfCertifyError):
    """Spacing above delta0, where the bound guarantees nothing."""


class IllConditionedError(RbfCertifyError):
    """Kernel system could not be solved to the residual contract."""

    def __init__(self, message: str, condition_estimate: Optional[float] = None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class ConvergenceError(RbfCertifyError):
    """Adaptive quadrature did not reach the requested tolerance."""


class OverflowGuardError(RbfCertifyError):
    """Requested value is not representable as a native float."""


class DegenerateTrialError(RbfCertifyError):
    """Random polynomial vanished on every sample point."""


class ParseError(RbfCertifyError, ValueError):
    """Malformed CSV or JSON input."""
    exit_code = EXIT_USAGE

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
