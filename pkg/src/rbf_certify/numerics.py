"""Extended-range signed scalars and the special functions built on them.

Every constant of the certificate is carried as a ``LogScalar``: a sign and
the natural logarithm of the magnitude. Products, powers and comparisons
never leave the log domain, so values such as e^{2n*gamma_n} stay
comparable long after a native float would overflow.
"""

import functools
import math
from dataclasses import dataclass
from numbers import Integral, Real

from scipy.special import gammaln

from .errors import DomainError, InvalidArgumentError, RangeError


# Opposite-sign operands closer than this in log magnitude cancel to zero.
CANCELLATION_THRESHOLD = 1e-15

# ln k! is computed from the exact integer below this, from log-Gamma above.
EXACT_FACTORIAL_LIMIT = 256

LN10 = math.log(10.0)


@functools.total_ordering
@dataclass(frozen=True)
class LogScalar:
    """Signed real number stored as (sign, ln|x|).

    ``sign`` is -1, 0 or +1. For zero the magnitude is normalized to -inf so
    that equal values compare equal field by field.
    """
    sign: int
    logmag: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise InvalidArgumentError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "logmag", -math.inf)
        elif math.isnan(self.logmag) or self.logmag == math.inf:
            raise InvalidArgumentError(f"log magnitude must be finite, got {self.logmag}")
        elif self.logmag == -math.inf:
            object.__setattr__(self, "sign", 0)

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(0)

    @classmethod
    def one(cls) -> "LogScalar":
        return cls(1, 0.0)

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> "LogScalar":
        """Build a value directly from its natural-log magnitude."""
        return cls(sign, float(logmag))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def log10(self) -> float:
        """log10 of the magnitude (-inf for zero)."""
        return self.logmag / LN10

    def to_real(self) -> float:
        return to_real(self)

    def render(self, digits: int = 17) -> str:
        """Decimal mantissa-exponent rendering, e.g. ``1.1227e+05``."""
        if self.sign == 0:
            return "0"
        exponent = math.floor(self.log10)
        mantissa = 10.0 ** (self.log10 - exponent)
        # round-off can push the mantissa to 10
        if mantissa >= 10.0:
            mantissa /= 10.0
            exponent += 1
        return f"{self.sign * mantissa:.{digits}g}e{exponent:+03d}"

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __neg__(self):
        return neg(self)

    def __pow__(self, p):
        return pow_(self, p)

    def __lt__(self, other):
        return cmp(self, _coerce(other)) < 0

    def __eq__(self, other):
        if not isinstance(other, (LogScalar, Real)):
            return NotImplemented
        return cmp(self, _coerce(other)) == 0

    def __hash__(self):
        return hash((self.sign, self.logmag))


def _coerce(value) -> LogScalar:
    if isinstance(value, LogScalar):
        return value
    if isinstance(value, Real):
        return from_real(value)
    raise InvalidArgumentError(f"cannot combine LogScalar with {type(value).__name__}")


def from_real(x) -> LogScalar:
    """Convert a finite real (or an arbitrarily large integer) to a LogScalar."""
    if isinstance(x, Integral) and not isinstance(x, bool):
        x = int(x)
        if x == 0:
            return LogScalar.zero()
        # math.log is exact enough for integers far beyond float range
        return LogScalar(1 if x > 0 else -1, math.log(abs(x)))
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError(f"cannot represent non-finite value {x}")
    if x == 0.0:
        return LogScalar.zero()
    return LogScalar(1 if x > 0 else -1, math.log(abs(x)))


def to_real(a: LogScalar) -> float:
    """Materialize as a float; overflows to +/-inf and underflows to 0."""
    if a.sign == 0:
        return 0.0
    if a.logmag > 709.782712893384:
        return a.sign * math.inf
    return a.sign * math.exp(a.logmag)


def mul(a: LogScalar, b: LogScalar) -> LogScalar:
    if a.sign == 0 or b.sign == 0:
        return LogScalar.zero()
    return LogScalar(a.sign * b.sign, a.logmag + b.logmag)


def div(a: LogScalar, b: LogScalar) -> LogScalar:
    if b.sign == 0:
        raise DomainError("division by zero LogScalar")
    if a.sign == 0:
        return LogScalar.zero()
    return LogScalar(a.sign * b.sign, a.logmag - b.logmag)


def neg(a: LogScalar) -> LogScalar:
    return LogScalar(-a.sign, a.logmag) if a.sign else a


def pow_(a: LogScalar, p: float) -> LogScalar:
    """a**p; a negative base needs an integer exponent."""
    p_int = isinstance(p, Integral) or float(p).is_integer()
    if a.sign == 0:
        if p > 0:
            return LogScalar.zero()
        if p == 0:
            return LogScalar.one()
        raise DomainError(f"zero raised to negative power {p}")
    if a.sign < 0:
        if not p_int:
            raise DomainError(f"negative base raised to non-integer power {p}")
        sign = -1 if int(p) % 2 else 1
    else:
        sign = 1
    return LogScalar(sign, a.logmag * float(p))


def add(a: LogScalar, b: LogScalar) -> LogScalar:
    """Log-sum-exp addition with the larger magnitude factored out."""
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    if b.logmag > a.logmag:
        a, b = b, a
    gap = a.logmag - b.logmag
    if a.sign == b.sign:
        return LogScalar(a.sign, a.logmag + math.log1p(math.exp(-gap)))
    if gap < CANCELLATION_THRESHOLD:
        return LogScalar.zero()
    return LogScalar(a.sign, a.logmag + math.log1p(-math.exp(-gap)))


def cmp(a: LogScalar, b: LogScalar) -> int:
    """Total order consistent with the real values: -1, 0 or +1."""
    if a.sign != b.sign:
        return -1 if a.sign < b.sign else 1
    if a.sign == 0 or a.logmag == b.logmag:
        return 0
    larger = a.logmag > b.logmag
    if a.sign > 0:
        return 1 if larger else -1
    return -1 if larger else 1


def log_factorial(k: int) -> float:
    """ln k!, exact-integer based below 256 and log-Gamma above."""
    if not isinstance(k, Integral) or isinstance(k, bool):
        raise InvalidArgumentError(f"k must be an integer, got {k!r}")
    if k < 0:
        raise RangeError(f"k must be non-negative, got {k}")
    if k < EXACT_FACTORIAL_LIMIT:
        return math.log(math.factorial(int(k)))
    return float(gammaln(int(k) + 1))


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if math.isnan(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return float(gammaln(x))
