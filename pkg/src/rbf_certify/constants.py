"""Certificate constants for the high-level Gaussian error bound.

The bound reads

    |f(x) - s(x)| <= Delta'' * (C * delta)^(c / delta) * ||f||_h

for every x in a cube E of side b >= b0, whenever every subcube of E of
side delta <= delta0 holds an interpolation node. All large quantities are
LogScalars; ``C`` for n >= 3 is far outside float range.
"""

import enum
import logging
import math
from dataclasses import dataclass
from numbers import Integral
from typing import Optional

from .errors import CertificateRangeError, DomainError, InvalidArgumentError, RangeError
from .moments import RHO, TWO_PLUS_INV_E, c_k_coefficient, log_unit_ball_volume
from .numerics import LogScalar, from_real, log_factorial

logger = logging.getLogger(__name__)

RHO1 = 1.0 / math.e
RHO2 = 3.0 ** (1.0 / 6.0) / math.e
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

GAMMA_MAX_N = 20

# ln delta0 at or below this underflows when materialized as a float.
UNDERFLOW_LOG = math.log(5e-324)

# Slack on ln(delta) - ln(delta0) so that delta0 itself is admissible after
# the exp/log round trip.
ADMISSIBLE_LOG_SLACK = 1e-12

# Small arguments at which the Stirling-type bounds fail as stated.
SANDWICH_UPPER_EXCEPTIONS = frozenset({2, 3})
FACTORIAL_BOUND_EXCEPTIONS = frozenset({3})


class Variant(str, enum.Enum):
    GENERAL = "general"
    N1_IMPROVED = "n1_improved"
    FILL_DISTANCE = "fill_distance"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).replace("-", "_").lower())
        except ValueError:
            choices = ", ".join(v.value for v in cls)
            raise InvalidArgumentError(f"unknown variant {value!r}; expected one of {choices}") from None


@dataclass(frozen=True)
class StirlingReport:
    """k! against the Stirling-type sandwich and bound."""
    k: int
    lower: LogScalar
    exact: LogScalar
    upper_l3: LogScalar
    upper_l4: LogScalar
    stirling: LogScalar

    @property
    def lower_holds(self) -> bool:
        return self.lower <= self.exact

    @property
    def upper_l3_holds(self) -> bool:
        return self.exact <= self.upper_l3

    @property
    def upper_l4_holds(self) -> bool:
        return self.exact <= self.upper_l4

    @property
    def stirling_rel_error(self) -> float:
        """Relative error of sqrt(2 pi k)(k/e)^k against k!."""
        return -math.expm1(self.stirling.logmag - self.exact.logmag)


@dataclass(frozen=True)
class Certificate:
    """Full constant set of one certified error bound."""
    n: int
    beta: float
    b0: float
    gamma_n: int
    delta0: float
    log_delta0: float
    c_exp: float
    C_base: LogScalar
    delta_pp: LogScalar
    variant: Variant
    rho3: LogScalar
    b_prime: LogScalar
    b_double_prime: LogScalar
    delta_n: float
    parent: Optional["Certificate"] = None

    @property
    def delta0_underflow(self) -> bool:
        """delta0 is positive but not representable as a float."""
        return self.delta0 == 0.0


def gamma_n(n: int) -> int:
    """gamma_1 = 2, gamma_n = 2n(1 + gamma_{n-1}), exact."""
    if not isinstance(n, Integral) or isinstance(n, bool) or not 1 <= n <= GAMMA_MAX_N:
        raise RangeError(f"gamma_n is supported for 1 <= n <= {GAMMA_MAX_N}, got {n!r}")
    value = 2
    for m in range(2, n + 1):
        value = 2 * m * (1 + value)
    return value


def stirling_report(k: int) -> StirlingReport:
    """sqrt(2pi) rho1^k k^k <= k! <= sqrt(2pi) rho2^k k^k and k! <= sqrt(2pi) rho^k k^{k-1}."""
    if not isinstance(k, Integral) or isinstance(k, bool) or k < 1:
        raise RangeError(f"the Stirling bounds are stated for positive integers, got {k!r}")
    k = int(k)
    log_k = math.log(k)
    return StirlingReport(
        k=k,
        lower=LogScalar.from_log(LOG_SQRT_2PI + k * math.log(RHO1) + k * log_k),
        exact=LogScalar.from_log(log_factorial(k)),
        upper_l3=LogScalar.from_log(LOG_SQRT_2PI + k * math.log(RHO2) + k * log_k),
        upper_l4=LogScalar.from_log(LOG_SQRT_2PI + k * math.log(RHO) + (k - 1) * log_k),
        stirling=LogScalar.from_log(LOG_SQRT_2PI + 0.5 * log_k + k * (log_k - 1.0)),
    )


def delta_n(n: int, b0: float) -> float:
    """Spacing cap: b0/(2 gamma_n) scaled by (n-1) for odd n > 1, (n-2) for even n > 2."""
    b0 = _check_positive("b0", b0)
    g = gamma_n(n)
    if n <= 2:
        return b0 / (2 * g)
    factor = n - 1 if n % 2 else n - 2
    return b0 / (2 * g * factor)


def rho3(beta: float) -> LogScalar:
    """rho3 = sqrt(2 rho beta) / rho1."""
    beta = _check_positive("beta", beta)
    return LogScalar.from_log(0.5 * math.log(2.0 * RHO * beta) - math.log(RHO1))


def delta_double_prime(n: int) -> LogScalar:
    """Prefactor Delta'' of the bound, by parity of n."""
    if not isinstance(n, Integral) or isinstance(n, bool) or n < 1:
        raise RangeError(f"dimension n must be a positive integer, got {n!r}")
    logmag = 0.25 * (n - 1) * math.log(math.pi) + 0.5 * (math.log(n) + log_unit_ball_volume(n))
    if n % 2:
        logmag += 0.5 * math.log(TWO_PLUS_INV_E) + 0.25 * n * math.log(2.0) + 0.25 * (n - 1) * math.log(RHO)
    else:
        logmag += 0.25 * (n + 1) * math.log(2.0) + 0.25 * (n - 2) * math.log(RHO)
    return LogScalar.from_log(logmag)


def certificate(n: int, beta: float, b0: float, variant=Variant.GENERAL,
                base_variant=Variant.GENERAL) -> Certificate:
    """Constants of the general bound or of the sharper n = 1 bound.

    The fill_distance variant is derived from ``base_variant``.

    general:     B'' = 3^{3/4} B',  C = B''^4 b0^3 gamma_n,  c = b0/(8 gamma_n)
    n1_improved: B'' = sqrt(2) B',  C = B''^2 gamma_n b0,    c = b0/(4 gamma_n)
    In both cases B' = rho3 sqrt(n) e^{2 n gamma_n} and delta0 = min(1/C, delta_n).
    """
    variant = Variant.parse(variant)
    beta = _check_positive("beta", beta)
    b0 = _check_positive("b0", b0)
    if variant is Variant.FILL_DISTANCE:
        base = Variant.parse(base_variant)
        if base is Variant.FILL_DISTANCE:
            raise InvalidArgumentError("the fill_distance variant needs a general or n1_improved base")
        return corollary_certificate(certificate(n, beta, b0, base))
    g = gamma_n(n)
    n = int(n)
    if variant is Variant.N1_IMPROVED and n != 1:
        raise InvalidArgumentError(f"the n1_improved variant requires n = 1, got n = {n}")

    r3 = rho3(beta)
    b_prime = LogScalar.from_log(r3.logmag + 0.5 * math.log(n) + 2.0 * n * g)
    log_g = math.log(g)
    if variant is Variant.GENERAL:
        b_pp = LogScalar.from_log(0.75 * math.log(3.0) + b_prime.logmag)
        log_c_base = 4.0 * b_pp.logmag + 3.0 * math.log(b0) + log_g
        c_exp = b0 / (8 * g)
    else:
        b_pp = LogScalar.from_log(0.5 * math.log(2.0) + b_prime.logmag)
        log_c_base = 2.0 * b_pp.logmag + log_g + math.log(b0)
        c_exp = b0 / (4 * g)

    spacing_cap = delta_n(n, b0)
    log_delta0 = min(-log_c_base, math.log(spacing_cap))
    delta0 = math.exp(log_delta0)
    if delta0 == 0.0:
        logger.warning(f"delta0 = e^{log_delta0:.1f} underflows for n={n}; every delta is out of certificate")

    return Certificate(
        n=n,
        beta=beta,
        b0=b0,
        gamma_n=g,
        delta0=delta0,
        log_delta0=log_delta0,
        c_exp=c_exp,
        C_base=LogScalar.from_log(log_c_base),
        delta_pp=delta_double_prime(n),
        variant=variant,
        rho3=r3,
        b_prime=b_prime,
        b_double_prime=b_pp,
        delta_n=spacing_cap,
    )


def corollary_certificate(cert: Certificate) -> Certificate:
    """Fill-distance form: C' = 2C, c' = c/2, d0 = delta0/2, Delta'' unchanged."""
    if cert.variant is Variant.FILL_DISTANCE:
        raise InvalidArgumentError("certificate is already in fill-distance form")
    log_d0 = cert.log_delta0 - math.log(2.0)
    return Certificate(
        n=cert.n,
        beta=cert.beta,
        b0=cert.b0,
        gamma_n=cert.gamma_n,
        delta0=cert.delta0 / 2.0,
        log_delta0=log_d0,
        c_exp=cert.c_exp / 2.0,
        C_base=LogScalar.from_log(cert.C_base.logmag + math.log(2.0)),
        delta_pp=cert.delta_pp,
        variant=Variant.FILL_DISTANCE,
        rho3=cert.rho3,
        b_prime=cert.b_prime,
        b_double_prime=cert.b_double_prime,
        delta_n=cert.delta_n,
        parent=cert,
    )


def is_admissible(cert: Certificate, delta: float) -> bool:
    """True when 0 < delta <= delta0 (up to round-off at delta0 itself)."""
    delta = float(delta)
    if not math.isfinite(delta) or delta <= 0.0:
        return False
    return math.log(delta) - cert.log_delta0 <= ADMISSIBLE_LOG_SLACK


def bound_value(cert: Certificate, delta: float, norm_f: float) -> LogScalar:
    """Delta'' * (C delta)^(c/delta) * norm_f, in the log domain."""
    delta = float(delta)
    if not math.isfinite(delta) or delta <= 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    norm_f = float(norm_f)
    if not math.isfinite(norm_f) or norm_f < 0.0:
        raise DomainError(f"norm_f must be non-negative, got {norm_f}")
    if not is_admissible(cert, delta):
        raise CertificateRangeError(
            f"delta={delta!r} exceeds delta0=e^{cert.log_delta0:.6g}; the bound asserts nothing there"
        )
    if norm_f == 0.0:
        return LogScalar.zero()
    log_c_delta = cert.C_base.logmag + math.log(delta)
    logmag = cert.delta_pp.logmag + (cert.c_exp / delta) * log_c_delta + math.log(norm_f)
    return LogScalar.from_log(logmag)


def rate_log10(cert: Certificate, delta: float) -> float:
    """(c/delta) log10(C delta), the exponent of the bound without prefactor.

    Defined for every delta > 0, also outside the certified range.
    """
    delta = float(delta)
    if delta <= 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    return (cert.c_exp / delta) * (cert.C_base.logmag + math.log(delta)) / math.log(10.0)


def c_k_bound(n: int, k: int, beta: float) -> LogScalar:
    """Bound on c_k from the moment bound and the Stirling lower bound.

    odd n:  Delta'' rho3^k k^{-k} (2k+n-1)^{(2k+n-3)/4}
    even n: Delta'' rho3^k k^{-k} (2k+n-2)^{(2k+n-4)/4}
    """
    if not isinstance(k, Integral) or isinstance(k, bool) or k < 1:
        raise RangeError(f"c_k needs k >= 1, got {k!r}")
    m = 2 * k + n - 1 if n % 2 else 2 * k + n - 2
    logmag = (
        delta_double_prime(n).logmag
        + k * rho3(beta).logmag
        - k * math.log(k)
        + 0.25 * (m - 2) * math.log(m)
    )
    return LogScalar.from_log(logmag)


def i_chain(n: int, beta: float, b0: float, delta: float) -> LogScalar:
    """c_k (sqrt(n) gamma_n k delta)^k e^{2 n gamma_n k} at k = max(1, floor(b0/(2 gamma_n delta))).

    This is the pointwise-error bound before k is eliminated; it must shrink
    as delta does.
    """
    delta = _check_positive("delta", delta)
    b0 = _check_positive("b0", b0)
    g = gamma_n(n)
    k = max(1, math.floor(b0 / (2 * g * delta)))
    ck = c_k_coefficient(n, k, beta)
    logmag = ck.logmag + k * math.log(math.sqrt(n) * g * k * delta) + 2.0 * n * g * k
    return LogScalar.from_log(logmag)


def named_constants(beta: float) -> dict:
    """rho, rho1, rho2 and rho3 for reporting."""
    return {
        "rho": from_real(RHO),
        "rho1": from_real(RHO1),
        "rho2": from_real(RHO2),
        "rho3": rho3(beta),
    }


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be positive, got {value}")
    return value
