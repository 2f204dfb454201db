"""Moments of the Gaussian's spectral measure.

For h(x) = exp(-beta |x|^2) the measure mu has density
(pi/beta)^{n/2} exp(-|xi|^2 / (4 beta)). Its radial moments have a closed
form through the Gamma function; this module evaluates them in the log
domain, evaluates the published upper bounds for even k, and provides an
adaptive-quadrature oracle that shares no code with the closed form.
"""

import logging
import math
from dataclasses import dataclass
from numbers import Integral
from typing import Optional

from scipy import integrate

from .errors import ConvergenceError, DomainError, InvalidArgumentError, OverflowGuardError, RangeError
from .numerics import LogScalar, log_factorial, log_gamma

logger = logging.getLogger(__name__)

RHO = math.sqrt(3.0) / math.e
TWO_PLUS_INV_E = 2.0 + 1.0 / math.e

# Largest ln-magnitude the quadrature oracle will try to produce.
MAX_REPRESENTABLE_LOG = 700.0


@dataclass(frozen=True)
class MomentReport:
    """Exact moment, its published bound and (when representable) the oracle."""
    n: int
    k: int
    beta: float
    exact: LogScalar
    bound: Optional[LogScalar]
    quadrature: Optional[float] = None

    @property
    def holds(self) -> bool:
        # no published bound below k = 2 or for odd k
        return self.bound is None or self.exact <= self.bound

    @property
    def quadrature_rel_error(self) -> Optional[float]:
        if self.quadrature is None:
            return None
        return abs(self.quadrature - self.exact.to_real()) / self.quadrature


def _check_dimension(n: int) -> None:
    if not isinstance(n, Integral) or isinstance(n, bool) or n < 1:
        raise RangeError(f"dimension n must be a positive integer, got {n!r}")


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    return beta


def log_unit_ball_volume(n: int) -> float:
    _check_dimension(n)
    return 0.5 * n * math.log(math.pi) - log_gamma(0.5 * n + 1.0)


def unit_ball_volume(n: int) -> float:
    """alpha_n = pi^{n/2} / Gamma(n/2 + 1)."""
    return math.exp(log_unit_ball_volume(n))


def _log_radial_prefactor(n: int, beta: float) -> float:
    # ln[(pi/beta)^{n/2} * n * alpha_n], the mass of the unit-radius shell factor
    return 0.5 * n * math.log(math.pi / beta) + math.log(n) + log_unit_ball_volume(n)


def exact_moment(n: int, k: int, beta: float) -> LogScalar:
    """Integral of |xi|^k d mu(xi) in closed form.

    Uses int_0^inf r^{m-1} e^{-r^2} dr = Gamma(m/2)/2 after rescaling
    r -> 2 sqrt(beta) r. Any non-negative integer k is accepted.
    """
    _check_dimension(n)
    beta = _check_beta(beta)
    if not isinstance(k, Integral) or isinstance(k, bool) or k < 0:
        raise RangeError(f"moment order k must be a non-negative integer, got {k!r}")
    m = k + n
    logmag = (
        _log_radial_prefactor(n, beta)
        + m * math.log(2.0 * math.sqrt(beta))
        + log_gamma(0.5 * m)
        - math.log(2.0)
    )
    return LogScalar.from_log(logmag)


def odd_moment_product(n: int, k: int, beta: float) -> LogScalar:
    """Odd-n moment through the half-integer product chain.

    pi^{n/2} n alpha_n 2^{n-1+k} beta^{k/2} (1/2)(3/2)...((k+n-2)/2) sqrt(pi).
    Mathematically equal to ``exact_moment``; kept as an independent oracle
    for small k.
    """
    _check_dimension(n)
    beta = _check_beta(beta)
    if n % 2 == 0 or k % 2:
        raise InvalidArgumentError("odd_moment_product needs odd n and even k")
    logmag = (
        0.5 * n * math.log(math.pi)
        + math.log(n)
        + log_unit_ball_volume(n)
        + (n - 1 + k) * math.log(2.0)
        + 0.5 * k * math.log(beta)
        + 0.5 * math.log(math.pi)
    )
    factor = 0.5
    while factor <= 0.5 * (k + n - 2) + 1e-12:
        logmag += math.log(factor)
        factor += 1.0
    return LogScalar.from_log(logmag)


def lemma5_bound(n: int, k: int, beta: float) -> LogScalar:
    """Published upper bound on the k-th moment, k a positive even integer.

    odd n:  pi^{(n+1)/2} n alpha_n 2^{(k+n+2)/2} rho^{(k+n-1)/2}
            beta^{k/2} (k+n-1)^{(k+n-3)/2} (2 + 1/e)
    even n: pi^{(n+1)/2} n alpha_n 2^{(k+n+3)/2} rho^{(k+n-2)/2}
            beta^{k/2} (k+n-2)^{(k+n-4)/2}
    """
    _check_dimension(n)
    beta = _check_beta(beta)
    if not isinstance(k, Integral) or isinstance(k, bool) or k % 2:
        raise InvalidArgumentError(f"the moment bound is stated for even k, got {k!r}")
    if k < 2:
        raise RangeError(f"the moment bound needs k >= 2, got {k}")
    base = (
        0.5 * (n + 1) * math.log(math.pi)
        + math.log(n)
        + log_unit_ball_volume(n)
        + 0.5 * k * math.log(beta)
    )
    if n % 2:
        m = k + n - 1
        logmag = (
            base
            + 0.5 * (k + n + 2) * math.log(2.0)
            + 0.5 * m * math.log(RHO)
            + 0.5 * (k + n - 3) * math.log(m)
            + math.log(TWO_PLUS_INV_E)
        )
    else:
        m = k + n - 2
        logmag = (
            base
            + 0.5 * (k + n + 3) * math.log(2.0)
            + 0.5 * m * math.log(RHO)
            + 0.5 * (k + n - 4) * math.log(m)
        )
    return LogScalar.from_log(logmag)


def c_k_coefficient(n: int, k: int, beta: float) -> LogScalar:
    """c_k = {int |xi|^{2k} / (k!)^2 d mu}^{1/2}."""
    if not isinstance(k, Integral) or isinstance(k, bool) or k < 1:
        raise RangeError(f"c_k needs k >= 1, got {k!r}")
    moment = exact_moment(n, 2 * k, beta)
    return LogScalar.from_log(0.5 * moment.logmag - log_factorial(k))


def quadrature_moment(n: int, k: int, beta: float, rel_tol: float = 1e-10) -> float:
    """Moment by adaptive quadrature of the radial integral.

    The radius is doubled until the integrand's tail falls below
    ``rel_tol`` times the running estimate.
    """
    _check_dimension(n)
    beta = _check_beta(beta)
    if not isinstance(k, Integral) or isinstance(k, bool) or k < 0:
        raise RangeError(f"moment order k must be a non-negative integer, got {k!r}")
    estimate = exact_moment(n, k, beta).logmag
    if estimate > MAX_REPRESENTABLE_LOG:
        raise OverflowGuardError(
            f"moment (n={n}, k={k}, beta={beta}) is about e^{estimate:.1f}, not representable"
        )

    power = k + n - 1
    scale = 4.0 * beta

    def integrand(r: float) -> float:
        if r == 0.0:
            return 0.0 if power > 0 else 1.0
        return math.exp(power * math.log(r) - r * r / scale)

    peak = math.sqrt(0.5 * scale * power) if power > 0 else 0.0
    radius = max(2.0 * peak, math.sqrt(scale))
    total = 0.0
    for _ in range(64):
        points = [peak] if 0.0 < peak < radius else None
        value, abserr, info = integrate.quad(
            integrand, 0.0, radius, epsabs=0.0, epsrel=rel_tol, limit=500,
            points=points, full_output=True,
        )[:3]
        if abserr > rel_tol * abs(value) * 10.0:
            raise ConvergenceError(
                f"quadrature of moment (n={n}, k={k}, beta={beta}) stalled at error {abserr:.3e}"
            )
        total = value
        if integrand(radius) * radius < rel_tol * total:
            break
        radius *= 2.0
    else:
        raise ConvergenceError(f"tail of moment (n={n}, k={k}, beta={beta}) never fell below tolerance")

    result = math.exp(_log_radial_prefactor(n, beta)) * total
    logger.debug(f"Quadrature moment n={n} k={k} beta={beta}: {result!r} (R={radius})")
    return result


def moment_report(n: int, k: int, beta: float, with_quadrature: bool = True,
                  rel_tol: float = 1e-10) -> MomentReport:
    """Exact moment, bound and oracle for one (n, k, beta) triple."""
    exact = exact_moment(n, k, beta)
    bound = lemma5_bound(n, k, beta) if k >= 2 and k % 2 == 0 else None
    quad = None
    if with_quadrature and exact.logmag <= MAX_REPRESENTABLE_LOG:
        quad = quadrature_moment(n, k, beta, rel_tol)
    return MomentReport(n=n, k=k, beta=float(beta), exact=exact, bound=bound, quadrature=quad)


def gamma_half_integral(rel_tol: float = 1e-10) -> float:
    """int_0^inf u^{-1/2} e^{-u} du by quadrature (equals sqrt(pi)).

    Substituting u = t^2 gives 2 int_0^inf e^{-t^2} dt, integrated on [0, R]
    with R grown until the tail bound e^{-R^2}/R drops below ``rel_tol``
    times the estimate.
    """
    radius = 4.0
    for _ in range(8):
        value, abserr = integrate.quad(lambda t: 2.0 * math.exp(-t * t), 0.0, radius, epsabs=0.0, epsrel=rel_tol)
        if abserr > 10.0 * rel_tol * value:
            raise ConvergenceError(f"half-integral quadrature error {abserr:.3e}")
        if math.exp(-radius * radius) / radius < rel_tol * value:
            return float(value)
        radius *= 1.5
    raise ConvergenceError("tail of the half-integral never fell below tolerance")
