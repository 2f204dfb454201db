"""Gaussian h-spline interpolation.

Gaussians are conditionally positive definite of order 0, so the
interpolant carries no polynomial part:

    s(x) = sum_j c_j exp(-beta |x - x_j|^2),   s(x_i) = f_i.

The kernel matrix is symmetric positive definite for distinct centers and
is solved by Cholesky factorization. No regularization is applied unless a
diagonal jitter is requested explicitly; the jitter and the resulting
interpolation residual max |s(x_i) - f_i| are recorded on the model.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, linalg
from scipy.spatial.distance import cdist

from .errors import ConvergenceError, DomainError, IllConditionedError, InvalidArgumentError
from .geometry import PointSet, as_point_set, min_separation

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-8
ZERO_DATA_TOLERANCE = 1e-12
INEQUALITY5_SLACK = 1e-6
INEQUALITY5_ABS_FLOOR = 1e-12
QUAD_REL_TOL = 1e-8
# Kernel rows evaluated at once in evaluate_many.
EVAL_CHUNK = 4096


@dataclass(frozen=True)
class GaussianKernel:
    """h(x) = exp(-beta |x|^2) on R^n."""
    beta: float
    n: int

    def __post_init__(self):
        beta = float(self.beta)
        if not math.isfinite(beta) or beta <= 0.0:
            raise DomainError(f"beta must be positive, got {beta}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidArgumentError(f"dimension must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "n", int(self.n))

    def matrix(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Kernel values h(x_i - y_j), shape (len(x), len(y))."""
        return np.exp(-self.beta * cdist(x, y, "sqeuclidean"))


def kernel_eval(kernel: GaussianKernel, x: Sequence[float], y: Sequence[float]) -> float:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != (kernel.n,) or y.shape != (kernel.n,):
        raise InvalidArgumentError(f"expected {kernel.n}-vectors, got shapes {x.shape} and {y.shape}")
    diff = x - y
    return float(np.exp(-kernel.beta * np.dot(diff, diff)))


@dataclass(frozen=True, eq=False)
class SplineModel:
    """Fitted (or explicitly given) Gaussian spline; immutable after construction."""
    kernel: GaussianKernel
    centers: PointSet
    coefficients: np.ndarray
    condition_estimate: float = 1.0
    jitter: float = 0.0
    # max |s(x_i) - f_i| against the unregularized kernel matrix
    residual: float = 0.0
    _factor: Optional[Tuple[np.ndarray, bool]] = field(default=None, repr=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float).reshape(-1)
        if coeffs.shape[0] != len(self.centers):
            raise InvalidArgumentError(
                f"{coeffs.shape[0]} coefficients for {len(self.centers)} centers"
            )
        if self.centers.n != self.kernel.n:
            raise InvalidArgumentError(
                f"center dimension {self.centers.n} does not match kernel dimension {self.kernel.n}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n(self) -> int:
        return self.kernel.n

    @property
    def beta(self) -> float:
        return self.kernel.beta

    def __call__(self, points) -> np.ndarray:
        return evaluate_many(self, points)

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "n": self.n,
            "centers": self.centers.points.tolist(),
            "coefficients": self.coefficients.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SplineModel":
        try:
            kernel = GaussianKernel(float(data["beta"]), int(data["n"]))
            centers = PointSet(np.asarray(data["centers"], dtype=float).reshape(-1, kernel.n))
            coeffs = np.asarray(data["coefficients"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidArgumentError(f"malformed model: {e}") from e
        return from_coefficients(kernel, centers, coeffs)


def from_coefficients(kernel: GaussianKernel, centers, coefficients) -> SplineModel:
    """Spline with prescribed coefficients (no solve)."""
    return SplineModel(kernel=kernel, centers=as_point_set(centers), coefficients=coefficients)


def fit(kernel: GaussianKernel, centers, values, jitter: float = 0.0) -> SplineModel:
    """Solve A c = f with A_ij = h(x_i - x_j) by Cholesky factorization."""
    X = as_point_set(centers)
    f = np.asarray(values, dtype=float).reshape(-1)
    if X.n != kernel.n:
        raise InvalidArgumentError(f"center dimension {X.n} does not match kernel dimension {kernel.n}")
    if len(f) != len(X):
        raise InvalidArgumentError(f"{len(f)} values for {len(X)} centers")
    if len(X) == 0:
        raise InvalidArgumentError("cannot fit an empty point set")
    if not np.all(np.isfinite(f)):
        raise InvalidArgumentError("values must be finite")
    if min_separation(X) == 0.0:
        raise InvalidArgumentError("centers must be distinct")
    jitter = float(jitter)
    if jitter < 0.0:
        raise DomainError(f"jitter must be non-negative, got {jitter}")

    if not np.any(f):
        # zero data has the zero spline as its unique interpolant
        logger.debug(f"Fit N={len(X)}: zero data, skipping factorization")
        return SplineModel(kernel=kernel, centers=X, coefficients=np.zeros(len(X)),
                           condition_estimate=math.nan, jitter=jitter)

    K = kernel.matrix(X.points, X.points)
    A = K.copy()
    if jitter:
        A[np.diag_indices_from(A)] += jitter
        logger.info(f"Fitting with diagonal jitter {jitter:g}")

    try:
        factor = linalg.cho_factor(A, lower=True, check_finite=False)
    except linalg.LinAlgError as e:
        raise IllConditionedError(f"kernel matrix is not numerically positive definite: {e}") from e

    diag = np.abs(np.diag(factor[0]))
    condition = float(np.max(diag) / np.min(diag)) if np.min(diag) > 0 else math.inf
    coeffs = linalg.cho_solve(factor, f, check_finite=False)

    scale = float(np.max(np.abs(f)))
    tolerance = RESIDUAL_TOLERANCE * scale if scale > 0 else ZERO_DATA_TOLERANCE
    solve_residual = float(np.max(np.abs(A @ coeffs - f)))
    logger.debug(f"Fit N={len(X)} beta={kernel.beta}: solve residual {solve_residual:.3e}, condition estimate {condition:.3e}")
    if not np.isfinite(solve_residual) or solve_residual > tolerance:
        raise IllConditionedError(
            f"solve residual {solve_residual:.3e} exceeds {tolerance:.3e} (condition estimate {condition:.3e})",
            condition_estimate=condition,
        )
    # measured against the unregularized matrix: the spline misses f_i by this much
    residual = float(np.max(np.abs(K @ coeffs - f))) if jitter else solve_residual
    if residual > tolerance:
        logger.warning(f"Jitter {jitter:g} leaves an interpolation residual of {residual:.3e} at the centers")
    return SplineModel(
        kernel=kernel,
        centers=X,
        coefficients=coeffs,
        condition_estimate=condition,
        jitter=jitter,
        residual=residual,
        _factor=factor,
    )


def _as_queries(model: SplineModel, points) -> np.ndarray:
    pts = np.asarray(points.points if isinstance(points, PointSet) else points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, model.n)
    if pts.ndim != 2 or pts.shape[1] != model.n:
        raise InvalidArgumentError(f"expected points of dimension {model.n}, got shape {pts.shape}")
    return pts


def evaluate(model: SplineModel, x: Sequence[float]) -> float:
    """s(x) at a single point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (model.n,):
        raise InvalidArgumentError(f"expected a {model.n}-vector, got shape {x.shape}")
    return float(evaluate_many(model, x.reshape(1, -1))[0])


def evaluate_many(model: SplineModel, points) -> np.ndarray:
    """s at every row of ``points``."""
    pts = _as_queries(model, points)
    out = np.empty(len(pts))
    for start in range(0, len(pts), EVAL_CHUNK):
        block = pts[start:start + EVAL_CHUNK]
        out[start:start + EVAL_CHUNK] = model.kernel.matrix(block, model.centers.points) @ model.coefficients
    return out


def evaluate_max_error(model: SplineModel, f_true: Callable[[np.ndarray], np.ndarray], grid) -> float:
    """max over the grid of |f_true - s|; ``f_true`` maps (N, n) arrays to (N,) arrays."""
    pts = _as_queries(model, grid)
    truth = np.asarray(f_true(pts), dtype=float).reshape(-1)
    if truth.shape[0] != len(pts):
        raise InvalidArgumentError(f"f_true returned {truth.shape[0]} values for {len(pts)} points")
    return float(np.max(np.abs(truth - evaluate_many(model, pts))))


def native_norm(model: SplineModel) -> float:
    """sqrt(c^T A c), the native-space norm of the spline."""
    c = model.coefficients
    if not np.any(c):
        return 0.0
    if model._factor is not None and not model.jitter:
        lower = np.tril(model._factor[0])
        return float(np.linalg.norm(lower.T @ c))
    A = model.kernel.matrix(model.centers.points, model.centers.points)
    return float(math.sqrt(max(0.0, float(c @ A @ c))))


# ---------------------------------------------------------------------------
# Defining inequality of the native space, checked in one dimension:
#     |int f phi| <= ||f||_h {int int h(x - y) phi(x) phi(y) dx dy}^{1/2}

@dataclass(frozen=True)
class Bump:
    """weight * psi((x - center) / radius), psi(t) = exp(-1/(1 - t^2)) on |t| < 1."""
    weight: float
    center: float
    radius: float


def bump_profile(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < 1.0
    safe = np.where(inside, 1.0 - t * t, 1.0)
    return np.where(inside, np.exp(-1.0 / safe), 0.0)


def random_test_function(rng: np.random.Generator, lo: float, hi: float, width: float) -> List[Bump]:
    """Random linear combination of one to three bumps with supports near [lo, hi]."""
    count = int(rng.integers(1, 4))
    return [
        Bump(
            weight=float(rng.uniform(-1.0, 1.0)),
            center=float(rng.uniform(lo, hi)),
            radius=float(rng.uniform(0.05, 1.0) * width),
        )
        for _ in range(count)
    ]


def _check_quad(value: float, abserr: float, what: str) -> float:
    if abserr > max(100.0 * QUAD_REL_TOL * abs(value), 1e-12):
        raise ConvergenceError(f"quadrature of {what} stalled: value {value:.6e}, error {abserr:.3e}")
    return value


def pairing(model: SplineModel, bumps: Sequence[Bump]) -> float:
    """int s(x) phi(x) dx."""
    xs = model.centers.points[:, 0]
    c = model.coefficients
    beta = model.beta
    total = 0.0
    for b in bumps:
        def integrand(t, b=b):
            x = b.center + b.radius * t
            return float(np.dot(c, np.exp(-beta * (x - xs) ** 2))) * float(bump_profile(t))

        value, abserr = integrate.quad(integrand, -1.0, 1.0, epsabs=1e-14, epsrel=QUAD_REL_TOL, limit=200)
        total += b.weight * b.radius * _check_quad(value, abserr, "pairing")
    return total


def kernel_energy(kernel: GaussianKernel, bumps: Sequence[Bump]) -> float:
    """int int h(x - y) phi(x) phi(y) dx dy."""
    total = 0.0
    for i, bi in enumerate(bumps):
        for j, bj in enumerate(bumps[i:], start=i):
            def integrand(u, t, bi=bi, bj=bj):
                d = (bi.center + bi.radius * t) - (bj.center + bj.radius * u)
                return math.exp(-kernel.beta * d * d) * float(bump_profile(t)) * float(bump_profile(u))

            value, abserr = integrate.dblquad(integrand, -1.0, 1.0, -1.0, 1.0, epsabs=1e-14, epsrel=QUAD_REL_TOL)
            value = _check_quad(value, abserr, "kernel energy")
            weight = bi.weight * bj.weight * bi.radius * bj.radius
            total += weight * value if i == j else 2.0 * weight * value
    return max(total, 0.0)


@dataclass(frozen=True)
class Inequality5Trial:
    lhs: float
    rhs: float
    ratio: float
    passed: bool


@dataclass(frozen=True)
class Inequality5Report:
    norm: float
    trials: Tuple[Inequality5Trial, ...]

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.trials)

    @property
    def violations(self) -> int:
        return sum(not t.passed for t in self.trials)

    @property
    def worst_ratio(self) -> float:
        return max((t.ratio for t in self.trials), default=0.0)


def _trial(model: SplineModel, norm: float, bumps: Sequence[Bump]) -> Inequality5Trial:
    lhs = abs(pairing(model, bumps))
    rhs = norm * math.sqrt(kernel_energy(model.kernel, bumps))
    if rhs > 0.0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs == 0.0 else math.inf
    passed = lhs <= rhs * (1.0 + INEQUALITY5_SLACK) + INEQUALITY5_ABS_FLOOR
    return Inequality5Trial(lhs=lhs, rhs=rhs, ratio=ratio, passed=passed)


def verify_inequality5(model: SplineModel, phi_seed, trials: int) -> Inequality5Report:
    """Check the native-space inequality against random bump test functions (1-D)."""
    if model.n != 1:
        raise InvalidArgumentError(f"inequality check is one-dimensional, model has n = {model.n}")
    if not isinstance(trials, int) or trials < 1:
        raise InvalidArgumentError(f"trials must be a positive integer, got {trials!r}")
    rng = np.random.default_rng(phi_seed)
    norm = native_norm(model)
    width = 1.0 / math.sqrt(model.beta)
    lo = float(np.min(model.centers.points)) - width
    hi = float(np.max(model.centers.points)) + width
    results = tuple(_trial(model, norm, random_test_function(rng, lo, hi, width)) for _ in range(trials))
    report = Inequality5Report(norm=norm, trials=results)
    logger.debug(f"Inequality check: {trials} trials, worst ratio {report.worst_ratio:.6f}")
    return report


def concentration_ratios(model: SplineModel, widths: Sequence[float]) -> List[float]:
    """Inequality ratio for single bumps shrinking onto the first center.

    For a one-center spline with unit coefficient the ratio tends to 1.
    """
    if model.n != 1:
        raise InvalidArgumentError("concentration ratios are one-dimensional")
    norm = native_norm(model)
    x0 = float(model.centers.points[0, 0])
    return [_trial(model, norm, [Bump(1.0, x0, float(w))]).ratio for w in widths]
