"""Randomized trials of the polynomial sampling bound.

For a cube Q split into q^n congruent subcubes with one sample point Y in
each, q >= gamma_n (k+1) gives, for every polynomial p of degree <= k,

    sup_Q |p| <= e^{2 n gamma_n (k+1)} max_Y |p|.

A trial draws p and Y, estimates sup_Q |p| from below on a grid (plus the
cube corners and Y itself) and compares in the log domain. The grid
estimate can only produce false passes, never false failures.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import gamma_n
from .errors import DegenerateTrialError, InvalidArgumentError, RangeError, ResourceGuardError
from .geometry import Cube, MAX_CELLS, select_one_per_subcube
from .numerics import LogScalar

logger = logging.getLogger(__name__)

MAX_N = 3
MAX_K = 4
MIN_GRID_PER_AXIS = 50
# Sample points generated and evaluated per block.
Y_BLOCK = 1 << 16
REDRAWS = 3


def multi_indices(n: int, k: int) -> np.ndarray:
    """Exponent vectors of total degree <= k, graded, shape (C(n+k, k), n)."""
    rows = []
    for degree in range(k + 1):
        for combo in itertools.combinations_with_replacement(range(n), degree):
            alpha = [0] * n
            for axis in combo:
                alpha[axis] += 1
            rows.append(alpha)
    return np.array(rows, dtype=np.int64).reshape(-1, n)


@dataclass(frozen=True, eq=False)
class Polynomial:
    """sum_alpha a_alpha x^alpha, evaluated as a direct monomial sum."""
    n: int
    k: int
    exponents: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        exps = np.asarray(self.exponents, dtype=np.int64).reshape(-1, self.n)
        coeffs = np.asarray(self.coefficients, dtype=float).reshape(-1)
        if len(exps) != len(coeffs):
            raise InvalidArgumentError(f"{len(coeffs)} coefficients for {len(exps)} monomials")
        if len(exps) and (np.any(exps < 0) or np.max(exps.sum(axis=1)) > self.k):
            raise InvalidArgumentError(f"multi-indices must have total degree <= {self.k}")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "coefficients", coeffs)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.n:
            raise InvalidArgumentError(f"expected points of dimension {self.n}, got shape {pts.shape}")
        monomials = np.prod(pts[:, None, :] ** self.exponents[None, :, :], axis=2)
        return monomials @ self.coefficients


def random_polynomial(n: int, k: int, seed) -> Polynomial:
    """Coefficients i.i.d. uniform on [-1, 1] over the graded monomial basis."""
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise RangeError(f"trial polynomials support 1 <= n <= {MAX_N}, got {n!r}")
    if not isinstance(k, int) or not 0 <= k <= MAX_K:
        raise RangeError(f"trial polynomials support 0 <= k <= {MAX_K}, got {k!r}")
    exps = multi_indices(n, k)
    rng = np.random.default_rng(seed)
    return Polynomial(n=n, k=k, exponents=exps, coefficients=rng.uniform(-1.0, 1.0, len(exps)))


@dataclass(frozen=True)
class TrialReport:
    seed: int
    n: int
    k: int
    q: int
    ratio: float
    bound: LogScalar
    passed: bool
    y_points: int
    y_exhaustive: bool

    @property
    def log_bound(self) -> float:
        return self.bound.logmag


def _grid(cube: Cube, per_axis: int) -> np.ndarray:
    axes = [np.linspace(lo, lo + cube.side, per_axis) for lo in cube.min_corner]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def sup_on_grid(p: Polynomial, cube: Cube, per_axis: int) -> float:
    """max |p| over a per_axis^n grid (endpoints included) and the corners."""
    pts = np.vstack([_grid(cube, per_axis), cube.corners()])
    return float(np.max(np.abs(p(pts))))


def max_on_samples(p: Polynomial, cube: Cube, q: int, seed: np.random.SeedSequence,
                   max_y_points: Optional[int] = None) -> tuple:
    """max |p| over one random point per subcube.

    With ``max_y_points`` below q^n only that many randomly chosen subcubes
    are sampled. The maximum over a subset is smaller, so the resulting
    ratio is an over-estimate and a pass stays valid.
    """
    total = q ** cube.n
    if total > MAX_CELLS:
        raise ResourceGuardError(f"{q}^{cube.n} subcubes exceed the {MAX_CELLS:.0e} guard")
    pick_seed, draw_seed = seed.spawn(2)
    if max_y_points is not None and total > max_y_points:
        cells = np.sort(np.random.default_rng(pick_seed).choice(total, size=max_y_points, replace=False))
        exhaustive = False
    else:
        cells = None
        exhaustive = True

    count = total if cells is None else len(cells)
    blocks = range(0, count, Y_BLOCK)
    block_seeds = draw_seed.spawn(len(blocks))
    best = 0.0
    for start, block_seed in zip(blocks, block_seeds):
        stop = min(count, start + Y_BLOCK)
        block_cells = np.arange(start, stop) if cells is None else cells[start:stop]
        Y = select_one_per_subcube(cube, q, block_seed, cells=block_cells)
        best = max(best, float(np.max(np.abs(p(Y.points)))))
    return best, count, exhaustive


def lemma1_trial(n: int, k: int, cube: Cube, seed: int, grid_per_axis: int = MIN_GRID_PER_AXIS,
                 max_y_points: Optional[int] = None) -> TrialReport:
    """One trial at the smallest admissible subdivision q = gamma_n (k+1)."""
    if cube.n != n:
        raise InvalidArgumentError(f"cube dimension {cube.n} does not match n = {n}")
    if grid_per_axis < 2:
        raise InvalidArgumentError(f"grid needs at least 2 points per axis, got {grid_per_axis}")
    g = gamma_n(n)
    q = g * (k + 1)
    bound = LogScalar.from_log(2.0 * n * g * (k + 1))

    root = np.random.SeedSequence(seed)
    for attempt in range(REDRAWS):
        poly_seed, y_seed = root.spawn(2)
        p = random_polynomial(n, k, poly_seed)
        y_max, y_points, exhaustive = max_on_samples(p, cube, q, y_seed, max_y_points)
        if y_max > 0.0:
            break
        logger.warning(f"Trial seed={seed} drew a polynomial vanishing on Y (attempt {attempt + 1}); redrawing")
    else:
        raise DegenerateTrialError(f"polynomial vanished on every sample set for seed {seed}")

    # Y lies in Q, so its values are admissible sup candidates too
    q_sup = max(sup_on_grid(p, cube, grid_per_axis), y_max)
    ratio = q_sup / y_max
    passed = math.log(ratio) <= bound.logmag
    return TrialReport(
        seed=int(seed), n=n, k=k, q=q, ratio=ratio, bound=bound, passed=passed,
        y_points=int(y_points), y_exhaustive=exhaustive,
    )
