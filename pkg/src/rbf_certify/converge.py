"""Empirical interpolation error against the certified bound.

For each spacing delta the experiment places one jittered node per cell of
E = [0, b0]^n, interpolates a fixed target spline (whose native norm is
known exactly), and records the observed maximum error next to the
certificate's bound. Spacings above delta0 are reported as out of
certificate rather than extrapolated.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import constants
from .constants import Certificate, Variant
from .errors import IllConditionedError, InvalidArgumentError
from .geometry import Cube, cover_check, fill_distance, jittered_grid, uniform_random
from .interp import RESIDUAL_TOLERANCE, GaussianKernel, SplineModel, evaluate_max_error, fit, from_coefficients, native_norm
from .reporting import csv_text
from .suites import child_seeds, run_pool

logger = logging.getLogger(__name__)

OUT_OF_CERTIFICATE = "out-of-certificate"
SUPPORTED_DIMENSIONS = (1, 2)
DEFAULT_DELTAS = (0.2, 0.1, 0.05, 0.02, 0.01)
DEFAULT_TARGET_CENTERS = 5
DEFAULT_RESOLUTION = 128
# Evaluation grid points per axis, by dimension.
DEFAULT_EVAL_POINTS = {1: 201, 2: 61}

HEADER = [
    "delta",
    "num_points",
    "fill_distance_lower",
    "fill_distance_upper",
    "cover_pass",
    "max_error",
    "log10_error",
    "native_norm",
    "log10_bound",
    "log10_rate",
    "condition_estimate",
    "residual",
    "jitter",
    "flag",
]


@dataclass(frozen=True)
class ConvergenceRow:
    delta: float
    num_points: int
    fill_distance_lower: float
    fill_distance_upper: float
    cover_pass: bool
    max_error: Optional[float]
    native_norm: float
    log10_bound: Optional[float]
    log10_rate: float
    condition_estimate: Optional[float]
    residual: Optional[float] = None
    jitter: float = 0.0
    flag: str = ""

    @property
    def log10_error(self) -> Optional[float]:
        if self.max_error is None:
            return None
        return math.log10(self.max_error) if self.max_error > 0.0 else -math.inf

    def cells(self) -> list:
        bound = OUT_OF_CERTIFICATE if self.log10_bound is None else self.log10_bound
        return [
            self.delta,
            self.num_points,
            self.fill_distance_lower,
            self.fill_distance_upper,
            self.cover_pass,
            self.max_error,
            self.log10_error,
            self.native_norm,
            bound,
            self.log10_rate,
            self.condition_estimate,
            self.residual,
            self.jitter,
            self.flag,
        ]


@dataclass(frozen=True)
class ConvergenceSetup:
    cube: Cube
    certificate: Certificate
    target: SplineModel
    target_norm: float
    resolution: int
    eval_points: int
    jitter: float


def target_spline(cube: Cube, beta: float, seed, centers: int = DEFAULT_TARGET_CENTERS,
                  zero: bool = False) -> SplineModel:
    """Fixed spline with centers drawn inside the cube; all-zero coefficients when ``zero``."""
    rng = np.random.default_rng(seed)
    X = uniform_random(cube, centers, rng)
    coefficients = np.zeros(centers) if zero else rng.uniform(-1.0, 1.0, centers)
    return from_coefficients(GaussianKernel(beta, cube.n), X, coefficients)


def evaluation_grid(cube: Cube, per_axis: int) -> np.ndarray:
    axes = [np.linspace(lo, lo + cube.side, per_axis) for lo in cube.min_corner]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _bound_log10(cert: Certificate, spacing: float, norm: float) -> Optional[float]:
    if not constants.is_admissible(cert, spacing):
        return None
    return constants.bound_value(cert, spacing, norm).log10


def convergence_row(setup: ConvergenceSetup, delta: float, seed) -> ConvergenceRow:
    cube = setup.cube
    X = jittered_grid(cube, delta, seed)
    cover = cover_check(cube, X, delta)
    if not cover.passed:
        logger.error(f"delta={delta}: cell {cover.witness} holds no node")
    lower, upper = fill_distance(cube, X, setup.resolution)

    cert = setup.certificate
    # the fill-distance form is certified in terms of d, not delta
    spacing = upper if cert.variant is Variant.FILL_DISTANCE else delta
    log10_bound = _bound_log10(cert, spacing, setup.target_norm)
    log10_rate = constants.rate_log10(cert, spacing)

    values = setup.target(X.points)
    flag = "" if cover.passed else "cover-failed"
    try:
        model = fit(setup.target.kernel, X, values, jitter=setup.jitter)
    except IllConditionedError as e:
        logger.warning(f"delta={delta}: {e}")
        return ConvergenceRow(
            delta=delta, num_points=len(X), fill_distance_lower=lower, fill_distance_upper=upper,
            cover_pass=cover.passed, max_error=None, native_norm=setup.target_norm,
            log10_bound=log10_bound, log10_rate=log10_rate, condition_estimate=e.condition_estimate,
            jitter=setup.jitter, flag="ill-conditioned",
        )

    if not flag and model.residual > RESIDUAL_TOLERANCE * float(np.max(np.abs(values))):
        logger.warning(f"delta={delta}: jitter leaves residual {model.residual:.3e} at the nodes")
        flag = "not-interpolating"
    grid = evaluation_grid(cube, setup.eval_points)
    error = evaluate_max_error(model, setup.target, grid)
    logger.debug(f"delta={delta}: N={len(X)} max error {error:.3e} condition {model.condition_estimate:.3e}")
    return ConvergenceRow(
        delta=delta, num_points=len(X), fill_distance_lower=lower, fill_distance_upper=upper,
        cover_pass=cover.passed, max_error=error, native_norm=setup.target_norm,
        log10_bound=log10_bound, log10_rate=log10_rate, condition_estimate=model.condition_estimate,
        residual=model.residual, jitter=setup.jitter, flag=flag,
    )


def converge(n: int, beta: float, b0: float, deltas: Sequence[float] = DEFAULT_DELTAS, seed: int = 0,
             variant=Variant.GENERAL, base_variant=Variant.GENERAL,
             target_centers: int = DEFAULT_TARGET_CENTERS, zero_target: bool = False,
             resolution: int = DEFAULT_RESOLUTION, eval_points: Optional[int] = None, jitter: float = 0.0,
             workers: int = 1) -> List[ConvergenceRow]:
    """One row per delta, sorted by descending delta."""
    if n not in SUPPORTED_DIMENSIONS:
        raise InvalidArgumentError(f"convergence runs support n in {SUPPORTED_DIMENSIONS}, got {n!r}")
    if not deltas:
        raise InvalidArgumentError("at least one delta is required")
    cert = constants.certificate(n, beta, b0, variant, base_variant)
    cube = Cube.unit(n, b0)
    target_seed, grid_seed = child_seeds(seed, 2)
    target = target_spline(cube, beta, target_seed, target_centers, zero=zero_target)
    setup = ConvergenceSetup(
        cube=cube, certificate=cert, target=target, target_norm=native_norm(target),
        resolution=resolution, eval_points=eval_points or DEFAULT_EVAL_POINTS[n], jitter=jitter,
    )

    ordered = sorted((float(d) for d in deltas), reverse=True)
    seeds = child_seeds(grid_seed, len(ordered))
    logger.info(f"Convergence run n={n} beta={beta} b0={b0} variant={cert.variant.value}: {len(ordered)} spacings")
    rows = run_pool(lambda args: convergence_row(setup, *args), list(zip(ordered, seeds)), workers)
    out_of_range = sum(r.log10_bound is None for r in rows)
    if out_of_range:
        logger.info(f"{out_of_range} of {len(rows)} spacings lie above delta0 = e^{cert.log_delta0:.4g}")
    return rows


def rows_csv(rows: Sequence[ConvergenceRow]) -> str:
    return csv_text(HEADER, (r.cells() for r in rows))
