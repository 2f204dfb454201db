"""Verification sweeps behind ``rbf-certify verify``.

Every inequality is evaluated exactly as stated. Failures at the
small-argument cases where the Stirling-type bounds are known not to hold
are kept in the report as *documented* violations; a suite passes when it
has no other violations (or none at all under ``strict``).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import constants, moments
from .constants import SANDWICH_UPPER_EXCEPTIONS, FACTORIAL_BOUND_EXCEPTIONS, Variant
from .errors import InvalidArgumentError
from .geometry import Cube
from .interp import GaussianKernel, SplineModel, concentration_ratios, from_coefficients, verify_inequality5
from .polybound import MIN_GRID_PER_AXIS, TrialReport, lemma1_trial
from .reporting import csv_text

logger = logging.getLogger(__name__)

SUITES = ("stirling", "moments", "polybound", "inequality5")

MOMENT_DIMENSIONS = tuple(range(1, 7))
MOMENT_ORDERS = tuple(range(2, 41, 2))
MOMENT_BETAS = (0.25, 0.5, 1.0, 2.0, 4.0)
QUADRATURE_REL_TOL = 1e-10
QUADRATURE_AGREEMENT = 1e-8
SPOT_REL_TOL = 1e-10
C_K_ORDERS = tuple(range(1, 21))
I_CHAIN_STEPS = 21

POLYBOUND_DIMENSIONS = (1, 2, 3)
POLYBOUND_DEGREES = (0, 1, 2)
# Subcubes sampled per trial before switching to a random subset.
DEFAULT_MAX_Y_POINTS = 250_000
RATIO_FLOOR = 1.0 - 1e-12

INEQUALITY5_BETAS = (0.5, 1.0, 2.0, 4.0)
CONCENTRATION_WIDTHS = (1.0, 0.5, 0.25, 0.125, 0.0625)


@dataclass(frozen=True)
class Violation:
    check: str
    case: dict
    documented: bool
    detail: str = ""


@dataclass
class SuiteReport:
    """Outcome of one sweep; ``cases`` carries the per-case data."""
    name: str
    checks: int = 0
    violations: List[Violation] = field(default_factory=list)
    cases: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    strict: bool = False
    trials: List[TrialReport] = field(default_factory=list, repr=False)

    @property
    def undocumented(self) -> List[Violation]:
        return [v for v in self.violations if not v.documented]

    @property
    def passed(self) -> bool:
        failing = self.violations if self.strict else self.undocumented
        return not failing

    def record(self, check: str, ok: bool, case: dict, documented: bool = False, detail: str = "") -> bool:
        self.checks += 1
        if not ok:
            violation = Violation(check=check, case=case, documented=documented, detail=detail)
            self.violations.append(violation)
            if documented:
                logger.warning(f"[{self.name}] documented violation of {check} at {case}")
            else:
                logger.error(f"[{self.name}] violation of {check} at {case}: {detail}")
        return ok

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "strict": self.strict,
            "checks": self.checks,
            "violations": len(self.violations),
            "documented_violations": len(self.violations) - len(self.undocumented),
            "failures": [
                {"check": v.check, "case": v.case, "documented": v.documented, "detail": v.detail}
                for v in self.violations
            ],
            "summary": self.summary,
            "cases": self.cases,
        }


def child_seeds(seed: int, count: int) -> List[int]:
    """Independent integer seeds split from ``seed``."""
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def run_pool(fn: Callable, items: Sequence, workers: int = 1) -> list:
    """Map ``fn`` over ``items``, preserving input order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def stirling_suite(kmax: int = 10_000, strict: bool = False) -> SuiteReport:
    """Stirling-type sandwich and the sharper upper bound of k! for k in [1, kmax]."""
    if not isinstance(kmax, int) or kmax < 1:
        raise InvalidArgumentError(f"kmax must be a positive integer, got {kmax!r}")
    report = SuiteReport(name="stirling", strict=strict)
    for k in range(1, kmax + 1):
        r = constants.stirling_report(k)
        case = {"k": k}
        report.record("lower", r.lower_holds, case,
                      detail=f"ln lower {r.lower.logmag!r} > ln k! {r.exact.logmag!r}")
        if not report.record("upper_l3", r.upper_l3_holds, case, documented=k in SANDWICH_UPPER_EXCEPTIONS,
                             detail=f"ln k! {r.exact.logmag!r} > ln bound {r.upper_l3.logmag!r}"):
            report.cases.append({"k": k, "check": "upper_l3", "exact": r.exact, "bound": r.upper_l3})
        if not report.record("upper_l4", r.upper_l4_holds, case, documented=k in FACTORIAL_BOUND_EXCEPTIONS,
                             detail=f"ln k! {r.exact.logmag!r} > ln bound {r.upper_l4.logmag!r}"):
            report.cases.append({"k": k, "check": "upper_l4", "exact": r.exact, "bound": r.upper_l4})

    samples = sorted({1, min(10, kmax), kmax})
    report.summary = {
        "kmax": kmax,
        "samples": [
            {
                "k": k,
                "lower": r.lower,
                "exact": r.exact,
                "upper_l3": r.upper_l3,
                "upper_l4": r.upper_l4,
                "stirling_rel_error": r.stirling_rel_error,
            }
            for k, r in ((k, constants.stirling_report(k)) for k in samples)
        ],
    }
    logger.info(f"Stirling suite: {report.checks} checks, {len(report.violations)} violations, passed={report.passed}")
    return report


def _moment_case(triple: Tuple[int, int, float]) -> moments.MomentReport:
    n, k, beta = triple
    return moments.moment_report(n, k, beta, with_quadrature=True, rel_tol=QUADRATURE_REL_TOL)


def _lemma5_documented(n: int, k: int) -> bool:
    # even-n bound inherits the k! bound failure at (k+n-2)/2 = 3
    return n % 2 == 0 and (k + n - 2) // 2 in FACTORIAL_BOUND_EXCEPTIONS


def _rel_error(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def moments_suite(workers: int = 1, strict: bool = False) -> SuiteReport:
    """Moment bound sweep with the quadrature oracle and the derived checks."""
    report = SuiteReport(name="moments", strict=strict)
    triples = [(n, k, b) for n in MOMENT_DIMENSIONS for k in MOMENT_ORDERS for b in MOMENT_BETAS]
    results = run_pool(_moment_case, triples, workers)

    quadrature_cases = 0
    for r in results:
        case = {"n": r.n, "k": r.k, "beta": r.beta}
        report.record("lemma5", r.holds, case, documented=_lemma5_documented(r.n, r.k),
                      detail=f"ln exact {r.exact.logmag!r} > ln bound {r.bound.logmag!r}")
        if r.quadrature is not None:
            quadrature_cases += 1
            report.record("quadrature", r.quadrature_rel_error <= QUADRATURE_AGREEMENT, case,
                          detail=f"relative error {r.quadrature_rel_error:.3e}")
        report.cases.append({
            **case,
            "exact": r.exact,
            "bound": r.bound,
            "holds": r.holds,
            "quadrature": r.quadrature,
            "quadrature_rel_error": r.quadrature_rel_error,
        })

    spots = [
        ((1, 2, 1.0), 4.0 * math.pi),
        ((2, 2, 1.0), 16.0 * math.pi ** 2),
        ((1, 0, 1.0), 2.0 * math.pi),
        ((2, 0, 1.0), 4.0 * math.pi ** 2),
    ]
    for (n, k, beta), expected in spots:
        value = moments.exact_moment(n, k, beta).to_real()
        report.record("spot_value", _rel_error(value, expected) <= SPOT_REL_TOL, {"n": n, "k": k, "beta": beta},
                      detail=f"{value!r} != {expected!r}")

    for n in (1, 3, 5):
        for k in (0, 2, 4, 6):
            chain = moments.odd_moment_product(n, k, 1.0).logmag
            exact = moments.exact_moment(n, k, 1.0).logmag
            report.record("odd_product", abs(chain - exact) <= SPOT_REL_TOL * max(1.0, abs(exact)),
                          {"n": n, "k": k}, detail=f"ln {chain!r} != ln {exact!r}")

    half = moments.gamma_half_integral(QUADRATURE_REL_TOL)
    report.record("half_integral", _rel_error(half, math.sqrt(math.pi)) <= SPOT_REL_TOL
                  and half <= moments.TWO_PLUS_INV_E, {}, detail=f"{half!r}")

    for n in MOMENT_DIMENSIONS:
        for k in C_K_ORDERS:
            for beta in MOMENT_BETAS:
                ck = moments.c_k_coefficient(n, k, beta)
                bound = constants.c_k_bound(n, k, beta)
                report.record("c_k_bound", ck <= bound, {"n": n, "k": k, "beta": beta},
                              detail=f"ln c_k {ck.logmag!r} > ln bound {bound.logmag!r}")

    chain = i_chain_sequence()
    decreasing = all(b.logmag < a.logmag for a, b in zip(chain, chain[1:]))
    report.record("i_chain", decreasing, {"n": 1, "beta": 1.0, "b0": 1.0},
                  detail="I bound did not shrink along delta0 / 2^j")

    report.summary = {
        "triples": len(triples),
        "quadrature_cases": quadrature_cases,
        "half_integral": half,
        "i_chain_ln": [v.logmag for v in chain],
    }
    logger.info(
        f"Moments suite: {len(triples)} triples, {quadrature_cases} quadrature cases, "
        f"{len(report.violations)} violations, passed={report.passed}"
    )
    return report


def i_chain_sequence(n: int = 1, beta: float = 1.0, b0: float = 1.0, steps: int = I_CHAIN_STEPS) -> list:
    """I bound along delta = delta0 * 2^-j, j = 0 .. steps-1."""
    cert = constants.certificate(n, beta, b0, Variant.GENERAL)
    return [constants.i_chain(n, beta, b0, math.exp(cert.log_delta0 - j * math.log(2.0))) for j in range(steps)]


def _trial_case(args: Tuple[int, int, int, int, Optional[int]]) -> TrialReport:
    n, k, seed, grid_per_axis, max_y_points = args
    return lemma1_trial(n, k, Cube.unit(n), seed, grid_per_axis=grid_per_axis, max_y_points=max_y_points)


def polybound_suite(dimensions: Iterable[int] = POLYBOUND_DIMENSIONS, degrees: Iterable[int] = POLYBOUND_DEGREES,
                    trials: int = 1000, seed: int = 0, grid_per_axis: int = MIN_GRID_PER_AXIS,
                    max_y_points: Optional[int] = DEFAULT_MAX_Y_POINTS, workers: int = 1,
                    strict: bool = False) -> SuiteReport:
    """Randomized trials of the polynomial sampling bound on the unit cube."""
    if not isinstance(trials, int) or trials < 1:
        raise InvalidArgumentError(f"trials must be a positive integer, got {trials!r}")
    if grid_per_axis < MIN_GRID_PER_AXIS:
        raise InvalidArgumentError(f"grid needs at least {MIN_GRID_PER_AXIS} points per axis, got {grid_per_axis}")
    report = SuiteReport(name="polybound", strict=strict)
    cases = [(n, k) for n in dimensions for k in degrees]
    for (n, k), case_seed in zip(cases, child_seeds(seed, len(cases))):
        tasks = [(n, k, s, grid_per_axis, max_y_points) for s in child_seeds(case_seed, trials)]
        results = run_pool(_trial_case, tasks, workers)
        for t in results:
            case = {"n": n, "k": k, "seed": t.seed}
            report.record("lemma1", t.passed, case,
                          detail=f"ln ratio {math.log(t.ratio)!r} > ln bound {t.log_bound!r}")
            report.record("ratio_floor", t.ratio >= RATIO_FLOOR, case, detail=f"ratio {t.ratio!r} < 1")
        report.trials.extend(results)
        passes = sum(t.passed for t in results)
        report.cases.append({
            "n": n,
            "k": k,
            "q": results[0].q,
            "trials": trials,
            "passes": passes,
            "max_ratio": max(t.ratio for t in results),
            "log_bound": results[0].log_bound,
            "y_exhaustive": all(t.y_exhaustive for t in results),
        })
        logger.debug(f"Polynomial trials n={n} k={k}: {passes}/{trials} pass")
    report.summary = {"seed": seed, "grid_per_axis": grid_per_axis, "max_y_points": max_y_points}
    logger.info(f"Polynomial suite: {len(report.trials)} trials, {len(report.violations)} violations")
    return report


def trial_csv(trials: Sequence[TrialReport]) -> str:
    header = ["seed", "n", "k", "q", "ratio", "log_bound", "pass"]
    return csv_text(header, ([t.seed, t.n, t.k, t.q, t.ratio, t.log_bound, t.passed] for t in trials))


def random_spline_1d(seed: int, max_centers: int = 4) -> SplineModel:
    """1-D spline on [0, 1] with well-separated centers and coefficients in [-1, 1]."""
    rng = np.random.default_rng(seed)
    beta = float(rng.choice(INEQUALITY5_BETAS))
    count = int(rng.integers(1, max_centers + 1))
    separation = 0.1 / math.sqrt(beta)
    for _ in range(100):
        centers = np.sort(rng.uniform(0.0, 1.0, count))
        if count == 1 or np.min(np.diff(centers)) >= separation:
            break
    else:
        centers = np.linspace(0.0, 1.0, count)
    coefficients = rng.uniform(-1.0, 1.0, count)
    return from_coefficients(GaussianKernel(beta, 1), centers.reshape(-1, 1), coefficients)


def _inequality5_case(args: Tuple[int, int]):
    model_seed, trials = args
    model = random_spline_1d(model_seed)
    return model, verify_inequality5(model, model_seed + 1, trials)


def inequality5_suite(models: int = 5, trials: int = 100, seed: int = 0, workers: int = 1,
                      strict: bool = False) -> SuiteReport:
    """Native-space inequality against random bump functions for random 1-D splines."""
    if not isinstance(models, int) or models < 1:
        raise InvalidArgumentError(f"models must be a positive integer, got {models!r}")
    report = SuiteReport(name="inequality5", strict=strict)
    tasks = [(s, trials) for s in child_seeds(seed, models)]
    for (model_seed, _), (model, result) in zip(tasks, run_pool(_inequality5_case, tasks, workers)):
        for i, t in enumerate(result.trials):
            report.record("inequality5", t.passed, {"model_seed": model_seed, "trial": i},
                          detail=f"lhs {t.lhs!r} > rhs {t.rhs!r}")
        report.cases.append({
            "model_seed": model_seed,
            "beta": model.beta,
            "centers": len(model.centers),
            "native_norm": result.norm,
            "trials": len(result.trials),
            "worst_ratio": result.worst_ratio,
        })

    zero = from_coefficients(GaussianKernel(1.0, 1), [[0.0]], [0.0])
    zero_report = verify_inequality5(zero, seed, 1)
    report.record("zero_model", zero_report.passed and zero_report.trials[0].lhs == 0.0, {"model": "zero"},
                  detail=f"lhs {zero_report.trials[0].lhs!r}")

    single = from_coefficients(GaussianKernel(1.0, 1), [[0.0]], [1.0])
    report.summary = {
        "models": models,
        "trials_per_model": trials,
        "concentration": {
            "widths": list(CONCENTRATION_WIDTHS),
            "ratios": concentration_ratios(single, CONCENTRATION_WIDTHS),
        },
    }
    logger.info(f"Inequality suite: {report.checks} checks, {len(report.violations)} violations")
    return report
