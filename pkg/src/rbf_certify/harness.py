#!/usr/bin/env python3
"""
rbf-certify command-line harness

Subcommands: certify | verify | converge | fill-distance | fit | eval.
Reports go to --out or stdout (JSON for reports, CSV for tables); logs go
to stderr. Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numerical failure.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, constants, converge, reporting, suites
from .constants import Variant
from .errors import (
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    DomainError,
    InvalidArgumentError,
    RangeError,
    RbfCertifyError,
)
from .geometry import Cube, cover_check, fill_distance
from .interp import GaussianKernel, evaluate_many, fit

# Configure logger
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated parameters of one harness invocation."""
    command: str
    n: Tuple[int, ...] = (1,)
    beta: float = 1.0
    b0: float = 1.0
    variant: Variant = Variant.GENERAL
    base_variant: Variant = Variant.GENERAL
    deltas: Tuple[float, ...] = ()
    norm_f: float = 1.0
    seed: int = 0
    suite: str = "all"
    kmax: int = 10_000
    dimensions: Tuple[int, ...] = suites.POLYBOUND_DIMENSIONS
    degrees: Tuple[int, ...] = suites.POLYBOUND_DEGREES
    trials: int = 1000
    grid_per_axis: int = suites.MIN_GRID_PER_AXIS
    max_y_points: Optional[int] = suites.DEFAULT_MAX_Y_POINTS
    models: int = 5
    phi_trials: int = 100
    strict: bool = False
    trials_csv: Optional[str] = None
    resolution: int = converge.DEFAULT_RESOLUTION
    eval_points: Optional[int] = None
    target_centers: int = converge.DEFAULT_TARGET_CENTERS
    zero_target: bool = False
    jitter: float = 0.0
    points: Optional[str] = None
    model: Optional[str] = None
    min_corner: Tuple[float, ...] = ()
    side: float = 1.0
    out: Optional[str] = None
    workers: int = 1
    verbose: bool = False

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "ExperimentConfig":
        values = {}
        for name in cls.__dataclass_fields__:
            if name == "command":
                continue
            value = getattr(args, name, None)
            if value is None:
                continue
            values[name] = value
        if "n" in values and isinstance(values["n"], int):
            values["n"] = (values["n"],)
        for name in ("n", "deltas", "dimensions", "degrees", "min_corner"):
            if name in values:
                values[name] = tuple(values[name])
        for name in ("variant", "base_variant"):
            if name in values:
                values[name] = Variant.parse(values[name])
        if values.get("max_y_points") == 0:
            values["max_y_points"] = None
        config = cls(command=args.command, **values)
        config.validate()
        return config

    @property
    def dimension(self) -> int:
        return self.n[0]

    def validate(self) -> None:
        """Check every numeric parameter against the library preconditions."""
        for n in self.n + self.dimensions:
            if n < 1:
                raise RangeError(f"--n must be a positive integer, got {n}")
        for name in ("beta", "b0", "side"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"--{name.replace('_', '-')} must be positive, got {getattr(self, name)}")
        for delta in self.deltas:
            if delta <= 0.0:
                raise DomainError(f"--delta values must be positive, got {delta}")
        if self.norm_f < 0.0:
            raise DomainError(f"--norm must be non-negative, got {self.norm_f}")
        if self.jitter < 0.0:
            raise DomainError(f"--jitter must be non-negative, got {self.jitter}")
        for name in ("kmax", "trials", "models", "phi_trials", "resolution", "workers", "target_centers"):
            if getattr(self, name) < 1:
                raise InvalidArgumentError(f"--{name.replace('_', '-')} must be at least 1")
        if self.seed < 0:
            raise InvalidArgumentError(f"--seed must be non-negative, got {self.seed}")
        if self.command == "verify" and self.suite not in suites.SUITES + ("all",):
            raise InvalidArgumentError(f"unknown suite {self.suite!r}")


def cmd_certify(config: ExperimentConfig) -> int:
    n = config.dimension
    cert = constants.certificate(n, config.beta, config.b0, config.variant, config.base_variant)
    report = reporting.certificate_report(cert)
    if config.deltas:
        report["bounds"] = [_bound_entry(cert, d, config.norm_f) for d in config.deltas]
    reporting.write_output(reporting.dumps(report), config.out)
    logger.info(f"Certified n={n} variant={cert.variant.value}: ln C = {cert.C_base.logmag:.6f}")
    return EXIT_OK


def _bound_entry(cert: constants.Certificate, delta: float, norm_f: float) -> dict:
    entry = {"delta": delta, "norm_f": norm_f, "log10_rate": constants.rate_log10(cert, delta)}
    if constants.is_admissible(cert, delta):
        entry["bound"] = constants.bound_value(cert, delta, norm_f)
    else:
        entry["bound"] = converge.OUT_OF_CERTIFICATE
    return entry


def run_suites(config: ExperimentConfig) -> List[suites.SuiteReport]:
    names = suites.SUITES if config.suite == "all" else (config.suite,)
    reports = []
    for name in names:
        logger.info(f"Running {name} suite...")
        if name == "stirling":
            reports.append(suites.stirling_suite(config.kmax, strict=config.strict))
        elif name == "moments":
            reports.append(suites.moments_suite(workers=config.workers, strict=config.strict))
        elif name == "polybound":
            reports.append(suites.polybound_suite(
                dimensions=config.dimensions, degrees=config.degrees, trials=config.trials, seed=config.seed,
                grid_per_axis=config.grid_per_axis, max_y_points=config.max_y_points,
                workers=config.workers, strict=config.strict,
            ))
        else:
            reports.append(suites.inequality5_suite(
                models=config.models, trials=config.phi_trials,
                seed=config.seed, workers=config.workers, strict=config.strict,
            ))
    return reports


def cmd_verify(config: ExperimentConfig) -> int:
    reports = run_suites(config)
    passed = all(r.passed for r in reports)
    if config.suite == "all":
        body = {"passed": passed, "suites": [r.to_dict() for r in reports]}
    else:
        body = reports[0].to_dict()
    reporting.write_output(reporting.dumps(body), config.out)
    trials = [t for r in reports for t in r.trials]
    if config.trials_csv and trials:
        reporting.write_output(suites.trial_csv(trials), config.trials_csv)
    for r in reports:
        logger.info(f"Suite {r.name}: {'PASS' if r.passed else 'FAIL'} ({r.checks} checks, {len(r.violations)} violations)")
    return EXIT_OK if passed else EXIT_VERIFICATION_FAILED


def cmd_converge(config: ExperimentConfig) -> int:
    rows = converge.converge(
        config.dimension, config.beta, config.b0,
        deltas=config.deltas or converge.DEFAULT_DELTAS,
        seed=config.seed,
        variant=config.variant,
        base_variant=config.base_variant,
        target_centers=config.target_centers,
        zero_target=config.zero_target,
        resolution=config.resolution,
        eval_points=config.eval_points,
        jitter=config.jitter,
        workers=config.workers,
    )
    reporting.write_output(converge.rows_csv(rows), config.out)
    return EXIT_OK


def _require(value: Optional[str], flag: str) -> str:
    if not value:
        raise InvalidArgumentError(f"{flag} is required")
    return value


def cmd_fill_distance(config: ExperimentConfig) -> int:
    points = reporting.read_points_csv(_require(config.points, "--points"))
    corner = np.array(config.min_corner) if config.min_corner else np.zeros(points.n)
    cube = Cube(corner, config.side)
    if cube.n != points.n:
        raise InvalidArgumentError(f"--min-corner has {cube.n} coordinates, points have {points.n}")
    lower, upper = fill_distance(cube, points, config.resolution)
    report = {
        "n": points.n,
        "num_points": len(points),
        "min_corner": cube.min_corner,
        "side": cube.side,
        "resolution": config.resolution,
        "fill_distance_lower": lower,
        "fill_distance_upper": upper,
    }
    if config.deltas:
        report["cover"] = []
        for delta in config.deltas:
            result = cover_check(cube, points, delta)
            report["cover"].append({
                "delta": delta,
                "passed": result.passed,
                "cells_per_axis": result.cells_per_axis,
                "witness": list(result.witness) if result.witness is not None else None,
            })
    reporting.write_output(reporting.dumps(report), config.out)
    return EXIT_OK


def cmd_fit(config: ExperimentConfig) -> int:
    points, values = reporting.read_samples_csv(_require(config.points, "--points"))
    model = fit(GaussianKernel(config.beta, points.n), points, values, jitter=config.jitter)
    logger.info(f"Fitted {len(points)} centers, condition estimate {model.condition_estimate:.3e}")
    reporting.write_output(reporting.model_json(model), config.out)
    return EXIT_OK


def cmd_eval(config: ExperimentConfig) -> int:
    model = reporting.read_model(_require(config.model, "--model"))
    points = reporting.read_points_csv(_require(config.points, "--points"), n=model.n)
    values = evaluate_many(model, points)
    header = [f"x{i + 1}" for i in range(model.n)] + ["value"]
    rows = (list(p) + [v] for p, v in zip(points.points.tolist(), values.tolist()))
    reporting.write_output(reporting.csv_text(header, rows), config.out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[ExperimentConfig], int]] = {
    "certify": cmd_certify,
    "verify": cmd_verify,
    "converge": cmd_converge,
    "fill-distance": cmd_fill_distance,
    "fit": cmd_fit,
    "eval": cmd_eval,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=str, help="Output path (default: stdout)")
    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable verbose (DEBUG level) logging. Default is INFO level."
    )


def _add_certificate(parser: argparse.ArgumentParser, variants: bool = True) -> None:
    parser.add_argument("--beta", type=float, default=1.0, help="Gaussian shape parameter (default: 1)")
    parser.add_argument("--b0", type=float, default=1.0, help="Minimum cube side (default: 1)")
    if variants:
        parser.add_argument(
            "--variant",
            type=str,
            default="general",
            choices=["general", "n1-improved", "n1_improved", "fill-distance", "fill_distance"],
            help="Certificate variant (default: general)"
        )
        parser.add_argument(
            "--base-variant",
            type=str,
            default="general",
            choices=["general", "n1-improved", "n1_improved"],
            help="Certificate the fill-distance form is derived from (default: general)"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbf-certify",
        description="Error-bound certificates for Gaussian RBF interpolation"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="Compute the constants of a certificate")
    p.add_argument("--n", type=int, required=True, help="Dimension")
    _add_certificate(p)
    p.add_argument("--delta", dest="deltas", type=float, nargs="+", help="Spacings at which to evaluate the bound")
    p.add_argument("--norm", dest="norm_f", type=float, default=1.0, help="Native norm of f (default: 1)")
    _add_common(p)

    p = sub.add_parser("verify", help="Run verification suites")
    p.add_argument("--suite", type=str, default="all", choices=list(suites.SUITES) + ["all"], help="Suite to run")
    p.add_argument("--kmax", type=int, default=10_000, help="Largest k of the Stirling sweep (default: 10000)")
    p.add_argument("--n", dest="dimensions", type=int, nargs="+", help="Dimensions of the polynomial trials (default: 1 2 3)")
    p.add_argument("--k", dest="degrees", type=int, nargs="+", help="Degrees of the polynomial trials (default: 0 1 2)")
    p.add_argument("--trials", type=int, default=1000, help="Trials per case (default: 1000)")
    p.add_argument("--grid-per-axis", type=int, default=suites.MIN_GRID_PER_AXIS,
                   help=f"Grid points per axis for sup over Q (default: {suites.MIN_GRID_PER_AXIS})")
    p.add_argument("--max-y-points", type=int, default=suites.DEFAULT_MAX_Y_POINTS,
                   help="Subcubes sampled per trial, 0 for all (default: %(default)s)")
    p.add_argument("--models", type=int, default=5, help="Random spline models for the inequality suite (default: 5)")
    p.add_argument("--phi-trials", type=int, default=100, help="Test functions per spline model (default: 100)")
    p.add_argument("--seed", type=int, default=0, help="Root seed (default: 0)")
    p.add_argument("--workers", type=int, default=1, help="Worker threads (default: 1)")
    p.add_argument("--strict", action="store_true", help="Fail on documented violations too")
    p.add_argument("--csv", dest="trials_csv", type=str, help="Write polynomial trial rows to this CSV path")
    _add_common(p)

    p = sub.add_parser("converge", help="Observed interpolation error against the certified bound")
    p.add_argument("--n", type=int, default=1, choices=list(converge.SUPPORTED_DIMENSIONS), help="Dimension")
    _add_certificate(p)
    p.add_argument("--delta", dest="deltas", type=float, nargs="+", help="Spacings (default: 0.2 0.1 0.05 0.02 0.01)")
    p.add_argument("--seed", type=int, default=0, help="Root seed (default: 0)")
    p.add_argument("--target-centers", type=int, default=converge.DEFAULT_TARGET_CENTERS,
                   help="Centers of the target spline")
    p.add_argument("--zero-target", action="store_true", help="Interpolate the zero function")
    p.add_argument("--resolution", type=int, default=converge.DEFAULT_RESOLUTION,
                   help="Fill-distance grid cells per axis")
    p.add_argument("--eval-points", type=int, help="Error grid points per axis")
    p.add_argument("--jitter", type=float, default=0.0, help="Diagonal jitter added to the kernel matrix (default: 0)")
    p.add_argument("--workers", type=int, default=1, help="Worker threads (default: 1)")
    _add_common(p)

    p = sub.add_parser("fill-distance", help="Fill-distance bracket of a point set")
    p.add_argument("--points", type=str, required=True, help="Point CSV, one point per row ('-' for stdin)")
    p.add_argument("--min-corner", type=float, nargs="+", help="Cube minimum corner (default: origin)")
    p.add_argument("--side", type=float, default=1.0, help="Cube side (default: 1)")
    p.add_argument("--resolution", type=int, default=256, help="Grid cells per axis (default: 256)")
    p.add_argument("--delta", dest="deltas", type=float, nargs="+", help="Also run the cover check at these spacings")
    _add_common(p)

    p = sub.add_parser("fit", help="Fit a Gaussian spline to samples")
    p.add_argument("--points", type=str, required=True, help="Sample CSV: x1,...,xn,value per row")
    _add_certificate(p, variants=False)
    p.add_argument("--jitter", type=float, default=0.0, help="Diagonal jitter (default: 0)")
    _add_common(p)

    p = sub.add_parser("eval", help="Evaluate a fitted spline")
    p.add_argument("--model", type=str, required=True, help="Model JSON written by fit")
    p.add_argument("--points", type=str, required=True, help="Point CSV")
    _add_common(p)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    return build_parser().parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the harness."""
    args = parse_args(argv)

    # Configure logging
    log_level = logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)]
    )

    try:
        config = ExperimentConfig.from_namespace(args)
        logger.debug(f"Running {config.command} with {config}")
        return COMMANDS[config.command](config)
    except RbfCertifyError as e:
        logger.error(f"{args.command} failed: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
