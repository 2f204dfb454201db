"""Deterministic JSON and CSV rendering, and the CSV/JSON readers.

Every float is written with 17 significant digits so that reports round
trip exactly and repeated runs are byte-identical. LogScalars are written
as ``{"sign", "ln", "rendered"}`` objects and never materialized as floats.
"""

import csv
import io
import json
import logging
import math
import sys
from dataclasses import fields, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .constants import Certificate, Variant, named_constants
from .errors import ParseError
from .geometry import PointSet
from .interp import SplineModel
from .numerics import LogScalar

logger = logging.getLogger(__name__)

INDENT = "  "


def format_float(x: float) -> str:
    """17 significant digits, locale independent; non-finite values as words."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def log_scalar_dict(value: LogScalar) -> dict:
    return {"sign": value.sign, "ln": value.logmag, "rendered": value.render()}


def to_jsonable(obj: Any) -> Any:
    """Convert library values to plain dicts, lists and scalars."""
    if isinstance(obj, LogScalar):
        return log_scalar_dict(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, PointSet):
        return to_jsonable(obj.points)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj) if not f.name.startswith("_")}
    return obj


def _emit(value: Any, depth: int, out: List[str]) -> None:
    pad = INDENT * (depth + 1)
    if value is None:
        out.append("null")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        # JSON has no literal for non-finite numbers
        out.append(format_float(value) if math.isfinite(value) else json.dumps(format_float(value)))
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            out.append(f"{pad}{json.dumps(key)}: ")
            _emit(item, depth + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(INDENT * depth + "}")
    elif isinstance(value, list):
        if not value:
            out.append("[]")
            return
        # numeric rows stay on one line
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            parts = []
            for v in value:
                piece: List[str] = []
                _emit(v, depth + 1, piece)
                parts.append("".join(piece))
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for i, item in enumerate(value):
            out.append(pad)
            _emit(item, depth + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(INDENT * depth + "]")
    else:
        raise TypeError(f"cannot render {type(value).__name__} as JSON")


def dumps(obj: Any) -> str:
    """Render ``obj`` as indented JSON with 17-digit floats and a trailing newline."""
    out: List[str] = []
    _emit(to_jsonable(obj), 0, out)
    out.append("\n")
    return "".join(out)


def format_cell(value: Any) -> str:
    if isinstance(value, LogScalar):
        return format_float(value.logmag)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if value is None:
        return ""
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()


def write_output(text: str, out: Optional[str] = None) -> None:
    """Write a report to ``out`` or stdout."""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(text)} bytes to {path}")


def read_text(source: str) -> str:
    """Contents of a path, or stdin for ``-``."""
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {source}: {e.strerror}") from e


def parse_numeric_csv(text: str, columns: Optional[int] = None) -> np.ndarray:
    """Rows of floats; blank lines and ``#`` comments are skipped.

    A first row that does not parse is taken as a header. Every other
    malformed row raises ParseError carrying its 1-based line number.
    """
    rows: List[List[float]] = []
    width = columns
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not record or all(not cell.strip() for cell in record) or record[0].lstrip().startswith("#"):
            continue
        try:
            row = [float(cell) for cell in record]
        except ValueError:
            if not rows and lineno == 1:
                logger.debug(f"Skipping CSV header {record}")
                continue
            raise ParseError(f"non-numeric value in {record}", line=lineno) from None
        if not all(math.isfinite(v) for v in row):
            raise ParseError("non-finite value", line=lineno)
        if width is None:
            width = len(row)
        if len(row) != width:
            raise ParseError(f"expected {width} columns, got {len(row)}", line=lineno)
        rows.append(row)
    if not rows:
        raise ParseError("no data rows")
    return np.array(rows, dtype=float)


def read_points_csv(source: str, n: Optional[int] = None) -> PointSet:
    return PointSet(parse_numeric_csv(read_text(source), columns=n))


def read_samples_csv(source: str, n: Optional[int] = None) -> Tuple[PointSet, np.ndarray]:
    """Points and values from rows ``x_1, ..., x_n, value``."""
    table = parse_numeric_csv(read_text(source), columns=None if n is None else n + 1)
    if table.shape[1] < 2:
        raise ParseError("sample rows need at least one coordinate and a value")
    return PointSet(table[:, :-1]), table[:, -1]


def points_csv(points: PointSet) -> str:
    header = [f"x{i + 1}" for i in range(points.n)]
    return csv_text(header, points.points.tolist())


def model_json(model: SplineModel) -> str:
    data = model.to_dict()
    data["condition_estimate"] = model.condition_estimate
    data["jitter"] = model.jitter
    data["residual"] = model.residual
    return dumps(data)


def parse_model_json(text: str) -> SplineModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from e
    if not isinstance(data, dict):
        raise ParseError("model JSON must be an object")
    return SplineModel.from_dict(data)


def read_model(source: str) -> SplineModel:
    return parse_model_json(read_text(source))


def certificate_report(cert: Certificate) -> dict:
    """Every constant of a certificate, as written by ``certify``."""
    base = cert.parent if cert.variant is Variant.FILL_DISTANCE else cert
    rhos = named_constants(cert.beta)
    report = {
        "n": cert.n,
        "beta": cert.beta,
        "b0": cert.b0,
        "variant": cert.variant,
        "gamma_n": cert.gamma_n,
        "rho": rhos["rho"],
        "rho1": rhos["rho1"],
        "rho2": rhos["rho2"],
        "rho3": cert.rho3,
        "B_prime": cert.b_prime,
        "B_double_prime": cert.b_double_prime,
        "Delta_double_prime": cert.delta_pp,
        "ln_C": base.C_base.logmag,
        "C": base.C_base,
        "c": base.c_exp,
        "delta_n": cert.delta_n,
        "delta0": base.delta0,
        "ln_delta0": base.log_delta0,
        "delta0_underflow": base.delta0_underflow,
    }
    if cert.variant is Variant.FILL_DISTANCE:
        report.update({
            "ln_C_prime": cert.C_base.logmag,
            "C_prime": cert.C_base,
            "c_prime": cert.c_exp,
            "d0": cert.delta0,
            "ln_d0": cert.log_delta0,
            "d0_underflow": cert.delta0_underflow,
        })
    return report
