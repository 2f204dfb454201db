import json
import math

import numpy as np
import pytest

from rbf_certify import constants, reporting
from rbf_certify.errors import InvalidArgumentError, ParseError
from rbf_certify.geometry import PointSet
from rbf_certify.interp import GaussianKernel, from_coefficients
from rbf_certify.numerics import LogScalar


def test_format_float_seventeen_digits():
    assert reporting.format_float(0.1) == "0.10000000000000001"
    assert float(reporting.format_float(1 / 3)) == 1 / 3
    assert reporting.format_float(math.inf) == "inf"
    assert reporting.format_float(math.nan) == "nan"


def test_dumps_is_valid_json():
    text = reporting.dumps({"a": 1, "b": [0.5, 2], "c": LogScalar.from_log(2000.0), "d": None, "e": [{"x": True}]})
    data = json.loads(text)
    assert data["b"] == [0.5, 2]
    assert data["c"]["ln"] == 2000.0
    assert data["c"]["sign"] == 1
    assert data["e"][0]["x"] is True
    assert text.endswith("}\n")


def test_dumps_keeps_numeric_rows_inline():
    text = reporting.dumps({"row": [1.0, 2.0, 3.0]})
    assert '"row": [1, 2, 3]' in text


def test_dumps_non_finite_as_strings():
    data = json.loads(reporting.dumps({"x": math.inf, "y": math.nan}))
    assert data == {"x": "inf", "y": "nan"}


def test_dumps_numpy_and_enum():
    data = json.loads(reporting.dumps({"v": constants.Variant.GENERAL, "a": np.arange(3), "f": np.float64(0.25)}))
    assert data == {"v": "general", "a": [0, 1, 2], "f": 0.25}


def test_csv_text():
    text = reporting.csv_text(["a", "b", "c"], [[1, 0.1, True], [LogScalar.from_log(1.5), None, False]])
    assert text == "a,b,c\n1,0.10000000000000001,true\n1.5,,false\n"


def test_parse_numeric_csv_header_and_comments():
    text = "x,y\n# comment\n0.5,1\n\n1.5,2\n"
    assert reporting.parse_numeric_csv(text).tolist() == [[0.5, 1.0], [1.5, 2.0]]


@pytest.mark.parametrize("text, line", [
    ("0.5,1\n0.25,abc\n", 2),
    ("0.5,1\n0.25\n", 2),
    ("x,y\n0.5,1\n1,2,3\n", 3),
    ("1,2\ninf,3\n", 2),
])
def test_parse_numeric_csv_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        reporting.parse_numeric_csv(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}: ")


def test_parse_numeric_csv_column_count():
    with pytest.raises(ParseError):
        reporting.parse_numeric_csv("1,2\n", columns=3)
    with pytest.raises(ParseError):
        reporting.parse_numeric_csv("# nothing\n")


def test_read_samples_csv(tmp_path):
    path = tmp_path / "samples.csv"
    path.write_text("x1,x2,f\n0,0,1\n1,0,2\n")
    points, values = reporting.read_samples_csv(str(path))
    assert points.n == 2
    assert values.tolist() == [1.0, 2.0]


def test_read_missing_file(tmp_path):
    with pytest.raises(ParseError):
        reporting.read_points_csv(str(tmp_path / "missing.csv"))


def test_points_csv():
    assert reporting.points_csv(PointSet([[0.5, 0.25]])) == "x1,x2\n0.5,0.25\n"


def test_model_json_io(tmp_path):
    model = from_coefficients(GaussianKernel(2.0, 1), [[0.0], [0.3]], [0.1, -0.7])
    path = tmp_path / "model.json"
    path.write_text(reporting.model_json(model))
    restored = reporting.read_model(str(path))
    assert restored.beta == 2.0
    assert restored.coefficients.tolist() == [0.1, -0.7]


def test_parse_model_json_errors():
    with pytest.raises(ParseError) as info:
        reporting.parse_model_json('{\n  "beta": 1,\n  oops\n}')
    assert info.value.line == 3
    with pytest.raises(ParseError):
        reporting.parse_model_json("[1, 2]")
    with pytest.raises(InvalidArgumentError):
        reporting.parse_model_json('{"beta": 1, "n": 1, "centers": [[0.0]]}')


def test_certificate_report_general():
    cert = constants.certificate(1, 1.0, 1.0)
    report = reporting.certificate_report(cert)
    assert report["c"] == 0.0625
    assert report["gamma_n"] == 2
    assert report["ln_C"] == pytest.approx(24.47, abs=0.01)
    assert "c_prime" not in report


def test_certificate_report_fill_distance():
    cor = constants.certificate(1, 1.0, 1.0, "fill_distance")
    report = reporting.certificate_report(cor)
    assert report["c"] == 0.0625
    assert report["c_prime"] == 0.03125
    assert report["ln_C_prime"] == pytest.approx(report["ln_C"] + math.log(2.0))
    assert report["d0"] == pytest.approx(report["delta0"] / 2)
    json.loads(reporting.dumps(report))
