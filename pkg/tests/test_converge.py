import math

import pytest

from rbf_certify import constants, converge
from rbf_certify.errors import InvalidArgumentError


def test_zero_target_reproduced_exactly():
    rows = converge.converge(1, 1.0, 1.0, deltas=(0.1, 0.02, 0.01), zero_target=True, resolution=64)
    assert all(r.max_error is not None and r.max_error <= 1e-12 for r in rows)
    assert all(r.native_norm == 0.0 for r in rows)


def test_rows_sorted_by_descending_delta():
    rows = converge.converge(1, 1.0, 1.0, deltas=(0.05, 0.2, 0.1), resolution=64)
    assert [r.delta for r in rows] == [0.2, 0.1, 0.05]
    assert [r.num_points for r in rows] == [5, 10, 20]
    assert all(r.cover_pass for r in rows)


def test_practical_spacings_are_out_of_certificate():
    rows = converge.converge(1, 1.0, 1.0, deltas=(0.2,), resolution=64)
    assert rows[0].log10_bound is None
    assert converge.OUT_OF_CERTIFICATE in converge.rows_csv(rows)


def test_rate_column_matches_certificate():
    rows = converge.converge(1, 1.0, 1.0, deltas=(0.1,), resolution=64)
    cert = constants.certificate(1, 1.0, 1.0)
    assert rows[0].log10_rate == pytest.approx(constants.rate_log10(cert, 0.1))


def test_fill_distance_variant_uses_fill_distance():
    rows = converge.converge(1, 1.0, 1.0, deltas=(0.1,), variant="fill_distance", resolution=64)
    cert = constants.certificate(1, 1.0, 1.0, "fill_distance")
    assert rows[0].log10_rate == pytest.approx(constants.rate_log10(cert, rows[0].fill_distance_upper))


def test_fill_distance_bracket_in_rows():
    rows = converge.converge(2, 4.0, 1.0, deltas=(0.25,), resolution=32, eval_points=11)
    row = rows[0]
    assert row.num_points == 16
    assert row.fill_distance_lower <= row.fill_distance_upper
    assert row.fill_distance_upper <= math.sqrt(2) * 0.25 + 0.5 * math.sqrt(2) / 32
    assert row.max_error is not None and math.isfinite(row.max_error)
    assert row.flag == ""


def test_ill_conditioned_rows_are_flagged():
    rows = converge.converge(1, 1.0, 1.0, deltas=(0.01,), resolution=64)
    assert rows[0].flag == "ill-conditioned"
    assert rows[0].max_error is None
    assert rows[0].log10_error is None


def test_rows_csv_is_reproducible():
    a = converge.rows_csv(converge.converge(1, 2.0, 1.0, deltas=(0.2, 0.1), seed=4, resolution=64))
    b = converge.rows_csv(converge.converge(1, 2.0, 1.0, deltas=(0.2, 0.1), seed=4, resolution=64, workers=2))
    assert a == b
    assert a.splitlines()[0] == ",".join(converge.HEADER)
    assert len(a.splitlines()) == 3


def test_target_spline():
    cube = converge.Cube.unit(1)
    target = converge.target_spline(cube, 1.0, seed=0, centers=3)
    assert len(target.centers) == 3
    assert cube.contains(target.centers.points).all()
    zero = converge.target_spline(cube, 1.0, seed=0, centers=3, zero=True)
    assert not zero.coefficients.any()


def test_converge_errors():
    with pytest.raises(InvalidArgumentError):
        converge.converge(3, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        converge.converge(1, 1.0, 1.0, deltas=())


def test_jitter_rows_report_residual():
    rows = converge.converge(1, 1.0, 1.0, deltas=(0.1,), jitter=1e-3, resolution=64)
    assert rows[0].flag == "not-interpolating"
    assert rows[0].residual > 0.0
    assert rows[0].jitter == 1e-3
    plain = converge.converge(1, 4.0, 1.0, deltas=(0.2,), resolution=64)
    assert plain[0].flag == ""
    assert plain[0].residual <= 1e-7


def test_fill_distance_variant_from_improved_base():
    rows = converge.converge(1, 1.0, 1.0, deltas=(0.1,), variant="fill_distance", base_variant="n1_improved",
                             resolution=64)
    cert = constants.certificate(1, 1.0, 1.0, "fill_distance", base_variant="n1_improved")
    assert cert.c_exp == 0.0625
    assert rows[0].log10_rate == pytest.approx(constants.rate_log10(cert, rows[0].fill_distance_upper))
