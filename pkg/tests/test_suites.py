import pytest

from rbf_certify import suites
from rbf_certify.errors import InvalidArgumentError


@pytest.fixture(scope="module")
def moments_report():
    return suites.moments_suite(workers=2)


def test_stirling_documented_violations():
    report = suites.stirling_suite(kmax=100)
    found = {(v.check, v.case["k"]) for v in report.violations}
    assert found == {("upper_l3", 2), ("upper_l3", 3), ("upper_l4", 3)}
    assert all(v.documented for v in report.violations)
    assert report.passed
    assert report.checks == 300
    assert [s["k"] for s in report.summary["samples"]] == [1, 10, 100]


def test_stirling_strict_fails():
    report = suites.stirling_suite(kmax=10, strict=True)
    assert not report.passed
    assert report.to_dict()["documented_violations"] == 3


def test_stirling_rejects_bad_kmax():
    with pytest.raises(InvalidArgumentError):
        suites.stirling_suite(kmax=0)


def test_moments_sweep_size(moments_report):
    assert moments_report.summary["triples"] == 600
    assert len(moments_report.cases) == 600


def test_moments_only_documented_failures(moments_report):
    assert moments_report.passed
    assert {v.check for v in moments_report.violations} == {"lemma5"}
    failing = {(v.case["n"], v.case["k"]) for v in moments_report.violations}
    assert failing == {(2, 6), (4, 4), (6, 2)}
    assert len(moments_report.violations) == 15
    assert all(v.documented for v in moments_report.violations)


def test_moments_quadrature_oracle_ran(moments_report):
    assert moments_report.summary["quadrature_cases"] > 0
    checks = [c for c in moments_report.cases if c["quadrature"] is not None]
    assert all(c["quadrature_rel_error"] <= 1e-8 for c in checks)


def test_i_chain_sequence_decreases():
    chain = suites.i_chain_sequence()
    assert len(chain) == suites.I_CHAIN_STEPS
    assert all(b.logmag < a.logmag for a, b in zip(chain, chain[1:]))


def test_polybound_suite_small():
    report = suites.polybound_suite(dimensions=(1, 2), degrees=(0, 1), trials=5, seed=3)
    assert report.passed
    assert not report.violations
    assert [(c["n"], c["k"]) for c in report.cases] == [(1, 0), (1, 1), (2, 0), (2, 1)]
    assert all(c["passes"] == 5 for c in report.cases)
    assert len(report.trials) == 20


def test_polybound_suite_is_reproducible():
    a = suites.polybound_suite(dimensions=(1,), degrees=(2,), trials=4, seed=11)
    b = suites.polybound_suite(dimensions=(1,), degrees=(2,), trials=4, seed=11, workers=2)
    assert [t.ratio for t in a.trials] == [t.ratio for t in b.trials]
    assert [t.seed for t in a.trials] == [t.seed for t in b.trials]


def test_polybound_suite_rejects_coarse_grid():
    with pytest.raises(InvalidArgumentError):
        suites.polybound_suite(trials=1, grid_per_axis=10)


def test_trial_csv():
    report = suites.polybound_suite(dimensions=(1,), degrees=(1,), trials=2, seed=0)
    lines = suites.trial_csv(report.trials).splitlines()
    assert lines[0] == "seed,n,k,q,ratio,log_bound,pass"
    assert len(lines) == 3
    assert lines[1].split(",")[1:4] == ["1", "1", "4"]


def test_inequality5_suite_small():
    report = suites.inequality5_suite(models=2, trials=5, seed=1)
    assert report.passed
    assert len(report.cases) == 2
    assert report.checks == 2 * 5 + 1
    ratios = report.summary["concentration"]["ratios"]
    assert len(ratios) == len(suites.CONCENTRATION_WIDTHS)
    assert all(r <= 1.0 + 1e-6 for r in ratios)


def test_random_spline_1d():
    model = suites.random_spline_1d(5)
    assert model.n == 1
    assert model.beta in suites.INEQUALITY5_BETAS
    assert 1 <= len(model.centers) <= 4


def test_child_seeds_deterministic_and_distinct():
    seeds = suites.child_seeds(0, 10)
    assert seeds == suites.child_seeds(0, 10)
    assert len(set(seeds)) == 10
    assert seeds != suites.child_seeds(1, 10)


def test_run_pool_preserves_order():
    assert suites.run_pool(lambda x: x * x, list(range(20)), workers=4) == [x * x for x in range(20)]


def test_report_to_dict():
    report = suites.SuiteReport(name="demo")
    report.record("a", True, {})
    report.record("b", False, {"k": 1}, documented=True)
    data = report.to_dict()
    assert data["suite"] == "demo"
    assert data["checks"] == 2
    assert data["violations"] == 1
    assert data["documented_violations"] == 1
    assert data["passed"] is True
    report.record("c", False, {"k": 2})
    assert not report.passed
    assert len(report.undocumented) == 1
