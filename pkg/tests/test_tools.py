import math

import pytest

from rbf_certify.interp import GaussianKernel, from_coefficients
from rbf_certify.state import ServerState, state
from rbf_certify.tools import certificate, interpolation, verification


async def test_certify_tool():
    output = await certificate.rbf_certify(1, variant="n1_improved")
    assert output.startswith("Certificate (n=1, beta=1, b0=1):")
    assert "c: 0.125" in output
    assert "C: 1.12" in output


async def test_certify_tool_underflow_note():
    output = await certificate.rbf_certify(4)
    assert "note: delta0 underflows" in output


async def test_certify_tool_error():
    output = await certificate.rbf_certify(0)
    assert output.startswith("Error: certify failed:")


async def test_bound_tool():
    inside = await certificate.rbf_bound(1, 1e-6, variant="n1_improved")
    assert inside.startswith("Error bound at delta=1e-06:")
    outside = await certificate.rbf_bound(1, 0.1)
    assert "out of certificate" in outside
    bad = await certificate.rbf_bound(1, -1.0)
    assert "out of certificate" in bad or bad.startswith("Error:")


async def test_bound_tool_fill_distance_base_variant():
    general = await certificate.rbf_bound(1, 1e-6, variant="fill_distance")
    assert "out of certificate" in general
    improved = await certificate.rbf_bound(1, 1e-6, variant="fill_distance", base_variant="n1_improved")
    assert improved.startswith("Error bound at delta=1e-06:")


async def test_verify_tool():
    output = await verification.rbf_verify("stirling", kmax=50)
    assert "stirling: PASS (150 checks, 3 violations, 3 documented)" in output
    assert "[documented] upper_l3 at {'k': 2}" in output


async def test_verify_tool_strict():
    output = await verification.rbf_verify("stirling", kmax=5, strict=True)
    assert "stirling: FAIL" in output


async def test_verify_tool_unknown_suite():
    output = await verification.rbf_verify("nope")
    assert output.startswith("Error: unknown suite 'nope'")


async def test_fit_eval_norm_tools():
    fitted = await interpolation.rbf_fit([[0.0], [1.0]], [1.0, 1.0], beta=1.0)
    model_id = fitted.split()[1]
    assert fitted.startswith(f"Model {model_id} fitted:")
    assert "centers: 2" in fitted

    evaluated = await interpolation.rbf_eval(model_id, [[0.0], [1.0]])
    values = [float(line.split("->")[1]) for line in evaluated.splitlines()[1:]]
    assert values == pytest.approx([1.0, 1.0])

    norm = await interpolation.rbf_native_norm(model_id)
    assert norm.startswith(f"Native norm of {model_id}: ")
    # c = 1/(1 + e^-1) for both centers, so c^T A c = 2/(1 + e^-1)
    assert float(norm.split(": ")[1]) == pytest.approx((2 / (1 + 0.36787944117144233)) ** 0.5)


async def test_fit_tool_error():
    output = await interpolation.rbf_fit([[0.5], [0.5]], [1.0, 2.0])
    assert output.startswith("Error: fit failed:")
    assert not state.list_models()


async def test_unknown_model():
    assert (await interpolation.rbf_eval("m42", [[0.0]])).startswith("Error: unknown model 'm42'")
    assert (await interpolation.rbf_native_norm("m42")).startswith("Error: unknown model 'm42'")


async def test_fill_distance_tool():
    output = await interpolation.rbf_fill_distance([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]], resolution=101)
    assert output.startswith("Fill distance in [0.7071067811865")
    assert (await interpolation.rbf_fill_distance([], resolution=10)).startswith("Error:")


async def test_list_and_clear_models():
    assert await interpolation.rbf_list_models() == "No models stored"
    await interpolation.rbf_fit([[0.0]], [2.0])
    await interpolation.rbf_fit([[0.0, 0.0]], [3.0], beta=2.0)
    listing = await interpolation.rbf_list_models()
    assert listing.startswith("Stored models (2/100):")
    assert "beta=2" in listing
    assert await interpolation.rbf_clear_models() == "Cleared 2 models"


def test_state_evicts_oldest():
    local = ServerState(max_models=3)
    model = from_coefficients(GaussianKernel(1.0, 1), [[0.0]], [1.0])
    ids = [local.add_model(model) for _ in range(5)]
    assert ids == ["m1", "m2", "m3", "m4", "m5"]
    assert [i for i, _ in local.list_models()] == ["m3", "m4", "m5"]
    assert local.get_model("m1") is None


async def test_server_registers_tools():
    from rbf_certify.server import mcp

    names = {tool.name for tool in await mcp.list_tools()}
    assert {"rbf_certify", "rbf_bound", "rbf_verify", "rbf_fit", "rbf_eval", "rbf_native_norm",
            "rbf_fill_distance", "rbf_list_models", "rbf_clear_models"} <= names


async def test_fit_tool_reports_interpolation_residual():
    points = [[i / 11] for i in range(12)]
    values = [math.sin(4 * p[0]) for p in points]
    output = await interpolation.rbf_fit(points, values, jitter=1e-3)
    assert "jitter: 0.001 (regularized" in output
    residual = float(output.split("interpolation residual: ")[1].split()[0])
    assert residual > 1e-4
