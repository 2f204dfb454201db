"""Gaussian spline interpolation tools."""

import logging
from typing import List, Optional

import numpy as np

from ..geometry import Cube, PointSet, fill_distance
from ..interp import GaussianKernel, evaluate_many, fit, native_norm
from ..state import state

logger = logging.getLogger(__name__)


async def rbf_fit(points: List[List[float]], values: List[float], beta: float = 1.0, jitter: float = 0.0) -> str:
    """
    Fit a Gaussian spline s(x) = sum_j c_j exp(-beta |x - x_j|^2) through the samples.

    Args:
        points: Interpolation nodes, one list of n coordinates per node
        values: Sample value at each node
        beta: Gaussian shape parameter
        jitter: Diagonal jitter added to the kernel matrix (default: 0, no regularization)

    Returns:
        Model id for rbf_eval and rbf_native_norm, with fit diagnostics
    """
    try:
        X = PointSet(np.asarray(points, dtype=float))
        model = fit(GaussianKernel(beta, X.n), X, values, jitter=jitter)
    except Exception as e:
        logger.error(f"Fit failed: {e}")
        return f"Error: fit failed: {e}"

    model_id = state.add_model(model)
    logger.info(f"Stored model {model_id} ({len(X)} centers, n={X.n})")
    output = f"Model {model_id} fitted:\n"
    output += f"  centers: {len(X)}\n"
    output += f"  dimension: {X.n}\n"
    output += f"  condition estimate: {model.condition_estimate:.6g}\n"
    output += f"  interpolation residual: {model.residual:.3e}\n"
    if jitter:
        output += f"  jitter: {jitter:g} (regularized, s(x_i) may differ from the samples)\n"
    return output


async def rbf_eval(model_id: str, points: List[List[float]]) -> str:
    """
    Evaluate a fitted spline.

    Args:
        model_id: Id returned by rbf_fit
        points: Evaluation points, one list of n coordinates per point

    Returns:
        One "x -> s(x)" line per point
    """
    model = state.get_model(model_id)
    if model is None:
        return f"Error: unknown model '{model_id}'. Use rbf_list_models to see stored models"
    try:
        pts = np.asarray(points, dtype=float).reshape(-1, model.n)
        values = evaluate_many(model, pts)
    except Exception as e:
        logger.error(f"Eval failed: {e}")
        return f"Error: eval failed: {e}"

    output = f"Model {model_id} values:\n"
    for p, v in zip(pts.tolist(), values.tolist()):
        output += f"  {p} -> {v:.17g}\n"
    return output


async def rbf_native_norm(model_id: str) -> str:
    """
    Native-space norm sqrt(c^T A c) of a fitted spline.

    Args:
        model_id: Id returned by rbf_fit

    Returns:
        The norm
    """
    model = state.get_model(model_id)
    if model is None:
        return f"Error: unknown model '{model_id}'. Use rbf_list_models to see stored models"
    return f"Native norm of {model_id}: {native_norm(model):.17g}"


async def rbf_fill_distance(points: List[List[float]], min_corner: Optional[List[float]] = None,
                            side: float = 1.0, resolution: int = 256) -> str:
    """
    Bracket the fill distance of a point set in a cube.

    Args:
        points: The point set, one list of n coordinates per point
        min_corner: Minimum corner of the cube (default: origin)
        side: Cube side
        resolution: Grid cells per axis used for the bracket

    Returns:
        Lower and upper bounds on sup_y min_x |y - x|
    """
    try:
        X = PointSet(np.asarray(points, dtype=float))
        corner = np.zeros(X.n) if min_corner is None else np.asarray(min_corner, dtype=float)
        lower, upper = fill_distance(Cube(corner, side), X, resolution)
    except Exception as e:
        logger.error(f"Fill distance failed: {e}")
        return f"Error: fill distance failed: {e}"
    return f"Fill distance in [{lower:.17g}, {upper:.17g}] ({len(X)} points, resolution {resolution})"


async def rbf_list_models() -> str:
    """
    List the stored spline models.

    Returns:
        One line per model with its size and shape parameter
    """
    models = state.list_models()
    if not models:
        return "No models stored"
    output = f"Stored models ({len(models)}/{state.max_models}):\n"
    for model_id, model in models:
        output += f"  {model_id}: n={model.n}, centers={len(model.centers)}, beta={model.beta:g}\n"
    return output


async def rbf_clear_models() -> str:
    """
    Remove every stored model.

    Returns:
        Number of models removed
    """
    count = state.clear()
    return f"Cleared {count} models"


def register_tools(mcp):
    """Register interpolation tools with the MCP server."""
    for tool in (rbf_fit, rbf_eval, rbf_native_norm, rbf_fill_distance, rbf_list_models, rbf_clear_models):
        mcp.tool()(tool)
