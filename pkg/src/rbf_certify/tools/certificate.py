"""Certificate constant and bound tools."""

import logging

from .. import constants
from ..numerics import LogScalar

logger = logging.getLogger(__name__)


def _fmt(value) -> str:
    if isinstance(value, LogScalar):
        return f"{value.render(6)} (ln {value.logmag:.12g})"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


async def rbf_certify(n: int, beta: float = 1.0, b0: float = 1.0, variant: str = "general",
                      base_variant: str = "general") -> str:
    """
    Compute the constants of the Gaussian interpolation error certificate.

    The certified bound is |f(x) - s(x)| <= Delta'' (C delta)^(c/delta) ||f||_h
    for every spacing delta <= delta0.

    Args:
        n: Dimension (1 to 20)
        beta: Gaussian shape parameter, h(x) = exp(-beta |x|^2)
        b0: Minimum side of the cube E
        variant: "general", "n1_improved" (n = 1 only) or "fill_distance"
        base_variant: Certificate the fill_distance form is derived from

    Returns:
        Formatted list of certificate constants
    """
    try:
        cert = constants.certificate(n, beta, b0, variant, base_variant)
    except Exception as e:
        logger.error(f"Certify failed: {e}")
        return f"Error: certify failed: {e}"

    rows = [
        ("variant", cert.variant.value),
        ("gamma_n", cert.gamma_n),
        ("rho3", cert.rho3),
        ("B'", cert.b_prime),
        ("B''", cert.b_double_prime),
        ("Delta''", cert.delta_pp),
        ("C", cert.C_base),
        ("c", cert.c_exp),
        ("delta_n", cert.delta_n),
        ("delta0", cert.delta0),
        ("ln delta0", cert.log_delta0),
    ]
    output = f"Certificate (n={n}, beta={beta:g}, b0={b0:g}):\n"
    for key, value in rows:
        output += f"  {key}: {_fmt(value)}\n"
    if cert.delta0_underflow:
        output += "  note: delta0 underflows double precision; no spacing is certified in practice\n"
    return output


async def rbf_bound(n: int, delta: float, norm_f: float = 1.0, beta: float = 1.0, b0: float = 1.0,
                    variant: str = "general", base_variant: str = "general") -> str:
    """
    Evaluate the certified error bound at one spacing.

    Args:
        n: Dimension
        delta: Node spacing (fill distance for the fill_distance variant)
        norm_f: Native-space norm of the interpolated function
        beta: Gaussian shape parameter
        b0: Minimum side of the cube E
        variant: "general", "n1_improved" or "fill_distance"
        base_variant: Certificate the fill_distance form is derived from

    Returns:
        The bound as mantissa/exponent and natural log, or the reason it does not apply
    """
    try:
        cert = constants.certificate(n, beta, b0, variant, base_variant)
        if not constants.is_admissible(cert, delta):
            return (f"delta={delta:g} is out of certificate: the bound only holds for "
                    f"delta <= delta0 = e^{cert.log_delta0:.6g}")
        bound = constants.bound_value(cert, delta, norm_f)
    except Exception as e:
        logger.error(f"Bound failed: {e}")
        return f"Error: bound failed: {e}"
    return f"Error bound at delta={delta:g}: {_fmt(bound)}"


def register_tools(mcp):
    """Register certificate tools with the MCP server."""
    mcp.tool()(rbf_certify)
    mcp.tool()(rbf_bound)
