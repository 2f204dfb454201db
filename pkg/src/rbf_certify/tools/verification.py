"""Verification suite tools."""

import asyncio
import logging

from .. import suites

logger = logging.getLogger(__name__)


def _run(suite: str, kmax: int, trials: int, seed: int, strict: bool) -> list:
    if suite == "stirling":
        return [suites.stirling_suite(kmax, strict=strict)]
    if suite == "moments":
        return [suites.moments_suite(strict=strict)]
    if suite == "polybound":
        return [suites.polybound_suite(trials=trials, seed=seed, strict=strict)]
    if suite == "inequality5":
        return [suites.inequality5_suite(trials=trials, seed=seed, strict=strict)]
    return [r for name in suites.SUITES for r in _run(name, kmax, trials, seed, strict)]


async def rbf_verify(suite: str = "stirling", kmax: int = 10_000, trials: int = 100, seed: int = 0,
                     strict: bool = False) -> str:
    """
    Run a verification suite and summarize the outcome.

    Args:
        suite: "stirling", "moments", "polybound", "inequality5" or "all"
        kmax: Largest k of the Stirling sweep
        trials: Trials per case (polybound) or test functions per model (inequality5)
        seed: Root seed
        strict: Count documented small-argument violations as failures

    Returns:
        One line per suite with its pass/fail status and any violations
    """
    if suite not in suites.SUITES + ("all",):
        return f"Error: unknown suite '{suite}'. Use one of {', '.join(suites.SUITES)} or all"

    try:
        # sweeps are CPU bound; keep the event loop responsive
        reports = await asyncio.to_thread(_run, suite, kmax, trials, seed, strict)
    except Exception as e:
        logger.error(f"Verify failed: {e}")
        return f"Error: verify failed: {e}"

    output = "Verification results:\n"
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        output += f"  {r.name}: {status} ({r.checks} checks, {len(r.violations)} violations"
        documented = len(r.violations) - len(r.undocumented)
        if documented:
            output += f", {documented} documented"
        output += ")\n"
        for v in r.violations[:10]:
            tag = "documented" if v.documented else "VIOLATION"
            output += f"    [{tag}] {v.check} at {v.case}\n"
    return output


def register_tools(mcp):
    """Register verification tools with the MCP server."""
    mcp.tool()(rbf_verify)
