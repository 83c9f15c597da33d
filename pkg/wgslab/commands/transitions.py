"""Transition detection along alpha and across deformation angles."""

import logging

from wgslab.commands.common import DEFAULT_SIDE, CommandResult, alpha_grid, family_from_config
from wgslab.metrics import delta_gbar, find_alpha_star, gbar_series, honeycomb_limit, theta_scan
from wgslab.utils.formatting import format_metric
from wgslab.utils.parsers import parse_grid

logger = logging.getLogger(__name__)


def run_detect(config) -> CommandResult:
    """
    Scan gbar_2pi over alpha and locate alpha*.

    Raises NoTransitionFound (exit 3) when the scan is featureless.
    """
    family = family_from_config(config)
    series = gbar_series(family, alpha_grid(config), config.workers)
    report = find_alpha_star(family, series.grid, series=series)
    probe = delta_gbar(family, report.alpha_star, config.delta)

    metadata = {
        **series.metadata,
        "alpha_star": report.alpha_star,
        "jump": report.jump,
        "grid_resolution": report.grid_resolution,
        "side_derivatives": list(report.side_derivatives),
        "method": report.method,
        "delta_gbar": probe,
        "delta": config.delta,
    }
    summary = (
        f"alpha*={format_metric(report.alpha_star)} ({report.method}, "
        f"jump={format_metric(report.jump, digits=3)}, resolution={report.grid_resolution:g})"
    )
    return CommandResult(series.to_frame(), summary, metadata)


def run_theta_scan(config) -> CommandResult:
    """alpha* for each angle on the theta grid, optionally with the 120 degree limits."""
    side = config.l or DEFAULT_SIDE
    alphas = alpha_grid(config)
    series = theta_scan(side, parse_grid(config.theta_grid), alphas, config.workers)

    found = int((series.extra["method"] != "none").sum())
    summary = f"theta-scan: alpha* found at {found}/{len(series)} angles (L={side})"
    metadata = dict(series.metadata)

    if config.honeycomb_limit:
        limit = honeycomb_limit(side, alphas, workers=config.workers)
        metadata.update({"honeycomb_below": limit.below, "honeycomb_above": limit.above,
                         "honeycomb_estimate": limit.estimate})
        summary += (
            f"; theta->120 limits {format_metric(limit.below)} / {format_metric(limit.above)}"
            f" (mean {format_metric(limit.estimate)})"
        )
    return CommandResult(series.to_frame(), summary, metadata)
