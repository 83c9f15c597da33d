"""GGM curves against time and time averages against alpha."""

import logging

import numpy as np
import pandas as pd

from wgslab.analytic import ggm_curve
from wgslab.commands.common import (
    CommandResult,
    alpha_grid,
    alpha_list,
    averaging_window,
    family_from_config,
)
from wgslab.errors import DomainError
from wgslab.metrics import SitePolicy, avg_ggm_series, knee_from_series
from wgslab.utils.formatting import column_label, format_metric
from wgslab.utils.parsers import parse_grid
from wgslab.utils.workers import parallel_map

logger = logging.getLogger(__name__)


def _curve(args: tuple) -> np.ndarray:
    family, alpha, t = args
    if family.site_policy is SitePolicy.MAX:
        return ggm_curve(family.model(alpha), t).values
    return family.values(alpha, t)


def run_ggm_curve(config) -> CommandResult:
    """One GGM column per alpha, in the order given."""
    family = family_from_config(config)
    alphas = alpha_list(config)
    if len(set(alphas)) != len(alphas):
        raise DomainError(f"Repeated alpha values: {config.alpha}")
    t = parse_grid(config.t)

    logger.info("ggm-curve: %d alphas x %d times", len(alphas), t.size)
    curves = parallel_map(_curve, [(family, a, t) for a in alphas], config.workers)

    columns = {"t": t}
    for alpha, values in zip(alphas, curves):
        columns[column_label("ggm_alpha", alpha)] = values

    summary = f"ggm-curve: {len(alphas)} curves x {t.size} points ({family.lattice.n_sites} sites)"
    return CommandResult(pd.DataFrame(columns), summary, family.describe())


def run_avg(config) -> CommandResult:
    """Time-averaged GGM over an alpha grid, with the heuristic local-regime knee."""
    family = family_from_config(config)
    T = averaging_window(config)
    series = avg_ggm_series(family, alpha_grid(config), T, config.workers)

    if len(series) == 1:
        summary = f"<G>_T={format_metric(series.values[0])} (alpha={format_metric(series.grid[0])}, T={T:.6g})"
        return CommandResult(series.to_frame(), summary, series.metadata)

    knee = knee_from_series(series)
    summary = (
        f"<G>_T over {len(series)} alphas in [{series.grid[0]:g}, {series.grid[-1]:g}]; "
        f"alpha_SR knee (heuristic)={format_metric(knee)}"
    )
    return CommandResult(series.to_frame(), summary, {**series.metadata, "alpha_sr_knee": knee})
