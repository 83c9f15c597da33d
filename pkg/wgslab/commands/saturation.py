"""Saturation scans: N_sat over chain length and z_c over interaction range."""

import logging
import math

import pandas as pd

from wgslab.commands.common import CommandResult, alpha_list, averaging_window
from wgslab.errors import SaturationNotReached
from wgslab.metrics import n_sat, z_c
from wgslab.utils.parsers import parse_list
from wgslab.utils.workers import parallel_map

logger = logging.getLogger(__name__)


def _nsat_point(args: tuple) -> dict:
    alpha, eps, T, cap, persistence = args
    try:
        report = n_sat(alpha, eps, T, cap=cap, persistence=persistence)
    except SaturationNotReached as e:
        logger.warning(str(e))
        return {"alpha": alpha, "eps": eps, "n_sat": math.nan, "avg_ggm": math.nan, "reached": False}
    return {"alpha": alpha, "eps": eps, "n_sat": report.value,
            "avg_ggm": report.achieved_avg_ggm, "reached": True}


def run_nsat(config) -> CommandResult:
    """
    N_sat for every (alpha, eps) pair.

    Unsaturated pairs are kept as rows with reached=False and make the run
    exit with the capacity code.
    """
    T = averaging_window(config)
    jobs = [(a, e, T, config.cap, config.persistence)
            for a in alpha_list(config) for e in parse_list(config.eps)]
    rows = parallel_map(_nsat_point, jobs, config.workers)
    frame = pd.DataFrame(rows, columns=["alpha", "eps", "n_sat", "avg_ggm", "reached"])

    parts = []
    for row in rows:
        value = str(int(row["n_sat"])) if row["reached"] else "not reached"
        parts.append(value if len(rows) == 1 else f"alpha={row['alpha']:g} eps={row['eps']:g} N_sat={value}")
    summary = f"N_sat={parts[0]}" if len(rows) == 1 else "; ".join(parts)

    exit_code = 0 if all(row["reached"] for row in rows) else 2
    metadata = {"T": T, "cap": config.cap, "persistence": config.persistence}
    return CommandResult(frame, summary, metadata, exit_code)


def _zc_point(args: tuple) -> dict:
    n, alpha, eps, T = args
    report = z_c(n, alpha, eps, T)
    return {"alpha": alpha, "eps": eps, "z_c": report.value, "avg_ggm": report.achieved_avg_ggm,
            "full_avg_ggm": report.metadata["full_avg_ggm"]}


def run_zc(config) -> CommandResult:
    """z_c for every (alpha, eps) pair on a chain of N sites."""
    T = averaging_window(config)
    jobs = [(config.n, a, e, T) for a in alpha_list(config) for e in parse_list(config.eps)]
    rows = parallel_map(_zc_point, jobs, config.workers)
    frame = pd.DataFrame(rows, columns=["alpha", "eps", "z_c", "avg_ggm", "full_avg_ggm"])

    summary = "; ".join(f"z_c={row['z_c']} (alpha={row['alpha']:g}, eps={row['eps']:g})" for row in rows)
    return CommandResult(frame, summary, {"n": config.n, "T": T})
