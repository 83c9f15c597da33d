"""Shared plumbing for subcommand handlers."""

from dataclasses import dataclass, field

import pandas as pd

from wgslab.lattice import LatticeSpec
from wgslab.metrics import GgmFamily
from wgslab.utils.parsers import parse_grid, parse_list, parse_number, parse_z

# Side length used when a deformed2d run gives no --l
DEFAULT_SIDE = 40


@dataclass
class CommandResult:
    frame: pd.DataFrame
    summary: str
    metadata: dict = field(default_factory=dict)
    exit_code: int = 0


def lattice_from_config(config) -> LatticeSpec:
    if config.lattice == "deformed2d":
        return LatticeSpec.deformed(config.l or DEFAULT_SIDE, config.theta)
    return LatticeSpec.chain(config.n)


def family_from_config(config) -> GgmFamily:
    return GgmFamily(lattice_from_config(config), parse_z(config.z), config.site_policy)


def alpha_grid(config):
    return parse_grid(config.alpha)


def alpha_list(config) -> list[float]:
    return parse_list(config.alpha)


def averaging_window(config) -> float:
    return parse_number(config.T)
