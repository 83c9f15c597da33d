"""
Command-line front end.

    python -m wgslab <subcommand> [options]

Each subcommand writes <outdir>/<subcommand>-<timestamp>.csv plus a JSON
sidecar and prints a one-line summary. Exit codes: 0 success, 1 domain or
usage error, 2 capacity error, 3 no transition found.
"""

import argparse
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone

from wgslab.config import LOG_LEVEL, OUTPUT_DIR, TOOL_VERSION, get_worker_count
from wgslab.errors import CapacityError, DomainError, NoTransitionFound
from wgslab.utils.formatting import format_duration
from wgslab.utils.parsers import ParseError, ValidationError, load_config_file, parse_bool
from wgslab.utils.storage import write_run_outputs

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_CAPACITY = 2
EXIT_NO_TRANSITION = 3

SUBCOMMANDS = (
    "ggm-curve", "detect", "theta-scan", "avg", "nsat", "zc", "oracle", "rdm-check", "measure",
)


@dataclass
class RunConfig:
    """
    Full description of one CLI run. Grid-valued fields keep the text the
    user gave (ranges as start:stop:step, lists comma-separated).
    """

    subcommand: str
    lattice: str = "chain"
    n: int | None = None
    l: int | None = None
    theta: float = 90.0
    alpha: str | None = None
    z: str = "full"
    t: str | None = None
    T: str = "3pi"
    eps: str = "1e-4"
    delta: float = 0.001
    site_policy: str = "end"
    workers: int | None = None
    seed: int = 0
    outdir: str = OUTPUT_DIR
    log_level: str = LOG_LEVEL
    theta_grid: str = "90:150:5"
    honeycomb_limit: bool = False
    n_max: int = 12
    trials: int = 200
    t_max: str = "3pi"
    subset_max: int = 7
    sites: str = "1,3"
    outcomes: str | None = None
    no_lu: bool = False
    dump_state: str | None = None
    cap: int = 10**6
    persistence: int = 1


# Per-subcommand defaults for fields left unset everywhere else
SUBCOMMAND_DEFAULTS = {
    "ggm-curve": {"n": 5000, "alpha": "0,0.5,1,2,5", "t": "0:3pi:0.001"},
    "detect": {"n": 5000, "alpha": "0.5:1.5:0.001"},
    "theta-scan": {"l": 40, "alpha": "1:2.5:0.001"},
    "avg": {"n": 5000, "alpha": "0:6:0.05"},
    "nsat": {"alpha": "1,1.5,2,3,5"},
    "zc": {"n": 120, "alpha": "1.82"},
    "measure": {"n": 5, "alpha": "1", "t": "1"},
}

INT_FIELDS = {"n", "l", "workers", "seed", "n_max", "trials", "subset_max", "cap", "persistence"}
FLOAT_FIELDS = {"theta", "delta"}
BOOL_FIELDS = {"honeycomb_limit", "no_lu"}
CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"subcommand"}


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad input."""

    def error(self, message):
        raise ParseError(message)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("model")
    group.add_argument("--lattice", choices=["chain", "deformed2d"])
    size = group.add_mutually_exclusive_group()
    size.add_argument("--n", type=int, help="chain length N")
    size.add_argument("--l", type=int, help="2D side length L")
    group.add_argument("--theta", type=float, help="deformation angle in degrees")
    group.add_argument("--alpha", help="fall-off rate(s): list a,b,c or range start:stop:step")
    group.add_argument("--z", help="chain range: 'full' or an integer")
    group.add_argument("--t", help="time(s); accepts a pi suffix, e.g. 3pi")
    group.add_argument("--T", help="averaging window (default 3pi)")
    group.add_argument("--eps", help="saturation threshold(s)")
    group.add_argument("--delta", type=float, help="jump probe half-width")
    group.add_argument("--site-policy", dest="site_policy", choices=["end", "max"],
                       help="chain GGM from the end site (closed form) or the site maximum")

    run = common.add_argument_group("execution")
    run.add_argument("--workers", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--outdir")
    run.add_argument("--config", help="flat key=value file; command-line flags take precedence")
    run.add_argument("--log-level", dest="log_level")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = UsageParser(prog="wgslab", description="Weighted graph state GGM toolkit")
    subparsers = parser.add_subparsers(dest="subcommand", required=True, parser_class=UsageParser)

    subparsers.add_parser("ggm-curve", parents=[common], help="GGM against time")
    subparsers.add_parser("detect", parents=[common], help="locate alpha* from dG/dt at 2pi")

    theta = subparsers.add_parser("theta-scan", parents=[common], help="alpha* against theta")
    theta.add_argument("--theta-grid", dest="theta_grid")
    theta.add_argument("--honeycomb-limit", dest="honeycomb_limit", action="store_const", const=True)

    subparsers.add_parser("avg", parents=[common], help="time-averaged GGM against alpha")

    nsat = subparsers.add_parser("nsat", parents=[common], help="saturation length N_sat")
    nsat.add_argument("--cap", type=int)
    nsat.add_argument("--persistence", type=int)

    subparsers.add_parser("zc", parents=[common], help="critical range z_c")

    oracle = subparsers.add_parser("oracle", parents=[common], help="closed form vs brute force")
    oracle.add_argument("--n-max", dest="n_max", type=int)
    oracle.add_argument("--trials", type=int)
    oracle.add_argument("--t-max", dest="t_max")

    rdm = subparsers.add_parser("rdm-check", parents=[common], help="subset RDMs vs dense partial trace")
    rdm.add_argument("--n-max", dest="n_max", type=int)
    rdm.add_argument("--subset-max", dest="subset_max", type=int)
    rdm.add_argument("--trials", type=int)

    measure = subparsers.add_parser("measure", parents=[common], help="sigma_z measurement reduction")
    measure.add_argument("--sites", help="0-based sites to measure, in order")
    measure.add_argument("--outcomes", help="outcome string, e.g. 010 (default: all strings)")
    measure.add_argument("--no-lu", dest="no_lu", action="store_const", const=True)
    measure.add_argument("--dump-state", dest="dump_state", help="write the initial state to PATH")
    return parser


def _coerce(key: str, value):
    if value is None:
        return None
    try:
        if key in INT_FIELDS:
            return int(value)
        if key in FLOAT_FIELDS:
            return float(value)
    except (TypeError, ValueError):
        raise ParseError(f"Invalid value for {key}: {value!r}")
    if key in BOOL_FIELDS:
        return parse_bool(value)
    return value


def build_config(argv: list[str] | None = None) -> RunConfig:
    """
    Merge command-line flags, --config file values, environment and defaults.

    Raises:
        ParseError: Malformed arguments or values
        ValidationError: Unknown keys in the config file
    """
    args = vars(build_parser().parse_args(argv))
    subcommand = args.pop("subcommand")
    config_path = args.pop("config", None)

    merged = {}
    if config_path:
        merged.update(load_config_file(config_path, CONFIG_KEYS))
    merged.update({key: value for key, value in args.items() if value is not None})

    # Environment-derived fields
    if "workers" not in merged and os.getenv("WGSLAB_WORKERS"):
        merged["workers"] = os.getenv("WGSLAB_WORKERS")

    lattice = merged.get("lattice", "chain")
    if lattice == "chain" and "l" in merged and subcommand != "theta-scan":
        raise ParseError("--l applies to deformed2d lattices; use --n for chains")
    if lattice == "deformed2d" and "n" in merged:
        raise ParseError("--n applies to chains; use --l for deformed2d lattices")
    if "n" in merged and "l" in merged:
        raise ParseError("--n and --l are mutually exclusive")

    for key, value in SUBCOMMAND_DEFAULTS.get(subcommand, {}).items():
        merged.setdefault(key, value)

    values = {key: _coerce(key, value) for key, value in merged.items()}
    return RunConfig(subcommand=subcommand, **values)


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _handlers() -> dict:
    from wgslab.commands import curves, oracle, saturation, transitions

    return {
        "ggm-curve": curves.run_ggm_curve,
        "avg": curves.run_avg,
        "detect": transitions.run_detect,
        "theta-scan": transitions.run_theta_scan,
        "nsat": saturation.run_nsat,
        "zc": saturation.run_zc,
        "oracle": oracle.run_oracle,
        "rdm-check": oracle.run_rdm_check,
        "measure": oracle.run_measure,
    }


def run(argv: list[str] | None = None) -> int:
    """
    Execute one subcommand.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        config = build_config(argv)
        config.workers = get_worker_count(config.workers)
    except (ParseError, ValidationError, ValueError) as e:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"wgslab: error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    configure_logging(config.log_level)
    started_at = datetime.now(timezone.utc).isoformat()
    start = time.perf_counter()

    try:
        result = _handlers()[config.subcommand](config)
    except NoTransitionFound as e:
        print(f"no transition found: {e}", file=sys.stderr)
        return EXIT_NO_TRANSITION
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, ParseError, ValidationError) as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN

    wall_time = time.perf_counter() - start
    sidecar = {
        "config": asdict(config),
        "tool_version": TOOL_VERSION,
        "started_at": started_at,
        "wall_time_s": wall_time,
        "rows": len(result.frame),
        "summary": result.summary,
        "metadata": result.metadata,
    }
    success, csv_path, error = write_run_outputs(result.frame, config.outdir, config.subcommand, sidecar)
    if not success:
        print(error, file=sys.stderr)
        return EXIT_DOMAIN

    logger.info("Wrote %s in %s", csv_path, format_duration(wall_time))
    print(result.summary)
    return result.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
