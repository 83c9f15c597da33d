"""
Transition detectors and saturation scans built on the closed-form GGM.

Detectors at t = 2*pi:
    gbar_2pi(alpha)        dG/dt, central difference (plus one-sided values)
    dggm_dalpha_2pi(alpha) dG/dalpha, central difference
Time average <G>_T uses composite Simpson on a uniform grid over [0, T].
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np
from scipy.integrate import simpson

from wgslab.analytic import chain_log_products, ggm_from_log, ggm_general, log_abs_cos
from wgslab.config import (
    DEFAULT_DELTA,
    DEFAULT_T,
    FD_STEP,
    GBAR_NOISE_FLOOR,
    HONEYCOMB_OFFSETS,
    HONEYCOMB_THETA,
    JUMP_FACTOR,
    JUMP_WINDOW,
    KINK_THRESHOLD,
    KNEE_THRESHOLD,
    NSAT_CAP,
    SIMPSON_POINTS,
)
from wgslab.errors import DomainError, NoTransitionFound, SaturationNotReached
from wgslab.lattice import CouplingModel, LatticeSpec
from wgslab.series import MetricSeries
from wgslab.utils.workers import parallel_map

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi

# Cell differences at or below this are never jumps
JUMP_FLOOR = GBAR_NOISE_FLOOR

# r values per incremental block in saturation scans
SATURATION_BLOCK = 256


class SitePolicy(str, Enum):
    END = "end"
    MAX = "max"


class SaturationKind(str, Enum):
    NSAT = "nsat"
    ZC = "zc"


@dataclass(frozen=True)
class GgmFamily:
    """
    A lattice and range whose GGM is evaluated at varying alpha.

    Chains default to the end-site closed form; "max" uses the full site
    maximum. 2D lattices always use the site maximum.
    """

    lattice: LatticeSpec
    z: int | None = None
    site_policy: SitePolicy = SitePolicy.END

    def __post_init__(self):
        policy = SitePolicy(self.site_policy)
        if not self.lattice.is_chain:
            policy = SitePolicy.MAX
        object.__setattr__(self, "site_policy", policy)
        # Normalizes z (N - 1 becomes None) and rejects bad ranges.
        object.__setattr__(self, "z", CouplingModel(self.lattice, 0.0, self.z).z)

    @property
    def range_z(self) -> int:
        return self.lattice.n_sites - 1 if self.z is None else self.z

    def model(self, alpha: float) -> CouplingModel:
        return CouplingModel(self.lattice, alpha, self.z)

    def values(self, alpha: float, t_values) -> np.ndarray:
        """GGM at each t for this alpha."""
        t = np.atleast_1d(np.asarray(t_values, dtype=float))
        if self.site_policy is SitePolicy.END:
            if alpha < 0:
                raise DomainError(f"alpha must be non-negative, got {alpha}")
            return ggm_from_log(chain_log_products(alpha, self.range_z, t))
        model = self.model(alpha)
        return np.array([ggm_general(model, ti).value for ti in t])

    def describe(self) -> dict:
        return {**self.lattice.describe(), "z": self.range_z, "site_policy": self.site_policy.value}


@dataclass(frozen=True)
class GbarResult:
    value: float
    left: float
    right: float
    kink: bool


@dataclass(frozen=True)
class TransitionReport:
    alpha_star: float
    jump: float
    grid_resolution: float
    side_derivatives: tuple[float, float]
    method: str


@dataclass(frozen=True)
class SaturationReport:
    kind: SaturationKind
    eps: float
    value: int
    achieved_avg_ggm: float
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class HoneycombLimit:
    below: float
    above: float
    points: dict

    @property
    def estimate(self) -> float:
        return 0.5 * (self.below + self.above)


def time_grid(T: float = DEFAULT_T, points: int = SIMPSON_POINTS) -> np.ndarray:
    if not T > 0:
        raise DomainError(f"Averaging window T must be positive, got {T}")
    if points < 3:
        raise DomainError(f"Simpson quadrature needs at least 3 points, got {points}")
    return np.linspace(0.0, T, points)


# =============================================================================
# DETECTORS AT t = 2 pi
# =============================================================================

def gbar_2pi(family: GgmFamily, alpha: float, step: float = FD_STEP) -> GbarResult:
    """
    dG/dt at t = 2*pi.

    Returns the central difference plus the one-sided differences; the point
    is flagged as a kink when the one-sided values differ by more than
    KINK_THRESHOLD.
    """
    g_minus, g_mid, g_plus = family.values(alpha, [TWO_PI - step, TWO_PI, TWO_PI + step])
    left = (g_mid - g_minus) / step
    right = (g_plus - g_mid) / step
    central = (g_plus - g_minus) / (2 * step)
    return GbarResult(float(central), float(left), float(right), bool(abs(left - right) > KINK_THRESHOLD))


def dggm_dalpha_2pi(family: GgmFamily, alpha: float, step: float = FD_STEP) -> float:
    """dG/dalpha at t = 2*pi (forward difference when alpha < step)."""
    if alpha >= step:
        lo, hi = alpha - step, alpha + step
    else:
        lo, hi = alpha, alpha + step
    g_lo = family.values(lo, TWO_PI)[0]
    g_hi = family.values(hi, TWO_PI)[0]
    return float((g_hi - g_lo) / (hi - lo))


def delta_gbar(family: GgmFamily, alpha: float, delta: float = DEFAULT_DELTA) -> float:
    """Jump probe gbar(alpha + delta) - gbar(alpha - delta)."""
    return gbar_2pi(family, alpha + delta).value - gbar_2pi(family, max(alpha - delta, 0.0)).value


def avg_ggm(family: GgmFamily, alpha: float, T: float = DEFAULT_T, points: int = SIMPSON_POINTS) -> float:
    """
    Time-averaged GGM (1/T) * integral_0^T G dt by composite Simpson.

    Examples:
        z=1, T=3pi -> 1/2 - 1/pi
    """
    t = time_grid(T, points)
    return float(simpson(family.values(alpha, t), x=t) / T)


def _gbar_point(args: tuple) -> tuple[float, float, float, bool, float]:
    family, alpha = args
    result = gbar_2pi(family, alpha)
    return result.value, result.left, result.right, result.kink, dggm_dalpha_2pi(family, alpha)


def gbar_series(family: GgmFamily, alpha_grid, workers: int = 1) -> MetricSeries:
    """gbar_2pi, its one-sided values, kink flags and dG/dalpha over an alpha grid."""
    grid = np.asarray(alpha_grid, dtype=float)
    rows = parallel_map(_gbar_point, [(family, float(a)) for a in grid], workers)
    columns = list(zip(*rows))
    return MetricSeries(
        grid_name="alpha",
        name="gbar_2pi",
        grid=grid,
        values=np.array(columns[0]),
        extra={
            "gbar_left": np.array(columns[1]),
            "gbar_right": np.array(columns[2]),
            "kink": np.array(columns[3], dtype=bool),
            "dggm_dalpha_2pi": np.array(columns[4]),
        },
        metadata=family.describe(),
    )


def _avg_point(args: tuple) -> float:
    family, alpha, T, points = args
    return avg_ggm(family, alpha, T, points)


def avg_ggm_series(family: GgmFamily, alpha_grid, T: float = DEFAULT_T, workers: int = 1,
                   points: int = SIMPSON_POINTS) -> MetricSeries:
    grid = np.asarray(alpha_grid, dtype=float)
    values = parallel_map(_avg_point, [(family, float(a), T, points) for a in grid], workers)
    return MetricSeries("alpha", "avg_ggm", grid, np.array(values),
                        metadata={**family.describe(), "T": T, "points": points})


# =============================================================================
# TRANSITION LOCATORS
# =============================================================================

def _jump_cell(diffs: np.ndarray) -> int | None:
    """
    Index of the cell holding a discontinuity, or None.

    The largest cell difference must beat JUMP_FACTOR times both the median
    over the whole scan and the median of the surrounding cells.
    """
    if diffs.size == 0:
        return None
    i = int(np.argmax(diffs))
    peak = diffs[i]
    if peak <= JUMP_FLOOR:
        return None
    neighbors = np.concatenate((diffs[max(0, i - JUMP_WINDOW):i], diffs[i + 1:i + 1 + JUMP_WINDOW]))
    baseline = float(np.median(diffs))
    if neighbors.size:
        baseline = max(baseline, float(np.median(neighbors)))
    return i if peak > JUMP_FACTOR * baseline else None


def _settled_crossing(values: np.ndarray, floor: float = GBAR_NOISE_FLOOR) -> int | None:
    """
    Cell after which gbar_2pi turns positive and stays positive, or None.

    Values with |gbar| <= floor are rounding noise and count as zero, so a
    flat region that wobbles around zero never produces a crossing.
    """
    clipped = np.where(np.abs(values) <= floor, 0.0, values)
    nonpositive = np.flatnonzero(clipped <= 0)
    if nonpositive.size == 0 or nonpositive[-1] == values.size - 1:
        return None
    return int(nonpositive[-1])


def find_alpha_star(family: GgmFamily, alpha_grid, workers: int = 1,
                    series: MetricSeries | None = None) -> TransitionReport:
    """
    Locate the transition alpha* along a scan of gbar_2pi.

    The grid cell with the largest |change| is reported (midpoint) when it
    stands out as a jump. Otherwise alpha* is where gbar_2pi leaves zero for
    good: the last cell in which it goes from <= 0 to > 0, with values inside
    GBAR_NOISE_FLOOR treated as zero, interpolated linearly.

    Raises:
        NoTransitionFound: Neither a jump nor a settled sign change on the grid
    """
    if series is None:
        series = gbar_series(family, alpha_grid, workers)
    grid = series.grid
    values = series.values
    if grid.size < 2:
        raise DomainError("An alpha scan needs at least two grid points")

    resolution = float(np.max(np.diff(grid)))
    diffs = np.abs(np.diff(values))

    cell = _jump_cell(diffs)
    if cell is not None:
        alpha_star = 0.5 * (grid[cell] + grid[cell + 1])
        jump = float(diffs[cell])
        method = "jump"
    else:
        cell = _settled_crossing(values)
        if cell is None:
            raise NoTransitionFound(
                f"No jump or sign change of gbar_2pi on alpha in [{grid[0]:g}, {grid[-1]:g}]"
            )
        a0, a1 = grid[cell], grid[cell + 1]
        g0 = 0.0 if abs(values[cell]) <= GBAR_NOISE_FLOOR else values[cell]
        g1 = values[cell + 1]
        alpha_star = float(a0 - g0 * (a1 - a0) / (g1 - g0))
        jump = float(abs(g1 - g0))
        method = "sign-change"

    nearest = int(np.argmin(np.abs(grid - alpha_star)))
    sides = (float(series.extra["gbar_left"][nearest]), float(series.extra["gbar_right"][nearest]))
    logger.info("alpha* = %.6f (%s, jump %.3g) for %s", alpha_star, method, jump, family.describe())
    return TransitionReport(float(alpha_star), jump, resolution, sides, method)


def _theta_point(args: tuple) -> tuple[float, float, str]:
    side, theta, alpha_grid = args
    family = GgmFamily(LatticeSpec.deformed(side, theta))
    try:
        report = find_alpha_star(family, alpha_grid)
    except NoTransitionFound:
        logger.warning("No transition found at theta=%g", theta)
        return math.nan, math.nan, "none"
    return report.alpha_star, report.jump, report.method


def theta_scan(side: int, theta_grid, alpha_grid, workers: int = 1) -> MetricSeries:
    """
    alpha*(theta) on an L x L deformed lattice, one alpha scan per angle.

    Angles with no detectable transition come back as NaN with method "none".
    """
    thetas = np.asarray(theta_grid, dtype=float)
    alphas = np.asarray(alpha_grid, dtype=float)
    rows = parallel_map(_theta_point, [(side, float(th), alphas) for th in thetas], workers)
    columns = list(zip(*rows))
    return MetricSeries(
        grid_name="theta",
        name="alpha_star",
        grid=thetas,
        values=np.array(columns[0]),
        extra={"jump": np.array(columns[1]), "method": np.array(columns[2], dtype=object)},
        metadata={"lattice": "deformed2d", "l": side},
    )


def honeycomb_limit(side: int, alpha_grid, offsets=HONEYCOMB_OFFSETS, workers: int = 1) -> HoneycombLimit:
    """
    One-sided limits of alpha*(theta) as theta -> 120 degrees.

    alpha* is found at 120 -/+ each offset and extrapolated linearly to
    offset 0 on each side.

    Raises:
        NoTransitionFound: If any approach angle has no transition
    """
    offsets = np.asarray(offsets, dtype=float)
    thetas = np.concatenate((HONEYCOMB_THETA - offsets, HONEYCOMB_THETA + offsets))
    series = theta_scan(side, np.sort(thetas), alpha_grid, workers)
    found = dict(zip(series.grid.tolist(), series.values.tolist()))
    if any(math.isnan(v) for v in found.values()):
        raise NoTransitionFound("Honeycomb extrapolation needs a transition at every approach angle")

    below = [found[HONEYCOMB_THETA - o] for o in offsets]
    above = [found[HONEYCOMB_THETA + o] for o in offsets]
    below_limit = float(np.polyfit(offsets, below, 1)[1])
    above_limit = float(np.polyfit(offsets, above, 1)[1])
    return HoneycombLimit(below_limit, above_limit, found)


def alpha_sr_knee(family: GgmFamily, alpha_grid, T: float = DEFAULT_T,
                  threshold: float = KNEE_THRESHOLD, workers: int = 1) -> float | None:
    """
    Heuristic quasi-local to local crossover.

    First alpha past the steepest descent of <G>_T where |d<G>/dalpha| drops
    below threshold; None when the scan never flattens.
    """
    return knee_from_series(avg_ggm_series(family, alpha_grid, T, workers), threshold)


def knee_from_series(series: MetricSeries, threshold: float = KNEE_THRESHOLD) -> float | None:
    """Knee of an already computed <G>_T(alpha) series; see alpha_sr_knee."""
    if len(series) < 3:
        return None
    slope = np.abs(np.gradient(series.values, series.grid))
    steepest = int(np.argmax(slope))
    flat = np.flatnonzero(slope[steepest:] < threshold)
    if flat.size == 0:
        return None
    return float(series.grid[steepest + flat[0]])


# =============================================================================
# SATURATION SCANS
# =============================================================================

def _running_averages(alpha: float, t: np.ndarray, z_stop: int) -> Iterator[tuple[int, float]]:
    """
    Yield (z, <G>_T) for z = 1 .. z_stop with the end-site closed form.

    Each step adds one log-cosine factor per grid point to a running sum.
    """
    T = float(t[-1])
    running = np.zeros_like(t)
    for start in range(1, z_stop + 1, SATURATION_BLOCK):
        stop = min(start + SATURATION_BLOCK, z_stop + 1)
        half = 0.5 * np.arange(start, stop, dtype=float) ** (-alpha)
        cumulative = running[:, None] + np.cumsum(log_abs_cos(np.multiply.outer(t, half)), axis=1)
        averages = simpson(ggm_from_log(cumulative), x=t, axis=0) / T
        running = cumulative[:, -1]
        for offset, avg in enumerate(averages):
            yield start + offset, float(avg)


def n_sat(alpha: float, eps: float, T: float = DEFAULT_T, cap: int = NSAT_CAP,
          persistence: int = 1, points: int = SIMPSON_POINTS) -> SaturationReport:
    """
    Smallest chain length N with |<G(N+1)>_T - <G(N)>_T| < eps (all-to-all).

    With persistence w > 1 the inequality must also hold for the next w - 1
    lengths; the reported N is the first of the run.

    Raises:
        SaturationNotReached: If no N up to cap qualifies
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if persistence < 1:
        raise DomainError(f"persistence must be at least 1, got {persistence}")
    if alpha < 0:
        raise DomainError(f"alpha must be non-negative, got {alpha}")

    t = time_grid(T, points)
    previous = None
    streak = 0
    candidate = None
    for z, avg in _running_averages(alpha, t, cap):
        n = z + 1
        if previous is not None:
            if abs(avg - previous) < eps:
                if streak == 0:
                    candidate = (n - 1, previous)
                streak += 1
                if streak >= persistence:
                    logger.info("N_sat=%d at alpha=%g, eps=%g", candidate[0], alpha, eps)
                    return SaturationReport(
                        SaturationKind.NSAT, eps, candidate[0], candidate[1],
                        {"alpha": alpha, "T": T, "points": points, "persistence": persistence},
                    )
            else:
                streak = 0
        previous = avg

    raise SaturationNotReached(f"<G> did not saturate below N={cap} at alpha={alpha}, eps={eps}")


def z_c(n_sites: int, alpha: float, eps: float, T: float = DEFAULT_T,
        points: int = SIMPSON_POINTS) -> SaturationReport:
    """
    Smallest range z whose <G>_T is within eps of the all-to-all chain value.

    Examples:
        eps >= 0.5 -> 1
    """
    if n_sites < 2:
        raise DomainError(f"A chain needs at least 2 sites, got {n_sites}")
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if alpha < 0:
        raise DomainError(f"alpha must be non-negative, got {alpha}")

    t = time_grid(T, points)
    averages = [avg for _, avg in _running_averages(alpha, t, n_sites - 1)]
    full = averages[-1]
    for z, avg in enumerate(averages, start=1):
        if abs(full - avg) < eps:
            return SaturationReport(
                SaturationKind.ZC, eps, z, avg,
                {"alpha": alpha, "n": n_sites, "T": T, "points": points, "full_avg_ggm": full},
            )
    # z = N - 1 always qualifies; reaching here means eps was not positive.
    raise DomainError(f"eps={eps} admits no range")
