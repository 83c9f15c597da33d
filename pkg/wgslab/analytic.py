"""
Closed-form GGM of weighted graph states.

Every single-site reduced density matrix of a weighted graph state has
diagonal (1/2, 1/2) and off-diagonal

    x_k = 2^(-N) * prod_{j != k} (1 + exp(i g_kj)) = (1/2) prod cos(g_kj / 2) * exp(i sum g_kj / 2)

so its top eigenvalue is 1/2 + |x_k| and the GGM over single-site cuts is
1/2 - max_k |x_k|. Products are accumulated as sums of ln|cos| so chains of
10^6 sites stay finite.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from wgslab.config import COS_FLOOR, LOG_UNDERFLOW, SERIES_X_MAX
from wgslab.errors import DomainError
from wgslab.lattice import CouplingModel, coupling_matrix, coupling_row
from wgslab.series import MetricSeries

logger = logging.getLogger(__name__)

# Upper bound on the (t, r) block evaluated at once
BLOCK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class GgmValue:
    """
    GGM at one (model, t) point.

    Attributes:
        value: 1/2 - exp(log_product) / 2, in [0, 1/2]
        argmax_site: Site whose single-site eigenvalue is largest
        log_product: ln of the largest prod_j |cos(g_kj / 2)| (may be -inf)
    """

    value: float
    argmax_site: int
    log_product: float


@dataclass(frozen=True)
class SingleSiteRdm:
    """Single-site density matrix [[1/2, x], [conj(x), 1/2]]."""

    offdiag: complex

    @property
    def matrix(self) -> np.ndarray:
        x = self.offdiag
        return np.array([[0.5, x], [np.conj(x), 0.5]], dtype=complex)

    @property
    def eigenvalues(self) -> tuple[float, float]:
        m = abs(self.offdiag)
        return 0.5 - m, 0.5 + m


def log_abs_cos(x) -> np.ndarray:
    """
    Elementwise ln|cos(x)|, with factors below COS_FLOOR mapped to -inf.
    """
    c = np.abs(np.cos(np.asarray(x, dtype=float)))
    out = np.log(np.maximum(c, COS_FLOOR))
    return np.where(c < COS_FLOOR, -np.inf, out)


def ggm_from_log(log_product):
    """GGM from the log of the cosine product: 1/2 - exp(log_product) / 2."""
    return 0.5 - 0.5 * np.exp(log_product)


def single_site_rdm(model: CouplingModel, k: int, t: float) -> SingleSiteRdm:
    """
    Reduced density matrix of site k at time t.

    Args:
        model: Coupling model
        k: Site index
        t: Evolution time

    Returns:
        SingleSiteRdm with off-diagonal x_k

    Examples:
        N=2, g_12 = pi -> x = 0
        N=2, g_12 = 0  -> |x| = 1/2
    """
    half = 0.5 * coupling_row(model, k, t)
    cosines = np.cos(half)
    magnitudes = np.abs(cosines)
    if np.any(magnitudes < COS_FLOOR):
        return SingleSiteRdm(0j)

    log_mag = math.log(0.5) + float(np.sum(np.log(magnitudes)))
    phase = float(np.sum(half)) + math.pi * int(np.count_nonzero(cosines < 0))
    return SingleSiteRdm(complex(math.exp(log_mag) * np.exp(1j * phase)))


def _chain_site_logs(n_sites: int, z: int, alpha: float, t: float) -> np.ndarray:
    """Per-site sum of ln|cos| on a chain via prefix sums over the distance profile."""
    r = np.arange(1, z + 1, dtype=float)
    profile = log_abs_cos(0.5 * t * r ** (-alpha))
    prefix = np.concatenate(([0.0], np.cumsum(profile)))
    sites = np.arange(n_sites)
    return prefix[np.minimum(sites, z)] + prefix[np.minimum(n_sites - 1 - sites, z)]


def site_log_products(model: CouplingModel, t: float) -> np.ndarray:
    """ln prod_j |cos(g_kj(t) / 2)| for every site k."""
    if model.lattice.is_chain:
        return _chain_site_logs(model.n_sites, model.range_z, model.alpha, float(t))
    return log_abs_cos(0.5 * float(t) * coupling_matrix(model)).sum(axis=1)


def ggm_general(model: CouplingModel, t: float) -> GgmValue:
    """
    GGM from the maximum over all single-site density matrices.

    Chains use prefix sums (O(N) per t); 2D lattices sum rows of the dense
    coupling matrix. Ties go to the lowest site index.

    Examples:
        any model, t=0    -> 0
        chain, any alpha, t=pi -> 1/2 (to rounding of cos(pi/2))
    """
    logs = site_log_products(model, t)
    k = int(np.argmax(logs))
    log_product = float(logs[k])
    return GgmValue(float(ggm_from_log(log_product)), k, log_product)


def _series_start(alpha: float, t_max: float, z: int) -> int:
    """First r whose factor t_max / (2 r^alpha) is small enough for the series."""
    if alpha == 0:
        return z + 1
    log_r = math.log(t_max / (2 * SERIES_X_MAX)) / alpha
    if log_r >= math.log(z + 1):
        return z + 1
    return max(1, math.ceil(math.exp(log_r)))


def chain_log_products(alpha: float, z: int, t_values) -> np.ndarray:
    """
    sum_{r=1}^{z} ln|cos(t / (2 r^alpha))| for each t.

    Factors are evaluated exactly in blocks until t/(2 r^alpha) drops below
    SERIES_X_MAX, then the remaining tail uses

        ln cos x = -x^2/2 - x^4/12 - x^6/45 - 17 x^8/2520

    summed through precomputed power sums. A t whose running sum falls under
    LOG_UNDERFLOW is frozen at -inf, since later factors only shrink it.

    Args:
        alpha: Fall-off rate
        z: Number of factors (range)
        t_values: Scalar or array of times

    Returns:
        Array of log-products, one per t
    """
    if z < 1:
        raise DomainError(f"Range z must be at least 1, got {z}")
    t = np.atleast_1d(np.asarray(t_values, dtype=float))
    logs = np.zeros(t.shape)
    t_max = float(np.max(np.abs(t))) if t.size else 0.0
    if t_max == 0:
        return logs

    r_series = _series_start(alpha, t_max, z)
    active = np.ones(t.shape, dtype=bool)
    start = 1
    while start < r_series:
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        stop = min(start + max(1, BLOCK_ELEMENTS // idx.size), r_series)
        half = 0.5 * np.arange(start, stop, dtype=float) ** (-alpha)
        logs[idx] += log_abs_cos(np.multiply.outer(t[idx], half)).sum(axis=1)
        active[idx] = logs[idx] > LOG_UNDERFLOW
        start = stop
    logs[~active] = -np.inf

    if r_series <= z and active.any():
        logger.debug("Series tail for r in [%d, %d] at alpha=%g", r_series, z, alpha)
        r = np.arange(r_series, z + 1, dtype=float)
        s2, s4, s6, s8 = (float(np.sum(r ** (-p * alpha))) for p in (2, 4, 6, 8))
        t2 = t[active] ** 2
        logs[active] -= t2 * (s2 / 8 + t2 * (s4 / 192 + t2 * (s6 / 2880 + t2 * 17 * s8 / 645120)))
    return logs


def ggm_chain_fastpath(n_sites: int, z: int, alpha: float, t: float) -> GgmValue:
    """
    GGM of a chain from its end site: 1/2 - (1/2) |prod_{r=1}^{z} cos(t / 2r^alpha)|.

    Args:
        n_sites: Chain length N
        z: Range, 1 <= z <= N - 1
        alpha: Fall-off rate
        t: Evolution time

    Returns:
        GgmValue with argmax_site 0

    Raises:
        DomainError: If z is out of range

    Examples:
        z=1, t=pi/2        -> 0.14644660940672627
        z=2, alpha=1, t=2pi -> 1/2
    """
    if n_sites < 2:
        raise DomainError(f"A chain needs at least 2 sites, got {n_sites}")
    if not 1 <= z <= n_sites - 1:
        raise DomainError(f"Range z must lie in [1, {n_sites - 1}], got {z}")
    if alpha < 0:
        raise DomainError(f"alpha must be non-negative, got {alpha}")
    log_product = float(chain_log_products(alpha, z, t)[0])
    return GgmValue(float(ggm_from_log(log_product)), 0, log_product)


def ggm_curve(model: CouplingModel, t_grid) -> MetricSeries:
    """
    GGM sampled along a time grid (site maximum at every t).

    Raises:
        DomainError: If the grid is empty or not strictly increasing
    """
    grid = np.asarray(t_grid, dtype=float)
    if grid.size == 0:
        raise DomainError("Time grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("Time grid must be strictly increasing")

    points = [ggm_general(model, t) for t in grid]
    return MetricSeries(
        grid_name="t",
        name="ggm",
        grid=grid,
        values=np.array([p.value for p in points]),
        extra={
            "argmax_site": np.array([p.argmax_site for p in points]),
            "log_product": np.array([p.log_product for p in points]),
        },
        metadata={**model.lattice.describe(), "alpha": model.alpha, "z": model.range_z},
    )


def period_of_chain(n_sites: int, alpha, z: int | None = None) -> float:
    """
    A (not necessarily fundamental) period of the chain GGM for integer alpha.

    Each factor |cos(t / 2r^alpha)| repeats every 2*pi*r^alpha, so the
    product repeats every 2*pi*lcm(1^alpha, ..., z^alpha).

    Raises:
        DomainError: For non-integer alpha (no period exists) or bad range

    Examples:
        z=1          -> 2*pi
        alpha=1, z=2 -> 4*pi
        alpha=0      -> 2*pi
    """
    if z is None:
        z = n_sites - 1
    if not 1 <= z <= n_sites - 1:
        raise DomainError(f"Range z must lie in [1, {n_sites - 1}], got {z}")
    if float(alpha) < 0 or not float(alpha).is_integer():
        raise DomainError(f"A period exists only for non-negative integer alpha, got {alpha}")

    power = int(alpha)
    multiple = math.lcm(*(r**power for r in range(1, z + 1)))
    try:
        return 2 * math.pi * multiple
    except OverflowError:
        raise DomainError(f"Period for alpha={power}, z={z} does not fit in a double")
