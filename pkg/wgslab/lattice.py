"""
Lattice geometry and power-law couplings for weighted graph states.

Chains are unit-spaced lines along x. The deformed 2D lattice interpolates
between the square grid (theta = 90) and the honeycomb (theta = 120): inside
a row the bond to the next site points along (cos theta, sin theta) from an
even-parity site and (-cos theta, sin theta) from an odd one, and every
even-parity site has a unit bond (1, 0) to the site with the same column in
the next row.

Site indices are 0-based throughout. The 1-based lattice coordinates
(i_x, i_y) map to index (i_x - 1) * L + (i_y - 1), see site_index().
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from wgslab.config import DENSE_WEIGHT_CAP, THETA_MAX_DEG, THETA_MIN_DEG
from wgslab.errors import CapacityError, DomainError

logger = logging.getLogger(__name__)


class LatticeKind(str, Enum):
    CHAIN = "chain"
    DEFORMED_2D = "deformed2d"


class SitePosition(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class LatticeSpec:
    """
    Declarative description of a lattice with open boundaries.

    Attributes:
        kind: Chain or deformed 2D lattice
        size: N for a chain, side length L for the 2D lattice (N = L^2)
        theta_deg: Deformation angle in degrees (2D only, ignored for chains)
    """

    kind: LatticeKind
    size: int
    theta_deg: float = 90.0

    def __post_init__(self):
        try:
            kind = LatticeKind(self.kind)
        except ValueError:
            raise DomainError(f"Unknown lattice kind: {self.kind!r}")

        if isinstance(self.size, bool) or int(self.size) != self.size:
            raise DomainError(f"Lattice size must be an integer, got {self.size!r}")
        size = int(self.size)
        theta = float(self.theta_deg)

        if kind is LatticeKind.CHAIN:
            if size < 2:
                raise DomainError(f"A chain needs at least 2 sites, got {size}")
            theta = 90.0
        else:
            if size < 2:
                raise DomainError(f"Side length L must be at least 2, got {size}")
            if not math.isfinite(theta) or not THETA_MIN_DEG <= theta <= THETA_MAX_DEG:
                raise DomainError(
                    f"Theta must lie in [{THETA_MIN_DEG:g}, {THETA_MAX_DEG:g}] degrees, got {theta}"
                )

        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "theta_deg", theta)

    @classmethod
    def chain(cls, n_sites: int) -> "LatticeSpec":
        return cls(LatticeKind.CHAIN, n_sites)

    @classmethod
    def deformed(cls, side: int, theta_deg: float = 90.0) -> "LatticeSpec":
        return cls(LatticeKind.DEFORMED_2D, side, theta_deg)

    @property
    def is_chain(self) -> bool:
        return self.kind is LatticeKind.CHAIN

    @property
    def n_sites(self) -> int:
        return self.size if self.is_chain else self.size * self.size

    def describe(self) -> dict:
        """Plain-dict form used in run metadata."""
        if self.is_chain:
            return {"lattice": self.kind.value, "n": self.size}
        return {"lattice": self.kind.value, "l": self.size, "theta": self.theta_deg}


@dataclass(frozen=True)
class CouplingModel:
    """
    Power-law coupling phi_ij = r_ij^(-alpha) on a lattice.

    Attributes:
        lattice: Geometry the couplings live on
        alpha: Fall-off rate, alpha >= 0
        z: Range cutoff for chains (pairs with |i - j| <= z are coupled).
           None means all-to-all. 2D lattices are always all-to-all.
    """

    lattice: LatticeSpec
    alpha: float
    z: int | None = None

    def __post_init__(self):
        alpha = float(self.alpha)
        if not math.isfinite(alpha) or alpha < 0:
            raise DomainError(f"alpha must be a finite non-negative number, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)

        z = self.z
        n = self.lattice.n_sites
        if z is not None:
            if isinstance(z, bool) or int(z) != z:
                raise DomainError(f"Range z must be an integer, got {z!r}")
            z = int(z)
            if not self.lattice.is_chain and z != n - 1:
                raise DomainError("A range cutoff is only defined for chains; 2D lattices are all-to-all")
            if not 1 <= z <= n - 1:
                raise DomainError(f"Range z must lie in [1, {n - 1}], got {z}")
            if z == n - 1:
                z = None
        object.__setattr__(self, "z", z)

    @property
    def n_sites(self) -> int:
        return self.lattice.n_sites

    @property
    def range_z(self) -> int:
        """Effective range (N - 1 when all-to-all)."""
        return self.n_sites - 1 if self.z is None else self.z


# =============================================================================
# POSITIONS
# =============================================================================

def _bond_trig(theta_deg: float) -> tuple[float, float]:
    """cos/sin of the in-row bond angle, exact at the square lattice."""
    if theta_deg == 90.0:
        return 0.0, 1.0
    rad = math.radians(theta_deg)
    return math.cos(rad), math.sin(rad)


@lru_cache(maxsize=32)
def position_array(spec: LatticeSpec) -> np.ndarray:
    """
    Site coordinates as an (N, 2) read-only array.

    Args:
        spec: Lattice description

    Returns:
        Array whose row i is the position of site i
    """
    if spec.is_chain:
        positions = np.zeros((spec.n_sites, 2))
        positions[:, 0] = np.arange(spec.n_sites, dtype=float)
    else:
        L = spec.size
        c, s = _bond_trig(spec.theta_deg)
        rows = np.arange(L)
        cols = np.arange(L)

        # Row offsets: the cross bond leaves from column 0 of even rows and
        # from column 1 of odd rows, which shifts odd->even steps by -2 cos.
        steps = np.where(rows[:-1] % 2 == 0, 1.0, 1.0 - 2.0 * c)
        row_x = np.concatenate(([0.0], np.cumsum(steps)))

        # Zigzag within a row: net displacement after b steps is 0 or +-cos.
        zig = np.where(rows % 2 == 0, 1.0, -1.0)[:, None] * (cols % 2)[None, :]
        x = row_x[:, None] + c * zig
        y = np.broadcast_to(s * cols.astype(float), (L, L))
        positions = np.column_stack((x.ravel(), y.ravel()))

    logger.debug("Built %d positions for %s", spec.n_sites, spec)
    positions.setflags(write=False)
    return positions


def site_positions(spec: LatticeSpec) -> list[SitePosition]:
    """
    Site coordinates in units of the nearest-neighbor bond length.

    Args:
        spec: Lattice description

    Returns:
        N positions in site-index order

    Examples:
        chain of 4               -> (0,0), (1,0), (2,0), (3,0)
        square L=3, (i_x,i_y)=(2,3) -> (1, 2)
    """
    return [SitePosition(float(x), float(y)) for x, y in position_array(spec)]


def site_index(spec: LatticeSpec, i_x: int, i_y: int) -> int:
    """
    Convert 1-based 2D lattice coordinates to a 0-based site index.

    Raises:
        DomainError: For chains or coordinates outside the lattice
    """
    if spec.is_chain:
        raise DomainError("site_index takes 2D coordinates; chains are indexed directly")
    L = spec.size
    if not (1 <= i_x <= L and 1 <= i_y <= L):
        raise DomainError(f"Coordinates ({i_x}, {i_y}) outside the {L}x{L} lattice")
    return (i_x - 1) * L + (i_y - 1)


def nearest_neighbor_pairs(spec: LatticeSpec) -> list[tuple[int, int]]:
    """
    Bonded site pairs (i < j).

    Chains bond consecutive sites. The 2D lattice bonds consecutive sites in
    a row, plus each even-parity site to the same column of the next row.
    """
    if spec.is_chain:
        return [(i, i + 1) for i in range(spec.n_sites - 1)]

    L = spec.size
    pairs = []
    for a in range(L):
        for b in range(L):
            i = a * L + b
            if b + 1 < L:
                pairs.append((i, i + 1))
            if a + 1 < L and (a + b) % 2 == 0:
                pairs.append((i, i + L))
    return sorted(pairs)


def _check_site(spec: LatticeSpec, i: int) -> None:
    if not 0 <= i < spec.n_sites:
        raise DomainError(f"Site {i} out of range for {spec.n_sites} sites")


def distance(spec: LatticeSpec, i: int, j: int) -> float:
    """
    Euclidean distance between two distinct sites.

    Raises:
        DomainError: If i == j or either index is out of range
    """
    _check_site(spec, i)
    _check_site(spec, j)
    if i == j:
        raise DomainError("Distance is only defined between distinct sites")
    if spec.is_chain:
        return float(abs(i - j))
    positions = position_array(spec)
    dx, dy = positions[i] - positions[j]
    return math.hypot(dx, dy)


@lru_cache(maxsize=8)
def distance_matrix(spec: LatticeSpec) -> np.ndarray:
    """Dense pairwise distances (zero diagonal), capped at DENSE_WEIGHT_CAP sites."""
    n = spec.n_sites
    if n > DENSE_WEIGHT_CAP:
        raise CapacityError(
            f"{n} sites exceeds the dense cap of {DENSE_WEIGHT_CAP}; use coupling_row for lazy evaluation"
        )
    if spec.is_chain:
        idx = np.arange(n, dtype=float)
        dist = np.abs(np.subtract.outer(idx, idx))
    else:
        dist = squareform(pdist(position_array(spec)))
    dist.setflags(write=False)
    return dist


# =============================================================================
# WEIGHTS
# =============================================================================

def weight(model: CouplingModel, i: int, j: int, t: float) -> float:
    """
    Time-dependent weight g_ij(t) = t * r_ij^(-alpha), or 0 outside the range.

    Examples:
        chain, alpha=1, sites 0 and 2, t=2*pi -> pi
        chain, z=1, |i - j| = 2              -> 0
    """
    r = distance(model.lattice, i, j)
    if model.lattice.is_chain and abs(i - j) > model.range_z:
        return 0.0
    return t * r ** (-model.alpha)


@lru_cache(maxsize=8)
def coupling_matrix(model: CouplingModel) -> np.ndarray:
    """
    Dense time-independent couplings phi (symmetric, zero diagonal).

    Raises:
        CapacityError: Above DENSE_WEIGHT_CAP sites
    """
    dist = distance_matrix(model.lattice)
    coupled = dist > 0
    if model.lattice.is_chain:
        coupled &= dist <= model.range_z

    phi = np.zeros_like(dist)
    phi[coupled] = dist[coupled] ** (-model.alpha)
    phi.setflags(write=False)
    logger.debug("Materialized couplings for %s", model)
    return phi


def materialize_weights(model: CouplingModel, t: float, cap: int = DENSE_WEIGHT_CAP) -> np.ndarray:
    """
    Dense weight matrix g(t) for oracle-scale lattices.

    Args:
        model: Coupling model
        t: Evolution time
        cap: Largest N allowed

    Returns:
        Symmetric N x N matrix with zero diagonal

    Raises:
        CapacityError: If N exceeds cap
    """
    if model.n_sites > cap:
        raise CapacityError(
            f"{model.n_sites} sites exceeds the dense cap of {cap}; use coupling_row for lazy evaluation"
        )
    return t * coupling_matrix(model)


def coupling_row(model: CouplingModel, k: int, t: float) -> np.ndarray:
    """
    Weights g_kj(t) from site k to every site, computed without an N x N matrix.

    The entry for k itself is 0, as are pairs beyond the chain range.
    """
    _check_site(model.lattice, k)
    n = model.n_sites
    if model.lattice.is_chain:
        r = np.abs(np.arange(n, dtype=float) - k)
        coupled = (r > 0) & (r <= model.range_z)
    else:
        delta = position_array(model.lattice) - position_array(model.lattice)[k]
        r = np.hypot(delta[:, 0], delta[:, 1])
        coupled = np.arange(n) != k

    row = np.zeros(n)
    row[coupled] = t * r[coupled] ** (-model.alpha)
    return row
