"""
Closed-form reduced density matrices of site subsets.

For a subset A (n sites) and its complement B, the virtual qubits attached
to each l in B contract to a Hadamard product, giving

    rho_A[s, s'] = 2^(-n) exp(-i (theta(s) - theta(s'))) prod_{l in B} (1 + exp(-i D_l)) / 2
    D_l = sum_{k in A} g_kl (s_k - s'_k),   theta(s) = sum_{k<k' in A} g_kk' s_k s_k'

Cost is O(4^n N) with no 2^N intermediate; B is contracted in blocks of
RDM_BLOCK_SITES sites, so memory stays O(4^n + 2^n * RDM_BLOCK_SITES). Bit
order matches the dense oracle: the first site of the subset is the most
significant bit.
"""

import logging
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from wgslab.config import (
    COS_FLOOR,
    DEFAULT_SUBSET_SAMPLES,
    MAX_CHECK_QUBITS,
    MAX_CHECK_SUBSET,
    MAX_EXHAUSTIVE_SITES,
    MAX_EXHAUSTIVE_SUBSET,
    MAX_RDM_SUBSET,
    RDM_BLOCK_SITES,
)
from wgslab.errors import CapacityError, DomainError
from wgslab.exact import TIE_TOL, build_wgs, reduced_density_matrix
from wgslab.lattice import CouplingModel, coupling_row

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ReducedDensityMatrix:
    subset: tuple[int, ...]
    entries: np.ndarray

    @property
    def n(self) -> int:
        return len(self.subset)

    @property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues in ascending order."""
        return np.linalg.eigvalsh(self.entries)

    @property
    def top_eigenvalue(self) -> float:
        return float(self.spectrum[-1])


@dataclass(frozen=True)
class SubsetWinner:
    subset: tuple[int, ...]
    eigenvalue: float
    scanned: int


def _subset_bits(n: int) -> np.ndarray:
    """(2^n, n) table of basis bits, column 0 most significant."""
    shifts = np.arange(n - 1, -1, -1)
    return ((np.arange(2**n)[:, None] >> shifts) & 1).astype(float)


def rdm_subset(model: CouplingModel, t: float, subset, include_intra_phase: bool = True) -> ReducedDensityMatrix:
    """
    Reduced density matrix of an arbitrary site subset.

    Args:
        model: Coupling model (any N)
        t: Evolution time
        subset: Ordered site indices forming A
        include_intra_phase: Keep the diagonal conjugation by the intra-A
            phases; dropping it leaves the spectrum unchanged

    Raises:
        CapacityError: If |A| > MAX_RDM_SUBSET
        DomainError: Empty, repeated or out-of-range subset
    """
    subset = tuple(int(k) for k in subset)
    n = len(subset)
    n_sites = model.n_sites
    if n == 0:
        raise DomainError("Subset must not be empty")
    if n > MAX_RDM_SUBSET:
        raise CapacityError(f"Subsets are capped at {MAX_RDM_SUBSET} sites, got {n}")
    if len(set(subset)) != n or any(not 0 <= k < n_sites for k in subset):
        raise DomainError(f"Invalid subset {subset} for {n_sites} sites")

    rows = np.array([coupling_row(model, k, t) for k in subset])
    in_b = np.ones(n_sites, dtype=bool)
    in_b[list(subset)] = False
    cross = rows[:, in_b]
    intra = rows[:, list(subset)]

    bits = _subset_bits(n)
    theta = 0.5 * np.einsum("si,ij,sj->s", bits, intra, bits)

    # Log-magnitude, phase and zero flags of the B product, accumulated over blocks of B
    dim = 2**n
    log_mag = np.zeros((dim, dim))
    phase = np.zeros((dim, dim))
    vanishing = np.zeros((dim, dim), dtype=bool)
    for start in range(0, cross.shape[1], RDM_BLOCK_SITES):
        projected = bits @ cross[:, start:start + RDM_BLOCK_SITES]
        for s in range(dim):
            half = 0.5 * (projected[s] - projected)
            cosines = np.cos(half)
            magnitudes = np.abs(cosines)
            log_mag[s] += np.log(np.maximum(magnitudes, COS_FLOOR)).sum(axis=1)
            phase[s] += math.pi * np.count_nonzero(cosines < 0, axis=1) - half.sum(axis=1)
            vanishing[s] |= (magnitudes < COS_FLOOR).any(axis=1)

    entries = np.exp(log_mag + 1j * phase) / dim
    entries[vanishing] = 0
    if include_intra_phase:
        entries *= np.exp(-1j * np.subtract.outer(theta, theta))

    return ReducedDensityMatrix(subset, entries)


def _is_better(lam: float, subset: tuple, best: SubsetWinner | None) -> bool:
    if best is None or lam > best.eigenvalue + TIE_TOL:
        return True
    if lam >= best.eigenvalue - TIE_TOL:
        return (len(subset), subset) < (len(best.subset), best.subset)
    return False


def _candidate_subsets(n_sites: int, n_max: int, mode: str, samples: int, seed: int):
    if mode == "exhaustive":
        for size in range(1, n_max + 1):
            yield from combinations(range(n_sites), size)
        return

    for size in range(1, n_max + 1):
        for start in range(n_sites - size + 1):
            yield tuple(range(start, start + size))

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        size = int(rng.integers(1, n_max + 1))
        yield tuple(sorted(int(k) for k in rng.choice(n_sites, size=size, replace=False)))


def max_eig_over_subsets(
    model: CouplingModel,
    t: float,
    n_max: int,
    mode: str = "auto",
    samples: int = DEFAULT_SUBSET_SAMPLES,
    seed: int = 0,
) -> SubsetWinner:
    """
    Subset of size <= n_max whose density matrix has the largest top eigenvalue.

    Args:
        model: Coupling model
        t: Evolution time
        n_max: Largest subset size scanned (clipped to N - 1)
        mode: "exhaustive", "sampled" or "auto" (exhaustive when n_max <= 6 and N <= 24)
        samples: Random subsets drawn in sampled mode, on top of all contiguous windows
        seed: Seed for the sampled mode

    Returns:
        SubsetWinner; ties go to the smallest subset, then the lowest indices
    """
    n_sites = model.n_sites
    n_max = min(int(n_max), n_sites - 1, MAX_RDM_SUBSET)
    if n_max < 1:
        raise DomainError("n_max must be at least 1")

    small = n_max <= MAX_EXHAUSTIVE_SUBSET and n_sites <= MAX_EXHAUSTIVE_SITES
    if mode == "auto":
        mode = "exhaustive" if small else "sampled"
    elif mode == "exhaustive" and not small:
        raise CapacityError(
            f"Exhaustive scans need n_max <= {MAX_EXHAUSTIVE_SUBSET} and N <= {MAX_EXHAUSTIVE_SITES}"
        )
    elif mode != "sampled" and mode != "exhaustive":
        raise DomainError(f"Unknown scan mode: {mode!r}")

    best = None
    scanned = 0
    for subset in _candidate_subsets(n_sites, n_max, mode, samples, seed):
        lam = rdm_subset(model, t, subset).top_eigenvalue
        scanned += 1
        if _is_better(lam, subset, best):
            best = SubsetWinner(subset, lam, 0)

    logger.info("Scanned %d subsets (%s); winner %s", scanned, mode, best.subset)
    return SubsetWinner(best.subset, best.eigenvalue, scanned)


def spectrum_invariance_check(model: CouplingModel, t: float, subset, tol: float = 1e-12) -> bool:
    """
    Check that dropping the intra-subset phases keeps the spectrum, and that
    both spectra match the dense partial trace.

    Raises:
        CapacityError: Beyond N <= 14 or |A| <= 10
    """
    subset = tuple(int(k) for k in subset)
    if model.n_sites > MAX_CHECK_QUBITS or len(subset) > MAX_CHECK_SUBSET:
        raise CapacityError(
            f"Spectrum checks need N <= {MAX_CHECK_QUBITS} and |A| <= {MAX_CHECK_SUBSET}"
        )

    with_phase = rdm_subset(model, t, subset, include_intra_phase=True).spectrum
    without_phase = rdm_subset(model, t, subset, include_intra_phase=False).spectrum
    dense = np.linalg.eigvalsh(reduced_density_matrix(build_wgs(model, t), subset))

    return bool(
        np.allclose(with_phase, without_phase, rtol=0, atol=tol)
        and np.allclose(with_phase, dense, rtol=0, atol=tol)
    )
