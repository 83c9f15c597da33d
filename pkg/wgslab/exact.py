"""
Dense state-vector oracle for weighted graph states (N <= 20).

Basis index convention: site 0 is the most significant bit, so amplitude
eta of an N-qubit state belongs to |a_0 a_1 ... a_{N-1}> with eta the
binary number a_0 a_1 ... a_{N-1}. Reshaping the amplitudes to (2,) * N
puts site i on axis i.
"""

import logging
import math
from dataclasses import dataclass
from functools import reduce
from itertools import combinations

import numpy as np

from wgslab.config import MAX_BRUTE_QUBITS, MAX_STATE_QUBITS
from wgslab.errors import CapacityError, DomainError
from wgslab.lattice import CouplingModel, materialize_weights, weight

logger = logging.getLogger(__name__)

# Eigenvalues closer than this count as a tie in bipartition scans
TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state of n_qubits qubits as 2^N complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128).ravel()
        size = amps.size
        if size < 2 or size & (size - 1):
            raise DomainError(f"Amplitude count must be a power of two >= 2, got {size}")
        if size.bit_length() - 1 > MAX_STATE_QUBITS:
            raise CapacityError(f"State vectors are capped at {MAX_STATE_QUBITS} qubits")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)


@dataclass(frozen=True)
class BipartitionResult:
    subset: tuple[int, ...]
    max_schmidt_sq: float


@dataclass(frozen=True)
class BruteGgm:
    value: float
    bipartition: BipartitionResult


@dataclass(frozen=True)
class MeasurementRecord:
    measured_sites: tuple[int, ...]
    outcomes: tuple[int, ...]
    probability: float
    remaining_sites: tuple[int, ...]


def _wgs_phases(weights: np.ndarray) -> np.ndarray:
    """
    sum_{i<j} g_ij a_i a_j for every basis state, built one qubit at a time.

    Appending site k as the new least significant bit doubles the table:
    the a_k = 1 half gains sum_{i<k} g_ik a_i, itself built by doubling.
    """
    n = weights.shape[0]
    phases = np.zeros(1)
    for k in range(n):
        linear = np.zeros(1)
        for i in range(k):
            linear = np.repeat(linear, 2)
            linear[1::2] += weights[i, k]
        doubled = np.repeat(phases, 2)
        doubled[1::2] += linear
        phases = doubled
    return phases


def state_from_weights(weights: np.ndarray) -> StateVector:
    """
    Weighted graph state for an explicit symmetric weight matrix.

    amplitude(eta) = 2^(-N/2) * exp(-i sum_{i<j, a_i = a_j = 1} g_ij)
    """
    weights = np.asarray(weights, dtype=float)
    n = weights.shape[0]
    if weights.shape != (n, n):
        raise DomainError("Weight matrix must be square")
    if n > MAX_STATE_QUBITS:
        raise CapacityError(f"{n} qubits exceeds the state-vector cap of {MAX_STATE_QUBITS}")
    amplitudes = np.exp(-1j * _wgs_phases(weights)) / math.sqrt(2.0**n)
    return StateVector(amplitudes)


def build_wgs(model: CouplingModel, t: float) -> StateVector:
    """
    Build the N-qubit weighted graph state at time t.

    Raises:
        CapacityError: If N > MAX_STATE_QUBITS

    Examples:
        N=2 -> (1, 1, 1, exp(-i g_12)) / 2
        t=0 -> uniform amplitudes 2^(-N/2)
    """
    if model.n_sites > MAX_STATE_QUBITS:
        raise CapacityError(
            f"{model.n_sites} qubits exceeds the state-vector cap of {MAX_STATE_QUBITS}"
        )
    return state_from_weights(materialize_weights(model, t))


def _check_subset(n_qubits: int, subset) -> tuple[int, ...]:
    subset = tuple(int(s) for s in subset)
    if not subset:
        raise DomainError("Subset must not be empty")
    if len(set(subset)) != len(subset):
        raise DomainError(f"Subset has repeated sites: {subset}")
    if any(not 0 <= s < n_qubits for s in subset):
        raise DomainError(f"Subset {subset} out of range for {n_qubits} qubits")
    return subset


def _split_matrix(state: StateVector, subset: tuple[int, ...]) -> np.ndarray:
    """Amplitudes as a 2^|A| x 2^|B| matrix, rows ordered by the subset's bits."""
    rest = [i for i in range(state.n_qubits) if i not in subset]
    tensor = np.transpose(state.tensor(), list(subset) + rest)
    return tensor.reshape(2 ** len(subset), -1)


def reduced_density_matrix(state: StateVector, subset) -> np.ndarray:
    """
    Dense partial trace onto subset (first listed site is the most significant bit).
    """
    subset = _check_subset(state.n_qubits, subset)
    m = _split_matrix(state, subset)
    return m @ m.conj().T


def bipartition_max_eigenvalue(state: StateVector, subset) -> float:
    """Largest eigenvalue of rho_A, from the smaller Gram matrix of the split."""
    subset = _check_subset(state.n_qubits, subset)
    m = _split_matrix(state, subset)
    gram = m @ m.conj().T if m.shape[0] <= m.shape[1] else m.conj().T @ m
    return float(np.linalg.eigvalsh(gram)[-1])


def ggm_brute(state: StateVector) -> BruteGgm:
    """
    GGM by exhaustive search over bipartitions A:B with |A| <= N/2.

    Ties keep the first subset found (smallest |A|, then lexicographic).

    Raises:
        CapacityError: If N > MAX_BRUTE_QUBITS
    """
    n = state.n_qubits
    if n > MAX_BRUTE_QUBITS:
        raise CapacityError(f"Exhaustive search is capped at {MAX_BRUTE_QUBITS} qubits, got {n}")
    if n < 2:
        raise DomainError("GGM needs at least two qubits")

    best = None
    for size in range(1, n // 2 + 1):
        for subset in combinations(range(n), size):
            lam = bipartition_max_eigenvalue(state, subset)
            if best is None or lam > best.max_schmidt_sq + TIE_TOL:
                best = BipartitionResult(subset, lam)

    logger.debug("Brute-force GGM over %d qubits: best cut %s", n, best.subset)
    return BruteGgm(1.0 - best.max_schmidt_sq, best)


def measure_z(state: StateVector, k: int, outcome: int) -> tuple[float, StateVector]:
    """
    Project qubit k onto |outcome>, renormalize and drop the qubit.

    Returns:
        (probability, state on N - 1 qubits)

    Raises:
        DomainError: Bad site/outcome, last qubit, or a zero-probability branch
    """
    n = state.n_qubits
    if n < 2:
        raise DomainError("Cannot measure away the last qubit")
    if not 0 <= k < n:
        raise DomainError(f"Qubit {k} out of range for {n} qubits")
    if outcome not in (0, 1):
        raise DomainError(f"Outcome must be 0 or 1, got {outcome!r}")

    branch = np.take(state.tensor(), outcome, axis=k).ravel()
    probability = float(np.vdot(branch, branch).real)
    if probability < 1e-15:
        raise DomainError(f"Outcome {outcome} on qubit {k} has zero probability")
    return probability, StateVector(branch / math.sqrt(probability))


def measure_sequence(state: StateVector, sites, outcomes) -> tuple[MeasurementRecord, StateVector]:
    """
    Measure several original sites in order, tracking which labels remain.

    Args:
        state: N-qubit state
        sites: Original site labels to measure, in measurement order
        outcomes: One outcome in {0, 1} per site

    Returns:
        (MeasurementRecord, post-measurement state over the remaining sites in ascending order)
    """
    sites = tuple(int(s) for s in sites)
    outcomes = tuple(int(o) for o in outcomes)
    if len(sites) != len(outcomes):
        raise DomainError(f"{len(sites)} sites but {len(outcomes)} outcomes")
    if len(set(sites)) != len(sites):
        raise DomainError(f"Measured sites repeat: {sites}")
    if len(sites) >= state.n_qubits:
        raise DomainError("At least one qubit must remain unmeasured")

    remaining = list(range(state.n_qubits))
    probability = 1.0
    for site, outcome in zip(sites, outcomes):
        if site not in remaining:
            raise DomainError(f"Site {site} out of range for {state.n_qubits} qubits")
        p, state = measure_z(state, remaining.index(site), outcome)
        probability *= p
        remaining.remove(site)

    record = MeasurementRecord(sites, outcomes, probability, tuple(remaining))
    return record, state


def lu_correction(model: CouplingModel, t: float, measured_sites, outcomes, site: int) -> np.ndarray:
    """
    Diagonal of the local unitary restoring site l after sigma_z measurements.

    Every outcome-1 measurement at k leaves a phase exp(-i g_lk) on |1>_l;
    the correction is diag(1, exp(i sum_r g_{l k_r})) over the outcome-1
    sites, i.e. diag(exp(-i sum), 1) up to a global phase.

    Returns:
        Length-2 complex array (the diagonal)

    Examples:
        all outcomes 0             -> (1, 1)
        one outcome 1 at k         -> (1, exp(i g_lk))
    """
    measured_sites = tuple(int(s) for s in measured_sites)
    if site in measured_sites:
        raise DomainError(f"Site {site} was measured; corrections apply to remaining sites")
    total = sum(
        weight(model, site, k, t)
        for k, outcome in zip(measured_sites, outcomes, strict=True)
        if outcome == 1
    )
    return np.array([1.0, np.exp(1j * total)], dtype=complex)


def is_clifford_correction(diagonal: np.ndarray, tol: float = 1e-12) -> bool:
    """True when the correction is the identity (phase sum a multiple of 2*pi)."""
    return bool(np.max(np.abs(np.asarray(diagonal) - 1.0)) <= tol)


def apply_local_diagonals(state: StateVector, diagonals) -> StateVector:
    """Apply one diagonal 2x2 unitary per qubit (MSB first)."""
    factor = reduce(np.kron, [np.asarray(d, dtype=complex) for d in diagonals])
    if factor.size != state.amplitudes.size:
        raise DomainError("Need exactly one diagonal per qubit")
    return StateVector(state.amplitudes * factor)


def verify_measurement_reduction(
    model: CouplingModel, t: float, measured_sites, outcomes, apply_lu: bool = True
) -> float:
    """
    Fidelity between the measured-and-corrected state and the sub-weight WGS.

    Builds the N-qubit state, measures the given sites in order, applies
    lu_correction to every remaining site and compares with the weighted
    graph state of the remaining sites under the original weights.

    Raises:
        CapacityError: If N > MAX_BRUTE_QUBITS
    """
    if model.n_sites > MAX_BRUTE_QUBITS:
        raise CapacityError(
            f"Measurement checks are capped at {MAX_BRUTE_QUBITS} qubits, got {model.n_sites}"
        )
    state = build_wgs(model, t)
    record, reduced = measure_sequence(state, measured_sites, outcomes)
    remaining = list(record.remaining_sites)

    if apply_lu:
        diagonals = [
            lu_correction(model, t, record.measured_sites, record.outcomes, site)
            for site in remaining
        ]
        reduced = apply_local_diagonals(reduced, diagonals)

    target = state_from_weights(materialize_weights(model, t)[np.ix_(remaining, remaining)])
    return float(abs(np.vdot(target.amplitudes, reduced.amplitudes)))
