"""Unit tests for the dense state-vector oracle."""

import math
from itertools import product

import numpy as np
import pytest


class TestStateVector:
    """Tests for StateVector and build_wgs."""

    def test_two_qubit_state(self):
        """Should build (1, 1, 1, exp(-i g)) / 2."""
        from wgslab.exact import build_wgs
        from wgslab.lattice import CouplingModel, LatticeSpec

        state = build_wgs(CouplingModel(LatticeSpec.chain(2), 1.0), 0.7)
        expected = np.array([1, 1, 1, np.exp(-0.7j)]) / 2

        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)

    def test_three_qubit_phases(self):
        """Should put site 0 on the most significant bit."""
        from wgslab.exact import state_from_weights

        g = np.array([[0, 0.1, 0.2], [0.1, 0, 0.4], [0.2, 0.4, 0]])
        state = state_from_weights(g)

        # |101> carries g_02, |011> carries g_12
        assert state.amplitudes[0b101] == pytest.approx(np.exp(-0.2j) / math.sqrt(8))
        assert state.amplitudes[0b011] == pytest.approx(np.exp(-0.4j) / math.sqrt(8))
        assert state.amplitudes[0b111] == pytest.approx(np.exp(-0.7j) / math.sqrt(8))

    def test_uniform_magnitudes(self, square_model):
        """Should give every amplitude magnitude 2^(-N/2) and unit norm."""
        from wgslab.exact import build_wgs

        state = build_wgs(square_model, 2.2)

        np.testing.assert_allclose(np.abs(state.amplitudes), 2 ** (-4.5))
        assert state.norm == pytest.approx(1.0, abs=1e-12)
        assert state.n_qubits == 9

    def test_zero_time_uniform(self, chain_model):
        """Should be the uniform superposition at t = 0."""
        from wgslab.exact import build_wgs

        np.testing.assert_allclose(build_wgs(chain_model, 0.0).amplitudes, 2 ** (-3))

    def test_bad_amplitude_count(self):
        """Should refuse a length that is not a power of two."""
        from wgslab.errors import DomainError
        from wgslab.exact import StateVector

        with pytest.raises(DomainError):
            StateVector(np.ones(3))

    def test_capacity(self):
        """Should refuse more than 20 qubits."""
        from wgslab.errors import CapacityError
        from wgslab.exact import build_wgs
        from wgslab.lattice import CouplingModel, LatticeSpec

        with pytest.raises(CapacityError):
            build_wgs(CouplingModel(LatticeSpec.chain(21), 1.0), 1.0)


class TestReducedDensityMatrix:
    """Tests for reduced_density_matrix and bipartition_max_eigenvalue."""

    def test_unit_trace_hermitian(self, chain_model):
        """Should be Hermitian with unit trace."""
        from wgslab.exact import build_wgs, reduced_density_matrix

        rho = reduced_density_matrix(build_wgs(chain_model, 1.9), (1, 4))

        assert rho.shape == (4, 4)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-15)
        assert np.trace(rho).real == pytest.approx(1.0)

    def test_complement_shares_top_eigenvalue(self, chain_model):
        """Should give A and its complement the same largest eigenvalue."""
        from wgslab.exact import bipartition_max_eigenvalue, build_wgs

        state = build_wgs(chain_model, 2.6)

        assert bipartition_max_eigenvalue(state, (0, 2)) == pytest.approx(
            bipartition_max_eigenvalue(state, (1, 3, 4, 5)), abs=1e-12
        )

    def test_bad_subset(self, chain_model):
        """Should refuse empty, repeated and out-of-range subsets."""
        from wgslab.errors import DomainError
        from wgslab.exact import build_wgs, reduced_density_matrix

        state = build_wgs(chain_model, 1.0)

        for subset in [(), (1, 1), (0, 6)]:
            with pytest.raises(DomainError):
                reduced_density_matrix(state, subset)


class TestGgmBrute:
    """Tests for ggm_brute."""

    def test_product_state(self, chain_model):
        """Should be 0 at t = 0."""
        from wgslab.exact import build_wgs, ggm_brute

        assert ggm_brute(build_wgs(chain_model, 0.0)).value == pytest.approx(0.0, abs=1e-12)

    def test_bell_pair(self):
        """Should be 1/2 for two qubits at g = pi."""
        from wgslab.exact import build_wgs, ggm_brute
        from wgslab.lattice import CouplingModel, LatticeSpec

        result = ggm_brute(build_wgs(CouplingModel(LatticeSpec.chain(2), 1.0), math.pi))

        assert result.value == pytest.approx(0.5, abs=1e-12)
        assert result.bipartition.subset == (0,)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_single_site_cuts_win_before_pi(self, n, alpha):
        """Should agree with the closed form for t in (0, pi)."""
        from wgslab.analytic import ggm_general
        from wgslab.exact import build_wgs, ggm_brute
        from wgslab.lattice import CouplingModel, LatticeSpec

        model = CouplingModel(LatticeSpec.chain(n), alpha)

        for t in (0.3, 1.1, 2.0, 2.8):
            brute = ggm_brute(build_wgs(model, t))
            assert brute.value == pytest.approx(ggm_general(model, t).value, abs=1e-10)

    def test_never_above_closed_form(self, square_model):
        """Should never exceed the single-site value (single-site cuts are searched too)."""
        from wgslab.analytic import ggm_general
        from wgslab.exact import build_wgs, ggm_brute
        from wgslab.lattice import CouplingModel, LatticeSpec

        models = [square_model, CouplingModel(LatticeSpec.deformed(2, 130.0), 0.8)]
        for model in models:
            for t in (1.0, 4.0, 7.5):
                brute = ggm_brute(build_wgs(model, t)).value
                assert brute <= ggm_general(model, t).value + 1e-10

    def test_two_site_cut_beats_single_sites(self):
        """Should find the (0, 2) cut for N = 4, alpha = 1, t = 2 pi."""
        from wgslab.analytic import ggm_general
        from wgslab.exact import build_wgs, ggm_brute
        from wgslab.lattice import CouplingModel, LatticeSpec

        model = CouplingModel(LatticeSpec.chain(4), 1.0)
        brute = ggm_brute(build_wgs(model, 2 * math.pi))

        assert brute.value == pytest.approx(0.25, abs=1e-10)
        assert brute.bipartition.subset == (0, 2)
        assert ggm_general(model, 2 * math.pi).value == pytest.approx(0.5, abs=1e-12)

    def test_capacity(self):
        """Should refuse more than 16 qubits."""
        from wgslab.errors import CapacityError
        from wgslab.exact import StateVector, ggm_brute

        with pytest.raises(CapacityError):
            ggm_brute(StateVector(np.ones(2**17) / 2**8.5))


class TestMeasurement:
    """Tests for measure_z and measure_sequence."""

    def test_half_probability(self, chain_model):
        """Should give probability 1/2 for any outcome on a weighted graph state."""
        from wgslab.exact import build_wgs, measure_z

        for outcome in (0, 1):
            p, reduced = measure_z(build_wgs(chain_model, 1.4), 2, outcome)
            assert p == pytest.approx(0.5)
            assert reduced.n_qubits == 5
            assert reduced.norm == pytest.approx(1.0)

    def test_sequence_tracks_labels(self, chain_model):
        """Should report the remaining original labels in ascending order."""
        from wgslab.exact import build_wgs, measure_sequence

        record, reduced = measure_sequence(build_wgs(chain_model, 1.0), [3, 1], [1, 0])

        assert record.remaining_sites == (0, 2, 4, 5)
        assert record.probability == pytest.approx(0.25)
        assert reduced.n_qubits == 4

    def test_last_qubit(self):
        """Should refuse to measure the last qubit away."""
        from wgslab.errors import DomainError
        from wgslab.exact import StateVector, measure_z

        with pytest.raises(DomainError):
            measure_z(StateVector(np.array([1.0, 0.0])), 0, 0)

    def test_zero_probability_branch(self):
        """Should refuse a branch with zero probability."""
        from wgslab.errors import DomainError
        from wgslab.exact import StateVector, measure_z

        with pytest.raises(DomainError, match="zero probability"):
            measure_z(StateVector(np.array([1.0, 0.0, 0.0, 0.0])), 0, 1)

    def test_mismatched_outcomes(self, chain_model):
        """Should refuse a different number of sites and outcomes."""
        from wgslab.errors import DomainError
        from wgslab.exact import build_wgs, measure_sequence

        with pytest.raises(DomainError):
            measure_sequence(build_wgs(chain_model, 1.0), [0, 1], [1])


class TestLocalUnitaryCorrection:
    """Tests for lu_correction and verify_measurement_reduction."""

    def test_all_zero_outcomes(self, chain_model):
        """Should be the identity when nothing was measured as 1."""
        from wgslab.exact import is_clifford_correction, lu_correction

        diagonal = lu_correction(chain_model, 1.0, [1, 3], [0, 0], 2)

        np.testing.assert_allclose(diagonal, [1, 1])
        assert is_clifford_correction(diagonal)

    def test_single_outcome_one(self, chain_model):
        """Should carry exp(i g_lk) on |1>."""
        from wgslab.exact import lu_correction

        diagonal = lu_correction(chain_model, 1.2, [1, 3], [1, 0], 4)

        # g_41 = 1.2 / 3
        np.testing.assert_allclose(diagonal, [1, np.exp(0.4j)])

    def test_measured_site_rejected(self, chain_model):
        """Should refuse a correction on a measured site."""
        from wgslab.errors import DomainError
        from wgslab.exact import lu_correction

        with pytest.raises(DomainError):
            lu_correction(chain_model, 1.0, [1, 3], [1, 1], 3)

    def test_fidelity_restored(self):
        """Should restore the sub-graph state for every outcome string."""
        from wgslab.exact import verify_measurement_reduction
        from wgslab.lattice import CouplingModel, LatticeSpec

        model = CouplingModel(LatticeSpec.chain(5), 1.0)

        for outcomes in product((0, 1), repeat=2):
            assert verify_measurement_reduction(model, 1.0, [1, 3], outcomes) == pytest.approx(1.0, abs=1e-12)

    def test_fidelity_restored_on_2d(self, square_model):
        """Should restore the sub-graph state on a deformed lattice."""
        from wgslab.exact import verify_measurement_reduction

        assert verify_measurement_reduction(square_model, 2.5, [4, 0, 8], [1, 1, 0]) == pytest.approx(1.0, abs=1e-12)

    def test_fidelity_lost_without_correction(self):
        """Should fall below 1 without corrections when an outcome is 1."""
        from wgslab.exact import verify_measurement_reduction
        from wgslab.lattice import CouplingModel, LatticeSpec

        model = CouplingModel(LatticeSpec.chain(5), 1.0)
        expected = math.cos(0.5) ** 2 * math.cos(1 / 6)

        assert verify_measurement_reduction(model, 1.0, [1, 3], [1, 0], apply_lu=False) == pytest.approx(expected, abs=1e-12)
        assert verify_measurement_reduction(model, 1.0, [1, 3], [0, 0], apply_lu=False) == pytest.approx(1.0, abs=1e-12)

    def test_correction_count(self, chain_model):
        """Should refuse a diagonal list that does not match the qubit count."""
        from wgslab.errors import DomainError
        from wgslab.exact import apply_local_diagonals, build_wgs

        with pytest.raises(DomainError):
            apply_local_diagonals(build_wgs(chain_model, 1.0), [[1, 1]] * 3)

    def test_capacity(self):
        """Should refuse more than 16 qubits."""
        from wgslab.errors import CapacityError
        from wgslab.exact import verify_measurement_reduction
        from wgslab.lattice import CouplingModel, LatticeSpec

        with pytest.raises(CapacityError):
            verify_measurement_reduction(CouplingModel(LatticeSpec.chain(17), 1.0), 1.0, [0], [1])
