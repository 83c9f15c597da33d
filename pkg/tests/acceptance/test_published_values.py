"""
Acceptance runs against published values.

These take minutes and are deselected by default; run them with

    pytest -m slow tests/acceptance

Several published constants could not be reproduced with the definitions
implemented here (see DESIGN.md); those tests are non-strict xfails so a run
reports how far off they are without failing the suite.
"""

import math

import numpy as np
import pytest

PUBLISHED_NSAT = {1.0: 4521, 1.5: 117, 2.0: 29, 3.0: 9, 5.0: 5}

CHAIN_FINE_ALPHAS = np.round(0.95 + 0.001 * np.arange(101), 10)
LATTICE_ALPHAS = np.round(1.0 + 0.01 * np.arange(151), 10)
LATTICE_STEP = 0.01


class TestTimeAverage:
    """Time-averaged GGM on long chains."""

    def test_avg_alpha_one_and_a_half(self):
        """Should give <G>_T = 0.331971 for alpha = 1.5 on 10^6 sites over T = 3 pi."""
        from wgslab.lattice import LatticeSpec
        from wgslab.metrics import GgmFamily, avg_ggm

        value = avg_ggm(GgmFamily(LatticeSpec.chain(10**6)), 1.5)

        assert value == pytest.approx(0.331971, abs=5e-4)

    def test_nearest_neighbour_average(self):
        """Should give 1/2 - 1/pi for z = 1 on a long chain."""
        from wgslab.lattice import LatticeSpec
        from wgslab.metrics import GgmFamily, avg_ggm

        value = avg_ggm(GgmFamily(LatticeSpec.chain(10**5), z=1), 3.0)

        assert value == pytest.approx(0.5 - 1 / math.pi, abs=1e-8)


class TestSaturation:
    """N_sat and z_c against the published tables."""

    @pytest.mark.xfail(strict=False, reason="published N_sat table not reproduced; see DESIGN.md")
    @pytest.mark.parametrize("alpha,expected", sorted(PUBLISHED_NSAT.items()))
    def test_nsat_table(self, alpha, expected):
        """Should match the published N_sat within 5%."""
        from wgslab.metrics import n_sat

        report = n_sat(alpha, 1e-4)

        assert report.value == pytest.approx(expected, rel=0.05)

    @pytest.mark.xfail(strict=False, reason="published z_c not reproduced; see DESIGN.md")
    @pytest.mark.parametrize("eps", [1e-3, 1e-4])
    def test_zc_published(self, eps):
        """Should give z_c = 41 for N = 120 at alpha = 1.82."""
        from wgslab.metrics import z_c

        assert z_c(120, 1.82, eps).value == 41


class TestChainTransition:
    """alpha* = 1 on long all-to-all chains."""

    def test_fine_grid_n5000(self):
        """Should find alpha* within 0.002 of 1 on 5000 sites with an alpha step of 0.001."""
        from wgslab.lattice import LatticeSpec
        from wgslab.metrics import GgmFamily, find_alpha_star

        report = find_alpha_star(GgmFamily(LatticeSpec.chain(5000)), CHAIN_FINE_ALPHAS)

        assert report.method == "jump"
        assert report.alpha_star == pytest.approx(1.0, abs=0.002)

    def test_stable_in_chain_length(self):
        """Should give the same alpha* to one grid step for N = 2000, 5000 and 10000."""
        from wgslab.lattice import LatticeSpec
        from wgslab.metrics import GgmFamily, find_alpha_star

        found = [find_alpha_star(GgmFamily(LatticeSpec.chain(n)), CHAIN_FINE_ALPHAS).alpha_star
                 for n in (2000, 5000, 10000)]

        assert max(found) - min(found) <= 0.001 + 1e-9


class TestTransitions:
    """alpha* on deformed lattices."""

    def test_square_lattice_alpha_star(self):
        """Should find alpha* = 2 on the square lattice."""
        from wgslab.metrics import theta_scan

        series = theta_scan(20, [90.0], np.round(1.805 + 0.01 * np.arange(41), 10))

        assert series.values[0] == pytest.approx(2.0, abs=0.01)

    @pytest.mark.parametrize("theta", [90.0, 135.0])
    def test_alpha_star_two_at_l40(self, theta):
        """Should find alpha* = 2 at 90 and 135 degrees on a 40 x 40 lattice."""
        from wgslab.metrics import theta_scan

        series = theta_scan(40, [theta], LATTICE_ALPHAS)

        assert series.values[0] == pytest.approx(2.0, abs=0.02)

    @pytest.mark.parametrize("theta", [115.0, 119.5])
    def test_close_to_honeycomb_angle(self, theta):
        """Should place alpha* between the honeycomb value and alpha*(100 degrees) just below 120 degrees."""
        from wgslab.metrics import theta_scan

        series = theta_scan(40, [theta], LATTICE_ALPHAS)

        assert 1.2 < series.values[0] < 1.625 + LATTICE_STEP

    def test_trend_around_honeycomb_angle(self):
        """Should decrease towards 120 degrees from below and increase again up to 135 degrees."""
        from wgslab.metrics import theta_scan

        below = theta_scan(40, [90.0, 100.0, 110.0, 119.5], LATTICE_ALPHAS).values
        above = theta_scan(40, [120.5, 125.0, 130.0, 135.0], LATTICE_ALPHAS).values

        assert not np.isnan(below).any() and not np.isnan(above).any()
        assert np.all(np.diff(below) <= LATTICE_STEP)
        assert np.all(np.diff(above) >= -LATTICE_STEP)

    @pytest.mark.xfail(strict=False, reason="linear extrapolation from 0.1 degrees out still carries finite-L drift")
    def test_honeycomb_limit(self):
        """Should approach ln 2 / ln(sqrt 3) as theta -> 120 degrees."""
        from wgslab.metrics import honeycomb_limit

        alphas = np.round(1.0 + 0.005 * np.arange(121), 10)
        limit = honeycomb_limit(40, alphas)

        assert limit.estimate == pytest.approx(math.log(2) / math.log(math.sqrt(3)), rel=0.02)


class TestMeasurementReduction:
    """Measurement reduction over random measured subsets."""

    def test_random_subsets(self, rng):
        """Should restore every outcome string with corrections for N <= 10."""
        from itertools import product

        from wgslab.exact import verify_measurement_reduction
        from wgslab.lattice import CouplingModel, LatticeSpec

        for _ in range(5):
            n = int(rng.integers(3, 11))
            m = int(rng.integers(1, min(n, 4)))
            sites = [int(k) for k in rng.permutation(n)[:m]]
            model = CouplingModel(LatticeSpec.chain(n), float(rng.uniform(0, 3)))
            t = float(rng.uniform(0, 3 * math.pi))
            for outcomes in product((0, 1), repeat=m):
                assert verify_measurement_reduction(model, t, sites, outcomes) == pytest.approx(1.0, abs=1e-10)
