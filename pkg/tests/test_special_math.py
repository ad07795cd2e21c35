"""Unit checks for the scalar special-function layer.

Reference constants were evaluated with mpmath at 50 significant digits and
rounded once to double precision.
"""

import math

import numpy as np
import pytest

from dephcap.photon_dist import PhotonDistribution
from dephcap.special_math import (
    hyp2f1_squared_mean_series,
    hyp2f1_squared_series,
    log_binomial,
    shannon_entropy,
    thermal_entropy_g,
)

G_OF_TEN = 4.83446685613664633949
LOG_BINOM_1E6_500 = 4296.300049745916891604


def _s0_closed(m, z):
    """Closed form of sum_n C(n+m-1, m-1)^2 z^n for small integer m.

    Euler's transformation turns the squared-binomial series into
    (1-z)^(1-2m) times a degree-(m-1) polynomial with coefficients C(m-1,k)^2,
    an algebraically independent route to the same number.
    """
    poly = sum(math.comb(m - 1, k) ** 2 * z**k for k in range(m))
    return (1.0 - z) ** (1 - 2 * m) * poly


def _s1_closed(m, z):
    # S1 = z dS0/dz via the product rule on the closed form above.
    poly = sum(math.comb(m - 1, k) ** 2 * z**k for k in range(m))
    dpoly = sum(k * math.comb(m - 1, k) ** 2 * z ** (k - 1) for k in range(1, m))
    return z * ((2 * m - 1) * (1.0 - z) ** (-2 * m) * poly
                + (1.0 - z) ** (1 - 2 * m) * dpoly)


class TestThermalEntropy:
    def test_vacuum_is_zero(self):
        assert thermal_entropy_g(0) == 0.0

    def test_one_photon_is_two_bits(self):
        assert thermal_entropy_g(1.0) == pytest.approx(2.0, abs=1e-14)

    def test_reference_value(self):
        assert thermal_entropy_g(10.0) == pytest.approx(G_OF_TEN, rel=1e-14)

    @pytest.mark.parametrize("n", [1e-300, 1e-12, 1e-3, 1e6, 1e15])
    def test_extreme_means_stay_finite_and_positive(self, n):
        val = thermal_entropy_g(n)
        assert math.isfinite(val)
        assert val > 0.0

    def test_monotone_in_mean(self):
        grid = np.logspace(-4, 4, 30)
        vals = [thermal_entropy_g(n) for n in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_negative_mean_rejected(self):
        with pytest.raises(ValueError):
            thermal_entropy_g(-0.1)


class TestLogBinomial:
    def test_trivial_coefficients(self):
        assert log_binomial(0, 0) == 0.0
        assert log_binomial(5, 0) == 0.0
        assert log_binomial(5, 5) == 0.0

    def test_three_choose_one(self):
        assert log_binomial(3, 1) == pytest.approx(math.log(3.0), rel=1e-15)

    def test_large_arguments_against_exact_integer(self):
        # math.comb is exact big-integer arithmetic, an independent oracle.
        want = math.log(math.comb(10**6, 500))
        got = log_binomial(1e6, 500)
        assert got == pytest.approx(want, rel=1e-13)
        assert got == pytest.approx(LOG_BINOM_1E6_500, rel=1e-13)

    def test_symmetry(self):
        assert log_binomial(40, 13) == pytest.approx(log_binomial(40, 27), rel=1e-14)

    @pytest.mark.parametrize("n, k", [(3, 4), (-1, 0), (5, -2)])
    def test_out_of_range_rejected(self, n, k):
        with pytest.raises(ValueError):
            log_binomial(n, k)

    def test_non_integer_rejected(self):
        with pytest.raises(ValueError):
            log_binomial(5.5, 2)


class TestShannonEntropy:
    def test_point_mass_is_zero(self):
        assert shannon_entropy(np.array([1.0])) == 0.0
        assert shannon_entropy(np.array([0.0, 1.0, 0.0])) == 0.0

    def test_uniform_four_outcomes(self):
        assert shannon_entropy(np.full(4, 0.25)) == pytest.approx(2.0, abs=1e-14)

    @pytest.mark.parametrize("energy, cutoff", [(0.1, 400), (1.0, 400), (10.0, 900)])
    def test_geometric_law_matches_thermal_entropy(self, energy, cutoff):
        q = energy / (energy + 1.0)
        probs = (1.0 - q) * q ** np.arange(cutoff + 1)
        dist = PhotonDistribution(probs, q ** (cutoff + 1))
        assert shannon_entropy(dist) == pytest.approx(
            thermal_entropy_g(energy), abs=1e-10)

    def test_negative_entry_rejected(self):
        with pytest.raises(ValueError):
            shannon_entropy(np.array([0.6, -0.1, 0.5]))

    def test_mass_deficit_rejected(self):
        with pytest.raises(ValueError):
            shannon_entropy(np.array([0.5, 0.4]))

    def test_mass_excess_rejected(self):
        with pytest.raises(ValueError):
            shannon_entropy(np.array([0.7, 0.5]))

    def test_mass_tolerance_boundary(self):
        shannon_entropy(np.array([0.5, 0.5 - 1e-10]))  # inside default tol
        with pytest.raises(ValueError):
            shannon_entropy(np.array([0.5, 0.5 - 1e-8]))


class TestSquaredBinomialSeries:
    @pytest.mark.parametrize("z", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_single_mode_is_geometric_normalizer(self, z):
        # m=1 collapses to sum z^n = 1/(1-z).
        assert hyp2f1_squared_series(1, z) == pytest.approx(
            -math.log1p(-z), rel=1e-13)

    def test_reference_value_two_modes(self):
        assert hyp2f1_squared_series(2, 0.3) == pytest.approx(
            1.332389096283688188773, rel=1e-13)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    @pytest.mark.parametrize("z", [0.2, 0.5, 0.8])
    def test_matches_closed_form(self, m, z):
        assert hyp2f1_squared_series(m, z) == pytest.approx(
            math.log(_s0_closed(m, z)), rel=1e-12)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    @pytest.mark.parametrize("z", [0.2, 0.5, 0.8])
    def test_mean_series_matches_closed_form(self, m, z):
        assert hyp2f1_squared_mean_series(m, z) == pytest.approx(
            math.log(_s1_closed(m, z)), rel=1e-12)

    def test_zero_argument(self):
        assert hyp2f1_squared_series(3, 0.0) == 0.0
        assert hyp2f1_squared_mean_series(3, 0.0) == float("-inf")

    @pytest.mark.parametrize("block", [64, 256, 1024])
    def test_block_size_does_not_change_the_sum(self, block):
        assert hyp2f1_squared_series(3, 0.7, block=block) == pytest.approx(
            hyp2f1_squared_series(3, 0.7), rel=1e-13)

    @pytest.mark.parametrize("z", [-0.1, 1.0, 1.5])
    def test_argument_outside_unit_interval_rejected(self, z):
        with pytest.raises(ValueError):
            hyp2f1_squared_series(2, z)

    @pytest.mark.parametrize("m", [0, -1, 2.5])
    def test_bad_mode_count_rejected(self, m):
        with pytest.raises(ValueError):
            hyp2f1_squared_series(m, 0.5)
