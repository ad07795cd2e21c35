"""Gaussian two-mode states, their Fock diagonals, and phase-encoding rates."""

import math

import numpy as np
import pytest

from dephcap.bounds import ea_lower_bound, entropy_total_asym, entropy_total_exact
from dephcap.errors import TailBoundError
from dephcap.phase_encoding import (
    GaussianTwoModeState,
    fock_diagonal,
    gaussian_conditional_entropy,
    holevo_lb_with_dephasing,
    holevo_lb_with_dephasing_asym,
    holevo_phase_encoding,
    symplectic_eigenvalues,
    tmsv_through_loss,
)
from dephcap.special_math import thermal_entropy_g
from dephcap.thermal_loss import ThermalLossChannel, capacity_report, ea_capacity


class TestGaussianState:
    def test_vacuum_through_identity(self):
        st = tmsv_through_loss(0.0, ThermalLossChannel(1.0, 0.0))
        np.testing.assert_allclose(st.cm, np.eye(4), atol=1e-14)
        assert st.nu_minus == pytest.approx(1.0, abs=1e-12)
        assert st.nu_plus == pytest.approx(1.0, abs=1e-12)

    def test_lossless_state_stays_pure(self):
        st = tmsv_through_loss(0.3, ThermalLossChannel(1.0, 0.0))
        assert st.nu_minus == pytest.approx(1.0, abs=1e-10)
        assert st.nu_plus == pytest.approx(1.0, abs=1e-10)

    def test_covariance_entries(self):
        st = tmsv_through_loss(0.001, ThermalLossChannel(0.8, 10.0))
        cm = st.cm
        cross = 2.0 * math.sqrt(0.8 * 0.001 * 1.001)
        assert cm[0, 0] == pytest.approx(21.0016, rel=1e-13)
        assert cm[1, 1] == pytest.approx(21.0016, rel=1e-13)
        assert cm[2, 2] == pytest.approx(1.002, rel=1e-13)
        assert cm[3, 3] == pytest.approx(1.002, rel=1e-13)
        assert abs(cm[0, 2]) == pytest.approx(cross, rel=1e-12)
        assert cm[1, 3] == pytest.approx(-cm[0, 2], rel=1e-12)
        assert cm[0, 1] == cm[0, 3] == cm[1, 2] == cm[2, 3] == 0.0

    def test_symplectic_spectrum_of_thermal_product(self):
        cm = np.diag([3.0, 3.0, 5.0, 5.0])
        nu_minus, nu_plus = symplectic_eigenvalues(cm)
        assert nu_minus == pytest.approx(3.0, rel=1e-12)
        assert nu_plus == pytest.approx(5.0, rel=1e-12)

    def test_unphysical_matrix_rejected(self):
        with pytest.raises(ValueError):
            GaussianTwoModeState(0.5 * np.eye(4))

    def test_asymmetric_matrix_rejected(self):
        cm = np.eye(4)
        cm[0, 2] = 0.3
        with pytest.raises(ValueError):
            GaussianTwoModeState(cm)

    def test_wrong_shape_rejected(self):
        with pytest.raises(ValueError):
            GaussianTwoModeState(np.eye(3))

    @pytest.mark.parametrize("kappa", [0.2, 0.7, 1.0])
    @pytest.mark.parametrize("n_b", [0.0, 0.5, 10.0])
    @pytest.mark.parametrize("energy", [0.001, 1.0, 10.0])
    def test_symplectic_pair_matches_occupation_pair(self, kappa, n_b, energy):
        # Unordered-pair identity: the labels cross once the channel removes
        # more photons than it injects.
        if kappa == 1.0 and n_b > 0.0:
            pytest.skip("lossless channel admits no added noise")
        rep = capacity_report(ThermalLossChannel(kappa, n_b), energy)
        st = tmsv_through_loss(energy, ThermalLossChannel(kappa, n_b))
        nus = sorted(((st.nu_plus - 1.0) / 2.0, (st.nu_minus - 1.0) / 2.0))
        occs = sorted((rep.a_plus, rep.a_minus))
        assert nus[0] == pytest.approx(occs[0], abs=1e-9)
        assert nus[1] == pytest.approx(occs[1], abs=1e-9)


class TestConditionalEntropy:
    def test_vacuum(self):
        st = tmsv_through_loss(0.0, ThermalLossChannel(1.0, 0.0))
        assert gaussian_conditional_entropy(st) == pytest.approx(0.0, abs=1e-12)

    def test_pure_state(self):
        st = tmsv_through_loss(2.0, ThermalLossChannel(1.0, 0.0))
        assert gaussian_conditional_entropy(st) <= 1e-7

    @pytest.mark.parametrize(
        "kappa, n_b, energy",
        [(0.8, 10.0, 0.001), (0.8, 0.01, 0.001), (0.45, 1.0, 0.1)])
    def test_matches_occupation_entropies(self, kappa, n_b, energy):
        rep = capacity_report(ThermalLossChannel(kappa, n_b), energy)
        st = tmsv_through_loss(energy, ThermalLossChannel(kappa, n_b))
        want = thermal_entropy_g(rep.a_plus) + thermal_entropy_g(rep.a_minus)
        assert gaussian_conditional_entropy(st) == pytest.approx(want, abs=1e-9)


class TestFockDiagonal:
    def test_zero_energy_concentrates_on_the_vacuum(self):
        st = tmsv_through_loss(0.0, ThermalLossChannel(0.5, 0.0))
        jd = fock_diagonal(st)
        assert jd.probs[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert jd.entropy_bits() == pytest.approx(0.0, abs=1e-10)

    def test_lossless_diagonal_is_perfectly_correlated(self):
        st = tmsv_through_loss(0.6, ThermalLossChannel(1.0, 0.0))
        jd = fock_diagonal(st)
        n = np.arange(12)
        want = 0.6**n / 1.6 ** (n + 1)
        np.testing.assert_allclose(np.diag(jd.probs)[:12], want, rtol=1e-10)
        off = jd.probs - np.diag(np.diag(jd.probs))
        assert np.abs(off).max() <= 1e-12

    def test_marginals_are_thermal(self):
        st = tmsv_through_loss(0.001, ThermalLossChannel(0.8, 10.0))
        jd = fock_diagonal(st)
        n_s = np.arange(jd.cutoffs[0])
        n_i = np.arange(jd.cutoffs[1])
        signal_want = 10.0008**n_s / 11.0008 ** (n_s + 1)
        idler_want = 0.001**n_i / 1.001 ** (n_i + 1)
        assert np.abs(jd.signal_marginal() - signal_want).max() <= 1e-8
        assert np.abs(jd.idler_marginal() - idler_want).max() <= 1e-8

    def test_mass_window_including_tail(self):
        st = tmsv_through_loss(0.001, ThermalLossChannel(0.8, 10.0))
        jd = fock_diagonal(st)
        total = jd.probs.sum()
        assert total <= 1.0 + 1e-10
        assert total + jd.tail_bound >= 1.0 - 1e-10

    def test_explicit_cutoffs_too_small(self):
        st = tmsv_through_loss(0.001, ThermalLossChannel(0.8, 10.0))
        with pytest.raises(TailBoundError) as err:
            fock_diagonal(st, cutoffs=(4, 4))
        assert err.value.suggested is not None
        assert err.value.suggested[0] > 4

    def test_entropy_matches_flat_shannon(self):
        st = tmsv_through_loss(0.1, ThermalLossChannel(0.7, 0.5))
        jd = fock_diagonal(st)
        nz = jd.probs[jd.probs > 0.0]
        assert jd.entropy_bits() == pytest.approx(
            float(-(nz * np.log2(nz)).sum()), rel=1e-14)


class TestHolevoPhaseEncoding:
    def test_zero_energy(self):
        assert holevo_phase_encoding(0.0, ThermalLossChannel(0.5, 0.0)) == 0.0

    def test_lossless_equals_thermal_entropy(self):
        got = holevo_phase_encoding(0.7, ThermalLossChannel(1.0, 0.0))
        assert got == pytest.approx(thermal_entropy_g(0.7), rel=1e-10)

    @pytest.mark.parametrize(
        "kappa, n_b, energy",
        [(0.8, 10.0, 0.001), (0.8, 0.01, 0.001), (0.45, 1.0, 0.1),
         (0.7, 0.5, 0.1)])
    def test_never_exceeds_the_assisted_capacity(self, kappa, n_b, energy):
        ch = ThermalLossChannel(kappa, n_b)
        chi = holevo_phase_encoding(energy, ch)
        assert 0.0 <= chi <= ea_capacity(ch, energy) + 1e-12

    def test_near_optimal_at_large_noise(self):
        ch = ThermalLossChannel(0.8, 10.0)
        chi = holevo_phase_encoding(0.001, ch)
        ea = ea_capacity(ch, 0.001)
        assert 0.0 < (ea - chi) / ea < 0.01

    def test_clearly_suboptimal_at_low_noise(self):
        ch = ThermalLossChannel(0.8, 0.01)
        chi = holevo_phase_encoding(0.001, ch)
        ea = ea_capacity(ch, 0.001)
        assert (ea - chi) / ea > 0.01


class TestHolevoWithDephasing:
    def test_shares_the_total_count_penalty(self):
        ch = ThermalLossChannel(0.8, 10.0)
        got = holevo_lb_with_dephasing(1e4, 0.001, ch, chi=0.5)
        assert got == pytest.approx(
            0.5 - entropy_total_exact(1e4, 0.001) / 1e4, rel=1e-13)

    def test_asym_variant(self):
        ch = ThermalLossChannel(0.8, 10.0)
        got = holevo_lb_with_dephasing_asym(1e6, 0.001, ch, chi=0.5)
        assert got == pytest.approx(
            0.5 - entropy_total_asym(1e6, 0.001) / 1e6, rel=1e-13)
        assert math.isnan(holevo_lb_with_dephasing_asym(10, 0.001, ch))

    @pytest.mark.parametrize("n_b", [10.0, 0.01])
    def test_never_exceeds_the_assisted_lower_bound(self, n_b):
        ch = ThermalLossChannel(0.8, n_b)
        chi = holevo_phase_encoding(0.001, ch)
        for exp in range(1, 8):
            m = 10.0**exp
            assert holevo_lb_with_dephasing(m, 0.001, ch, chi=chi) <= (
                ea_lower_bound(m, ch, 0.001) + 1e-9)

    def test_penalty_vanishes_at_huge_mode_counts(self):
        ch = ThermalLossChannel(0.8, 10.0)
        chi = holevo_phase_encoding(0.001, ch)
        got = holevo_lb_with_dephasing(1e8, 0.001, ch, chi=chi)
        assert got == pytest.approx(chi, abs=1e-3)
