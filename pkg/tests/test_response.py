"""Transfer coefficients against the dense linear-solve oracle, plus limits."""

import math
from dataclasses import replace

import numpy as np
import pytest

import quadsense as q
from quadsense import PoleError, SingularityError

from conftest import TWO_PI, random_stable_draw, reference_system


def linear_solve_transfer_matrix(sys, sq, Omega):
    """Independent construction: solve (-i Omega I - M) X = inputs and apply
    the output relation sqrt(eta kappa) Q_c - Q_in, column by column."""
    M = q.drift_matrix(sys, sq).M
    eta, kappa = sys.eta_c, sys.kappa
    inputs = np.zeros((4, 5))
    inputs[0, 0] = math.sqrt(eta * kappa)
    inputs[0, 2] = math.sqrt((1.0 - eta) * kappa)
    inputs[1, 1] = math.sqrt(eta * kappa)
    inputs[1, 3] = math.sqrt((1.0 - eta) * kappa)
    inputs[3, 4] = math.sqrt(2.0 * sys.Gamma_m)
    X = np.linalg.solve(-1j * Omega * np.eye(4) - M, inputs)
    selector = np.zeros((2, 5))
    selector[0, 0] = 1.0
    selector[1, 1] = 1.0
    return math.sqrt(eta * kappa) * X[:2, :] - selector


def assert_matches_oracle(sys, sq, Omega, rel=1e-10):
    L = q.transfer_coefficients(sys, sq, Omega).matrix().astype(complex)
    L_or = linear_solve_transfer_matrix(sys, sq, Omega)
    scale = np.abs(L_or).max()
    dev = np.abs(L - L_or)
    # per-entry relative with a tiny matrix-relative floor for ~zero entries
    assert np.all(dev <= rel * (np.abs(L_or) + 1e-6 * scale)), (
        f"max deviation {dev.max():.3e} at scale {scale:.3e}")


class TestOracle:
    def test_closed_form_matches_linear_solve_on_stable_draws(self):
        rng = np.random.default_rng(2024)
        for _ in range(300):
            sys_, sq = random_stable_draw(rng)
            Omega = 10 ** rng.uniform(-3, 1)
            assert_matches_oracle(sys_, sq, Omega)

    def test_star_scenario_matches_oracle(self, star097):
        for Omega in (1.0, 100.0, 1e4, 1e7):
            assert_matches_oracle(star097.system, star097.squeezer, Omega)


class TestSusceptibilities:
    def test_chi_m_negative_real_part(self, table2):
        omegas = np.logspace(-3, 9, 60)
        chi = q.mechanical_susceptibility(table2, omegas)
        assert np.all(chi.real < 0.0)

    def test_chi_m_zero_damping_limit(self):
        s = reference_system(Q_m=None, Gamma_m=1e-12)
        Omega = 1e3
        chi = complex(q.mechanical_susceptibility(s, Omega))
        assert chi.real == pytest.approx(-s.Omega_m / Omega**2, rel=1e-9)
        assert abs(chi.imag) < 1e-9 * abs(chi.real)

    def test_static_optical_response_without_squeezing(self, table2):
        sq = q.SqueezerParams(G=0.0, theta=0.0)
        s = q.susceptibilities(table2, sq, 1e-6 * table2.kappa)
        assert complex(s["chi_plus"]) == pytest.approx(2.0 / table2.kappa, rel=1e-6)
        assert complex(s["chi_minus"]) == pytest.approx(2.0 / table2.kappa, rel=1e-6)
        assert s["rho_plus"] == s["rho_minus"] == table2.kappa / 2.0

    def test_chi_m_magnitude_on_resonance(self, table2):
        chi = abs(complex(q.mechanical_susceptibility(table2, table2.Omega_m)))
        assert chi == pytest.approx(1.0 / table2.Omega_m,
                                    rel=2.0 * table2.Gamma_m / table2.Omega_m)

    def test_singularity_at_zero_names_chi_m(self, table2):
        with pytest.raises(SingularityError, match="chi_m"):
            q.mechanical_susceptibility(table2, 0.0)


class TestCoefficientStructure:
    def test_no_force_coupling_without_g(self, table2):
        s = replace(table2, g=0.0)
        co = q.transfer_coefficients(s, q.SqueezerParams(G=0.1 * s.kappa, theta=-0.5), 50.0)
        assert complex(co.N_plus) == 0.0
        assert complex(co.N_minus) == 0.0

    def test_perfect_coupling_kills_loss_port(self, star097):
        s = replace(star097.system, eta_c=1.0)
        co = q.transfer_coefficients(s, star097.squeezer, 100.0)
        for entry in (co.C_plus, co.C_minus, co.D_plus, co.D_minus):
            assert complex(entry) == 0.0

    def test_N_ratio_identity(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            sys_, sq = random_stable_draw(rng)
            Omega = 10 ** rng.uniform(-3, 1)
            co = q.transfer_coefficients(sys_, sq, Omega)
            if abs(complex(co.N_plus)) > 0.0:
                assert complex(co.N_minus / co.N_plus) == pytest.approx(
                    complex(co.sigma_plus * co.chi_minus), rel=1e-12)

    def test_minus_coefficients_finite_across_tau_scale(self, star097):
        # dense frequency scan: the product forms have no spurious poles
        omegas = np.logspace(0, 8, 4000)
        co = q.transfer_coefficients(star097.system, star097.squeezer, omegas)
        for entry in (co.B_minus, co.D_minus, co.A_minus, co.A_plus, co.N_minus):
            assert np.all(np.isfinite(entry))


class TestEffectiveSusceptibility:
    def test_decoupled_limit(self, table2):
        s = replace(table2, g=0.0)
        sq = q.SqueezerParams(G=0.0, theta=0.0)
        Omega = 777.0
        chi_eff = complex(q.effective_susceptibility(s, sq, Omega))
        chi_m = complex(q.mechanical_susceptibility(s, Omega))
        assert chi_eff == pytest.approx(chi_m / (s.m_eff * s.Omega_m), rel=1e-12)

    def test_simplest_form_on_resonance(self, table2):
        # with the optical spring term dropped: -1 / (m (Omega^2 + i Omega Gamma))
        s = replace(table2, g=0.0)
        Omega = 100.0
        chi_eff = complex(q.effective_susceptibility(s, q.SqueezerParams(G=0.0, theta=0.0), Omega))
        expected = -1.0 / (s.m_eff * (Omega**2 + 1j * Omega * s.Gamma_m))
        assert chi_eff == pytest.approx(expected, rel=1e-12)

    def test_spring_term_reduction_without_squeezing(self, table2):
        Omega = 3.3e5
        sq = q.SqueezerParams(G=0.0, theta=0.0)
        chi_eff = complex(q.effective_susceptibility(table2, sq, Omega))
        chi_m = complex(q.mechanical_susceptibility(table2, Omega))
        sigma = 16.0 * table2.g**2 * Omega / (table2.kappa**2 + 4.0 * Omega**2)
        expected = 1.0 / (table2.m_eff * table2.Omega_m * (1.0 / chi_m + sigma))
        assert chi_eff == pytest.approx(expected, rel=1e-12)

    def test_quadratic_to_linear_gap_at_100_hz(self, star097):
        Omega = TWO_PI * 100.0
        chi_eff = abs(complex(q.effective_susceptibility(star097.system, star097.squeezer, Omega)))
        linear = abs(complex(q.lorentzian_susceptibility(star097.system, Omega)))
        linear /= star097.system.m_eff * star097.system.Omega_m
        assert chi_eff / linear >= 1e7

    def test_pole_error(self, table2):
        s = replace(table2, Delta=-1000.0)
        sq = q.SqueezerParams(G=table2.kappa / 4.0, theta=-0.5)
        with pytest.raises(PoleError):
            q.effective_susceptibility(s, sq, -1000.0)
