"""Output spectra, added noise, SQL, force PSDs and the linear baseline."""

import math
from dataclasses import replace

import numpy as np
import pytest

import quadsense as q

from conftest import TWO_PI, random_stable_draw, reference_system
from test_response import linear_solve_transfer_matrix


def spectra_from_matrix(L, n_bar):
    """Spectra assembled directly from a 2x5 transfer matrix (oracle path)."""
    row_q, row_p = L[0], L[1]
    S_qq = 0.5 * np.sum(np.abs(row_q[:4])**2) + np.abs(row_q[4])**2 * n_bar
    S_pp = 0.5 * np.sum(np.abs(row_p[:4])**2) + np.abs(row_p[4])**2 * n_bar
    # cross spectrum: the paper's kernel combination, Re of the q x p* sum
    cross = 0.5 * np.sum(row_q[:4] * np.conj(row_p[:4])) + row_q[4] * np.conj(row_p[4]) * n_bar
    return S_qq, S_pp, np.real(cross)


class TestRawSpectra:
    def test_shot_noise_limited_reflection(self, table2):
        s = replace(table2, g=0.0, eta_c=1.0)
        sq = q.SqueezerParams(G=0.0, theta=0.0)
        S_qq, S_pp, S_pq, _ = q.raw_output_spectra(s, sq, 123.0, n_bar=0.0)
        assert float(S_qq) == pytest.approx(0.5, rel=1e-12)
        assert float(S_pp) == pytest.approx(0.5, rel=1e-12)
        assert float(S_pq) == pytest.approx(0.0, abs=1e-12)

    def test_ponderomotive_free_squeezer(self, table2):
        # g = 0 with squeezing on: minimum-uncertainty-like squeezed output
        s = replace(table2, g=0.0, eta_c=1.0)
        sq = q.SqueezerParams(G=0.2 * s.kappa, theta=-math.pi / 2.0)
        Omega = 1e-3 * s.kappa
        S_qq, S_pp, S_pq, _ = q.raw_output_spectra(s, sq, Omega, n_bar=0.0)
        assert float(S_qq) * float(S_pp) >= 0.25 * (1.0 - 1e-9)
        assert min(float(S_qq), float(S_pp)) < 0.5
        # against the linear-solve oracle
        L = linear_solve_transfer_matrix(s, sq, Omega)
        o_qq, o_pp, o_pq = spectra_from_matrix(L, 0.0)
        assert float(S_qq) == pytest.approx(o_qq, rel=1e-10)
        assert float(S_pp) == pytest.approx(o_pp, rel=1e-10)

    def test_spectra_match_oracle_on_random_draws(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            sys_, sq = random_stable_draw(rng)
            Omega = 10 ** rng.uniform(-3, 1)
            n_bar = rng.uniform(0.0, 5.0)
            S_qq, S_pp, S_pq, _ = q.raw_output_spectra(sys_, sq, Omega, n_bar)
            o_qq, o_pp, o_pq = spectra_from_matrix(
                linear_solve_transfer_matrix(sys_, sq, Omega), n_bar)
            assert float(S_qq) == pytest.approx(o_qq, rel=1e-9)
            assert float(S_pp) == pytest.approx(o_pp, rel=1e-9)

    def test_cauchy_schwarz_between_spectra(self):
        rng = np.random.default_rng(32)
        for _ in range(100):
            sys_, sq = random_stable_draw(rng)
            Omega = 10 ** rng.uniform(-3, 1)
            S_qq, S_pp, S_pq, _ = q.raw_output_spectra(sys_, sq, Omega, rng.uniform(0, 3))
            assert float(S_qq) * float(S_pp) >= float(S_pq)**2 * (1.0 - 1e-9)


class TestRotationIdentities:
    @pytest.fixture()
    def point(self, star097):
        return q.raw_output_spectra(star097.system, star097.squeezer, 100.0)

    def test_phi_zero_returns_S_qq(self, point):
        S_qq, S_pp, S_pq, _ = point
        assert q.rotated_spectrum(S_qq, S_pp, S_pq, 0.0) == S_qq

    def test_phi_half_pi_returns_S_pp(self, point):
        S_qq, S_pp, S_pq, _ = point
        assert float(q.rotated_spectrum(S_qq, S_pp, S_pq, math.pi / 2.0)) == pytest.approx(
            float(S_pp), rel=1e-12)

    def test_phi_quarter_pi_mixture(self, point):
        S_qq, S_pp, S_pq, _ = point
        expected = 0.5 * (float(S_qq) + float(S_pp)) + float(S_pq)
        assert float(q.rotated_spectrum(S_qq, S_pp, S_pq, math.pi / 4.0)) == pytest.approx(
            expected, rel=1e-12)

    def test_response_decomposition_identity(self, star097):
        _, _, _, k = q.raw_output_spectra(star097.system, star097.squeezer, 100.0)
        phis = np.linspace(-math.pi, math.pi, 37)
        direct = q.mechanical_response(star097.system, star097.squeezer, 100.0, phis)
        assembled = (k.R_minus * np.cos(phis)**2 + k.R_plus * np.sin(phis)**2
                     + 2.0 * np.real(k.R_si) * np.sin(phis) * np.cos(phis))
        assert np.allclose(direct, assembled, rtol=1e-12)


class TestMechanicalResponse:
    def test_phi_half_pi_is_N_plus(self, star097):
        co = q.transfer_coefficients(star097.system, star097.squeezer, 100.0)
        r = q.mechanical_response(star097.system, star097.squeezer, 100.0, math.pi / 2.0)
        assert float(r) == pytest.approx(abs(complex(co.N_plus))**2, rel=1e-12)

    def test_zero_without_coupling(self, table2):
        s = replace(table2, g=0.0)
        r = q.mechanical_response(s, q.SqueezerParams(G=0.1 * s.kappa, theta=-0.3),
                                  100.0, np.linspace(0, math.pi, 11))
        assert np.all(np.asarray(r) == 0.0)

    def test_amplification_region_exists_off_standard_phase(self, star097):
        # signal amplification R > 1 at angles away from pi/2
        phis = np.linspace(-math.pi / 2.0, math.pi / 2.0, 361)
        r = q.mechanical_response(star097.system, star097.squeezer, 100.0, phis)
        r_pi2 = float(q.mechanical_response(star097.system, star097.squeezer, 100.0, math.pi / 2))
        assert np.max(r) > 1.0
        assert np.max(r) > r_pi2


class TestAddedNoise:
    def test_closed_form_agreement_below_cavity_cutoff(self, table2):
        s = replace(reference_system(coop=1.0), Delta=0.0)
        sq = q.SqueezerParams(G=0.0, theta=0.0)
        omegas = np.logspace(np.log10(1e-4 * s.kappa), np.log10(s.kappa / 50.0), 100)
        pipeline = q.added_noise(s, sq, omegas, math.pi / 2.0)
        closed = q.closed_form_standard_phase_n_add(s, omegas)
        assert np.max(np.abs(pipeline - closed) / closed) < 0.01

    def test_amgm_equality_at_C_SQL(self, table2):
        Omega = TWO_PI * 100.0
        c_sql = q.cooperativity_sql(table2, Omega)
        value = q.closed_form_standard_phase_n_add(table2, Omega, C=c_sql)
        assert float(value) == pytest.approx(2.0 * c_sql, rel=1e-12)

    def test_amgm_lower_bound(self, table2):
        rng = np.random.default_rng(8)
        Omega = TWO_PI * 100.0
        c_sql = q.cooperativity_sql(table2, Omega)
        for C in 10 ** rng.uniform(-3, 3, 200) * c_sql:
            assert q.closed_form_standard_phase_n_add(table2, Omega, C=C) >= 2.0 * c_sql * (1 - 1e-12)

    def test_independent_of_thermal_occupancy(self, star097):
        values = [q.added_noise(star097.system, star097.squeezer, 100.0, 1.2)
                  for _ in range(1)]
        # kernels never touch n_bar; recompute spectra at wildly different n_bar
        for n_bar in (0.0, 0.21, 1e6):
            _, _, _, k = q.raw_output_spectra(star097.system, star097.squeezer, 100.0, n_bar)
            assert float(q.added_noise_from_kernels(k, 1.2)) == float(values[0])

    def test_standard_phase_never_beats_sql_without_squeezing(self):
        s = reference_system(eta_c=1.0)
        sq = q.SqueezerParams(G=0.0, theta=0.0)
        for Omega in (10.0, 100.0, 1e4, 1e6):
            n_sql, _, c_sql = q.sql(s, Omega)
            for C in np.logspace(-2, 2, 25) * c_sql:
                s2 = replace(s, coop=C, g=math.sqrt(C * s.kappa * s.Gamma_m) / 2.0)
                n_add = float(q.added_noise(s2, sq, Omega, math.pi / 2.0))
                assert n_add >= float(n_sql) * (1.0 - 1e-9)


class TestSql:
    def test_on_resonance_half_quality_factor(self):
        s = reference_system(eta_c=1.0)
        n_add_sql, _, _ = q.sql(s, s.Omega_m)
        assert float(n_add_sql) == pytest.approx(s.Q_m / 2.0, rel=1e-6)

    def test_eta_scaling(self, table2):
        full = q.sql(reference_system(eta_c=1.0), 100.0)[0]
        quarter = q.sql(reference_system(eta_c=0.25), 100.0)[0]
        assert float(quarter) == pytest.approx(2.0 * float(full), rel=1e-12)

    def test_relation_between_outputs(self, table2):
        n_add_sql, s_ff_sql, c_sql = q.sql(table2, 333.0)
        assert float(n_add_sql) == pytest.approx(2.0 * float(c_sql), rel=1e-15)
        assert float(s_ff_sql) == pytest.approx(
            table2.force_psd_prefactor * float(n_add_sql), rel=1e-15)


class TestForcePsd:
    def test_ground_state_row(self, table2):
        # n_add -> 0, n_bar = 0.21: the zeptonewton-scale floor
        value = q.force_psd(table2, 0.0, n_bar=0.21)
        assert float(value) == pytest.approx((1.87e-21)**2, rel=5e-3)

    def test_millikelvin_row(self, table2):
        value = q.force_psd(table2, 0.0, n_bar=20.8)
        assert float(value) == pytest.approx((18.6e-21)**2, rel=5e-3)

    def test_zero_floor(self, table2):
        assert float(q.force_psd(table2, 0.0, n_bar=0.0)) == 0.0

    def test_exact_contract(self, star097):
        n_add = 0.1234
        expected = (2.0 * q.HBAR * star097.system.m_eff * star097.system.Gamma_m
                    * star097.system.Omega_m * (star097.system.n_bar + n_add))
        assert float(q.force_psd(star097.system, n_add)) == pytest.approx(expected, rel=1e-15)


class TestThermalPsd:
    def test_room_temperature_floor(self, table2):
        value = q.thermal_psd(table2, 300.0)
        assert value == pytest.approx(1.041028e-34, rel=1e-5)
        assert value == pytest.approx((10.2e-18)**2, rel=0.01)

    def test_zero_temperature(self, table2):
        assert q.thermal_psd(table2, 0.0) == 0.0

    def test_quality_factor_scaling(self):
        base = q.thermal_psd(reference_system(), 10.0)
        doubled = q.thermal_psd(reference_system(Q_m=1e9), 10.0)
        assert doubled == pytest.approx(base / 2.0, rel=1e-12)


class TestLinearBaseline:
    def test_resonance_magnitude(self, table2):
        chi_s = abs(complex(q.lorentzian_susceptibility(table2, table2.Omega_m)))
        assert chi_s == pytest.approx(1.0 / table2.Gamma_m, rel=1e-9)
        n_sql_lin, _, _ = q.linear_baseline_sql(table2, table2.Omega_m)
        assert float(n_sql_lin) == pytest.approx(1.0 / (2.0 * math.sqrt(table2.eta_c)), rel=1e-9)

    def test_low_frequency_gap(self, table2):
        Omega = TWO_PI * 100.0
        ratio = (abs(complex(q.mechanical_susceptibility(table2, Omega)))
                 / abs(complex(q.lorentzian_susceptibility(table2, Omega))))
        assert ratio >= 1e7

    def test_amgm_equality_for_baseline(self, table2):
        Omega = TWO_PI * 100.0
        _, _, c_sql_lin = q.linear_baseline_sql(table2, Omega)
        value = q.linear_baseline_added_noise(table2, Omega, C=float(c_sql_lin))
        assert float(value) == pytest.approx(2.0 * float(c_sql_lin), rel=1e-12)


class TestSqueezingDegree:
    def test_simple_ratios(self):
        assert q.squeezing_degree_db(1.0, 1.0) == 0.0
        assert q.squeezing_degree_db(10.0, 1.0) == pytest.approx(10.0, rel=1e-12)
        with pytest.raises(ValueError):
            q.squeezing_degree_db(-1.0, 1.0)

    def test_star_sub_sql_depth(self, star1):
        k = q.noise_kernels(q.transfer_coefficients(star1.system, star1.squeezer, 100.0))
        n_min, _ = q.minimize_added_noise_over_phi(k)
        n_sql, _, _ = q.sql(star1.system, 100.0)
        depth = q.squeezing_degree_db(float(n_sql), n_min)
        assert depth == pytest.approx(35.84, abs=0.1)
