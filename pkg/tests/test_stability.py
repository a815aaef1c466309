"""Drift matrix, Routh-Hurwitz predicate and stability maps."""

import math
from dataclasses import replace

import numpy as np
import pytest

import quadsense as q

from conftest import reference_system


class TestRouthHurwitz:
    def test_all_roots_at_minus_one(self):
        # (lambda + 1)^4 -> coefficients (4, 6, 4, 1)
        conds, stable = q.routh_hurwitz((4.0, 6.0, 4.0, 1.0))
        assert all(conds)
        assert stable

    def test_negative_constant_term(self):
        conds, stable = q.routh_hurwitz((4.0, 6.0, 4.0, -1.0))
        assert not conds[2]
        assert not stable

    def test_vectorized(self):
        M3 = np.array([4.0, 4.0])
        M0 = np.array([1.0, -1.0])
        _, stable = q.routh_hurwitz((M3, np.array([6.0, 6.0]), np.array([4.0, 4.0]), M0))
        assert stable.tolist() == [True, False]


class TestDriftMatrix:
    def test_decoupled_blocks(self, table2):
        s = replace(table2, g=0.0, Delta=-0.3 * table2.kappa)
        model = q.drift_matrix(s, q.SqueezerParams(G=0.0, theta=0.0))
        assert np.all(model.M[:2, 2:] == 0.0)
        assert np.all(model.M[2:, :2] == 0.0)
        eig = np.linalg.eigvals(model.M[:2, :2])
        expected = {complex(-s.kappa / 2.0, s.Delta), complex(-s.kappa / 2.0, -s.Delta)}
        for ev in eig:
            assert min(abs(ev - e) for e in expected) < 1e-6 * s.kappa
        eig_m = sorted(np.linalg.eigvals(model.M[2:, 2:]).real)
        assert eig_m[0] == pytest.approx(-s.Gamma_m, rel=1e-12)
        assert abs(eig_m[1]) < 1e-18

    def test_resonant_minus_half_pi_rates(self, table2):
        G = 0.1 * table2.kappa
        co = q.susceptibilities(table2, q.SqueezerParams(G=G, theta=-math.pi / 2.0), 1.0)
        assert co["sigma_plus"] == pytest.approx(-2.0 * G, rel=1e-12)
        assert co["sigma_minus"] == pytest.approx(2.0 * G, rel=1e-12)
        assert co["rho_plus"] == pytest.approx(table2.kappa / 2.0, rel=1e-12)
        assert co["rho_minus"] == pytest.approx(table2.kappa / 2.0, rel=1e-12)

    def test_characteristic_polynomial_matches_determinant(self, star097):
        model = q.drift_matrix(star097.system, star097.squeezer)
        M3, M2, M1, M0 = model.coeffs
        rng = np.random.default_rng(17)
        for _ in range(5):
            lam = complex(rng.normal(), rng.normal()) * star097.system.kappa
            direct = np.linalg.det(lam * np.eye(4) - model.M)
            poly = lam**4 + M3 * lam**3 + M2 * lam**2 + M1 * lam + M0
            assert abs(direct - poly) <= 1e-10 * max(abs(direct), abs(poly))

    def test_trace_identity(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            s = reference_system(coop=10 ** rng.uniform(-3, 1))
            sq = q.SqueezerParams(G=rng.uniform(0, 0.3) * s.kappa,
                                  theta=rng.uniform(-math.pi, 0))
            model = q.drift_matrix(s, sq)
            assert np.trace(model.M) == pytest.approx(-(s.kappa + s.Gamma_m), rel=1e-12)
            assert model.coeffs[0] == pytest.approx(s.kappa + s.Gamma_m, rel=1e-12)

    def test_noise_amplitude_matrix(self, table2):
        model = q.drift_matrix(table2, q.SqueezerParams(G=0.0, theta=0.0))
        expected = np.diag([math.sqrt(table2.kappa), math.sqrt(table2.kappa), 0.0,
                            math.sqrt(2.0 * table2.Gamma_m)])
        assert np.allclose(model.D_amp, expected, rtol=1e-15)


class TestEigenvalueOracle:
    def test_predicate_agrees_with_eigenvalues(self):
        rng = np.random.default_rng(41)
        n_draws = 2000
        excluded = 0
        for _ in range(n_draws):
            s = q.derive_params({
                "Omega_m": 10 ** rng.uniform(-2, 2), "Gamma_m": 10 ** rng.uniform(-8, -1),
                "m_eff": 1e-12, "kappa": 1.0, "eta_c": 1.0, "g0": 1e-3, "q_bar_m": 0.0,
            })
            s = replace(s, g=10 ** rng.uniform(-4, 2), Delta=rng.uniform(-3, 3))
            sq = q.SqueezerParams(G=rng.uniform(0, 0.6), theta=rng.uniform(-math.pi, math.pi))
            model = q.drift_matrix(s, sq)
            max_re = float(np.max(np.linalg.eigvals(model.M).real))
            if abs(max_re) < 1e-9 * s.kappa:
                excluded += 1
                continue
            _, stable = q.routh_hurwitz(model.coeffs)
            assert stable == (max_re < 0.0), (
                f"disagreement: max Re = {max_re}, coeffs = {model.coeffs}")
        assert excluded < n_draws // 10

    def test_polynomial_roots_match_eigenvalues(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            s = reference_system(coop=10 ** rng.uniform(-2, 1))
            s = replace(s, kappa=1.0, Omega_m=10 ** rng.uniform(-1, 1),
                        Gamma_m=10 ** rng.uniform(-5, -1))
            sq = q.SqueezerParams(G=rng.uniform(0, 0.2), theta=rng.uniform(-math.pi, 0))
            model = q.drift_matrix(s, sq)
            M3, M2, M1, M0 = model.coeffs
            roots = np.sort_complex(np.roots([1.0, M3, M2, M1, M0]))
            eig = np.sort_complex(q.eigenvalues(model))
            assert np.allclose(roots, eig, rtol=1e-8, atol=1e-8)


class TestThetaFunctions:
    def test_theta2_maximal_margin(self, table2):
        theta = -0.7
        G = table2.kappa / (4.0 * math.cos(theta))
        sq = q.SqueezerParams(G=G, theta=theta, eps_c=1.0)
        _, theta2, _ = q.theta_functions(table2, sq)
        assert theta2 == pytest.approx(1.0, rel=1e-12)

    def test_theta2_boundary(self, table2):
        theta = -0.3
        G = 0.1 * table2.kappa
        eps_c = math.sqrt(table2.n_c) * (table2.kappa - 4.0 * G * math.cos(theta)) / 2.0
        sq = q.SqueezerParams(G=G, theta=theta, eps_c=eps_c)
        _, theta2, _ = q.theta_functions(table2, sq)
        assert theta2 == pytest.approx(0.0, abs=1e-12)

    def test_star_in_stable_zone(self, star097):
        sys_, sq0 = star097.system, star097.squeezer
        P_s = q.matched_signal_power(sys_, sq0)
        eps_c = math.sqrt(sys_.kappa * sys_.eta_c * P_s / (q.HBAR * sys_.Omega_l))
        sq = replace(sq0, eps_c=eps_c)
        theta1, theta2, signs = q.theta_functions(sys_, sq)
        assert theta1 > 0.0
        assert theta2 > 0.0
        assert signs == (1, 1)

    def test_needs_drive(self, table2):
        with pytest.raises(ValueError):
            q.theta_functions(table2, q.SqueezerParams(G=1.0, theta=-0.5, eps_c=0.0))


class TestStabilityMap:
    def test_quarter_kappa_row_unstable_on_resonance(self, star097):
        g_over_k = np.array([0.26, 0.30])
        thetas = np.linspace(-3.0, -0.1, 7)
        _, stable = q.stability_map(star097.system, star097.squeezer,
                                    ("G_over_kappa", "theta"), (g_over_k, thetas), 100.0)
        assert not np.any(stable)

    def test_positive_theta_unstable(self, star097):
        c_grid = np.linspace(0.05, 0.6, 5)
        thetas = np.array([0.1, 0.5])
        _, stable = q.stability_map(star097.system, star097.squeezer,
                                    ("C_over_CSQL", "theta"), (c_grid, thetas), 100.0)
        assert not np.any(stable)

    def test_star_inside_connected_stable_region(self, star097):
        c_grid = np.linspace(0.01, 1.0, 81)
        thetas = np.linspace(-0.05, -1e-4, 81)
        theta1, stable = q.stability_map(star097.system, star097.squeezer,
                                         ("C_over_CSQL", "theta"), (c_grid, thetas), 100.0)
        i = int(np.argmin(np.abs(c_grid - 0.505)))
        j = int(np.argmin(np.abs(thetas - (-0.018))))
        assert stable[i, j]
        # oracle cross-check of that cell
        s = star097.system
        g = math.sqrt(0.505 * q.cooperativity_sql(s, 100.0) * s.kappa * s.Gamma_m) / 2.0
        model = q.drift_matrix(replace(s, g=g), replace(star097.squeezer, theta=-0.018))
        assert np.max(np.linalg.eigvals(model.M).real) < 0.0

    def test_empty_grid_rejected(self, star097):
        with pytest.raises(ValueError):
            q.stability_map(star097.system, star097.squeezer,
                            ("C_over_CSQL", "theta"), (np.array([]), np.array([1.0])), 100.0)

    def test_phi_does_not_enter_stability(self, star097):
        # homodyne angle never appears in the drift matrix
        model = q.drift_matrix(star097.system, star097.squeezer)
        assert model.M.shape == (4, 4)
        _, stable = q.routh_hurwitz(model.coeffs)
        assert stable  # and no phi argument exists anywhere in the predicate


class TestMarchingSquares:
    def test_circle_boundary(self):
        xs = np.linspace(-2, 2, 41)
        ys = np.linspace(-2, 2, 41)
        field = 1.0 - (xs[:, None]**2 + ys[None, :]**2)
        segs = q.marching_squares(field, xs, ys)
        assert len(segs) > 20
        for x0, y0, x1, y1 in segs:
            for (x, y) in ((x0, y0), (x1, y1)):
                assert math.hypot(x, y) == pytest.approx(1.0, abs=0.08)

    def test_no_crossings_for_uniform_field(self):
        xs = np.linspace(0, 1, 5)
        field = np.ones((5, 5))
        assert q.marching_squares(field, xs, xs) == []
