"""Steady-state Gaussian covariance, Wigner evaluation and quantum advantage.

The stationary covariance of the linearized dynamics solves the Lyapunov
equation M V + V M^T = -D.  The matrix Diag(sqrt(kappa), sqrt(kappa), 0,
sqrt(2 Gamma_m)) is treated as the noise-amplitude matrix; the diffusion used
in the solve is amplitude * variance * amplitude^T with vacuum variance 1/2
per optical quadrature and the thermal correlator n_bar on the force port:
taking it literally as the diffusion fails the vacuum fixed point V = I/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MarginalStabilityError
from .stability import DriftModel, drift_matrix, routh_hurwitz
from .system import SqueezerParams, SystemParams

RESIDUAL_BOUND = 1e-10


@dataclass(frozen=True)
class CovarianceState:
    """Steady-state 4x4 covariance with its diffusion matrix and solve residual."""

    V: np.ndarray
    D_diff: np.ndarray
    residual: float
    n_bar: float
    thermal_convention_note: str = ""


def diffusion_matrix(sys: SystemParams, sq: SqueezerParams | None = None,
                     n_bar: float | None = None) -> np.ndarray:
    """D_diff = D_amp N D_amp^T with N = Diag(1/2, 1/2, *, n_bar).

    Both optical ports carry vacuum variance 1/2, so the optical diffusion is
    kappa/2 per quadrature regardless of eta_c; the force port carries the
    high-temperature correlator n_bar.
    """
    if n_bar is None:
        n_bar = sys.n_bar
    return np.diag([sys.kappa / 2.0, sys.kappa / 2.0, 0.0,
                    2.0 * sys.Gamma_m * n_bar])


def lyapunov_solve(M: np.ndarray, D_diff: np.ndarray,
                   n_bar: float = 0.0) -> CovarianceState:
    """Solve M V + V M^T = -D_diff by the vectorized 16x16 linear system.

    Raises MarginalStabilityError unless every drift eigenvalue has a strictly
    negative real part (the decoupled mechanical block is marginal, so g = 0
    configurations must fail here).
    """
    M = np.asarray(M, dtype=float)
    D_diff = np.asarray(D_diff, dtype=float)
    eig = np.linalg.eigvals(M)
    max_re = float(np.max(eig.real))
    if max_re >= 0.0:
        raise MarginalStabilityError(
            f"drift matrix is not strictly stable (max Re eigenvalue = {max_re:.3e}); "
            "no stationary covariance exists")
    n = M.shape[0]
    eye = np.eye(n)
    A = np.kron(M, eye) + np.kron(eye, M)
    V = np.linalg.solve(A, -D_diff.reshape(-1)).reshape(n, n)
    V = 0.5 * (V + V.T)
    res_num = np.linalg.norm(M @ V + V @ M.T + D_diff)
    res_den = np.linalg.norm(D_diff)
    residual = float(res_num / res_den) if res_den > 0.0 else float(res_num)
    note = ("high-temperature thermal correlator n_bar used in D; the n_bar+1/2 "
            "convention differs at the half-quantum level" if n_bar < 1.0 else "")
    return CovarianceState(V=V, D_diff=D_diff, residual=residual,
                           n_bar=n_bar, thermal_convention_note=note)


def steady_covariance(sys: SystemParams, sq: SqueezerParams,
                      n_bar: float | None = None) -> CovarianceState:
    """Convenience: assemble the drift and diffusion and solve."""
    if n_bar is None:
        n_bar = sys.n_bar
    model: DriftModel = drift_matrix(sys, sq)
    _, stable = routh_hurwitz(model.coeffs)
    if not stable:
        raise MarginalStabilityError("configuration fails the Routh-Hurwitz criterion")
    return lyapunov_solve(model.M, diffusion_matrix(sys, sq, n_bar), n_bar)


def wigner(V: np.ndarray, psi: np.ndarray) -> float | np.ndarray:
    """W(psi) = exp(-psi V^{-1} psi^T / 2) / (pi^2 sqrt(det V)) for the 4-mode state.

    psi may be a 4-vector or an (..., 4) stack of points.
    """
    V = np.asarray(V, dtype=float)
    det = np.linalg.det(V)
    if det <= 0.0:
        raise np.linalg.LinAlgError("covariance matrix must be positive definite")
    Vinv = np.linalg.inv(V)
    psi = np.asarray(psi, dtype=float)
    quad = np.einsum("...i,ij,...j->...", psi, Vinv, psi)
    return np.exp(-0.5 * quad) / (np.pi**2 * np.sqrt(det))


def wigner_marginal(V: np.ndarray, pair: tuple[int, int], x, y):
    """Unit-normalized 2D marginal for the quadrature pair (i, j).

    Gaussian marginalization keeps the corresponding 2x2 submatrix; the
    bivariate density exp(-psi V2^{-1} psi^T / 2) / (2 pi sqrt(det V2))
    integrates to one.
    """
    i, j = pair
    V2 = np.asarray(V, dtype=float)[np.ix_([i, j], [i, j])]
    det = np.linalg.det(V2)
    if det <= 0.0:
        raise np.linalg.LinAlgError("marginal covariance must be positive definite")
    V2inv = np.linalg.inv(V2)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    quad = (V2inv[0, 0] * x**2 + 2.0 * V2inv[0, 1] * x * y + V2inv[1, 1] * y**2)
    return np.exp(-0.5 * quad) / (2.0 * np.pi * np.sqrt(det))


def one_over_e_ellipse(V: np.ndarray, pair: tuple[int, int], n_points: int = 256) -> np.ndarray:
    """Points on the contour where the marginal drops to 1/e of its peak.

    That contour is the ellipse psi V2^{-1} psi^T = 2.
    """
    i, j = pair
    V2 = np.asarray(V, dtype=float)[np.ix_([i, j], [i, j])]
    w, Q = np.linalg.eigh(V2)
    angles = np.linspace(0.0, 2.0 * np.pi, n_points)
    circle = np.stack([np.cos(angles), np.sin(angles)])
    return (Q @ (np.sqrt(2.0 * w)[:, None] * circle)).T


def quantum_advantage(S_sql: float, S_phi: float) -> float:
    """10 lg sqrt(S_FF_SQL / S_FF_phi) in dB; positive means sub-SQL."""
    if S_sql <= 0.0 or S_phi <= 0.0:
        raise ValueError("quantum advantage needs positive force PSDs")
    return 10.0 * np.log10(np.sqrt(S_sql / S_phi))
