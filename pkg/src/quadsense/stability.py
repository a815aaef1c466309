"""Drift matrix, characteristic polynomial, Routh-Hurwitz predicate and maps.

The 4x4 drift matrix acts on (q_c, p_c, q_m, p_m).  Its characteristic
polynomial lambda^4 + M3 lambda^3 + M2 lambda^2 + M1 lambda + M0 has the
closed-form coefficients

    M3 = kappa + Gamma_m
    M2 = P + kappa Gamma_m          with P = kappa^2/4 + Delta^2 - 4 G^2
    M1 = Gamma_m P
    M0 = -4 g^2 Omega_m (Delta + 2 G sin theta)

obtained by direct cofactor expansion of det(lambda I - M).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .system import SqueezerParams, SystemParams


@dataclass(frozen=True)
class DriftModel:
    """Drift matrix, characteristic coefficients, and the noise amplitude matrix."""

    M: np.ndarray            # 4x4 real
    coeffs: tuple            # (M3, M2, M1, M0)
    D_amp: np.ndarray        # Diag(sqrt(kappa), sqrt(kappa), 0, sqrt(2 Gamma_m))


def characteristic_coefficients(sys: SystemParams, sq: SqueezerParams,
                                G=None, theta=None, g=None, Delta=None):
    """Closed-form (M3, M2, M1, M0); arguments override the param objects.

    Vectorized: any of G/theta/g/Delta may be arrays (broadcast together).
    """
    G = sq.G if G is None else np.asarray(G, dtype=float)
    theta = sq.theta if theta is None else np.asarray(theta, dtype=float)
    g = sys.g if g is None else np.asarray(g, dtype=float)
    Delta = sys.Delta if Delta is None else np.asarray(Delta, dtype=float)
    P = sys.kappa**2 / 4.0 + Delta**2 - 4.0 * G**2
    M3 = (sys.kappa + sys.Gamma_m) * np.ones_like(P)
    M2 = P + sys.kappa * sys.Gamma_m
    M1 = sys.Gamma_m * P
    M0 = -4.0 * g**2 * sys.Omega_m * (Delta + 2.0 * G * np.sin(theta))
    return M3, M2, M1, M0


def drift_matrix(sys: SystemParams, sq: SqueezerParams) -> DriftModel:
    """Assemble the drift matrix in block form [[A, B], [B, C]]."""
    sigma_plus = sys.Delta + 2.0 * sq.G * np.sin(sq.theta)
    sigma_minus = sys.Delta - 2.0 * sq.G * np.sin(sq.theta)
    rho_plus = sys.kappa / 2.0 + 2.0 * sq.G * np.cos(sq.theta)
    rho_minus = sys.kappa / 2.0 - 2.0 * sq.G * np.cos(sq.theta)
    A = np.array([[-rho_minus, sigma_plus], [-sigma_minus, -rho_plus]])
    B = np.array([[0.0, 0.0], [2.0 * sys.g, 0.0]])
    C = np.array([[0.0, sys.Omega_m], [0.0, -sys.Gamma_m]])
    M = np.block([[A, B], [B, C]])
    coeffs = tuple(float(x) for x in characteristic_coefficients(sys, sq))
    D_amp = np.diag([np.sqrt(sys.kappa), np.sqrt(sys.kappa), 0.0,
                     np.sqrt(2.0 * sys.Gamma_m)])
    return DriftModel(M=M, coeffs=coeffs, D_amp=D_amp)


def routh_hurwitz(coeffs) -> tuple[tuple, np.ndarray | bool]:
    """Routh-Hurwitz conditions for lambda^4 + M3 l^3 + M2 l^2 + M1 l + M0.

    Returns ((c1, c2, c3, c4), stable) with
        c1: 0 < M3
        c2: 0 < M3 M2 - M1
        c3: 0 < M0
        c4: 0 < M3 M2 M1 - (M1^2 + M3^2 M0)
    Vectorized over array coefficients.
    """
    M3, M2, M1, M0 = (np.asarray(c, dtype=float) for c in coeffs)
    c1 = M3 > 0.0
    c2 = M3 * M2 - M1 > 0.0
    c3 = M0 > 0.0
    c4 = M3 * M2 * M1 - (M1**2 + M3**2 * M0) > 0.0
    stable = c1 & c2 & c3 & c4
    if stable.ndim == 0:
        return (bool(c1), bool(c2), bool(c3), bool(c4)), bool(stable)
    return (c1, c2, c3, c4), stable


def is_stable(sys: SystemParams, sq: SqueezerParams, *, allow_marginal: bool = False,
              G=None, theta=None, g=None, Delta=None):
    """Stability predicate from the closed-form coefficients (vectorized).

    allow_marginal relaxes the constant-term condition to M0 >= 0, admitting
    the zero-squeezing resonance case whose mechanical mode is marginal but
    whose finite-frequency spectra remain well defined.
    """
    M3, M2, M1, M0 = characteristic_coefficients(sys, sq, G=G, theta=theta, g=g, Delta=Delta)
    c3 = M0 >= 0.0 if allow_marginal else M0 > 0.0
    theta1 = M3 * M2 * M1 - (M1**2 + M3**2 * M0)
    out = (M3 > 0.0) & (M3 * M2 - M1 > 0.0) & c3 & (theta1 > 0.0)
    return bool(out) if np.ndim(out) == 0 else out


def theta_functions(sys: SystemParams, sq: SqueezerParams) -> tuple[float, float, tuple[int, int]]:
    """Stability criterion functions Theta_1 and Theta_2 with their signs.

    Theta_1 = M3 M2 M1 - (M1^2 + M3^2 M0)
    Theta_2 = 1 - |sqrt(n_c)/(2 eps_c) * (kappa - 4 G cos theta)|

    Sign +1 implies the corresponding stability requirement holds.
    """
    if sq.eps_c == 0.0:
        raise ValueError("Theta_2 needs a nonzero signal drive eps_c")
    M3, M2, M1, M0 = characteristic_coefficients(sys, sq)
    theta1 = float(M3 * M2 * M1 - (M1**2 + M3**2 * M0))
    theta2 = 1.0 - abs(np.sqrt(sys.n_c) / (2.0 * sq.eps_c)
                       * (sys.kappa - 4.0 * sq.G * np.cos(sq.theta)))
    signs = (1 if theta1 > 0 else -1, 1 if theta2 > 0 else -1)
    return theta1, theta2, signs


def eigenvalues(model: DriftModel) -> np.ndarray:
    """Eigenvalues of the drift matrix (general-purpose solver)."""
    return np.linalg.eigvals(model.M)


# ---------------------------------------------------------------------------
# maps

AXIS_NAMES = ("C_over_CSQL", "theta", "G_over_kappa", "phi")


def stability_map(sys: SystemParams, sq: SqueezerParams, axes: tuple[str, str],
                  grids: tuple[np.ndarray, np.ndarray], Omega_eval: float):
    """Evaluate Theta_1/Theta_2-style stability over a 2D grid.

    axes entries are from {C_over_CSQL, theta, G_over_kappa}; the remaining
    settings are taken from (sys, sq).  Returns (theta1, stable) arrays of
    shape (len(grid1), len(grid2)) in row-major (axis1 outer) order.
    """
    from .system import cooperativity_sql

    if len(axes) != 2 or axes[0] == axes[1]:
        raise ValueError("axes must be two distinct names")
    for ax in axes:
        if ax not in ("C_over_CSQL", "theta", "G_over_kappa"):
            raise ValueError(f"unsupported map axis {ax!r}")
    g1 = np.asarray(grids[0], dtype=float)[:, None]
    g2 = np.asarray(grids[1], dtype=float)[None, :]
    if g1.size == 0 or g2.size == 0:
        raise ValueError("empty grid")

    values = {"theta": sq.theta, "G": sq.G, "g": sys.g}
    csql = cooperativity_sql(sys, Omega_eval)
    for ax, grid in zip(axes, (g1, g2)):
        if ax == "C_over_CSQL":
            values["g"] = np.sqrt(grid * csql * sys.kappa * sys.Gamma_m) / 2.0
        elif ax == "theta":
            values["theta"] = grid
        elif ax == "G_over_kappa":
            values["G"] = grid * sys.kappa

    M3, M2, M1, M0 = characteristic_coefficients(
        sys, sq, G=values["G"], theta=values["theta"], g=values["g"])
    shape = np.broadcast_shapes(np.shape(M0), (g1.size, g2.size))
    theta1 = np.broadcast_to(M3 * M2 * M1 - (M1**2 + M3**2 * M0), shape)
    _, stable = routh_hurwitz((np.broadcast_to(M3, shape), np.broadcast_to(M2, shape),
                               np.broadcast_to(M1, shape), np.broadcast_to(M0, shape)))
    return theta1, stable


def marching_squares(field: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> list[tuple]:
    """Zero-level polyline segments of `field` sampled at xs (rows) x ys (cols).

    Linear interpolation along cell edges; saddle cells tie-break toward the
    negative (unstable) side.  Returns [(x0, y0, x1, y1), ...].
    """
    segs = []
    nx, ny = field.shape
    for i in range(nx - 1):
        for j in range(ny - 1):
            corners = [field[i, j], field[i + 1, j], field[i + 1, j + 1], field[i, j + 1]]
            idx = sum(1 << k for k, v in enumerate(corners) if v > 0.0)
            if idx in (0, 15):
                continue
            x0, x1 = xs[i], xs[i + 1]
            y0, y1 = ys[j], ys[j + 1]

            def interp(va, vb, a, b):
                t = va / (va - vb) if va != vb else 0.5
                return a + t * (b - a)

            # edge crossing points: bottom (j), right (i+1), top (j+1), left (i)
            pts = {}
            if (corners[0] > 0) != (corners[1] > 0):
                pts["left_x"] = (interp(corners[0], corners[1], x0, x1), y0)
            if (corners[1] > 0) != (corners[2] > 0):
                pts["bottom_y"] = (x1, interp(corners[1], corners[2], y0, y1))
            if (corners[3] > 0) != (corners[2] > 0):
                pts["right_x"] = (interp(corners[3], corners[2], x0, x1), y1)
            if (corners[0] > 0) != (corners[3] > 0):
                pts["top_y"] = (x0, interp(corners[0], corners[3], y0, y1))
            crossing = list(pts.values())
            if len(crossing) == 2:
                segs.append((*crossing[0], *crossing[1]))
            elif len(crossing) == 4:
                # ambiguous saddle: connect so the negative corners stay joined
                a, b, c, d = crossing
                segs.append((*a, *b))
                segs.append((*c, *d))
    return segs
