"""Frequency-domain susceptibilities and the 2x5 input-output transfer matrix.

Everything here accepts scalars or numpy arrays for the Fourier frequency (and
broadcasts over squeezer settings), returning complex arrays of the broadcast
shape.  The closed forms below are pole-free: the "minus" cross coefficients
are built from their product form rather than a ratio that cancels a zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhysicsDomainError, PoleError, SingularityError
from .system import SqueezerParams, SystemParams


@dataclass(frozen=True)
class TransferCoefficients:
    """All closed-form transfer quantities at Fourier frequency Omega.

    The ten coefficients map the noise/force input vector
    (q_in, p_in, q_0, p_0, F_in) onto the two output quadratures.
    """

    Omega: np.ndarray | float
    chi_m: np.ndarray | complex       # quadratic-COM mechanical susceptibility, s
    chi_s: np.ndarray | complex       # linear Lorentzian susceptibility, s
    chi_plus: np.ndarray | complex
    chi_minus: np.ndarray | complex
    sigma_plus: np.ndarray | float
    sigma_minus: np.ndarray | float
    rho_plus: np.ndarray | float
    rho_minus: np.ndarray | float
    tau_Omega: np.ndarray | complex
    rho_Omega: np.ndarray | complex
    A_minus: np.ndarray | complex
    A_plus: np.ndarray | complex
    B_minus: np.ndarray | complex
    B_plus: np.ndarray | complex
    C_minus: np.ndarray | complex
    C_plus: np.ndarray | complex
    D_minus: np.ndarray | complex
    D_plus: np.ndarray | complex
    N_minus: np.ndarray | complex
    N_plus: np.ndarray | complex

    def matrix(self) -> np.ndarray:
        """Assemble the 2x5 transfer matrix (rows q_out, p_out).

        Column order: q_in, p_in, q_0, p_0, F_in.  The second row carries the
        sign pattern (-B_plus, -D_plus).
        """
        row_q = [self.A_minus, self.B_minus, self.C_minus, self.D_minus, self.N_minus]
        row_p = [-self.B_plus, self.A_plus, -self.D_plus, self.C_plus, self.N_plus]
        return np.array([row_q, row_p])


def mechanical_susceptibility(sys: SystemParams, Omega) -> np.ndarray | complex:
    """chi_m = -Omega_m / (Omega^2 + i Omega Gamma_m); singular at Omega = 0."""
    Omega = np.asarray(Omega, dtype=float)
    if np.any(Omega == 0.0):
        raise SingularityError("chi_m is singular at Omega = 0")
    return -sys.Omega_m / (Omega**2 + 1j * Omega * sys.Gamma_m)


def lorentzian_susceptibility(sys: SystemParams, Omega) -> np.ndarray | complex:
    """chi_s = Omega_m / (Omega_m^2 - Omega^2 - i Omega Gamma_m) (linear baseline)."""
    Omega = np.asarray(Omega, dtype=float)
    return sys.Omega_m / (sys.Omega_m**2 - Omega**2 - 1j * Omega * sys.Gamma_m)


def susceptibilities(sys: SystemParams, sq: SqueezerParams, Omega,
                     G=None, theta=None, Delta=None) -> dict:
    """Optical/mechanical susceptibilities and the sigma/rho rate pairs.

    G/theta/Delta may be arrays overriding the parameter objects (broadcast
    against Omega), which is how grid maps are evaluated in one shot.
    """
    Omega = np.asarray(Omega, dtype=float)
    G = sq.G if G is None else np.asarray(G, dtype=float)
    theta = sq.theta if theta is None else np.asarray(theta, dtype=float)
    Delta = sys.Delta if Delta is None else np.asarray(Delta, dtype=float)
    sigma_plus = Delta + 2.0 * G * np.sin(theta)
    sigma_minus = Delta - 2.0 * G * np.sin(theta)
    rho_plus = sys.kappa / 2.0 + 2.0 * G * np.cos(theta)
    rho_minus = sys.kappa / 2.0 - 2.0 * G * np.cos(theta)
    return {
        "chi_m": mechanical_susceptibility(sys, Omega),
        "chi_s": lorentzian_susceptibility(sys, Omega),
        "chi_plus": 1.0 / (rho_plus - 1j * Omega),
        "chi_minus": 1.0 / (rho_minus - 1j * Omega),
        "sigma_plus": sigma_plus,
        "sigma_minus": sigma_minus,
        "rho_plus": rho_plus,
        "rho_minus": rho_minus,
    }


def transfer_coefficients(sys: SystemParams, sq: SqueezerParams, Omega,
                          g=None, G=None, theta=None, Delta=None) -> TransferCoefficients:
    """Closed-form transfer coefficients at Omega (vectorized).

    The optional g/G/theta/Delta arrays override the parameter objects and
    broadcast against Omega, so whole maps evaluate in a single call.
    """
    s = susceptibilities(sys, sq, Omega, G=G, theta=theta, Delta=Delta)
    g = sys.g if g is None else np.asarray(g, dtype=float)
    chi_p, chi_mo = s["chi_plus"], s["chi_minus"]
    tau = s["sigma_minus"] - 4.0 * g**2 * s["chi_m"]
    denom = 1.0 + tau * s["sigma_plus"] * chi_p * chi_mo
    if np.any(denom == 0.0):
        raise PhysicsDomainError("transfer-matrix prefactor rho[Omega] has a pole "
                                 "(1 + tau sigma_+ chi_+ chi_- = 0)")
    rho = 1.0 / denom

    eta = sys.eta_c
    root = np.sqrt(eta * (1.0 - eta))
    kr = sys.kappa * rho
    A_minus = kr * chi_mo * eta - 1.0
    A_plus = kr * chi_p * eta - 1.0
    B_plus = kr * tau * chi_p * chi_mo * eta
    B_minus = s["sigma_plus"] * kr * chi_p * chi_mo * eta
    C_minus = kr * chi_mo * root
    C_plus = kr * chi_p * root
    D_plus = kr * tau * chi_p * chi_mo * root
    D_minus = s["sigma_plus"] * kr * chi_p * chi_mo * root
    N_plus = 2.0 * rho * g * chi_p * s["chi_m"] * np.sqrt(2.0 * sys.kappa * eta * sys.Gamma_m)
    N_minus = s["sigma_plus"] * chi_mo * N_plus

    return TransferCoefficients(
        Omega=np.asarray(Omega, dtype=float), chi_m=s["chi_m"], chi_s=s["chi_s"],
        chi_plus=chi_p, chi_minus=chi_mo,
        sigma_plus=s["sigma_plus"], sigma_minus=s["sigma_minus"],
        rho_plus=s["rho_plus"], rho_minus=s["rho_minus"],
        tau_Omega=tau, rho_Omega=rho,
        A_minus=A_minus, A_plus=A_plus, B_minus=B_minus, B_plus=B_plus,
        C_minus=C_minus, C_plus=C_plus, D_minus=D_minus, D_plus=D_plus,
        N_minus=N_minus, N_plus=N_plus)


def effective_susceptibility(sys: SystemParams, sq: SqueezerParams, Omega) -> np.ndarray | complex:
    """Effective mechanical susceptibility (m/N response of displacement to force).

    chi_eff = 1 / (m_eff Omega_m (chi_m^{-1} + Sigma)) with the optical spring
    term Sigma = 16 g^2 (Omega - Delta - 2 G sin theta)
                 / (kappa^2 - 16 G^2 + 4 (Omega - Delta)^2).
    """
    Omega = np.asarray(Omega, dtype=float)
    chi_m = mechanical_susceptibility(sys, Omega)
    denom = sys.kappa**2 - 16.0 * sq.G**2 + 4.0 * (Omega - sys.Delta)**2
    if np.any(denom == 0.0):
        raise PoleError("Sigma denominator vanished (G = kappa/4 with Omega = Delta)")
    sigma_term = 16.0 * sys.g**2 * (Omega - sys.Delta - 2.0 * sq.G * np.sin(sq.theta)) / denom
    return 1.0 / (sys.m_eff * sys.Omega_m * (1.0 / chi_m + sigma_term))
