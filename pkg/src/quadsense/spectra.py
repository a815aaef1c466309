"""Symmetrized output spectra, added noise, force PSDs, SQL and baselines.

Vacuum ports contribute variance 1/2 each; the thermal force enters with the
high-temperature correlator n_bar.  Added noise is assembled from the noise
kernels directly (never by subtracting spectra) so large n_bar cannot cause
catastrophic cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedResponseError
from .response import (TransferCoefficients, lorentzian_susceptibility,
                       mechanical_susceptibility, transfer_coefficients)
from .system import HBAR, K_B, SqueezerParams, SystemParams


@dataclass(frozen=True)
class NoiseKernels:
    """phi-independent spectral building blocks at one Omega."""

    K_minus: np.ndarray | float
    K_plus: np.ndarray | float
    K_cr: np.ndarray | float          # Re of the complex cross kernel K_co
    K_si: np.ndarray | float          # Im of the complex cross kernel K_co
    R_minus: np.ndarray | float
    R_plus: np.ndarray | float
    R_si: np.ndarray | complex        # N_+^* N_-


@dataclass(frozen=True)
class SpectrumPoint:
    """All spectral quantities at one (Omega, phi)."""

    Omega: float
    phi: float
    S_qq: float
    S_pp: float
    S_pq: float
    K_minus: float
    K_plus: float
    K_cr: float
    K_si: float
    R_minus: float
    R_plus: float
    R_si: complex
    R_m_phi: float
    n_add: float
    n_add_SQL: float
    S_FF: float
    S_FF_SQL: float


def noise_kernels(co: TransferCoefficients) -> NoiseKernels:
    """Kernels K = U + V from the transfer coefficients."""
    U_minus = np.abs(co.A_minus)**2 + np.abs(co.B_minus)**2
    U_plus = np.abs(co.A_plus)**2 + np.abs(co.B_plus)**2
    V_minus = np.abs(co.C_minus)**2 + np.abs(co.D_minus)**2
    V_plus = np.abs(co.C_plus)**2 + np.abs(co.D_plus)**2
    U_si = co.A_minus * np.conj(co.A_plus) + co.B_minus * np.conj(co.B_plus)
    U_cr = co.B_minus * np.conj(co.A_plus) - co.A_minus * np.conj(co.B_plus)
    V_si = co.C_minus * np.conj(co.C_plus) + co.D_minus * np.conj(co.D_plus)
    V_cr = co.D_minus * np.conj(co.C_plus) - co.C_minus * np.conj(co.D_plus)
    K_co = (U_cr + V_cr) + 1j * (U_si + V_si)
    return NoiseKernels(
        K_minus=U_minus + V_minus, K_plus=U_plus + V_plus,
        K_cr=np.real(K_co), K_si=np.imag(K_co),
        R_minus=np.abs(co.N_minus)**2, R_plus=np.abs(co.N_plus)**2,
        R_si=np.conj(co.N_plus) * co.N_minus)


def raw_output_spectra(sys: SystemParams, sq: SqueezerParams, Omega,
                       n_bar: float | None = None):
    """Symmetrized output spectra (S_qq, S_pp, S_pq) plus the kernels."""
    if n_bar is None:
        n_bar = sys.n_bar
    k = noise_kernels(transfer_coefficients(sys, sq, Omega))
    S_qq = 0.5 * k.K_minus + k.R_minus * n_bar
    S_pp = 0.5 * k.K_plus + k.R_plus * n_bar
    S_pq = 0.5 * k.K_cr + np.real(k.R_si) * n_bar
    return S_qq, S_pp, S_pq, k


def rotated_spectrum(S_qq, S_pp, S_pq, phi):
    """S^phi = S_qq cos^2 phi + S_pp sin^2 phi + S_pq sin(2 phi)."""
    return (S_qq * np.cos(phi)**2 + S_pp * np.sin(phi)**2
            + S_pq * np.sin(2.0 * phi))


def mechanical_response(sys: SystemParams, sq: SqueezerParams, Omega, phi):
    """R_m^phi = |N_- cos phi + N_+ sin phi|^2 (>1 means signal amplification)."""
    co = transfer_coefficients(sys, sq, Omega)
    return np.abs(co.N_minus * np.cos(phi) + co.N_plus * np.sin(phi))**2


def response_from_kernels(k: NoiseKernels, phi):
    """R_m^phi assembled from the kernel entries."""
    c, s = np.cos(phi), np.sin(phi)
    return k.R_minus * c**2 + k.R_plus * s**2 + 2.0 * np.real(k.R_si) * s * c


def added_noise_from_kernels(k: NoiseKernels, phi):
    """n_add = (K_- cos^2 + K_+ sin^2 + 2 K_cr sin cos) / (2 R_m^phi)."""
    c, s = np.cos(phi), np.sin(phi)
    num = 0.5 * k.K_minus * c**2 + 0.5 * k.K_plus * s**2 + k.K_cr * s * c
    den = response_from_kernels(k, phi)
    if np.all(den == 0.0):
        raise UndefinedResponseError("mechanical response R_m^phi vanishes; "
                                     "input-referred noise is undefined")
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), np.inf)


def added_noise(sys: SystemParams, sq: SqueezerParams, Omega, phi):
    """Added noise quanta referred to the force input (independent of n_bar)."""
    k = noise_kernels(transfer_coefficients(sys, sq, Omega))
    return added_noise_from_kernels(k, phi)


def minimize_added_noise_over_phi(k: NoiseKernels) -> tuple[float, float]:
    """Exact minimum of n_add over the homodyne angle at one frequency.

    n_add(phi) is a ratio of quadratic forms in (cos phi, sin phi); its minimum
    is the smallest generalized eigenvalue of the (noise, response) pair.
    Returns (n_add_min, phi_min).  A brute scan plus golden refinement is used
    because the closed-form determinant loses precision at deep minima.
    """
    phis = np.linspace(-np.pi / 2.0, np.pi / 2.0, 721)
    vals = added_noise_from_kernels(k, phis)
    i = int(np.argmin(vals))
    lo = phis[max(i - 1, 0)]
    hi = phis[min(i + 1, len(phis) - 1)]
    inv_gr = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - inv_gr * (b - a)
    x2 = a + inv_gr * (b - a)
    f1 = float(added_noise_from_kernels(k, x1))
    f2 = float(added_noise_from_kernels(k, x2))
    for _ in range(70):
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_gr * (b - a)
            f1 = float(added_noise_from_kernels(k, x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_gr * (b - a)
            f2 = float(added_noise_from_kernels(k, x2))
    phi = 0.5 * (a + b)
    return float(added_noise_from_kernels(k, phi)), float(phi)


def sql(sys: SystemParams, Omega):
    """Standard quantum limit: (n_add_SQL, S_FF_SQL, C_SQL)."""
    chi_abs = np.abs(mechanical_susceptibility(sys, Omega))
    n_add_sql = 1.0 / (2.0 * np.sqrt(sys.eta_c) * sys.Gamma_m * chi_abs)
    return n_add_sql, sys.force_psd_prefactor * n_add_sql, 0.5 * n_add_sql


def force_psd(sys: SystemParams, n_add, n_bar: float | None = None):
    """S_FF = 2 hbar m_eff Gamma_m Omega_m (n_bar + n_add)."""
    if n_bar is None:
        n_bar = sys.n_bar
    return sys.force_psd_prefactor * (n_bar + np.asarray(n_add, dtype=float))


def thermal_psd(sys: SystemParams, T: float) -> float:
    """Fluctuation-dissipation thermal floor: 2 m_eff k_B T Omega_m / Q_m."""
    if T < 0.0:
        raise ValueError("temperature must be >= 0")
    return 2.0 * sys.m_eff * K_B * T * sys.Omega_m / sys.Q_m


def closed_form_standard_phase_n_add(sys: SystemParams, Omega, C=None):
    """Standard-phase added noise in the broadband limit (kappa >> Omega):

    n_add = C + 1 / (16 eta_c C Gamma_m^2 |chi_m|^2),
    minimized at C_SQL where it equals 2 C_SQL.
    """
    if C is None:
        C = sys.coop
    chi_abs = np.abs(mechanical_susceptibility(sys, Omega))
    return C + 1.0 / (16.0 * sys.eta_c * C * sys.Gamma_m**2 * chi_abs**2)


def linear_baseline_added_noise(sys: SystemParams, Omega, C=None):
    """Same functional form with the Lorentzian chi_s (linear-sensor baseline)."""
    if C is None:
        C = sys.coop
    chi_abs = np.abs(lorentzian_susceptibility(sys, Omega))
    return C + 1.0 / (16.0 * sys.eta_c * C * sys.Gamma_m**2 * chi_abs**2)


def linear_baseline_sql(sys: SystemParams, Omega):
    """SQL of the linear baseline: 1 / (2 sqrt(eta_c) Gamma_m |chi_s|)."""
    chi_abs = np.abs(lorentzian_susceptibility(sys, Omega))
    n_add_sql = 1.0 / (2.0 * np.sqrt(sys.eta_c) * sys.Gamma_m * chi_abs)
    return n_add_sql, sys.force_psd_prefactor * n_add_sql, 0.5 * n_add_sql


def squeezing_degree_db(reference, value) -> float:
    """10 log10(reference/value); positive when `value` is squeezed below it."""
    reference = float(reference)
    value = float(value)
    if reference <= 0.0 or value <= 0.0:
        raise ValueError("squeezing degree needs positive spectra")
    return 10.0 * np.log10(reference / value)


def spectrum_point(sys: SystemParams, sq: SqueezerParams, Omega: float, phi: float,
                   n_bar: float | None = None) -> SpectrumPoint:
    """Assemble every spectral quantity at a single (Omega, phi)."""
    if n_bar is None:
        n_bar = sys.n_bar
    S_qq, S_pp, S_pq, k = raw_output_spectra(sys, sq, Omega, n_bar)
    R_m_phi = float(response_from_kernels(k, phi))
    n_add = float(added_noise_from_kernels(k, phi))
    n_add_sql, s_ff_sql, _ = sql(sys, Omega)
    return SpectrumPoint(
        Omega=float(Omega), phi=float(phi),
        S_qq=float(S_qq), S_pp=float(S_pp), S_pq=float(S_pq),
        K_minus=float(k.K_minus), K_plus=float(k.K_plus),
        K_cr=float(k.K_cr), K_si=float(k.K_si),
        R_minus=float(k.R_minus), R_plus=float(k.R_plus), R_si=complex(k.R_si),
        R_m_phi=R_m_phi, n_add=n_add, n_add_SQL=float(n_add_sql),
        S_FF=float(force_psd(sys, n_add, n_bar)), S_FF_SQL=float(s_ff_sql))
