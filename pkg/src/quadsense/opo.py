"""Squeezing strength from the OPO steady state, power curves and SH diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhysicsDomainError
from .system import HBAR, SystemParams


@dataclass(frozen=True)
class OpoPoint:
    """One point on the pump-power curve."""

    P_p: float          # pump power, W
    G: float            # squeezing strength, rad/s (sign kept; see in_domain)
    tau_opo: float      # sqrt(kappa^2 + 4 Delta_p^2) / (16 nu)
    eps_p: float        # pump drive amplitude, rad/s
    in_domain: bool     # square-root argument >= 0

    @property
    def physical_branch(self) -> bool:
        """G >= 0 on an in-domain point; below the zero crossing G is negative."""
        return self.in_domain and self.G >= 0.0


@dataclass(frozen=True)
class ShCorrections:
    """Adiabatic-elimination corrections from the second-harmonic mode."""

    kappa_s_eff: complex
    Omega_m_eff: float
    G_s_plus: complex
    G_s_minus: complex
    ratio_detuning: float       # Delta' / G_p
    ratio_nonlinearity: float   # nu / G_p
    valid: bool
    trivially_valid: bool = False


def pump_amplitude(sys: SystemParams, P_p: float, eta_p: float | None = None) -> float:
    """|eps_p| = sqrt(kappa eta P_p / (2 hbar Omega_l))."""
    if sys.Omega_l is None:
        raise PhysicsDomainError("pump amplitude needs lambda_s (for Omega_l)")
    if P_p < 0.0:
        raise PhysicsDomainError("pump power must be >= 0")
    eta = sys.eta_c if eta_p is None else eta_p
    return math.sqrt(sys.kappa * eta * P_p / (2.0 * HBAR * sys.Omega_l))


def squeezing_strength_from_amplitude(sys: SystemParams, nu: float, Delta_p: float,
                                      eps_p: float, P_p: float = float("nan")) -> OpoPoint:
    """G = nu (tau - sqrt(tau^2 + Omega_m/(8 g0) - |eps_p|/(4 nu))).

    Out-of-domain points (negative square-root argument) are flagged rather
    than clamped or continued to complex values.  The subtraction is arranged
    so that eps_p = nu * (Omega_m / (2 g0)) cancels the mechanical term exactly
    in floating point, making the zero crossing machine-exact.
    """
    if nu <= 0.0:
        raise PhysicsDomainError("squeezing_strength needs nu > 0")
    tau = math.sqrt(sys.kappa**2 + 4.0 * Delta_p**2) / (16.0 * nu)
    arg = tau**2 + (sys.Omega_m / (2.0 * sys.g0) - eps_p / nu) / 4.0
    if arg < 0.0:
        return OpoPoint(P_p=P_p, G=float("nan"), tau_opo=tau, eps_p=eps_p, in_domain=False)
    return OpoPoint(P_p=P_p, G=nu * (tau - math.sqrt(arg)), tau_opo=tau,
                    eps_p=eps_p, in_domain=True)


def squeezing_strength(sys: SystemParams, nu: float, Delta_p: float, P_p: float,
                       eta_p: float | None = None) -> OpoPoint:
    """Squeezing strength at pump power P_p (see squeezing_strength_from_amplitude)."""
    return squeezing_strength_from_amplitude(sys, nu, Delta_p,
                                             pump_amplitude(sys, P_p, eta_p), P_p)


def zero_crossing_pump_amplitude(sys: SystemParams, nu: float) -> float:
    """|eps_p| at which G = 0 exactly: nu Omega_m / (2 g0).

    Computed as nu * (Omega_m / (2 g0)) so the mechanical term cancels in
    floating point when fed back into squeezing_strength_from_amplitude.
    """
    return nu * (sys.Omega_m / (2.0 * sys.g0))


def domain_boundary_power(sys: SystemParams, nu: float, Delta_p: float,
                          eta_p: float | None = None) -> float:
    """Pump power at which the square-root argument reaches zero (G = nu tau)."""
    tau = math.sqrt(sys.kappa**2 + 4.0 * Delta_p**2) / (16.0 * nu)
    eps_star = 4.0 * nu * (tau**2 + sys.Omega_m / (8.0 * sys.g0))
    eta = sys.eta_c if eta_p is None else eta_p
    return eps_star**2 * 2.0 * HBAR * sys.Omega_l / (sys.kappa * eta)


def power_curve(sys: SystemParams, nu: float, Delta_p: float, P_grid,
                eta_p: float | None = None) -> list[OpoPoint]:
    """Evaluate the OPO curve over an ascending pump-power grid."""
    P_grid = np.asarray(P_grid, dtype=float)
    if P_grid.size == 0:
        raise PhysicsDomainError("power grid must be non-empty")
    if np.any(np.diff(P_grid) < 0.0):
        raise PhysicsDomainError("power grid must be ascending")
    return [squeezing_strength(sys, nu, Delta_p, float(P), eta_p) for P in P_grid]


def power_for_G(sys: SystemParams, nu: float, Delta_p: float, G_target: float,
                eta_p: float | None = None, rel_tol: float = 1e-12) -> float | None:
    """Pump power at which G reaches G_target, by bisection on the in-domain branch.

    Returns None when the target is not bracketed below the domain boundary.
    """
    P_hi = domain_boundary_power(sys, nu, Delta_p, eta_p)
    top = squeezing_strength(sys, nu, Delta_p, P_hi, eta_p)
    while not top.in_domain:   # boundary itself may round just outside
        P_hi *= 1.0 - 1e-12
        top = squeezing_strength(sys, nu, Delta_p, P_hi, eta_p)
    if not (0.0 <= G_target <= top.G):
        return None
    lo, hi = 0.0, P_hi

    def f(P):
        return squeezing_strength(sys, nu, Delta_p, P, eta_p).G - G_target

    if f(lo) > 0.0:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * max(hi, 1e-300):
            break
    return 0.5 * (lo + hi)


def sh_corrections(kappa_s: float, kappa_p: float, nu: float, n_s: float,
                   Delta_prime: float, G_s: float, G_p: float, alpha_s: float,
                   theta: float, validity_threshold: float = 10.0) -> ShCorrections:
    """Second-harmonic corrections from adiabatic elimination.

    kappa_s_eff = kappa_s + 16 nu^2 n_s / (kappa_p + 2 i Delta')
    Omega_m_eff = -16 G_p^2 Delta' / (kappa_p^2 + 4 Delta'^2)
    G_s_pm      = G_s +- 4 nu alpha_s G_p e^{+-i theta} / (kappa_p + 2 i Delta')

    The validity verdict requires Delta' >> G_p and nu << G_p (threshold-fold).
    """
    if kappa_p <= 0.0:
        raise PhysicsDomainError("sh_corrections needs kappa_p > 0")
    den = kappa_p + 2j * Delta_prime
    kappa_s_eff = kappa_s + 16.0 * nu**2 * n_s / den
    Omega_m_eff = -16.0 * G_p**2 * Delta_prime / (kappa_p**2 + 4.0 * Delta_prime**2)
    coupling = 4.0 * nu * alpha_s * G_p / den
    G_s_plus = G_s + coupling * np.exp(1j * theta)
    G_s_minus = G_s - coupling * np.exp(-1j * theta)
    if G_p == 0.0:
        return ShCorrections(kappa_s_eff=complex(kappa_s_eff), Omega_m_eff=float(Omega_m_eff),
                             G_s_plus=complex(G_s_plus), G_s_minus=complex(G_s_minus),
                             ratio_detuning=math.inf, ratio_nonlinearity=0.0,
                             valid=True, trivially_valid=True)
    ratio_detuning = Delta_prime / G_p
    ratio_nonlinearity = nu / G_p
    valid = (ratio_detuning > validity_threshold
             and ratio_nonlinearity < 1.0 / validity_threshold)
    return ShCorrections(kappa_s_eff=complex(kappa_s_eff), Omega_m_eff=float(Omega_m_eff),
                         G_s_plus=complex(G_s_plus), G_s_minus=complex(G_s_minus),
                         ratio_detuning=ratio_detuning, ratio_nonlinearity=ratio_nonlinearity,
                         valid=valid)
