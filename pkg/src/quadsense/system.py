"""Physical parameters, unit conventions, derived quantities and steady-state relations.

All rates and frequencies are stored internally in rad/s.  Scenario files may
tag values with ordinary-frequency units ("Hz", "MHz", ...) which are converted
at the boundary; bare numbers are taken as rad/s.

Exactly one of the cooperativity knobs {coop, C_over_CSQL, q_bar_m} fixes the
optomechanical working point; the others are derived from it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import PhysicsDomainError, ScenarioError

# SI-2019 exact values
HBAR = 1.054571817e-34   # J s
K_B = 1.380649e-23       # J/K
C_LIGHT = 2.99792458e8   # m/s

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SystemParams:
    """Optomechanical constants and derived quantities (rates in rad/s)."""

    Omega_m: float            # mechanical angular frequency
    Q_m: float                # mechanical quality factor
    Gamma_m: float            # mechanical decay rate, Omega_m / Q_m
    m_eff: float              # effective mass, kg
    kappa: float              # total cavity linewidth
    eta_c: float              # coupling parameter kappa_ex / kappa, in (0, 1]
    g0: float                 # single-photon quadratic coupling rate
    Delta: float = 0.0        # effective detuning Delta_c - g0 * q_bar_m**2
    n_bar: float = 0.0        # thermal phonon occupancy
    temperature: float | None = None   # bath temperature, K (n_bar source if given)
    lambda_s: float | None = None      # signal wavelength, m
    Omega_l: float | None = None       # signal laser angular frequency
    g_om: float | None = None          # quadratic coupling strength, rad/(s m^2)
    cavity_length: float | None = None
    membrane_reflectivity: float | None = None
    q_bar_m: float = 0.0      # steady mechanical displacement, zero-point units
    coop: float = 0.0         # multi-photon cooperativity C = 4 g^2 / (kappa Gamma_m)
    # derived
    q_zp: float = 0.0         # zero-point fluctuation, m
    n_c: float = 0.0          # mean cavity photon number, Omega_m / (2 g0) unless overridden
    g: float = 0.0            # effective coupling g0 * q_bar_m * sqrt(2 n_c)

    @property
    def force_psd_prefactor(self) -> float:
        """2 hbar m_eff Gamma_m Omega_m, the quanta-to-(N^2/Hz) conversion."""
        return 2.0 * HBAR * self.m_eff * self.Gamma_m * self.Omega_m


@dataclass(frozen=True)
class SqueezerParams:
    """Intracavity squeezer settings plus pump/signal drive bookkeeping."""

    G: float                  # squeezing strength, rad/s, >= 0
    theta: float              # squeezing phase, rad
    nu: float = 0.0           # second-order nonlinearity, rad/s
    Delta_p: float = 0.0      # SH-mode detuning, rad/s
    P_p: float = 0.0          # pump power, W
    eta_p: float | None = None  # pump coupling parameter (defaults to eta_c)
    Phi: float = 0.0          # signal-laser phase, rad
    P_s: float | None = None  # signal power, W
    eps_c: float = 0.0        # |signal drive amplitude|, rad/s
    eps_p: float = 0.0        # |pump drive amplitude|, rad/s
    alpha_p: float = 0.0      # mean SH amplitude (G = nu * alpha_p when OPO-derived)

    def resonance_stability_flags(self, kappa: float) -> tuple[bool, bool]:
        """On-resonance prerequisite checks: G/kappa < 0.25 and -pi < theta < 0.

        Informational only; nothing is enforced here.
        """
        return (self.G / kappa < 0.25, -math.pi < self.theta < 0.0)


def _require_positive(name: str, value: float) -> None:
    if not (value > 0.0) or not math.isfinite(value):
        raise ScenarioError(f"{name} must be a positive finite number, got {value!r}")


def mechanical_susceptibility_magnitude(sys: SystemParams, Omega: float) -> float:
    """|chi_m| = Omega_m / (Omega sqrt(Omega^2 + Gamma_m^2)) for the quadratic system."""
    if Omega == 0.0:
        raise PhysicsDomainError("chi_m is singular at Omega = 0")
    return sys.Omega_m / (abs(Omega) * math.hypot(Omega, sys.Gamma_m))


def cooperativity_sql(sys: SystemParams, Omega: float) -> float:
    """C_SQL = 1 / (4 sqrt(eta_c) Gamma_m |chi_m|)."""
    return 1.0 / (4.0 * math.sqrt(sys.eta_c) * sys.Gamma_m
                  * mechanical_susceptibility_magnitude(sys, Omega))


def derive_params(raw: dict) -> SystemParams:
    """Build a fully derived SystemParams from a partial field mapping.

    Mandatory: Omega_m, one of {Q_m, Gamma_m}, m_eff, kappa, eta_c, and a
    coupling route (g0 directly, or g_om, or cavity geometry for g_om).
    Exactly one of {coop, C_over_CSQL, q_bar_m} must set the working point
    (C_over_CSQL additionally needs Omega_eval in the mapping).
    """
    raw = dict(raw)

    for name in ("Omega_m", "m_eff", "kappa", "eta_c"):
        if name not in raw:
            raise ScenarioError(f"missing mandatory field {name}")
    Omega_m = float(raw["Omega_m"])
    m_eff = float(raw["m_eff"])
    kappa = float(raw["kappa"])
    eta_c = float(raw["eta_c"])
    _require_positive("Omega_m", Omega_m)
    _require_positive("m_eff", m_eff)
    _require_positive("kappa", kappa)
    if not (0.0 < eta_c <= 1.0):
        raise ScenarioError(f"eta_c must lie in (0, 1], got {eta_c}")

    if "Gamma_m" in raw and "Q_m" in raw:
        Gamma_m = float(raw["Gamma_m"])
        Q_m = float(raw["Q_m"])
        if not math.isclose(Gamma_m, Omega_m / Q_m, rel_tol=1e-9):
            raise ScenarioError("Gamma_m and Q_m are inconsistent: Gamma_m must equal Omega_m/Q_m")
    elif "Gamma_m" in raw:
        Gamma_m = float(raw["Gamma_m"])
        _require_positive("Gamma_m", Gamma_m)
        Q_m = Omega_m / Gamma_m
    elif "Q_m" in raw:
        Q_m = float(raw["Q_m"])
        _require_positive("Q_m", Q_m)
        Gamma_m = Omega_m / Q_m
    else:
        raise ScenarioError("missing mandatory field Q_m (or Gamma_m)")

    q_zp = math.sqrt(HBAR / (m_eff * Omega_m))

    lambda_s = float(raw["lambda_s"]) if raw.get("lambda_s") is not None else None
    Omega_l = TWO_PI * C_LIGHT / lambda_s if lambda_s else None

    cavity_length = float(raw["cavity_length"]) if raw.get("cavity_length") is not None else None
    membrane_reflectivity = (float(raw["membrane_reflectivity"])
                             if raw.get("membrane_reflectivity") is not None else None)

    g_om = float(raw["g_om"]) if raw.get("g_om") is not None else None
    if g_om is None and cavity_length is not None and membrane_reflectivity is not None:
        if lambda_s is None:
            raise ScenarioError("g_om from geometry needs lambda_s")
        R = membrane_reflectivity
        if not (0.0 <= R < 1.0):
            raise ScenarioError(f"membrane_reflectivity must lie in [0, 1), got {R}")
        g_om = 8.0 * math.pi**2 * C_LIGHT * math.sqrt(R / (1.0 - R)) / (lambda_s**2 * cavity_length)

    if raw.get("g0") is not None:
        g0 = float(raw["g0"])
        if g_om is not None and not math.isclose(g0, g_om * q_zp**2, rel_tol=1e-6):
            raise ScenarioError("g0 and g_om are inconsistent: g0 must equal g_om * q_zp^2")
    elif g_om is not None:
        g0 = g_om * q_zp**2
    else:
        raise ScenarioError("missing coupling: give g0, g_om, or cavity geometry")
    _require_positive("g0", g0)

    # Photon number: Omega_m / (2 g0), overridable to follow tabulated values.
    n_c = float(raw["n_c"]) if raw.get("n_c") is not None else Omega_m / (2.0 * g0)
    _require_positive("n_c", n_c)

    if raw.get("temperature") is not None:
        temperature = float(raw["temperature"])
        if temperature < 0.0:
            raise ScenarioError("temperature must be >= 0")
        n_bar = K_B * temperature / (HBAR * Omega_m)
        if raw.get("n_bar") is not None and not math.isclose(float(raw["n_bar"]), n_bar, rel_tol=1e-6):
            raise ScenarioError("n_bar and temperature are inconsistent")
    else:
        temperature = None
        n_bar = float(raw.get("n_bar", 0.0))
    if n_bar < 0.0:
        raise ScenarioError("n_bar must be >= 0")

    Delta = float(raw.get("Delta", 0.0))

    knobs = [k for k in ("coop", "C_over_CSQL", "q_bar_m") if raw.get(k) is not None]
    if len(knobs) != 1:
        raise ScenarioError(
            "exactly one of {coop, C_over_CSQL, q_bar_m} must be given, "
            f"got {knobs or 'none'}")

    base = SystemParams(
        Omega_m=Omega_m, Q_m=Q_m, Gamma_m=Gamma_m, m_eff=m_eff, kappa=kappa,
        eta_c=eta_c, g0=g0, Delta=Delta, n_bar=n_bar, temperature=temperature,
        lambda_s=lambda_s, Omega_l=Omega_l, g_om=g_om, cavity_length=cavity_length,
        membrane_reflectivity=membrane_reflectivity, q_zp=q_zp, n_c=n_c)

    knob = knobs[0]
    if knob == "q_bar_m":
        q_bar_m = float(raw["q_bar_m"])
        if q_bar_m < 0.0:
            raise ScenarioError("q_bar_m must be >= 0")
        g = g0 * q_bar_m * math.sqrt(2.0 * n_c)
        coop = 4.0 * g**2 / (kappa * Gamma_m)
    else:
        if knob == "coop":
            coop = float(raw["coop"])
        else:
            Omega_eval = raw.get("Omega_eval")
            if Omega_eval is None:
                raise ScenarioError("C_over_CSQL needs Omega_eval to resolve C_SQL")
            coop = float(raw["C_over_CSQL"]) * cooperativity_sql(base, float(Omega_eval))
        if coop < 0.0:
            raise ScenarioError("coop must be >= 0")
        g = math.sqrt(coop * kappa * Gamma_m) / 2.0
        q_bar_m = g / (g0 * math.sqrt(2.0 * n_c)) if g > 0.0 else 0.0

    return replace(base, coop=coop, g=g, q_bar_m=q_bar_m)


def derive_squeezer(sys: SystemParams, raw: dict) -> SqueezerParams:
    """Build SqueezerParams, resolving G/theta and drive amplitudes against sys."""
    raw = dict(raw)

    if raw.get("G") is not None and raw.get("G_over_kappa") is not None:
        raise ScenarioError("give G or G_over_kappa, not both")
    if raw.get("G_over_kappa") is not None:
        G = float(raw["G_over_kappa"]) * sys.kappa
    else:
        G = float(raw.get("G", 0.0))
    if G < 0.0:
        raise ScenarioError("G must be >= 0")

    theta = float(raw.get("theta", 0.0))
    nu = float(raw.get("nu", 0.0))
    Delta_p = float(raw.get("Delta_p", 0.0))
    P_p = float(raw.get("P_p", 0.0))
    eta_p = float(raw["eta_p"]) if raw.get("eta_p") is not None else sys.eta_c
    Phi = float(raw.get("Phi", 0.0))
    P_s = float(raw["P_s"]) if raw.get("P_s") is not None else None

    eps_c = 0.0
    eps_p = 0.0
    if sys.Omega_l is not None:
        if P_s is not None:
            eps_c = math.sqrt(sys.kappa * sys.eta_c * P_s / (HBAR * sys.Omega_l))
        if P_p > 0.0:
            eps_p = math.sqrt(sys.kappa * eta_p * P_p / (2.0 * HBAR * sys.Omega_l))
    alpha_p = G / nu if nu > 0.0 else 0.0

    return SqueezerParams(G=G, theta=theta, nu=nu, Delta_p=Delta_p, P_p=P_p,
                          eta_p=eta_p, Phi=Phi, P_s=P_s, eps_c=eps_c, eps_p=eps_p,
                          alpha_p=alpha_p)


def matched_signal_power(sys: SystemParams, sq: SqueezerParams) -> float:
    """Signal power that balances the steady state at the given (G, theta).

    P_s = hbar Omega_l n_c / (4 kappa eta_c) * [(kappa - 4G)^2 + 8 G kappa (1 - cos theta)]
    """
    if sys.Omega_l is None:
        raise ScenarioError("matched_signal_power needs lambda_s (for Omega_l)")
    if not (sys.eta_c > 0.0):
        raise PhysicsDomainError("matched_signal_power needs eta_c > 0")
    bracket = (sys.kappa - 4.0 * sq.G)**2 + 8.0 * sq.G * sys.kappa * (1.0 - math.cos(sq.theta))
    return HBAR * sys.Omega_l * sys.n_c / (4.0 * sys.kappa * sys.eta_c) * bracket


def steady_state(sys: SystemParams, sq: SqueezerParams,
                 Delta_c: float | None = None) -> tuple[float, float, bool]:
    """Evaluate the steady-state closure relations.

    Returns (cos_theta_check, q_bar_sq, consistent) where

        cos_theta_check = (kappa - |2 eps_c / sqrt(n_c)| cos Phi) / (4 G)
        q_bar_sq        = (Delta_c - |eps_c / sqrt(n_c)| sin Phi - 2 G sin theta) / g0

    `consistent` is False when |cos_theta_check| > 1 (no squeezing phase can
    satisfy the inputs).  Raises on G = 0 and on q_bar_sq < 0.
    """
    if sq.G == 0.0:
        raise PhysicsDomainError("steady_state undefined at G = 0 (division by 4G)")
    if sys.n_c <= 0.0 or sq.eps_c <= 0.0:
        raise PhysicsDomainError("steady_state needs n_c > 0 and |eps_c| > 0")
    if Delta_c is None:
        Delta_c = sys.Delta + sys.g0 * sys.q_bar_m**2
    ratio = 2.0 * sq.eps_c / math.sqrt(sys.n_c)
    cos_theta_check = (sys.kappa - abs(ratio) * math.cos(sq.Phi)) / (4.0 * sq.G)
    q_bar_sq = (Delta_c - abs(ratio) / 2.0 * math.sin(sq.Phi)
                - 2.0 * sq.G * math.sin(sq.theta)) / sys.g0
    if q_bar_sq < 0.0:
        raise PhysicsDomainError(f"unphysical configuration: q_bar_m^2 = {q_bar_sq} < 0")
    return cos_theta_check, q_bar_sq, abs(cos_theta_check) <= 1.0


# ---------------------------------------------------------------------------
# scenario ingestion

# Unit tags accepted in scenario files.  Frequency tags convert ordinary
# frequency to angular (factor 2 pi); everything else is a plain scale factor.
_FREQUENCY_UNITS = {
    "Hz": TWO_PI, "kHz": TWO_PI * 1e3, "MHz": TWO_PI * 1e6, "GHz": TWO_PI * 1e9,
    "rad/s": 1.0,
}
_SCALE_UNITS = {
    "m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9,
    "kg": 1.0, "g": 1e-3, "ng": 1e-12,
    "K": 1.0,
    "W": 1.0, "mW": 1e-3, "uW": 1e-6,
    "rad": 1.0, "deg": math.pi / 180.0,
    "N^2/Hz": 1.0,
    "Hz/nm^2": TWO_PI * 1e18, "rad/s/m^2": 1.0,
    "dimensionless": 1.0,
}

_SYSTEM_KEYS = {
    "Omega_m", "Q_m", "Gamma_m", "m_eff", "kappa", "eta_c", "g0", "g_om",
    "Delta", "n_bar", "temperature", "lambda_s", "cavity_length",
    "membrane_reflectivity", "q_bar_m", "coop", "C_over_CSQL", "n_c",
}
_SQUEEZER_KEYS = {
    "G", "G_over_kappa", "theta", "nu", "Delta_p", "P_p", "eta_p", "Phi", "P_s",
}
_EVAL_KEYS = {"Omega_eval", "phi", "S_sig"}

SCENARIO_KEYS = _SYSTEM_KEYS | _SQUEEZER_KEYS | _EVAL_KEYS


def _resolve_value(key: str, value) -> float:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, dict):
        extra = set(value) - {"value", "unit"}
        if extra or "value" not in value:
            raise ScenarioError(f"bad unit tag for {key}: {value!r}")
        unit = value.get("unit", "rad/s")
        if unit in _FREQUENCY_UNITS:
            factor = _FREQUENCY_UNITS[unit]
        elif unit in _SCALE_UNITS:
            factor = _SCALE_UNITS[unit]
        else:
            raise ScenarioError(f"unknown unit {unit!r} for {key}")
        return float(value["value"]) * factor
    raise ScenarioError(f"value of {key} must be a number or {{value, unit}} object")


@dataclass(frozen=True)
class Scenario:
    """A resolved scenario: system + squeezer + evaluation settings."""

    system: SystemParams
    squeezer: SqueezerParams
    Omega_eval: float
    phi: float
    S_sig: float | None
    resolved: dict = field(repr=False, default_factory=dict)


def scenario_from_dict(doc: dict) -> Scenario:
    """Resolve a flat key->value scenario mapping (unknown keys rejected)."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    unknown = sorted(set(doc) - SCENARIO_KEYS)
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {', '.join(unknown)}")

    resolved = {key: _resolve_value(key, value) for key, value in doc.items()}
    Omega_eval = resolved.get("Omega_eval", TWO_PI * 100.0)
    phi = resolved.get("phi", math.pi / 2.0)

    sys_raw = {k: v for k, v in resolved.items() if k in _SYSTEM_KEYS}
    sys_raw["Omega_eval"] = Omega_eval
    system = derive_params(sys_raw)
    squeezer = derive_squeezer(system, {k: v for k, v in resolved.items() if k in _SQUEEZER_KEYS})
    return Scenario(system=system, squeezer=squeezer, Omega_eval=Omega_eval,
                    phi=phi, S_sig=resolved.get("S_sig"), resolved=resolved)


def load_scenario(path: str | Path, overrides: dict | None = None) -> Scenario:
    """Load a scenario JSON file, applying key=value overrides (flag > file)."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    if overrides:
        doc.update(overrides)
    return scenario_from_dict(doc)
