"""Command-line surface: scenario ingestion, sweeps, maps, optimization runs.

Every command writes its delimited/JSON outputs into --out and finishes by
writing <command>_manifest.json; a run is complete iff its manifest exists.
Numeric CSV output uses 17 significant digits and is byte-reproducible.
Exit codes: 0 success, 2 scenario/usage error, 3 physics-domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys as _sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import PhysicsDomainError, QuadsenseError, ScenarioError
from .gaussian import (one_over_e_ellipse, steady_covariance, wigner,
                       wigner_marginal)
from .metrics import (enhancement_chi, optimize, response_enhancement_xi, snr,
                      snr_sql)
from .opo import domain_boundary_power, power_curve, power_for_G
from .response import (effective_susceptibility, lorentzian_susceptibility,
                       mechanical_susceptibility)
from .spectra import (added_noise_from_kernels, linear_baseline_added_noise,
                      linear_baseline_sql, minimize_added_noise_over_phi,
                      noise_kernels, force_psd, raw_output_spectra,
                      response_from_kernels, rotated_spectrum, spectrum_point, sql)
from .response import transfer_coefficients
from .stability import marching_squares, stability_map, theta_functions
from .system import (Scenario, SqueezerParams, cooperativity_sql, load_scenario,
                     matched_signal_power)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


class Run:
    """Tracks output files so failures can clean up and success can manifest."""

    def __init__(self, command: str, args):
        self.command = command
        self.args = args
        self.out_dir = Path(args.out)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.outputs: list[Path] = []
        self.t0 = time.monotonic()
        self.scenario_path = getattr(args, "scenario", None)

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.outputs.append(p)
        return p

    def write_csv(self, name: str, header: list[str], rows) -> Path:
        p = self.path(name)
        with open(p, "w", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        return p

    def write_json(self, name: str, obj) -> Path:
        p = self.path(name)
        p.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        return p

    def finish(self, scenario: Scenario | None) -> None:
        manifest = {
            "command": self.command,
            "scenario": str(self.scenario_path) if self.scenario_path else None,
            "resolved_parameters": dict(scenario.resolved) if scenario else None,
            "outputs": [str(p) for p in self.outputs],
            "version": __version__,
            "duration_s": time.monotonic() - self.t0,
        }
        (self.out_dir / f"{self.command}_manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    def abort(self) -> None:
        for p in self.outputs:
            try:
                p.unlink()
            except OSError:
                pass


def _parse_sets(pairs) -> dict:
    overrides = {}
    for item in pairs or []:
        if "=" not in item:
            raise ScenarioError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        try:
            overrides[key] = json.loads(value)
        except json.JSONDecodeError:
            try:
                overrides[key] = float(value)
            except ValueError as exc:
                raise ScenarioError(f"cannot parse --set value {value!r}") from exc
    return overrides


def _load(args) -> Scenario:
    if not getattr(args, "scenario", None):
        raise ScenarioError("this command needs --scenario PATH")
    return load_scenario(args.scenario, _parse_sets(args.set))


def _eps_c_for_theta2(scenario: Scenario) -> float:
    """Signal drive amplitude; the matched value is used when P_s is absent."""
    sq = scenario.squeezer
    if sq.eps_c > 0.0:
        return sq.eps_c
    from .system import HBAR
    sys_ = scenario.system
    if sys_.Omega_l is None:
        return 0.0
    P_s = matched_signal_power(sys_, sq)
    return math.sqrt(sys_.kappa * sys_.eta_c * P_s / (HBAR * sys_.Omega_l))


# ---------------------------------------------------------------------------
# commands

def cmd_spectrum(args) -> int:
    scenario = _load(args)
    run = Run("spectrum", args)
    try:
        phis = [float(p) for p in args.phi.split(",") if p.strip() != ""] if args.phi else []
        if not phis:
            raise ScenarioError("spectrum needs a non-empty --phi list")
        if args.omega_min <= 0.0 or args.omega_max <= args.omega_min:
            raise ScenarioError("need 0 < --omega-min < --omega-max")
        if args.omega_grid == "log":
            omegas = np.logspace(np.log10(args.omega_min), np.log10(args.omega_max),
                                 args.omega_points)
        else:
            omegas = np.linspace(args.omega_min, args.omega_max, args.omega_points)

        header = ["Omega_rad_s", "phi_rad", "S_qq", "S_pp", "S_pq", "R_m_phi",
                  "n_add", "n_add_SQL", "S_FF_N2_Hz", "S_FF_SQL_N2_Hz"]
        rows = []
        dict_rows = []
        for Om in omegas:
            for phi in phis:
                pt = spectrum_point(scenario.system, scenario.squeezer, float(Om), phi)
                row = [pt.Omega, pt.phi, pt.S_qq, pt.S_pp, pt.S_pq, pt.R_m_phi,
                       pt.n_add, pt.n_add_SQL, pt.S_FF, pt.S_FF_SQL]
                rows.append(row)
                dict_rows.append(dict(zip(["Omega_rad_s", "phi_rad", "S_qq", "S_pp",
                                           "S_pq", "R_m_phi", "n_add", "n_add_SQL",
                                           "S_FF_N2_Hz", "S_FF_SQL_N2_Hz"], row)))
        run.write_csv("spectrum.csv", header, rows)
        if args.plot:
            from .plotting import plot_spectrum
            plot_spectrum(dict_rows, run.path("spectrum.png"))
    except Exception:
        run.abort()
        raise
    run.finish(scenario)
    return 0


_MAP_AXES = ("phi", "C_over_CSQL", "G_over_kappa", "theta")


def _axis_grid(name: str, spec_str: str | None, n: int):
    defaults = {
        "phi": (-math.pi / 2.0, math.pi / 2.0),
        "C_over_CSQL": (0.7 / n, 0.7),
        "G_over_kappa": (0.0, 0.2499),
        "theta": (-math.pi + 1e-6, -1e-6),
    }
    lo, hi = defaults[name]
    if spec_str:
        parts = spec_str.split(":")
        if len(parts) != 2:
            raise ScenarioError(f"axis range must be LO:HI, got {spec_str!r}")
        lo, hi = float(parts[0]), float(parts[1])
    return np.linspace(lo, hi, n)


def cmd_map(args) -> int:
    scenario = _load(args)
    run = Run("map", args)
    try:
        axes = tuple(a.strip() for a in args.axes.split(","))
        if len(axes) != 2 or axes[0] == axes[1] or any(a not in _MAP_AXES for a in axes):
            raise ScenarioError(f"--axes must be two distinct names from {_MAP_AXES}")
        res = [int(r) for r in args.resolution.split(",")]
        n1, n2 = (res[0], res[0]) if len(res) == 1 else (res[0], res[1])
        if n1 < 1 or n2 < 1:
            raise ScenarioError("resolution must be >= 1")
        g1 = _axis_grid(axes[0], args.range1, n1)
        g2 = _axis_grid(axes[1], args.range2, n2)

        sys_, sq = scenario.system, scenario.squeezer
        Omega = scenario.Omega_eval
        csql = cooperativity_sql(sys_, Omega)
        eps_c = _eps_c_for_theta2(scenario)
        from .stability import characteristic_coefficients, routh_hurwitz

        # broadcast the two axes over a (n1, n2) grid
        A1 = np.broadcast_to(g1[:, None], (n1, n2))
        A2 = np.broadcast_to(g2[None, :], (n1, n2))
        point = dict(zip(axes, (A1, A2)))
        phi = point.get("phi", scenario.phi)
        G = point.get("G_over_kappa", sq.G / sys_.kappa) * sys_.kappa
        theta = point.get("theta", np.full((1, 1), sq.theta))
        C = point.get("C_over_CSQL", sys_.coop / csql) * csql
        g = np.sqrt(C * sys_.kappa * sys_.Gamma_m) / 2.0

        M3, M2, M1, M0 = characteristic_coefficients(sys_, sq, G=G, theta=theta, g=g)
        theta1_arr = np.broadcast_to(M3 * M2 * M1 - (M1**2 + M3**2 * M0), (n1, n2)).copy()
        _, stable_arr = routh_hurwitz((np.broadcast_to(M3, (n1, n2)),
                                       np.broadcast_to(M2, (n1, n2)),
                                       np.broadcast_to(M1, (n1, n2)),
                                       np.broadcast_to(M0, (n1, n2))))
        if eps_c > 0.0:
            theta2_arr = 1.0 - np.abs(np.sqrt(sys_.n_c) / (2.0 * eps_c)
                                      * (sys_.kappa - 4.0 * G * np.cos(theta)))
        else:
            theta2_arr = np.full((n1, n2), np.nan)
        theta2_arr = np.broadcast_to(theta2_arr, (n1, n2))

        k = noise_kernels(transfer_coefficients(sys_, sq, Omega, g=g, G=G, theta=theta))
        n_add_arr = np.broadcast_to(added_noise_from_kernels(k, phi), (n1, n2))
        # per-point optimal homodyne angle on a fixed fine grid
        phis = np.linspace(-math.pi / 2.0, math.pi / 2.0, 721)
        cah, sah = np.cos(phis), np.sin(phis)
        num = (0.5 * np.multiply.outer(k.K_minus, cah**2)
               + 0.5 * np.multiply.outer(k.K_plus, sah**2)
               + np.multiply.outer(k.K_cr, sah * cah))
        den = (np.multiply.outer(k.R_minus, cah**2)
               + np.multiply.outer(k.R_plus, sah**2)
               + 2.0 * np.multiply.outer(np.real(k.R_si), sah * cah))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), np.inf)
        n_add_opt_arr = np.broadcast_to(ratio.min(axis=-1), (n1, n2))
        values = np.broadcast_to(force_psd(sys_, n_add_arr), (n1, n2))

        header = ["axis1", "axis2", "Theta1", "Theta2", "stable",
                  "n_add", "n_add_phi_opt", "S_FF_N2_Hz"]
        rows = []
        for i in range(n1):
            for j in range(n2):
                rows.append([g1[i], g2[j], theta1_arr[i, j], theta2_arr[i, j],
                             stable_arr[i, j], n_add_arr[i, j], n_add_opt_arr[i, j],
                             values[i, j]])
        run.write_csv("map.csv", header, rows)

        boundary = marching_squares(theta1_arr, g1, g2)
        run.write_csv("map_boundary.csv",
                      ["axis1_start", "axis2_start", "axis1_end", "axis2_end"],
                      boundary)

        minima_rows = []
        for j, x2 in enumerate(g2):
            col = values[:, j]
            ok = stable_arr[:, j]
            if np.any(ok):
                masked = np.where(ok, col, np.inf)
                i = int(np.argmin(masked))
                minima_rows.append([x2, g1[i], col[i]])
        run.write_csv("map_minima.csv", ["axis2", "axis1_argmin", "S_FF_min_N2_Hz"],
                      minima_rows)
        if args.plot:
            from .plotting import plot_map
            plot_map(g1, g2, values, stable_arr, boundary,
                     {"axis1": axes[0], "axis2": axes[1], "value": "log10 S_FF"},
                     run.path("map.png"))
    except Exception:
        run.abort()
        raise
    run.finish(scenario)
    return 0


def cmd_stability(args) -> int:
    scenario = _load(args)
    run = Run("stability", args)
    try:
        axes = tuple(a.strip() for a in args.axes.split(","))
        ok_axes = ("C_over_CSQL", "theta", "G_over_kappa")
        if len(axes) != 2 or axes[0] == axes[1] or any(a not in ok_axes for a in axes):
            raise ScenarioError(f"--axes must be two distinct names from {ok_axes}")
        res = [int(r) for r in args.resolution.split(",")]
        n1, n2 = (res[0], res[0]) if len(res) == 1 else (res[0], res[1])
        g1 = _axis_grid(axes[0], args.range1, n1)
        g2 = _axis_grid(axes[1], args.range2, n2)
        sys_, sq = scenario.system, scenario.squeezer
        theta1, stable = stability_map(sys_, sq, axes, (g1, g2), scenario.Omega_eval)
        eps_c = _eps_c_for_theta2(scenario)

        rows = []
        for i, x1 in enumerate(g1):
            for j, x2 in enumerate(g2):
                point = dict(zip(axes, (float(x1), float(x2))))
                G = point.get("G_over_kappa", sq.G / sys_.kappa) * sys_.kappa
                theta = point.get("theta", sq.theta)
                theta2 = (1.0 - abs(math.sqrt(sys_.n_c) / (2.0 * eps_c)
                                    * (sys_.kappa - 4.0 * G * math.cos(theta)))
                          if eps_c > 0.0 else float("nan"))
                rows.append([x1, x2, theta1[i, j], theta2, stable[i, j]])
        run.write_csv("stability.csv", ["axis1", "axis2", "Theta1", "Theta2", "stable"], rows)
        boundary = marching_squares(theta1, g1, g2)
        run.write_csv("stability_boundary.csv",
                      ["axis1_start", "axis2_start", "axis1_end", "axis2_end"], boundary)
        thflag, t2 = scenario.squeezer.resonance_stability_flags(sys_.kappa)
        run.write_json("stability_notes.json", {
            "resonance_prerequisites": {"G_over_kappa_below_quarter": thflag,
                                        "theta_in_minus_pi_zero": t2},
        })
        if args.plot:
            from .plotting import plot_map
            plot_map(g1, g2, theta1, stable, marching_squares(theta1, g1, g2),
                     {"axis1": axes[0], "axis2": axes[1], "value": "Theta1"},
                     run.path("stability.png"), log_values=False)
    except Exception:
        run.abort()
        raise
    run.finish(scenario)
    return 0


def cmd_optimize(args) -> int:
    scenario = _load(args)
    run = Run("optimize", args)
    try:
        axes = tuple(a.strip() for a in args.axes.split(","))
        bounds = json.loads(args.bounds) if args.bounds else None
        if bounds:
            bounds = {k: tuple(v) for k, v in bounds.items()}
        report = optimize(scenario.system, scenario.squeezer, args.objective, axes,
                          bounds=bounds, Omega=scenario.Omega_eval,
                          S_sig=scenario.S_sig, grid=args.grid,
                          allow_marginal=args.allow_marginal)
        run.write_json("optimum.json", report.to_dict())
    except Exception:
        run.abort()
        raise
    run.finish(scenario)
    return 0


def cmd_opo(args) -> int:
    scenario = _load(args)
    run = Run("opo", args)
    try:
        sys_ = scenario.system
        sq = scenario.squeezer
        if sq.nu <= 0.0:
            raise ScenarioError("opo needs nu > 0 in the scenario")
        if args.pmin <= 0 or args.pmax <= args.pmin:
            raise ScenarioError("need 0 < --pmin < --pmax")
        grid = np.logspace(math.log10(args.pmin), math.log10(args.pmax), args.points)
        points = power_curve(sys_, sq.nu, sq.Delta_p, grid)
        rows = [[p.P_p, p.G if p.in_domain else float("nan"),
                 p.G / sys_.kappa if p.in_domain else float("nan"), p.in_domain]
                for p in points]
        run.write_csv("opo_curve.csv", ["P_p_W", "G_rad_s", "G_over_kappa", "in_domain"], rows)
        p_quarter = power_for_G(sys_, sq.nu, sq.Delta_p, sys_.kappa / 4.0)
        summary = {
            "nu_rad_s": sq.nu,
            "Delta_p_rad_s": sq.Delta_p,
            "zero_crossing_eps_p_rad_s": sq.nu * sys_.Omega_m / (2.0 * sys_.g0),
            "domain_boundary_power_W": domain_boundary_power(sys_, sq.nu, sq.Delta_p),
            "power_for_G_quarter_kappa_W": p_quarter,
            "G_quarter_kappa_reachable": p_quarter is not None,
        }
        run.write_json("opo_summary.json", summary)
        if args.plot:
            from .plotting import plot_power_curve
            plot_power_curve([p.P_p for p in points],
                             [p.G / sys_.kappa if p.in_domain else 0.0 for p in points],
                             [p.in_domain for p in points], run.path("opo.png"))
    except Exception:
        run.abort()
        raise
    run.finish(scenario)
    return 0


_QUAD_NAMES = {"q_c": 0, "p_c": 1, "q_m": 2, "p_m": 3}


def cmd_wigner(args) -> int:
    scenario = _load(args)
    run = Run("wigner", args)
    try:
        names = [n.strip() for n in args.pair.split(",")]
        if len(names) != 2 or any(n not in _QUAD_NAMES for n in names):
            raise ScenarioError(f"--pair must be two of {sorted(_QUAD_NAMES)}")
        pair = (_QUAD_NAMES[names[0]], _QUAD_NAMES[names[1]])
        if args.vacuum:
            V = 0.5 * np.eye(4)
            residual = 0.0
        else:
            state = steady_covariance(scenario.system, scenario.squeezer)
            V, residual = state.V, state.residual
        sig = math.sqrt(max(V[pair[0], pair[0]], V[pair[1], pair[1]]))
        extent = args.extent * sig
        xs = np.linspace(-extent, extent, args.resolution)
        ys = np.linspace(-extent, extent, args.resolution)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        Wm = wigner_marginal(V, pair, X, Y)
        psi = np.zeros(X.shape + (4,))
        psi[..., pair[0]] = X
        psi[..., pair[1]] = Y
        Ws = wigner(V, psi)
        rows = []
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                rows.append([x, y, Wm[i, j], Ws[i, j]])
        run.write_csv("wigner.csv", ["x", "y", "W_marginal", "W_slice"], rows)
        ell = one_over_e_ellipse(V, pair)
        run.write_csv("wigner_ellipse.csv", ["x", "y"], [[p[0], p[1]] for p in ell])
        run.write_json("covariance.json", {
            "V": [[float(v) for v in row] for row in V],
            "lyapunov_residual": residual,
            "pair": list(names),
        })
        if args.plot:
            from .plotting import plot_wigner
            plot_wigner(xs, ys, Wm, ell, run.path("wigner.png"))
    except Exception:
        run.abort()
        raise
    run.finish(scenario)
    return 0


def cmd_snr(args) -> int:
    scenario = _load(args)
    run = Run("snr", args)
    try:
        if scenario.S_sig is None:
            raise ScenarioError("snr needs S_sig in the scenario")
        sys_, sq = scenario.system, scenario.squeezer
        Omega = scenario.Omega_eval
        if args.phi_opt:
            k = noise_kernels(transfer_coefficients(sys_, sq, Omega))
            n_add, phi = minimize_added_noise_over_phi(k)
        else:
            phi = scenario.phi
            k = noise_kernels(transfer_coefficients(sys_, sq, Omega))
            n_add = float(added_noise_from_kernels(k, phi))
        value = snr(sys_, sq, Omega, phi, scenario.S_sig)
        reference = snr_sql(sys_, Omega, scenario.S_sig)
        run.write_json("snr.json", {
            "Omega_rad_s": Omega,
            "phi_rad": phi,
            "phi_deg": math.degrees(phi),
            "n_add": n_add,
            "n_bar": sys_.n_bar,
            "S_sig_N2_Hz": scenario.S_sig,
            "SN": value,
            "SN_SQL": reference,
            "enhancement_I": value / reference,
        })
    except Exception:
        run.abort()
        raise
    run.finish(scenario)
    return 0


def cmd_compare_linear(args) -> int:
    scenario = _load(args)
    run = Run("compare_linear", args)
    try:
        sys_, sq = scenario.system, scenario.squeezer
        Omega = args.omega if args.omega else scenario.Omega_eval
        chi_m = complex(mechanical_susceptibility(sys_, Omega))
        chi_s = complex(lorentzian_susceptibility(sys_, Omega))
        chi_eff = complex(effective_susceptibility(sys_, sq, Omega))
        n_sql, s_sql, c_sql = sql(sys_, Omega)
        n_sql_lin, s_sql_lin, c_sql_lin = linear_baseline_sql(sys_, Omega)
        run.write_json("compare_linear.json", {
            "Omega_rad_s": Omega,
            "abs_chi_m_s": abs(chi_m),
            "abs_chi_s_s": abs(chi_s),
            "susceptibility_ratio": abs(chi_m) / abs(chi_s),
            "abs_chi_eff_s2_per_kg": abs(chi_eff),
            "abs_chi_s_over_m_Omega": abs(chi_s) / (sys_.m_eff * sys_.Omega_m),
            "n_add_SQL_quadratic": float(n_sql),
            "n_add_SQL_linear": float(n_sql_lin),
            "S_FF_SQL_quadratic_N2_Hz": float(s_sql),
            "S_FF_SQL_linear_N2_Hz": float(s_sql_lin),
            "C_SQL_quadratic": float(c_sql),
            "C_SQL_linear": float(c_sql_lin),
            "n_add_baseline_linear_at_C": float(linear_baseline_added_noise(sys_, Omega)),
        })
    except Exception:
        run.abort()
        raise
    run.finish(scenario)
    return 0


# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--out", default="out", help="output directory (created if absent)")
    p.add_argument("--threads", type=int, default=0,
                   help="reserved; evaluation is vectorized in-process")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a scenario key (repeatable; flag > file)")
    p.add_argument("--plot", action="store_true", help="render figures beside the CSV output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadsense",
                                 description="Squeezed quadratic optomechanical force sensing toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="spectra and added noise over a frequency range")
    _add_common(p)
    p.add_argument("--omega-min", type=float, required=True)
    p.add_argument("--omega-max", type=float, required=True)
    p.add_argument("--omega-points", type=int, default=200)
    p.add_argument("--omega-grid", choices=("log", "linear"), default="log")
    p.add_argument("--phi", required=True, help="comma-separated homodyne angles (rad)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("map", help="2D raster of PSD/added noise with stability")
    _add_common(p)
    p.add_argument("--axes", required=True, help=f"two of {_MAP_AXES}, comma separated")
    p.add_argument("--resolution", default="64", help="N or N,M")
    p.add_argument("--range1", default=None, help="LO:HI for axis1")
    p.add_argument("--range2", default=None, help="LO:HI for axis2")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("stability", help="Theta1/Theta2 stability raster and boundary")
    _add_common(p)
    p.add_argument("--axes", default="C_over_CSQL,theta")
    p.add_argument("--resolution", default="64")
    p.add_argument("--range1", default=None)
    p.add_argument("--range2", default=None)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("optimize", help="constrained optimization over (phi, C, G, theta)")
    _add_common(p)
    p.add_argument("--objective", choices=("n_add", "S_FF", "SN", "R_m"), default="n_add")
    p.add_argument("--axes", default="phi,C")
    p.add_argument("--bounds", default=None, help='JSON like {"C": [lo, hi]}')
    p.add_argument("--grid", type=int, default=128)
    p.add_argument("--allow-marginal", action="store_true")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("opo", help="OPO squeezing-strength power curve")
    _add_common(p)
    p.add_argument("--pmin", type=float, default=1e-9, help="W")
    p.add_argument("--pmax", type=float, default=1.0, help="W")
    p.add_argument("--points", type=int, default=300)
    p.set_defaults(func=cmd_opo)

    p = sub.add_parser("wigner", help="steady-state Wigner raster for a quadrature pair")
    _add_common(p)
    p.add_argument("--pair", default="q_c,q_m")
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--extent", type=float, default=6.0, help="half-width in sigma units")
    p.add_argument("--vacuum", action="store_true", help="test hook: force V = I/2")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("snr", help="signal-to-noise ratio at the evaluation frequency")
    _add_common(p)
    p.add_argument("--phi-opt", action="store_true", help="use the optimal homodyne angle")
    p.set_defaults(func=cmd_snr)

    p = sub.add_parser("compare-linear", help="quadratic vs linear-baseline susceptibilities")
    _add_common(p)
    p.add_argument("--omega", type=float, default=None, help="rad/s (default: Omega_eval)")
    p.set_defaults(func=cmd_compare_linear)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=_sys.stderr)
        return 2
    except PhysicsDomainError as exc:
        print(f"physics-domain error: {exc}", file=_sys.stderr)
        return 3
    except QuadsenseError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
