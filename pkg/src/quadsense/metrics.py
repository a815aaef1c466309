"""SNR, enhancement factors, quadrature variance and the constrained optimizers.

The optimizer is a stability-filtered coarse grid followed by golden-section
coordinate descent.  The stability boundary makes the feasible set awkward for
gradient methods, and the interesting optima sit near that boundary, so grid +
local refinement is used throughout.  The cooperativity sweep is bounded by
default at C <= 0.7 C_SQL, the operating range quoted with the reference
parameter set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import OptimizerError, PhysicsDomainError
from .spectra import (added_noise_from_kernels, noise_kernels, force_psd,
                      raw_output_spectra, response_from_kernels, rotated_spectrum, sql)
from .response import transfer_coefficients
from .system import SqueezerParams, SystemParams, cooperativity_sql

DEFAULT_GRID = 128
DEFAULT_REFINE_ITERATIONS = 48
DEFAULT_TOL = 1e-10
DEFAULT_C_OVER_CSQL_MAX = 0.7

AXES = ("phi", "C", "G", "theta")


@dataclass(frozen=True)
class OptimumReport:
    """Result of a constrained optimization run."""

    objective: str
    value: float
    coordinates: dict
    normalized: dict
    stability_verified: bool
    grid_resolution: int
    refinement_iterations: int
    Omega: float
    mode: str  # "min" or "max"

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "mode": self.mode,
            "value": self.value,
            "coordinates": dict(self.coordinates),
            "normalized": dict(self.normalized),
            "stability_verified": self.stability_verified,
            "grid_resolution": self.grid_resolution,
            "refinement_iterations": self.refinement_iterations,
            "Omega_rad_s": self.Omega,
        }


def snr(sys: SystemParams, sq: SqueezerParams, Omega: float, phi: float,
        S_sig: float, n_bar: float | None = None) -> float:
    """SN = S_est / (S_est - S_sig) = 1 + S_sig / S_FF^phi."""
    _, _, _, k = raw_output_spectra(sys, sq, Omega, n_bar)
    n_add = float(added_noise_from_kernels(k, phi))
    S_noise = float(force_psd(sys, n_add, n_bar))
    if S_noise <= 0.0:
        raise PhysicsDomainError("noise PSD must be positive for SNR")
    return 1.0 + S_sig / S_noise


def snr_sql(sys: SystemParams, Omega: float, S_sig: float,
            n_bar: float | None = None) -> float:
    """SQL-limited SNR reference: 1 + S_sig / (prefactor (n_bar + n_add_SQL))."""
    if n_bar is None:
        n_bar = sys.n_bar
    n_add_sql, _, _ = sql(sys, Omega)
    return 1.0 + S_sig / (sys.force_psd_prefactor * (n_bar + float(n_add_sql)))


def snr_enhancement(sys: SystemParams, sq: SqueezerParams, Omega: float, phi: float,
                    S_sig: float, n_bar: float | None = None) -> float:
    """I = SN^phi / SN^SQL."""
    return (snr(sys, sq, Omega, phi, S_sig, n_bar)
            / snr_sql(sys, Omega, S_sig, n_bar))


# ---------------------------------------------------------------------------
# constrained optimization

def _with_point(sys: SystemParams, sq: SqueezerParams, point: dict):
    """Rebuild (sys, sq) with the optimization coordinates applied."""
    new_sys = sys
    if "C" in point:
        C = point["C"]
        g = math.sqrt(C * sys.kappa * sys.Gamma_m) / 2.0
        q_bar_m = g / (sys.g0 * math.sqrt(2.0 * sys.n_c)) if g > 0.0 else 0.0
        new_sys = replace(sys, coop=C, g=g, q_bar_m=q_bar_m)
    new_sq = sq
    if "G" in point or "theta" in point:
        new_sq = replace(sq, G=point.get("G", sq.G), theta=point.get("theta", sq.theta))
    return new_sys, new_sq


def _objective_fn(name, sys: SystemParams, sq: SqueezerParams, Omega: float,
                  S_sig: float | None, n_bar: float | None, mode: str = "min"):
    """Returns (fn(point)->float, mode); smaller is better after sign folding.

    `name` may also be a callable point->float (used with the given mode).
    """
    if n_bar is None:
        n_bar = sys.n_bar
    if callable(name):
        return name, mode

    def n_add_at(point):
        s, q = _with_point(sys, sq, point)
        k = noise_kernels(transfer_coefficients(s, q, Omega))
        return float(added_noise_from_kernels(k, point.get("phi", math.pi / 2.0)))

    if name == "n_add":
        return n_add_at, "min"
    if name == "S_FF":
        def fn(point):
            return float(sys.force_psd_prefactor * (n_bar + n_add_at(point)))
        return fn, "min"
    if name == "SN":
        if S_sig is None:
            raise OptimizerError("objective SN needs S_sig")
        def fn(point):
            s, q = _with_point(sys, sq, point)
            return snr(s, q, Omega, point.get("phi", math.pi / 2.0), S_sig, n_bar)
        return fn, "max"
    if name == "R_m":
        def fn(point):
            s, q = _with_point(sys, sq, point)
            k = noise_kernels(transfer_coefficients(s, q, Omega))
            return float(response_from_kernels(k, point.get("phi", math.pi / 2.0)))
        return fn, "max"
    raise OptimizerError(f"unknown objective {name!r}")


def default_bounds(sys: SystemParams, sq: SqueezerParams, Omega: float) -> dict:
    csql = cooperativity_sql(sys, Omega)
    return {
        "phi": (-math.pi / 2.0, math.pi / 2.0),
        "C": (DEFAULT_C_OVER_CSQL_MAX / DEFAULT_GRID * csql, DEFAULT_C_OVER_CSQL_MAX * csql),
        "G": (0.0, 0.2499 * sys.kappa),
        "theta": (-math.pi + 1e-6, -1e-6),
    }


def _golden_1d(f, a: float, b: float, coarse: int = 721, iterations: int = 70):
    """Global-ish 1D minimization: coarse scan then golden refinement."""
    xs = np.linspace(a, b, coarse)
    vals = np.array([f(x) for x in xs])
    i = int(np.argmin(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, coarse - 1)]
    inv_gr = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_gr * (hi - lo)
    x2 = lo + inv_gr * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iterations):
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_gr * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_gr * (hi - lo)
            f2 = f(x2)
    x = 0.5 * (lo + hi)
    return f(x), x


def _phi_vector_values(k, phis, name: str):
    if name in ("n_add", "S_FF", "SN"):
        return np.asarray(added_noise_from_kernels(k, phis), dtype=float)
    if name == "R_m":
        return -np.asarray(response_from_kernels(k, phis), dtype=float)
    raise OptimizerError(f"objective {name!r} has no phi reduction")


def _solve_phi(k, name: str, lo: float, hi: float) -> tuple[float, float]:
    """Extremize the phi-separable part of a named objective over [lo, hi].

    Returns (n_add or -R_m at the optimum, phi).  n_add(phi) and R_m(phi) are
    ratios/values of quadratic forms in (cos phi, sin phi), so a coarse scan
    plus golden refinement finds the single extremum per half-period.
    """
    xs = np.linspace(lo, hi, 721)
    vals = _phi_vector_values(k, xs, name)
    i = int(np.argmin(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, len(xs) - 1)]

    def f(phi):
        return float(_phi_vector_values(k, np.asarray(phi), name))

    return _golden_1d(f, a, b, coarse=3)


def optimize(sys: SystemParams, sq: SqueezerParams, objective, axes,
             bounds: dict | None = None, Omega: float | None = None,
             S_sig: float | None = None, n_bar: float | None = None,
             grid: int = DEFAULT_GRID, refine_iterations: int = DEFAULT_REFINE_ITERATIONS,
             tol: float = DEFAULT_TOL, allow_marginal: bool = False,
             mode: str = "min") -> OptimumReport:
    """Stability-constrained optimization over a subset of (phi, C, G, theta).

    Coarse grid (`grid` points per axis) filtered by the Routh-Hurwitz
    predicate, then coordinate descent with golden-section line searches.
    Steps that would leave the stable region are rejected by shrinking the
    line-search interval toward the current point.  The returned optimum is
    re-checked against the stability predicate (hard postcondition).
    """
    from .stability import is_stable

    axes = list(axes)
    for ax in axes:
        if ax not in AXES:
            raise OptimizerError(f"unknown axis {ax!r}")
    if Omega is None:
        raise OptimizerError("optimize needs an evaluation frequency Omega")
    all_bounds = default_bounds(sys, sq, Omega)
    if bounds:
        all_bounds.update(bounds)

    # The homodyne angle separates: at fixed (C, G, theta) the named
    # objectives are extremized over phi exactly (ratio of quadratic forms),
    # which keeps the outer landscape smooth and grid-size independent.
    named = isinstance(objective, str) and objective in ("n_add", "S_FF", "SN", "R_m")
    inner_phi = named and "phi" in axes
    outer_axes = [a for a in axes if a != "phi"] if inner_phi else axes
    phi_lo, phi_hi = all_bounds["phi"]
    nb = sys.n_bar if n_bar is None else n_bar

    fn, mode = _objective_fn(objective, sys, sq, Omega, S_sig, n_bar, mode)
    sign = 1.0 if mode == "min" else -1.0

    def feasible(point) -> bool:
        s, q = _with_point(sys, sq, point)
        return bool(is_stable(s, q, allow_marginal=allow_marginal))

    def eval_point(point) -> tuple[float, float | None]:
        """Signed objective value and, for inner-phi objectives, the phi used."""
        try:
            if inner_phi:
                s, q = _with_point(sys, sq, point)
                k = noise_kernels(transfer_coefficients(s, q, Omega))
                inner, phi = _solve_phi(k, objective, phi_lo, phi_hi)
                if objective == "n_add":
                    v = inner
                elif objective == "S_FF":
                    v = sys.force_psd_prefactor * (nb + inner)
                elif objective == "SN":
                    if S_sig is None:
                        raise OptimizerError("objective SN needs S_sig")
                    v = 1.0 + S_sig / (sys.force_psd_prefactor * (nb + inner))
                else:  # R_m: inner is -R_max
                    v = -inner
                return sign * v, phi
            return sign * fn(point), point.get("phi")
        except PhysicsDomainError:
            return math.inf, None

    best_val = math.inf
    best_point: dict | None = None
    best_phi: float | None = None

    if not outer_axes:
        if not feasible({}):
            raise OptimizerError("base configuration is not stable", last_iterate=None)
        best_val, best_phi = eval_point({})
        best_point = {}
    else:
        axis_grids = {ax: np.linspace(*all_bounds[ax], grid) for ax in outer_axes}

        def scan(idx: int, partial: dict):
            nonlocal best_val, best_point, best_phi
            if idx == len(outer_axes):
                if not feasible(partial):
                    return
                v, phi = eval_point(partial)
                if v < best_val:
                    best_val, best_point, best_phi = v, dict(partial), phi
                return
            ax = outer_axes[idx]
            for x in axis_grids[ax]:
                partial[ax] = float(x)
                scan(idx + 1, partial)
            del partial[ax]

        scan(0, {})
    if best_point is None:
        raise OptimizerError("no stable grid point inside the bounds", last_iterate=None)

    # golden-section coordinate descent over the outer axes
    inv_gr = (math.sqrt(5.0) - 1.0) / 2.0
    point = dict(best_point)
    current = best_val
    phi_at_best = best_phi
    for _ in range(refine_iterations):
        if not outer_axes:
            break
        previous = current
        for ax in outer_axes:
            lo_b, hi_b = all_bounds[ax]
            span = (hi_b - lo_b) / (grid - 1) if grid > 1 else (hi_b - lo_b)
            a = max(lo_b, point[ax] - span)
            b = min(hi_b, point[ax] + span)

            def fax(x):
                trial = dict(point)
                trial[ax] = x
                if ax != "phi" and not feasible(trial):
                    return math.inf, None
                return eval_point(trial)

            # shrink toward the current point until a probe is feasible
            for _ in range(40):
                x1 = b - inv_gr * (b - a)
                x2 = a + inv_gr * (b - a)
                if fax(x1)[0] < math.inf or fax(x2)[0] < math.inf:
                    break
                a = 0.5 * (a + point[ax])
                b = 0.5 * (b + point[ax])
            (f1, p1), (f2, p2) = fax(x1), fax(x2)
            for _ in range(60):
                if f1 < f2:
                    b, x2, f2, p2 = x2, x1, f1, p1
                    x1 = b - inv_gr * (b - a)
                    f1, p1 = fax(x1)
                else:
                    a, x1, f1, p1 = x1, x2, f2, p2
                    x2 = a + inv_gr * (b - a)
                    f2, p2 = fax(x2)
            xbest, fbest, pbest = (x1, f1, p1) if f1 < f2 else (x2, f2, p2)
            if fbest < current:
                point[ax] = float(xbest)
                current = fbest
                phi_at_best = pbest
        if abs(previous - current) <= tol * max(abs(current), 1e-300):
            break

    if not feasible(point):
        raise OptimizerError("refinement left the stable region", last_iterate=point)
    if inner_phi and phi_at_best is not None:
        point["phi"] = float(phi_at_best)

    csql = cooperativity_sql(sys, Omega)
    normalized = {}
    if "C" in point:
        normalized["C_over_CSQL"] = point["C"] / csql
    if "G" in point:
        normalized["G_over_kappa"] = point["G"] / sys.kappa
    if "phi" in point:
        normalized["phi_deg"] = math.degrees(point["phi"])
    if "theta" in point:
        normalized["theta_over_pi"] = point["theta"] / math.pi

    name = objective if isinstance(objective, str) else getattr(objective, "__name__", "custom")
    return OptimumReport(objective=name, value=sign * current, coordinates=point,
                         normalized=normalized, stability_verified=True,
                         grid_resolution=grid, refinement_iterations=refine_iterations,
                         Omega=Omega, mode=mode)


def enhancement_chi(sys: SystemParams, sq: SqueezerParams, Omega: float,
                    bounds: dict | None = None, grid: int = DEFAULT_GRID):
    """chi = min_{phi,C} n_add(G=0) / min_{phi,C} n_add(G, theta from sq).

    The zero-squeezing reference sits exactly on the stability boundary of the
    resonance working point (its constant characteristic coefficient is zero),
    so that branch uses the marginal-tolerant predicate.
    Returns (chi, report_G0, report_G).
    """
    sq_off = replace(sq, G=0.0)
    report0 = optimize(sys, sq_off, "n_add", ("phi", "C"), bounds=bounds,
                       Omega=Omega, grid=grid, allow_marginal=True)
    reportG = optimize(sys, sq, "n_add", ("phi", "C"), bounds=bounds,
                       Omega=Omega, grid=grid)
    if reportG.value <= 0.0:
        raise OptimizerError("squeezed minimum is non-positive", last_iterate=reportG.coordinates)
    return report0.value / reportG.value, report0, reportG


def response_enhancement_xi(sys: SystemParams, sq: SqueezerParams, Omega: float,
                            G_grid=None, C_grid=None, phi_points: int = 721):
    """xi = max over the sweep of R_m^phi (phi != pi/2) / same at phi = pi/2.

    The sweep pairs every G in G_grid (default: the scenario's G) with the
    stability-filtered cooperativity grid.  Returns (xi, argmax_info).
    """
    from .stability import is_stable

    if G_grid is None:
        G_grid = [sq.G]
    csql = cooperativity_sql(sys, Omega)
    if C_grid is None:
        C_grid = np.linspace(DEFAULT_C_OVER_CSQL_MAX / DEFAULT_GRID,
                             DEFAULT_C_OVER_CSQL_MAX, DEFAULT_GRID) * csql
    phis = np.linspace(-np.pi / 2.0, np.pi / 2.0, phi_points)
    off_mask = ~np.isclose(phis, np.pi / 2.0) & ~np.isclose(phis, -np.pi / 2.0)

    best_off, best_pi2 = 0.0, 0.0
    arg_off = arg_pi2 = None
    for G in G_grid:
        for C in np.asarray(C_grid, dtype=float):
            s, q = _with_point(sys, replace(sq, G=float(G)), {"C": float(C)})
            if not is_stable(s, q, allow_marginal=(G == 0.0)):
                continue
            k = noise_kernels(transfer_coefficients(s, q, Omega))
            r = response_from_kernels(k, phis)
            r_off = float(np.max(r[off_mask]))
            r_pi2 = float(response_from_kernels(k, np.pi / 2.0))
            if r_off > best_off:
                best_off = r_off
                arg_off = {"G_over_kappa": G / sys.kappa, "C_over_CSQL": C / csql,
                           "phi": float(phis[off_mask][np.argmax(r[off_mask])])}
            if r_pi2 > best_pi2:
                best_pi2 = r_pi2
                arg_pi2 = {"G_over_kappa": G / sys.kappa, "C_over_CSQL": C / csql}
    if best_pi2 == 0.0:
        raise OptimizerError("empty stable sweep domain for xi")
    return best_off / best_pi2, {"numerator": arg_off, "denominator": arg_pi2,
                                 "R_max_off": best_off, "R_max_pi2": best_pi2}


# ---------------------------------------------------------------------------
# quadrature variance

def _simpson(f, a: float, b: float, n: int) -> float:
    xs = np.linspace(a, b, n + 1)
    ys = np.asarray(f(xs), dtype=float)
    h = (b - a) / n
    return h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum())


def integrate_with_richardson(f, a: float, b: float, rel_tol: float = 1e-8,
                              max_depth: int = 18, n0: int = 64):
    """Composite Simpson with interval doubling and a Richardson error check.

    Returns (value, estimated_error, evaluations_n).
    """
    n = n0
    prev = _simpson(f, a, b, n)
    for _ in range(max_depth):
        n *= 2
        cur = _simpson(f, a, b, n)
        err = abs(cur - prev) / 15.0
        if err <= rel_tol * max(abs(cur), 1e-300):
            richardson = cur + (cur - prev) / 15.0
            return richardson, err, n
        prev = cur
    raise OptimizerError(f"quadrature failed to converge after {max_depth} refinements",
                         last_iterate={"n": n, "value": prev})


@dataclass(frozen=True)
class VarianceResult:
    value: float
    window: tuple
    estimated_error: float
    evaluations: int = field(default=0)


def quadrature_variance(sys: SystemParams, sq: SqueezerParams, phi: float,
                        Omega_window: tuple, n_bar: float | None = None,
                        rel_tol: float = 1e-8) -> VarianceResult:
    """V_qq^phi = integral of Re{S^phi,out} dOmega / (2 pi) over the window."""
    a, b = Omega_window
    if not (0.0 < a < b):
        raise PhysicsDomainError("Omega window must satisfy 0 < a < b (chi_m singular at 0)")

    def integrand(Omega):
        S_qq, S_pp, S_pq, _ = raw_output_spectra(sys, sq, Omega, n_bar)
        return np.real(rotated_spectrum(S_qq, S_pp, S_pq, phi))

    value, err, n = integrate_with_richardson(integrand, a, b, rel_tol=rel_tol)
    return VarianceResult(value=value / (2.0 * np.pi), window=(a, b),
                          estimated_error=err / (2.0 * np.pi), evaluations=n)
