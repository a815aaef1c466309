"""Figure rendering for the CLI report path (written next to the CSV output)."""

from __future__ import annotations

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def plot_spectrum(rows: list[dict], path) -> None:
    """Added noise and SQL versus frequency, one curve per homodyne angle."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.8))
    phis = sorted({r["phi_rad"] for r in rows})
    for phi in phis:
        sub = [r for r in rows if r["phi_rad"] == phi]
        om = np.array([r["Omega_rad_s"] for r in sub])
        ax1.loglog(om, [r["n_add"] for r in sub], label=f"phi={phi:.3f}")
        ax2.loglog(om, [r["S_FF_N2_Hz"] for r in sub], label=f"phi={phi:.3f}")
    sub = [r for r in rows if r["phi_rad"] == phis[0]]
    om = np.array([r["Omega_rad_s"] for r in sub])
    ax1.loglog(om, [r["n_add_SQL"] for r in sub], "k--", label="SQL")
    ax2.loglog(om, [r["S_FF_SQL_N2_Hz"] for r in sub], "k--", label="SQL")
    ax1.set_xlabel("Omega (rad/s)")
    ax1.set_ylabel("added noise (quanta)")
    ax2.set_xlabel("Omega (rad/s)")
    ax2.set_ylabel("S_FF (N^2/Hz)")
    ax1.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_map(axis1, axis2, values, stable, boundary, labels, path, log_values=True) -> None:
    """Raster of a map quantity with the stability boundary overlaid."""
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    v = np.array(values, dtype=float)
    if log_values:
        with np.errstate(divide="ignore"):
            v = np.log10(np.where(v > 0, v, np.nan))
    mesh = ax.pcolormesh(axis2, axis1, v, shading="auto")
    fig.colorbar(mesh, ax=ax, label=labels.get("value", "value"))
    ax.contour(axis2, axis1, np.array(stable, dtype=float), levels=[0.5],
               colors="white", linewidths=1.2)
    for x0, y0, x1, y1 in boundary:
        ax.plot([y0, y1], [x0, x1], color="red", lw=0.8)
    ax.set_xlabel(labels.get("axis2", "axis2"))
    ax.set_ylabel(labels.get("axis1", "axis1"))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_power_curve(P, G_over_kappa, in_domain, path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    P = np.asarray(P)
    G = np.asarray(G_over_kappa)
    ok = np.asarray(in_domain, dtype=bool)
    ax.semilogx(P[ok], G[ok], "C0-", label="in domain")
    if np.any(~ok):
        ax.semilogx(P[~ok], np.zeros(np.sum(~ok)), "rx", label="out of domain")
    ax.axhline(0.25, color="k", ls="--", lw=0.8, label="G = kappa/4")
    ax.set_xlabel("pump power (W)")
    ax.set_ylabel("G / kappa")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_wigner(x, y, W, ellipse, path) -> None:
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    mesh = ax.contourf(x, y, np.asarray(W).T, levels=60, cmap="RdBu_r")
    fig.colorbar(mesh, ax=ax, label="W")
    if ellipse is not None:
        ax.plot(ellipse[:, 0], ellipse[:, 1], "k--", lw=1.0)
    ax.set_xlabel("first quadrature")
    ax.set_ylabel("second quadrature")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
