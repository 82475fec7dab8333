"""Figure rendering for trajectories and suite reports.

Everything draws through the Agg backend and writes PNG files next to the
delimited output; nothing here affects the machine-readable paths.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_trajectory(traj, out_dir: str, stem: str = "trajectory") -> list:
    """Coordinate traces and conserved-quantity drift, one PNG each."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    r = traj.a.shape[1]

    fig, (ax_a, ax_c) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for k in range(r):
        ax_a.plot(traj.times, traj.a[:, k].real, label=f"Re a_{k + 1}")
        ax_a.plot(traj.times, traj.a[:, k].imag, "--", label=f"Im a_{k + 1}")
        ax_c.plot(traj.times, np.abs(traj.c[:, k]), label=f"|c_{k + 1}|")
    ax_a.set_ylabel("Cartan coordinates")
    ax_c.set_ylabel("simple-negative magnitudes")
    ax_c.set_xlabel("t")
    ax_a.legend(fontsize=8, ncol=2)
    ax_c.legend(fontsize=8)
    ax_a.set_title("flow coordinates" + (" (aborted)" if traj.aborted else ""))
    fig.tight_layout()
    path = os.path.join(out_dir, f"{stem}_coords.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(7, 4))
    ref = traj.sigmas[0]
    drift = np.abs(traj.sigmas - ref[None, :]) / (1.0 + np.abs(ref[None, :]))
    for k in range(traj.sigmas.shape[1]):
        ax.semilogy(traj.times, np.maximum(drift[:, k], 1e-18),
                    label=f"sigma_{k + 1}")
    ax.set_xlabel("t")
    ax.set_ylabel("relative drift")
    ax.set_title("conserved-quantity drift")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(out_dir, f"{stem}_drift.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)
    return paths


def render_reports(reports, out_dir: str, stem: str = "suites") -> list:
    """Horizontal bar chart of the dominant residual metric per suite."""
    os.makedirs(out_dir, exist_ok=True)
    names, values, colors = [], [], []
    for rep in reports:
        resid = max((v for k, v in rep.metrics.items()
                     if "residual" in k or "drift" in k or "difference" in k
                     or "stay" in k or "isotropy" in k), default=np.nan)
        names.append(rep.suite_id)
        values.append(resid)
        colors.append("tab:green" if rep.passed else "tab:red")

    fig, ax = plt.subplots(figsize=(8, 0.4 * len(names) + 1.5))
    y = np.arange(len(names))
    logs = [np.log10(max(v, 1e-18)) if np.isfinite(v) else -18 for v in values]
    ax.barh(y, [lg + 18 for lg in logs], left=-18, color=colors)
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xlabel("log10 max residual")
    ax.set_xlim(-18, 0)
    ax.invert_yaxis()
    ax.set_title("verification suites: worst residuals")
    fig.tight_layout()
    path = os.path.join(out_dir, f"{stem}_residuals.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]
