"""Figure rendering for the report path.

Each function takes the arrays a CLI command already computed, draws one
matplotlib figure and writes it next to the delimited output.  Rendering is
optional (the CSV columns carry the same data); the Agg backend keeps this
usable in headless runs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_winding_phase", "plot_edge_spectrum", "plot_decay_report",
           "plot_phase_diagram"]


def plot_winding_phase(ks, phases, winding, path, title="det-phase accumulation"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ks, phases, lw=1.5)
    ax.set_xlabel(r"$k$")
    ax.set_ylabel(r"accumulated $\arg\det u(k)$")
    ax.set_title(f"{title} (winding = {winding})")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_edge_spectrum(energies, delta, path, in_gap_threshold=None,
                       title="half-space spectrum"):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.5))
    idx = np.arange(len(energies))
    ax1.plot(idx, energies, ".", ms=3)
    ax1.axhspan(-delta, delta, color="orange", alpha=0.15, label=r"bulk gap $(-\delta,\delta)$")
    if in_gap_threshold is not None:
        ax1.axhspan(-in_gap_threshold, in_gap_threshold, color="red", alpha=0.12)
    ax1.set_xlabel("eigenvalue index")
    ax1.set_ylabel(r"$E$")
    ax1.set_title(title)
    ax1.legend(loc="upper left", fontsize=8)
    in_gap = energies[np.abs(energies) < delta]
    ax2.plot(np.zeros_like(in_gap), in_gap, "_", ms=25, mew=2, color="red")
    ax2.set_xlim(-1, 1)
    ax2.set_xticks([])
    ax2.set_ylabel(r"$E$")
    ax2.set_title(f"in-gap levels ({len(in_gap)})")
    for ax in (ax1, ax2):
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_decay_report(n_values, norms_by_vector, path,
                      title="approximate-unit commutator decay"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, vals in norms_by_vector.items():
        ax.loglog(n_values, vals, "o-", label=name)
    ax.set_xlabel(r"$n$")
    ax.set_ylabel("commutator norm on test vector")
    ax.set_title(title)
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_phase_diagram(t1_vals, t2_vals, windings, path,
                       title="SSH winding phase diagram"):
    fig, ax = plt.subplots(figsize=(5.5, 5))
    grid = np.array(windings, dtype=float)
    mesh = ax.pcolormesh(t1_vals, t2_vals, grid.T, cmap="coolwarm",
                         vmin=-1.5, vmax=1.5, shading="nearest")
    ax.plot(t1_vals, t1_vals, "k--", lw=1, label=r"$|t_1|=|t_2|$ (gapless)")
    ax.set_xlabel(r"$t_1$")
    ax.set_ylabel(r"$t_2$")
    ax.set_title(title)
    ax.legend(loc="upper left", fontsize=8)
    fig.colorbar(mesh, ax=ax, label="winding")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
