"""Matplotlib figure rendering for the CLI report path.

Each writer renders one PNG next to the corresponding CSV artifact.  These
are quick-look figures; the CSVs stay the canonical output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trajectory(traj, path) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.plot(traj.states[:, 0], traj.states[:, 1], lw=0.8)
    ax1.plot(traj.states[0, 0], traj.states[0, 1], "go", ms=4, label="start")
    ax1.plot(traj.states[-1, 0], traj.states[-1, 1], "rs", ms=4, label="end")
    ax1.set_xlabel("x")
    ax1.set_ylabel("y")
    ax1.set_title("joint path")
    ax1.axis("equal")
    ax1.legend(fontsize=8)
    ax2.plot(traj.times, traj.controls[:, 0], lw=0.8, label="$B_x$")
    ax2.plot(traj.times, traj.controls[:, 1], lw=0.8, label="$B_y$")
    ax2.set_xlabel("t")
    ax2.set_title("applied field")
    ax2.legend(fontsize=8)
    _save(fig, path)


def plot_field(field, path, loops=()) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2))
    extent = (field.theta2[0], field.theta2[-1],
              field.theta1[0], field.theta1[-1])
    for ax, data, name in ((axes[0], field.curl_x, "curl x"),
                           (axes[1], field.curl_y, "curl y")):
        lim = np.nanpercentile(np.abs(data), 98)
        im = ax.imshow(data, origin="lower", extent=extent, cmap="RdBu_r",
                       vmin=-lim, vmax=lim, aspect="auto")
        for loop in loops:
            ts = np.linspace(0, loop.period, 512)
            pts = loop.point(ts)
            ax.plot(pts[:, 1], pts[:, 0], "k-", lw=1.2)
        ax.set_xlabel(r"$\theta_2$")
        ax.set_ylabel(r"$\theta_1$")
        ax.set_title(name)
        fig.colorbar(im, ax=ax, shrink=0.85)
    _save(fig, path)


def plot_control(raw, regularized, path) -> None:
    fig, axes = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    for k, ax in enumerate(axes):
        ax.plot(raw.times, raw.values[:, k], lw=0.8, label="inverted")
        if raw.excluded is not None and raw.excluded.any():
            ax.plot(raw.times[raw.excluded], raw.values[raw.excluded, k],
                    "rx", ms=3, label="excluded")
        if regularized is not None:
            ax.plot(regularized.times, regularized.values[:, k], lw=1.2,
                    label="regularized")
        ax.set_ylabel("$B_x$" if k == 0 else "$B_y$")
        ax.legend(fontsize=8)
    axes[1].set_xlabel("t")
    _save(fig, path)


def plot_basin(basin, path) -> None:
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    extent = (basin.theta2_0[0], basin.theta2_0[-1],
              basin.theta1_0[0], basin.theta1_0[-1])
    with np.errstate(divide="ignore"):
        logd = np.log10(np.maximum(basin.final_distance, 1e-16))
    im = ax.imshow(logd, origin="lower", extent=extent, aspect="auto",
                   cmap="viridis")
    ax.plot(basin.fixed_point[1], basin.fixed_point[0], "r*", ms=10)
    ax.set_xlabel(r"initial $\theta_2$")
    ax.set_ylabel(r"initial $\theta_1$")
    ax.set_title(f"log10 distance to fixed point after {basin.cycles} cycles")
    fig.colorbar(im, ax=ax)
    _save(fig, path)


def plot_objective(surface, path) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9.5, 4))
    extent = (surface.c2[0], surface.c2[-1], surface.c1[0], surface.c1[-1])
    for ax, data, name in ((axes[0], surface.first_cycle_dx, "first cycle"),
                           (axes[1], surface.steady_cycle_dx, "steady cycle")):
        im = ax.imshow(data, origin="lower", extent=extent, aspect="auto")
        ax.set_xlabel("$c_2$")
        ax.set_ylabel("$c_1$")
        ax.set_title(f"|dx| per cycle ({name})")
        fig.colorbar(im, ax=ax, shrink=0.85)
    _save(fig, path)


def plot_turning(rows, path) -> None:
    rows = np.asarray(rows)
    fig, ax = plt.subplots(figsize=(5, 3.8))
    ax.loglog(rows[:, 0], rows[:, 1], "o", label="numeric")
    ax.loglog(rows[:, 0], rows[:, 2], "-", label="analytic")
    ax.set_xlabel("alignment rate k")
    ax.set_ylabel("turning time")
    ax.legend(fontsize=8)
    _save(fig, path)
