"""Static matplotlib figures for trajectories, region scans and XXZ runs.

All renderers draw on the Agg backend and write straight to a file; the
format follows the file suffix (``.png``, ``.svg``, ``.pdf``). SVG output is
made reproducible by fixing the hash salt and dropping the date stamp.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "lines.linewidth": 1.4,
    "svg.hashsalt": "discordlab",
    "svg.fonttype": "none",
}

_PARAM_LABEL = {"gad": r"$\gamma$"}
TETRA_VERTICES = np.array([[1, 1, -1], [-1, -1, -1], [1, -1, 1], [-1, 1, 1]], dtype=float)


def _save(fig, path):
    ext = os.path.splitext(str(path))[1].lower()
    meta = {"Date": None} if ext == ".svg" else None
    fig.savefig(path, metadata=meta, bbox_inches="tight")
    plt.close(fig)


def plot_trajectory(traj, path, critical=()):
    """Both discords against the decoherence parameter, |c'_i| in an inset."""
    kind = traj.kind.value
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        ax.plot(traj.params, traj.dg, color="k", label=r"$D_G$ (1-norm)")
        ax.plot(traj.params, traj.d2, color="tab:blue", ls="--", label=r"$D_2$ (2-norm)")
        for p in critical:
            ax.axvline(p, color="tab:red", lw=0.8, ls=":")
        ax.set_xlim(0, 1)
        ax.set_ylim(bottom=0)
        ax.set_xlabel(_PARAM_LABEL.get(kind, r"$p$"))
        ax.set_ylabel("discord")
        ax.set_title(f"{traj.kind.name}, c = ({', '.join(f'{x:g}' for x in traj.c)})")
        ax.legend(loc="upper right", frameon=False)

        inset = ax.inset_axes([0.12, 0.12, 0.35, 0.35])
        for i, color in enumerate(("tab:green", "tab:orange", "tab:purple")):
            inset.plot(traj.params, np.abs(traj.cp[:, i]), color=color, lw=1.0,
                       label=f"|c{i+1}'|")
        inset.set_xlim(0, 1)
        inset.tick_params(labelsize=6)
        inset.legend(fontsize=5, frameon=False)
        _save(fig, path)


def plot_region(rows, path, highlight=()):
    """Tetrahedron of physical states with double-sudden-change samples in red."""
    with plt.rc_context(STYLE):
        fig = plt.figure(figsize=(4.8, 4.8))
        ax = fig.add_subplot(projection="3d")
        for i in range(4):
            for j in range(i + 1, 4):
                seg = TETRA_VERTICES[[i, j]]
                ax.plot(*seg.T, color="0.4", lw=0.8)
        pts = np.array([tuple(c) for c, _ in rows]).reshape(-1, 3)
        cls = np.array([label for _, label in rows])
        colors = {"double": "tab:red", "single": "0.6", "none": "0.85"}
        for label in ("none", "single", "double"):
            sel = pts[cls == label]
            if len(sel):
                ax.scatter(*sel.T, s=2 if label != "double" else 4, color=colors[label],
                           alpha=0.6 if label == "double" else 0.15, label=label, depthshade=False)
        for c in highlight:
            ax.scatter(*np.asarray(c, float), s=30, color="tab:blue", depthshade=False)
        ax.set_xlabel("$c_1$")
        ax.set_ylabel("$c_2$")
        ax.set_zlabel("$c_3$")
        ax.legend(loc="upper left", frameon=False, markerscale=3)
        _save(fig, path)


def plot_xxz(curves, path, channel="bf"):
    """Discord trajectories of nearest neighbours for several anisotropies.

    ``curves`` maps a label (e.g. the anisotropy) to a trajectory.
    """
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        for label, traj in curves.items():
            ax.plot(traj.params, traj.dg, label=rf"$\Delta={label}$")
        ax.set_xlim(0, 1)
        ax.set_ylim(bottom=0)
        ax.set_xlabel(_PARAM_LABEL.get(channel, r"$p$"))
        ax.set_ylabel(r"$D_G$")
        ax.set_title(f"XXZ nearest neighbours, {channel.upper()}")
        ax.legend(frameon=False)
        _save(fig, path)
