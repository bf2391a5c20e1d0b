"""Rendering of successive-minima diagrams from computed trajectories.

One figure per trajectory: the k+1 minima-function exponents against log10 Q
(the classical way these functions are drawn), with witness-mode samples
marked as upper-bound points, the tail window shaded, and the attainable
band [-1, 1/k] indicated.  Rendering uses the Agg backend only — no display
required — and strips variable metadata so identical inputs give identical
image bytes.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .minima import MODE_EXACT, MODE_WITNESS, Trajectory

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"]


def render_trajectory_figure(traj: Trajectory, path, title: str = "") -> None:
    """Write a PNG diagram of the minima functions along ``traj``.

    Exact-enumeration samples are drawn as connected lines; witness-mode
    samples appear as hollow downward markers (they bound the functions from
    above only); missing samples leave gaps.  The trailing window used for
    the extreme estimates is shaded.
    """
    k = traj.k
    xs = [s.log10_q for s in traj.samples]
    fig, ax = plt.subplots(figsize=(8.0, 5.0), dpi=110)
    for j0 in range(k + 1):
        color = _COLORS[j0 % len(_COLORS)]
        exact_x, exact_y, wit_x, wit_y = [], [], [], []
        for s in traj.samples:
            if s.result is None:
                exact_x.append(s.log10_q)
                exact_y.append(math.nan)
                continue
            value = s.result.psi[j0]
            if s.result.mode == MODE_EXACT:
                exact_x.append(s.log10_q)
                exact_y.append(value)
            elif s.result.mode == MODE_WITNESS:
                exact_x.append(s.log10_q)
                exact_y.append(math.nan)
                if not math.isinf(value):
                    wit_x.append(s.log10_q)
                    wit_y.append(value)
        ax.plot(exact_x, exact_y, "-o", ms=3.0, lw=1.3, color=color,
                label=f"psi_{j0 + 1}")
        if wit_x:
            ax.plot(wit_x, wit_y, "v", ms=5.0, mfc="none", color=color,
                    label=f"psi_{j0 + 1} (upper bound)")
    if traj.samples:
        window = traj.extremes.window_size
        ax.axvspan(xs[len(xs) - window], xs[-1], color="#dddddd", alpha=0.4,
                   label="estimate window")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.axhline(1.0 / k, color="gray", lw=0.8, ls="--")
    ax.axhline(-1.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("log10 Q")
    ax.set_ylabel("minima-function exponents")
    ax.set_title(title or f"{traj.target_id} (k={k})")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
