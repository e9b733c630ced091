"""Figure rendering for CLI reports.

Uses the non-interactive Agg backend; every function writes one file and
closes its figure.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .schedule import generate  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.dpi": 120,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def plot_solution(result, d, w, path, max_traces: int = 25):
    """Instants versus index for the bisection candidates and the final schedule."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        steps = result.bracket_trace[:max_traces]
        for step in steps:
            trial = generate(d, w, step.t1, result.horizon) if step.t1 < result.horizon else None
            if trial is None or not trial.instants:
                continue
            ys = list(trial.instants)
            if trial.rejected is not None and np.isfinite(trial.rejected):
                ys.append(trial.rejected)
            ax.plot(range(1, len(ys) + 1), ys, color="0.7", lw=0.7)
        final = result.schedule.instants
        ax.plot(range(1, len(final) + 1), final, color="C3", lw=1.6,
                label=f"$t_1^*$ = {result.t1_star * 1e3:.3f} ms")
        ax.set_xlabel("sample index $n$")
        ax.set_ylabel("sampling instant $t_n$ [s]")
        ax.set_ylim(bottom=min(0.0, ax.get_ylim()[0]), top=result.horizon * 1.2)
        ax.legend(loc="upper left")
        _save(fig, path)


def plot_sweep_mu(rows, path):
    """Penalties and percentage reductions against the mean time-to-event."""
    mean = [r["mean"] for r in rows]
    with plt.rc_context(RC):
        fig, (left, right) = plt.subplots(1, 2, figsize=(8.0, 3.2))
        left.plot(mean, [r["penalty_optimal"] for r in rows], "o-", label="aperiodic optimum")
        left.plot(mean, [r["penalty_periodic"] for r in rows], "s--", label="optimal period")
        left.set_xlabel("mean time to event [s]")
        left.set_ylabel("energy penalty [J]")
        left.legend()
        right.plot(mean, [r["reduction_optimal_vs_periodic_pct"] for r in rows], "o-", label="vs optimal period")
        right.plot(mean, [r["reduction_optimal_vs_baseline_pct"] for r in rows], "s--", label="vs baseline period")
        right.set_xlabel("mean time to event [s]")
        right.set_ylabel("penalty reduction [%]")
        right.legend()
        _save(fig, path)


def plot_sweep_comm(rows, path):
    """Reduction over the optimal period as a tau_c x P_c heat map."""
    tau = sorted({r["tau_c"] for r in rows})
    pc = sorted({r["p_c"] for r in rows})
    grid = np.full((len(tau), len(pc)), np.nan)
    for r in rows:
        grid[tau.index(r["tau_c"]), pc.index(r["p_c"])] = r["reduction_optimal_vs_periodic_pct"]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        mesh = ax.pcolormesh(np.array(pc), np.array(tau) * 1e3, grid, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="reduction vs optimal period [%]")
        ax.set_xlabel("communication power $P_c$ [W]")
        ax.set_ylabel(r"communication delay $\tau_c$ [ms]")
        ax.grid(False)
        _save(fig, path)


def plot_compare(row, path):
    """Bar chart of the three policies' penalties."""
    labels = ["aperiodic\noptimum", "optimal\nperiod", "baseline\nperiod"]
    values = [row["penalty_optimal"], row["penalty_periodic"], row["penalty_baseline"]]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.0, 3.0))
        ax.bar(labels, values, color=["C3", "C0", "0.6"])
        ax.set_ylabel("energy penalty [J]")
        _save(fig, path)
