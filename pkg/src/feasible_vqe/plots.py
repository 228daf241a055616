"""Figure rendering for experiment reports (headless matplotlib)."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_PNG_METADATA = {"Software": "feasible-vqe"}


def _label(stat) -> str:
    if stat["layers"] is None:
        return "proposed"
    return f"{stat['layers']}-layer, penalty"


def render_convergence(report, lam: float, path) -> None:
    """Mean normalized energy per iteration with a +-1 sd band, one curve
    per method, for a single penalty coefficient."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    stats = [s for s in report.trace_stats if s["lambda"] == lam]
    for stat in stats:
        mean = np.asarray(stat["mean"])
        std = np.asarray(stat["std"])
        its = np.arange(1, len(mean) + 1)
        style = {"lw": 2.2, "zorder": 3} if stat["layers"] is None else {"lw": 1.2}
        (line,) = ax.plot(its, mean, label=_label(stat), **style)
        ax.fill_between(its, mean - std, mean + std, alpha=0.15, color=line.get_color())
    ax.set_xlabel("iteration")
    ax.set_ylabel("normalized energy")
    ax.set_title(f"convergence, penalty coefficient {lam:g}")
    ax.set_ylim(bottom=0.0)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)


def render_rate_summary(report, path) -> None:
    """Grouped bars of mean feasible and optimal measurement rates."""
    methods = [key for key, _, _ in report.plan.methods()]
    feas = [report.summary[k]["feasible_pct"] for k in methods]
    opt = [report.summary[k]["optimal_pct"] for k in methods]
    x = np.arange(len(methods))
    fig, ax = plt.subplots(figsize=(max(6.0, 0.85 * len(methods)), 4.0))
    ax.bar(x - 0.2, feas, width=0.4, label="feasible %")
    ax.bar(x + 0.2, opt, width=0.4, label="optimal %")
    ax.set_xticks(x)
    ax.set_xticklabels([m.replace("layered_", "") for m in methods], rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("rate (%)")
    ax.set_ylim(0, 105)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)


def render_report_figures(report, out_dir) -> list:
    out_dir = Path(out_dir)
    paths = []
    for lam in report.plan.lambdas:
        path = out_dir / f"convergence_lam{lam:g}.png"
        render_convergence(report, lam, path)
        paths.append(path)
    path = out_dir / "rates_summary.png"
    render_rate_summary(report, path)
    paths.append(path)
    return paths
