"""Figure rendering for evaluation reports and compression sweeps."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .evaluation import EvalReport

_METRICS = ("accuracy", "precision", "recall", "f_score")


def plot_report(report: EvalReport, path: str | Path) -> None:
    """Per-fold metric bars with the mean drawn as a horizontal line."""
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True)
    folds = [r.fold for r in report.per_run]
    for ax, metric in zip(axes.flat, _METRICS):
        values = [getattr(r, metric) for r in report.per_run]
        ax.bar(folds, values, color="#4878a8")
        ax.axhline(report.mean[metric], color="#b2232a", linestyle="--", linewidth=1,
                   label=f"mean {report.mean[metric]:.3f}")
        ax.set_ylim(0, 1.05)
        ax.set_title(metric)
        ax.legend(loc="lower right", fontsize=8)
    for ax in axes[1]:
        ax.set_xlabel("fold")
    cfg = report.config
    fig.suptitle(f"{cfg.get('learner')} / {cfg.get('mode')} @ c={cfg.get('compression')}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_sweep(
    compressions: list[float],
    reports: list[EvalReport],
    overlaps: list[float | None],
    path: str | Path,
) -> None:
    """Mean F-score and accuracy across compression rates, with rule overlap."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for metric, marker in (("f_score", "o"), ("accuracy", "s")):
        means = [r.mean[metric] for r in reports]
        stds = [r.std[metric] for r in reports]
        ax.errorbar(compressions, means, yerr=stds, marker=marker, capsize=3, label=metric)
    if any(o is not None for o in overlaps):
        mids = [(a + b) / 2 for a, b in zip(compressions, compressions[1:])]
        vals = [o if o is not None else float("nan") for o in overlaps]
        ax.plot(mids, vals, marker="x", linestyle=":", color="gray", label="rule overlap")
    ax.set_xlabel("compression rate")
    ax.set_ylabel("score")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
