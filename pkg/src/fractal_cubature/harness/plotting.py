"""Matplotlib figures written next to the delimited output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..weights import CubatureRule  # noqa: E402
from .experiments import ExperimentResult  # noqa: E402


def _finish(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_convergence(result: ExperimentResult, path) -> Path:
    """Relative error against ``N`` (semilog) or against ``h`` (log-log)."""
    fig, ax = plt.subplots(figsize=(5.5, 4))
    x = result.column("param")
    err = result.column("rel_err")
    ok = np.isfinite(err) & (err > 0)
    if result.kind == "p":
        ax.semilogy(x[ok], err[ok], "o-")
        ax.set_xlabel("N")
        ax2 = ax.twinx()
        ax2.plot(x, result.column("weight_l1"), "s--", color="tab:gray", ms=3)
        ax2.set_ylabel("|w|_1")
    else:
        ax.loglog(x[ok], err[ok], "o-")
        ax.set_xlabel("h")
        ax.invert_xaxis()
    ax.set_ylabel("relative error")
    ax.set_title(f"{result.meta.get('system', '')} ({result.kind}-version)")
    ax.grid(True, which="both", alpha=0.3)
    return _finish(fig, path)


def plot_weights(rule: CubatureRule, path) -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 4))
    X = rule.points
    if X.shape[1] == 1:
        ax.plot(X[:, 0], rule.weights, ".-")
        ax.axhline(0.0, color="k", lw=0.5)
        ax.set_xlabel("x")
        ax.set_ylabel("weight")
    else:
        sc = ax.scatter(X[:, 0], X[:, 1], c=rule.weights, s=12, cmap="coolwarm")
        fig.colorbar(sc, ax=ax, label="weight")
        ax.set_aspect("equal")
    ax.set_title(f"M = {rule.size}")
    return _finish(fig, path)


def plot_points(points: np.ndarray, path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    if points.shape[1] == 1:
        ax.plot(points[:, 0], np.zeros(len(points)), "|", ms=10)
    else:
        ax.plot(points[:, 0], points[:, 1], ",", alpha=0.5)
        ax.set_aspect("equal")
    return _finish(fig, path)
