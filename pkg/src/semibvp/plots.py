"""Figure rendering for the report paths of the command line tool.

All functions write a PNG next to the delimited output and return the path.
The non-interactive Agg backend is selected so the renderers work headless.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .newton import SolutionGrid


def save_profile_figure(solution: SolutionGrid, path: str, title: str | None = None) -> str:
    """Plot every state component against x over the finite nodes."""
    x = solution.mesh.finite_nodes
    U = solution.U[:-1]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for j in range(U.shape[1]):
        ax.plot(x, U[:, j], label=f"u{j + 1}")
    ax.set_xlabel("x")
    ax.set_ylabel("state components")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_sweep_figure(betas: Sequence[float], shears: Sequence[float], path: str) -> str:
    """Plot the wall shear against the sweep parameter."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(betas, shears, "o-")
    ax.set_xlabel("beta")
    ax.set_ylabel("wall shear u''(0)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_convergence_figure(
    n_values: Sequence[int], raw: Sequence[float], benchmark: float, path: str
) -> str:
    """Plot |raw - benchmark| against N on log-log axes with an N^-2 guide."""
    n = np.asarray(n_values, dtype=float)
    err = np.abs(np.asarray(raw, dtype=float) - benchmark)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    positive = err > 0
    if positive.any():
        ax.loglog(n[positive], err[positive], "o-", label="|raw - benchmark|")
        anchor = err[positive][0] * (n[positive][0] ** 2)
        ax.loglog(n, anchor / n**2, "--", color="gray", label="N^-2 guide")
        ax.legend()
    else:
        ax.plot(n, err, "o-")
    ax.set_xlabel("N")
    ax.set_ylabel("error")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
