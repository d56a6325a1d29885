"""Solver run reports: iteration trace as CSV plus matplotlib figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .uniformize import UniformizeResult

TRACE_NAME = "trace.csv"
CONVERGENCE_NAME = "convergence.png"
CURVATURE_NAME = "curvature.png"


def write_trace(result: UniformizeResult, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "residual", "objective", "flips", "defect_sum"])
        rows = zip(
            result.residual_history,
            result.energy_history,
            result.flip_history,
            result.defect_sum_history,
        )
        for k, (residual, objective, flips, defect_sum) in enumerate(rows):
            writer.writerow([k, repr(residual), repr(objective), flips, repr(defect_sum)])


def plot_convergence(result: UniformizeResult, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    iterations = np.arange(len(result.residual_history))
    ax.semilogy(iterations, np.maximum(result.residual_history, 1e-18), "o-", ms=4)
    ax.set_xlabel("iteration")
    ax.set_ylabel("residual (max defect/area mismatch)")
    ax.set_title(f"chi = {result.chi}, {'converged' if result.converged else 'stopped'}")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_curvature(result: UniformizeResult, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    vertices = np.arange(len(result.curvatures))
    ax.bar(vertices, result.curvatures, width=0.6, label="per-vertex curvature")
    ax.axhline(
        result.constant_curvature,
        color="k",
        lw=1.0,
        ls="--",
        label=f"constant {result.constant_curvature:.6g}",
    )
    ax.set_xlabel("vertex")
    ax.set_ylabel("curvature")
    ax.set_xticks(vertices)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(result: UniformizeResult, directory) -> list[Path]:
    """Write trace.csv, convergence.png and curvature.png into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    outputs = [
        directory / TRACE_NAME,
        directory / CONVERGENCE_NAME,
        directory / CURVATURE_NAME,
    ]
    write_trace(result, outputs[0])
    plot_convergence(result, outputs[1])
    plot_curvature(result, outputs[2])
    return outputs
