"""Figure rendering for run artifacts.

Reads the delimited outputs of a finished run (trace.csv and, when present,
the dumped coordinate-triple matrices) and writes PNG figures next to them.
Kept separate from the pipeline, which only ever emits plot-ready data.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .errors import SimRefineError


def _read_trace(path: Path):
    iters, objective, msil, nmis = [], [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            iters.append(int(row["iter"]))
            objective.append(float(row["objective"]))
            msil.append(float(row["m_sil"]))
            nmis.append(float(row["nmi"]) if row.get("nmi") else None)
    return iters, objective, msil, nmis


def _read_triples(path: Path) -> np.ndarray:
    rows, cols, vals = [], [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            r, c, v = line.split()
            rows.append(int(r))
            cols.append(int(c))
            vals.append(float(v))
    n = max(max(rows, default=0), max(cols, default=0)) + 1
    M = np.zeros((n, n))
    M[rows, cols] = vals
    return M


def render_run(run_dir, out_dir=None) -> list:
    """Render trace and similarity-heatmap figures for a run directory.

    Returns the list of written figure paths.
    """
    run = Path(run_dir)
    out = Path(out_dir) if out_dir is not None else run
    out.mkdir(parents=True, exist_ok=True)
    trace_path = run / "trace.csv"
    if not trace_path.exists():
        raise SimRefineError(f"no trace.csv in {run}")
    iters, objective, msil, nmis = _read_trace(trace_path)
    written = []

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 7), sharex=True)
    ax1.plot(iters, objective, "o-", color="tab:grey")
    ax1.set_ylabel("objective")
    ax2.plot(iters, msil, "o-", color="tab:blue", label="mean silhouette")
    if any(v is not None for v in nmis):
        ax2b = ax2.twinx()
        ax2b.plot(iters, [v if v is not None else np.nan for v in nmis],
                  "s-", color="tab:orange", label="NMI")
        ax2b.set_ylabel("NMI")
    ax2.set_xlabel("iteration")
    ax2.set_ylabel("mean silhouette")
    fig.tight_layout()
    path = out / "trace.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    for name in ("S_iter0", "S_final"):
        triple_path = run / f"{name}.txt"
        if not triple_path.exists():
            continue
        M = _read_triples(triple_path)
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.imshow(M, cmap="viridis", interpolation="nearest")
        ax.set_title(name)
        fig.tight_layout()
        path = out / f"{name}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
