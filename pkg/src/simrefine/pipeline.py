"""End-to-end driver: derive bases, fuse, refine with the silhouette stop,
and emit run artifacts.

Each iteration clusters the current refined matrix, records the mean
silhouette (and NMI/purity when ground truth is available), then checks the
silhouette local-maximum rule before the objective-convergence rule. The
loop is additionally capped at max_iters sweeps.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import attrsim, relsim
from .errors import SimRefineError
from .fusion import BaseMatrixSet, fuse, init_weights, row_normalize
from .network import AttributedNetwork, PipelineConfig, validate_config
from .refine import RefinementState, init_state, refine_step
from .spectral import Clustering, spectral_cluster
from .validity import nmi, purity, silhouette, stopping_check

logger = logging.getLogger(__name__)

STOP_SILHOUETTE = "silhouette-local-max"
STOP_CONVERGED = "objective-converged"
STOP_CAP = "iteration-cap"


@dataclass
class RunResult:
    final_clustering: Clustering
    stop_reason: str
    stop_iteration: int
    trace: list                  # dicts: iter, objective, m_sil, nmi, purity
    config: PipelineConfig
    s_initial: np.ndarray
    s_final: np.ndarray
    mean_silhouette: float
    nmi: float | None = None
    purity: float | None = None


def derive_bases(net: AttributedNetwork, cfg: PipelineConfig):
    """Build the row-normalized base matrices, initial weights, and the
    attribute vectors used by the silhouette."""
    profile, fronts = relsim.bfs_path_profile(net, cfg.theta)
    s_la = relsim.symmetrize(relsim.similarity_front_relative(profile, fronts, cfg.delta))
    s_lb = relsim.symmetrize(relsim.similarity_front_max(profile, fronts, cfg.delta))

    if cfg.attr_mode == "cosine":
        mats = [attrsim.cosine_similarity_matrix(net)]
        names = ["S_A"]
        ratios = None
        sil_attrs = net.attributes
    else:
        pca = attrsim.pca_reduce(net, cfg.pca_dims)
        mats = [attrsim.gaussian_dim_similarity(pca.reduced, k, cfg.sigma)
                for k in range(pca.reduced.shape[1])]
        names = [f"S_A{k + 1}" for k in range(len(mats))]
        ratios = pca.contribution_ratios
        sil_attrs = pca.reduced
    mats += [s_la, s_lb]
    names += ["S_La", "S_Lb"]
    bases = BaseMatrixSet(matrices=[row_normalize(M) for M in mats], names=names)
    weights = init_weights(ratios, bases.K)
    return bases, weights, sil_attrs


def run_pipeline(net: AttributedNetwork, cfg: PipelineConfig,
                 stop_on_silhouette: bool = True) -> RunResult:
    """Execute the full refinement loop and return the selected clustering.

    stop_on_silhouette=False disables the silhouette local-maximum rule so
    the refinement runs to objective convergence (or the iteration cap);
    useful for inspecting the full trace.
    """
    cfg = validate_config(cfg, net)
    bases, weights, sil_attrs = derive_bases(net, cfg)
    S = fuse(bases, weights)
    state = init_state(S, weights, cfg, bases=bases)
    s_initial = state.s_star.copy()

    trace = []
    msil_history = []
    clusterings = []
    prev_s_star = None
    final_iter = None
    stop_reason = None

    it = 0
    while True:
        clustering = spectral_cluster(state.s_star, cfg.c, cfg.laplacian_mode,
                                      seed=int(np.random.SeedSequence([cfg.seed, it]).generate_state(1)[0]),
                                      restarts=cfg.kmeans_restarts)
        clusterings.append(clustering)
        msil = silhouette(clustering, sil_attrs).mean
        msil_history.append(msil)
        row = {"iter": it, "objective": state.objective, "m_sil": msil}
        if net.labels is not None:
            row["nmi"] = nmi(clustering, net.labels, cfg.nmi_average)
            row["purity"] = purity(clustering, net.labels)
        trace.append(row)
        logger.info("iter %d: objective=%.6g m_sil=%.4f%s", it, state.objective,
                    msil, f" nmi={row['nmi']:.4f}" if "nmi" in row else "")

        if stop_on_silhouette and stopping_check(msil_history):
            final_iter, stop_reason = it - 1, STOP_SILHOUETTE
            s_final = prev_s_star
            break
        if state.converged:
            final_iter, stop_reason = it - 1, STOP_CONVERGED
            s_final = prev_s_star
            break
        if it >= cfg.max_iters:
            final_iter, stop_reason = it, STOP_CAP
            s_final = state.s_star.copy()
            break
        prev_s_star = state.s_star.copy()
        state = refine_step(state, bases, cfg)
        it += 1

    final = clusterings[final_iter]
    result = RunResult(final_clustering=final, stop_reason=stop_reason,
                       stop_iteration=final_iter, trace=trace, config=cfg,
                       s_initial=s_initial, s_final=s_final,
                       mean_silhouette=msil_history[final_iter])
    if net.labels is not None:
        result.nmi = trace[final_iter]["nmi"]
        result.purity = trace[final_iter]["purity"]
    return result


def _write_triples(M: np.ndarray, path: Path):
    rows, cols = np.nonzero(M)
    with open(path, "w", encoding="utf-8") as fh:
        for r, c in zip(rows, cols):  # np.nonzero is already (row, col) sorted
            fh.write(f"{r} {c} {float(M[r, c])!r}\n")


def emit_outputs(result: RunResult, out_dir, dump_matrices: bool = False) -> list:
    """Write assignments.csv, metrics.json, trace.csv, and (optionally) the
    initial and final refined matrices as coordinate triples. Returns the
    written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "assignments.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("id,cluster\n")
        for oid, lab in enumerate(result.final_clustering.assignment):
            fh.write(f"{oid},{lab}\n")
    written.append(path)

    metrics = {
        "mean_silhouette": result.mean_silhouette,
        "stop_reason": result.stop_reason,
        "iterations": result.stop_iteration,
        "config": dataclasses.asdict(result.config),
    }
    if result.nmi is not None:
        metrics["nmi"] = result.nmi
        metrics["purity"] = result.purity
    path = out / "metrics.json"
    path.write_text(json.dumps(metrics, indent=2) + "\n", encoding="utf-8")
    written.append(path)

    path = out / "trace.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("iter,objective,m_sil,nmi\n")
        for row in result.trace:
            nmi_val = row.get("nmi")
            fh.write(f"{row['iter']},{row['objective']!r},{row['m_sil']!r},"
                     f"{'' if nmi_val is None else repr(nmi_val)}\n")
    written.append(path)

    if dump_matrices:
        for name, M in (("S_iter0.txt", result.s_initial), ("S_final.txt", result.s_final)):
            path = out / name
            _write_triples(M, path)
            written.append(path)
    return written
