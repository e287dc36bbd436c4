"""Spectral clustering: Laplacian embedding followed by k-means.

Normalized mode implements the relaxed NCut recipe (symmetric normalization,
unit-normalized embedding rows); unnormalized mode the relaxed RCut recipe.
All randomness flows from an integer seed through per-restart generators, so
identical inputs give identical assignments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .refine import laplacian, smallest_eigs

KMEANS_MAX_ITERS = 300
KMEANS_MOVE_TOL = 1e-9


@dataclass(frozen=True)
class Clustering:
    """Assignment of each object to one of c clusters."""

    assignment: np.ndarray  # (n,) ints in [0, c)
    c: int

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.c)


def _kmeans_pp_init(points: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((c, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for k in range(1, c):
        total = d2.sum()
        if total <= 0:
            centers[k] = points[rng.integers(n)]
        else:
            centers[k] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((points - centers[k]) ** 2, axis=1))
    return centers


def _lloyd(points: np.ndarray, centers: np.ndarray):
    """Lloyd iterations; returns (assignment, wcss) or None on an empty cluster."""
    c = centers.shape[0]
    for _ in range(KMEANS_MAX_ITERS):
        d2 = (np.sum(points ** 2, axis=1)[:, None]
              + np.sum(centers ** 2, axis=1)[None, :]
              - 2.0 * points @ centers.T)
        assign = np.argmin(d2, axis=1)
        counts = np.bincount(assign, minlength=c)
        if np.any(counts == 0):
            return None
        new_centers = np.zeros_like(centers)
        np.add.at(new_centers, assign, points)
        new_centers /= counts[:, None]
        move = float(np.max(np.abs(new_centers - centers)))
        centers = new_centers
        if move < KMEANS_MOVE_TOL:
            break
    d2 = np.sum((points - centers[assign]) ** 2, axis=1)
    return assign, float(d2.sum())


def kmeans(points: np.ndarray, c: int, seed: int, restarts: int = 10) -> Clustering:
    """Best-of-restarts k-means with k-means++ seeding.

    A restart whose converged partition has an empty cluster is discarded;
    if every restart does, a NumericalError is raised.
    """
    points = np.asarray(points, dtype=float)
    if c > points.shape[0]:
        raise ValidationError(f"c={c} exceeds number of points {points.shape[0]}")
    best = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        result = _lloyd(points, _kmeans_pp_init(points, c, rng))
        if result is None:
            continue
        assign, wcss = result
        if best is None or wcss < best[1]:
            best = (assign, wcss)
    if best is None:
        raise NumericalError(
            f"k-means produced an empty cluster in all {restarts} restart(s)")
    return Clustering(assignment=best[0], c=c)


def spectral_cluster(M: np.ndarray, c: int, mode: str, seed: int,
                     restarts: int = 10) -> Clustering:
    """Cluster a similarity matrix via its bottom-c Laplacian eigenvectors."""
    n = M.shape[0]
    if c > n:
        raise ValidationError(f"c={c} exceeds n={n}")
    L = laplacian(M, mode)
    _, vecs = smallest_eigs(L, c)
    embedding = vecs[:, :c]
    if mode == "normalized":
        norms = np.linalg.norm(embedding, axis=1)
        safe = np.where(norms > 0, norms, 1.0)
        embedding = embedding / safe[:, None]
    return kmeans(embedding, c, seed=seed, restarts=restarts)
