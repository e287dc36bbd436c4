"""Base-matrix normalization, weight initialization, and fusion.

The base matrices are row-normalized, then combined as a convex weighted sum.
Attribute matrices collectively receive half of the initial weight mass
(split by PCA contribution ratios, or all of it for a single cosine matrix);
the two relational matrices receive a quarter each.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass
class BaseMatrixSet:
    """Ordered row-normalized base matrices; the last two are relational."""

    matrices: list
    names: list

    # Frobenius Gram matrix of the bases, cached for the weight updates.
    _gram: np.ndarray | None = field(default=None, repr=False)

    @property
    def K(self) -> int:
        return len(self.matrices)

    def gram(self) -> np.ndarray:
        if self._gram is None:
            K = self.K
            G = np.empty((K, K))
            for a in range(K):
                for b in range(a, K):
                    G[a, b] = G[b, a] = float(np.sum(self.matrices[a] * self.matrices[b]))
            self._gram = G
        return self._gram


def row_normalize(M: np.ndarray) -> np.ndarray:
    """Divide each row by its sum; all-zero rows stay zero (logged once)."""
    M = np.asarray(M, dtype=float)
    sums = M.sum(axis=1)
    zero = sums == 0
    if zero.any():
        logger.warning("%d isolated object(s) with all-zero similarity row", int(zero.sum()))
    safe = np.where(zero, 1.0, sums)
    return M / safe[:, None]


def init_weights(contribution_ratios, K: int) -> np.ndarray:
    """Initial fusion weights on the probability simplex.

    With ratios p (per-dimension Gaussian mode, K = d' + 2): attribute matrix
    i gets 0.5 * p_i / sum(p) and each relational matrix gets 0.25. With
    ratios None (cosine mode, K = 3): the single attribute matrix takes the
    full 0.5 attribute share.
    """
    if contribution_ratios is None:
        if K != 3:
            raise ValidationError(f"cosine mode expects K=3 base matrices, got {K}")
        return np.array([0.5, 0.25, 0.25])
    p = np.asarray(contribution_ratios, dtype=float)
    if K != p.size + 2:
        raise ValidationError(f"expected K = d'+2 = {p.size + 2}, got {K}")
    lam = np.empty(K)
    lam[: p.size] = 0.5 * p / p.sum()
    lam[p.size:] = 0.25
    return lam


def fuse(bases: BaseMatrixSet, weights: np.ndarray) -> np.ndarray:
    """Entrywise weighted sum of the base matrices."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (bases.K,):
        raise ValidationError(f"weight vector has {w.shape} entries for {bases.K} matrices")
    S = np.zeros_like(bases.matrices[0])
    for wk, Mk in zip(w, bases.matrices):
        S += wk * Mk
    return S
