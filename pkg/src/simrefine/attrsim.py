"""Attribute-based similarity matrices.

Two routes: PCA reduction followed by a per-dimension Gaussian kernel, or a
single cosine-similarity matrix over the raw attribute vectors (the usual
choice for sparse bag-of-words attributes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .network import AttributedNetwork

# pca_dims="auto": keep components until this cumulative share, capped below.
AUTO_PCA_TARGET = 0.8
AUTO_PCA_CAP = 30


@dataclass(frozen=True)
class PcaResult:
    """Projected attribute vectors plus per-component variance shares."""

    reduced: np.ndarray            # (n, d')
    contribution_ratios: np.ndarray  # (d',) non-increasing, sums to <= 1


def pca_reduce(net: AttributedNetwork, dims) -> PcaResult:
    """Project the mean-centered attribute matrix onto its top principal components.

    dims may be a positive integer, "all" (keep every component), or "auto"
    (keep components until the cumulative contribution ratio reaches
    AUTO_PCA_TARGET, capped at AUTO_PCA_CAP). Contribution ratios are
    eigenvalue shares of the total variance; no variance scaling is applied.
    """
    X = net.attributes
    n, d = X.shape
    if n < 2:
        raise DegenerateInputError("PCA requires at least 2 objects")
    centered = X - X.mean(axis=0)
    # Singular values give the covariance eigenvalues as s^2 / (n - 1).
    U, s, Vt = np.linalg.svd(centered, full_matrices=False)
    eigvals = s ** 2 / (n - 1)
    total = eigvals.sum()
    if total <= 0:
        raise DegenerateInputError("attribute matrix has zero variance")
    ratios = eigvals / total

    if dims == "all":
        k = min(d, len(eigvals))
    elif dims == "auto":
        cum = np.cumsum(ratios)
        k = int(np.searchsorted(cum, AUTO_PCA_TARGET) + 1)
        k = min(k, AUTO_PCA_CAP, len(eigvals))
    else:
        k = int(dims)
        if not (1 <= k <= d):
            raise DegenerateInputError(f"pca dims must lie in [1, {d}], got {k}")
        k = min(k, len(eigvals))
    reduced = centered @ Vt[:k].T
    return PcaResult(reduced=reduced, contribution_ratios=ratios[:k])


def gaussian_dim_similarity(reduced: np.ndarray, k: int, sigma: float) -> np.ndarray:
    """Gaussian kernel on a single attribute dimension.

    Entry (i, j) is exp(-(a_ik - a_jk)^2 / (2 sigma^2)) for i != j and 0 on
    the diagonal; symmetric by construction.
    """
    if sigma <= 0:
        raise DegenerateInputError(f"sigma must be positive, got {sigma}")
    col = np.asarray(reduced)[:, k]
    diff = col[:, None] - col[None, :]
    S = np.exp(-(diff ** 2) / (2.0 * sigma ** 2))
    np.fill_diagonal(S, 0.0)
    return S


def cosine_similarity_matrix(net: AttributedNetwork) -> np.ndarray:
    """Cosine similarity of raw attribute vectors, clamped at 0, zero diagonal."""
    X = net.attributes
    norms = np.linalg.norm(X, axis=1)
    bad = np.flatnonzero(norms == 0)
    if bad.size:
        raise DegenerateInputError(f"object {bad[0]} has a zero-norm attribute vector")
    normed = X / norms[:, None]
    S = normed @ normed.T
    np.clip(S, 0.0, 1.0, out=S)
    np.fill_diagonal(S, 0.0)
    return S
