"""Cluster-validity measures: squared-distance silhouette, NMI, and purity.

The silhouette here uses squared Euclidean distances between attribute
vectors (not plain distances), so it intentionally differs from the common
library variant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .spectral import Clustering


@dataclass(frozen=True)
class SilhouetteReport:
    per_object: np.ndarray  # (n,) values in [-1, 1]
    mean: float


def silhouette(clustering: Clustering, attrs: np.ndarray) -> SilhouetteReport:
    """Mean-of-squared-distances silhouette.

    a(i) = mean squared distance to the other members of i's cluster
    (singletons get sil = 0); b(i) = min over other clusters of the mean
    squared distance to that cluster; sil = (b - a) / max(a, b), 0 when both
    vanish.
    """
    assign = clustering.assignment
    c = clustering.c
    if c < 2:
        raise ValidationError("silhouette is undefined for fewer than 2 clusters")
    attrs = np.asarray(attrs, dtype=float)
    n = attrs.shape[0]
    sq = np.sum(attrs ** 2, axis=1)
    D = sq[:, None] + sq[None, :] - 2.0 * attrs @ attrs.T
    np.maximum(D, 0.0, out=D)

    onehot = np.zeros((n, c))
    onehot[np.arange(n), assign] = 1.0
    counts = onehot.sum(axis=0)
    if np.any(counts == 0):
        raise ValidationError("silhouette requires every cluster to be nonempty")
    sums = D @ onehot  # (n, c): total squared distance from i to each cluster

    own = counts[assign]
    a = np.zeros(n)
    multi = own > 1
    a[multi] = sums[np.arange(n), assign][multi] / (own[multi] - 1.0)

    means = sums / counts[None, :]
    means[np.arange(n), assign] = np.inf
    b = means.min(axis=1)

    denom = np.maximum(a, b)
    sil = np.zeros(n)
    ok = (denom > 0) & multi
    sil[ok] = (b[ok] - a[ok]) / denom[ok]
    return SilhouetteReport(per_object=sil, mean=float(sil.mean()))


def stopping_check(history) -> bool:
    """True when the last three mean-silhouette values form a strict local
    maximum at the middle; the iteration to keep is then len(history) - 2."""
    if len(history) < 3:
        return False
    return history[-3] < history[-2] > history[-1]


def _contingency(pred: np.ndarray, truth: np.ndarray) -> np.ndarray:
    pi = np.unique(pred, return_inverse=True)[1]
    ti = np.unique(truth, return_inverse=True)[1]
    table = np.zeros((pi.max() + 1, ti.max() + 1))
    np.add.at(table, (pi, ti), 1.0)
    return table


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def nmi(pred, truth, average: str = "arithmetic") -> float:
    """Normalized mutual information with natural logs; 0/0 defined as 0."""
    pred = pred.assignment if isinstance(pred, Clustering) else np.asarray(pred)
    truth = truth.assignment if isinstance(truth, Clustering) else np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValidationError("pred and truth must label the same objects")
    n = pred.size
    table = _contingency(pred, truth) / n
    pr = table.sum(axis=1)
    pt = table.sum(axis=0)
    mask = table > 0
    mi = float(np.sum(table[mask] * np.log(table[mask] / np.outer(pr, pt)[mask])))
    hr, ht = _entropy(pr), _entropy(pt)
    if average == "arithmetic":
        denom = (hr + ht) / 2.0
    elif average == "geometric":
        denom = np.sqrt(hr * ht)
    elif average == "max":
        denom = max(hr, ht)
    else:
        raise ValidationError(f"unknown NMI average {average!r}")
    return mi / denom if denom > 0 else 0.0


def purity(pred, truth) -> float:
    """Fraction of objects covered by the majority true label of their cluster."""
    pred = pred.assignment if isinstance(pred, Clustering) else np.asarray(pred)
    truth = truth.assignment if isinstance(truth, Clustering) else np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValidationError("pred and truth must label the same objects")
    table = _contingency(pred, truth)
    return float(table.max(axis=1).sum() / pred.size)
