"""Attributed-network data model, loading, validation, and serialization.

An attributed network couples a dense real attribute matrix (one row per
object) with a set of directed, unweighted relationships between objects.
Object ids are dense integers 0..n-1 assigned by attribute-file row order;
edge and label files reference those ids.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AttributedNetwork:
    """Immutable directed network whose nodes carry real attribute vectors.

    attributes: (n, d) float array, row i is the attribute vector of object i.
    edges: set of ordered pairs (src, dst), no self-loops, no duplicates.
    labels: optional (n,) int array of ground-truth cluster ids (evaluation only).
    """

    attributes: np.ndarray
    edges: frozenset
    labels: np.ndarray | None = None

    def __post_init__(self):
        attrs = np.asarray(self.attributes, dtype=float)
        if attrs.ndim != 2 or attrs.shape[1] < 1:
            raise ValidationError("attributes must be a 2-D matrix with d >= 1 columns")
        if not np.all(np.isfinite(attrs)):
            raise ValidationError("attributes must be finite")
        attrs.flags.writeable = False
        object.__setattr__(self, "attributes", attrs)
        n = attrs.shape[0]
        for i, j in self.edges:
            if i == j:
                raise ValidationError(f"self-loop on object {i} is not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"edge ({i}, {j}) references an object outside [0, {n})")
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int)
            if labels.shape != (n,):
                raise ValidationError(f"labels must cover all {n} objects, got shape {labels.shape}")
            labels.flags.writeable = False
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.attributes.shape[0]

    @property
    def d(self) -> int:
        return self.attributes.shape[1]


@dataclass(frozen=True)
class PipelineConfig:
    """All tunables of the clustering pipeline.

    m = "auto" resolves to max(c, 50) clipped to n; pca_dims = "auto" keeps
    components until the cumulative contribution ratio reaches 0.8 (capped
    at 30), "all" keeps every component.
    """

    c: int
    theta: int = 3
    delta: float = 0.5
    sigma: float = 1.0
    pca_dims: int | str = "auto"
    attr_mode: str = "gaussian"
    laplacian_mode: str = "normalized"
    alpha: float = 1.0
    beta: float = 1.0
    gamma0: float = 1.0
    m: int | str = "auto"
    max_iters: int = 50
    seed: int = 0
    kmeans_restarts: int = 10
    nmi_average: str = "arithmetic"


def validate_config(cfg: PipelineConfig, net: AttributedNetwork) -> PipelineConfig:
    """Check every config invariant against the network; return the normalized config.

    "auto" sentinels for m are resolved here; pca_dims resolution needs the
    PCA spectrum and happens in attr_sim. All violations are reported
    together, each naming the offending field.
    """
    problems = []
    if not (2 <= cfg.c <= net.n):
        problems.append(f"c must lie in [2, n={net.n}], got {cfg.c}")
    if cfg.theta < 1:
        problems.append(f"theta must be >= 1, got {cfg.theta}")
    if not (0.0 < cfg.delta < 1.0):
        problems.append("delta must lie strictly in (0,1)")
    if cfg.sigma <= 0:
        problems.append(f"sigma must be positive, got {cfg.sigma}")
    if cfg.attr_mode not in ("gaussian", "cosine"):
        problems.append(f"attr_mode must be 'gaussian' or 'cosine', got {cfg.attr_mode!r}")
    if cfg.laplacian_mode not in ("normalized", "unnormalized"):
        problems.append(f"laplacian_mode must be 'normalized' or 'unnormalized', got {cfg.laplacian_mode!r}")
    if cfg.alpha < 0:
        problems.append(f"alpha must be >= 0, got {cfg.alpha}")
    if cfg.beta < 0:
        problems.append(f"beta must be >= 0, got {cfg.beta}")
    if cfg.gamma0 <= 0:
        problems.append(f"gamma0 must be positive, got {cfg.gamma0}")
    if isinstance(cfg.pca_dims, str):
        if cfg.pca_dims not in ("auto", "all"):
            problems.append(f"pca_dims must be a positive integer, 'auto', or 'all', got {cfg.pca_dims!r}")
    elif not (1 <= cfg.pca_dims <= net.d):
        problems.append(f"pca_dims must lie in [1, d={net.d}], got {cfg.pca_dims}")
    m = cfg.m
    if isinstance(m, str):
        if m != "auto":
            problems.append(f"m must be a positive integer or 'auto', got {m!r}")
        else:
            m = min(net.n, max(cfg.c, 50))
    if isinstance(m, int) and m < cfg.c:
        problems.append(f"m must be >= c ({cfg.c}), got {m}")
    if cfg.max_iters < 0:
        problems.append(f"max_iters must be >= 0, got {cfg.max_iters}")
    if cfg.kmeans_restarts < 1:
        problems.append(f"kmeans_restarts must be >= 1, got {cfg.kmeans_restarts}")
    if cfg.nmi_average not in ("arithmetic", "geometric", "max"):
        problems.append(f"nmi_average must be arithmetic/geometric/max, got {cfg.nmi_average!r}")
    if problems:
        raise ValidationError("; ".join(problems))
    return replace(cfg, m=min(int(m), net.n))


def _data_lines(path):
    """Yield (line_no, stripped_line) skipping blanks and '#' comments."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield line_no, line


def load_network(attr_path, edge_path, label_path=None) -> AttributedNetwork:
    """Load and validate an attributed network from disk.

    Attribute file: CSV, one row per object, d numeric columns.
    Edge file: whitespace-separated "src dst" per line, 0-based ids.
    Label file (optional): CSV "id,label" with integer labels.
    Duplicate edges are deduplicated with a warning; self-loops and
    out-of-range endpoints are rejected.
    """
    rows = []
    d = None
    for line_no, line in _data_lines(attr_path):
        fields = next(csv.reader([line]))
        if d is None:
            d = len(fields)
        elif len(fields) != d:
            raise ParseError(attr_path, line_no, f"expected {d} columns, got {len(fields)}")
        try:
            rows.append([float(v) for v in fields])
        except ValueError:
            raise ParseError(attr_path, line_no, f"non-numeric attribute value in {fields!r}") from None
    if not rows:
        raise ParseError(attr_path, 0, "attribute file contains no data rows")
    attrs = np.array(rows, dtype=float)
    n = attrs.shape[0]

    edges = set()
    duplicates = 0
    for line_no, line in _data_lines(edge_path):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(edge_path, line_no, f"expected 'src dst', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(edge_path, line_no, f"non-integer endpoint in {line!r}") from None
        if i == j:
            raise ValidationError(f"{edge_path}:{line_no}: self-loop on object {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"{edge_path}:{line_no}: edge ({i}, {j}) out of range [0, {n})")
        if (i, j) in edges:
            duplicates += 1
        edges.add((i, j))
    if duplicates:
        logger.warning("deduplicated %d duplicate edge(s) in %s", duplicates, edge_path)

    labels = None
    if label_path is not None:
        labels = np.full(n, -1, dtype=int)
        for line_no, line in _data_lines(label_path):
            fields = next(csv.reader([line]))
            if len(fields) != 2:
                raise ParseError(label_path, line_no, f"expected 'id,label', got {line!r}")
            try:
                oid, lab = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(label_path, line_no, f"non-integer id or label in {line!r}") from None
            if not (0 <= oid < n):
                raise ValidationError(f"{label_path}:{line_no}: object id {oid} out of range [0, {n})")
            labels[oid] = lab
        missing = np.flatnonzero(labels == -1)
        if missing.size:
            raise ValidationError(f"labels missing for objects {missing[:10].tolist()}"
                                  + ("..." if missing.size > 10 else ""))

    return AttributedNetwork(attributes=attrs, edges=frozenset(edges), labels=labels)


def save_network(net: AttributedNetwork, attr_path, edge_path, label_path=None):
    """Serialize a network in the same formats load_network accepts."""
    with open(attr_path, "w", encoding="utf-8") as fh:
        for row in net.attributes:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    with open(edge_path, "w", encoding="utf-8") as fh:
        for i, j in sorted(net.edges):
            fh.write(f"{i} {j}\n")
    if label_path is not None:
        if net.labels is None:
            raise ValidationError("network has no labels to serialize")
        with open(label_path, "w", encoding="utf-8") as fh:
            for oid, lab in enumerate(net.labels):
                fh.write(f"{oid},{lab}\n")
