"""Clustering of attributed networks via similarity-matrix refinement.

Derives per-dimension attribute kernels (or a cosine matrix) and two
shortest-path relational similarities, fuses them with learned simplex
weights, refines the fused matrix toward a c-component similarity graph by
coordinate descent, stops at a mean-silhouette local maximum, and runs
spectral clustering on the result.
"""

from .errors import (DegenerateInputError, NumericalError, ParseError,
                     SimRefineError, ValidationError)
from .network import AttributedNetwork, PipelineConfig, load_network, save_network, validate_config
from .pipeline import RunResult, derive_bases, emit_outputs, run_pipeline
from .spectral import Clustering, kmeans, spectral_cluster
from .validity import SilhouetteReport, nmi, purity, silhouette, stopping_check

__version__ = "0.1.0"

__all__ = [
    "AttributedNetwork", "PipelineConfig", "RunResult", "Clustering",
    "SilhouetteReport", "load_network", "save_network", "validate_config",
    "derive_bases", "run_pipeline", "emit_outputs", "spectral_cluster",
    "kmeans", "silhouette", "stopping_check", "nmi", "purity",
    "SimRefineError", "ParseError", "ValidationError", "DegenerateInputError",
    "NumericalError",
]
