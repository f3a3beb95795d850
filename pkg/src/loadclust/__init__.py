"""Clustering of daily load profiles: ingestion, representation, clustering,
validity scoring and report generation."""

from .clustering import ClusterAssignment, ClusterConfig, sweep_k
from .config import RunConfig, validate
from .dataset import ColumnMapping, TimeSeriesDataset, aggregate, ingest, interpolate_and_align
from .fixtures import generate_fixture
from .metrics import DistanceKind, dtw, euclidean, pairwise, sbd
from .pipeline import run, write_labels, write_report, write_scores
from .representation import FPCAConfig, RepresentedMatrix, fpca, normalize
from .trajectory import label_trajectory
from .validity import ValidityReport, calinski_harabasz, davies_bouldin, silhouette

__version__ = "0.1.0"

__all__ = [
    "ClusterAssignment", "ClusterConfig", "ColumnMapping", "DistanceKind", "FPCAConfig",
    "RepresentedMatrix", "RunConfig", "TimeSeriesDataset", "ValidityReport", "aggregate",
    "calinski_harabasz", "davies_bouldin", "dtw", "euclidean", "fpca", "generate_fixture",
    "ingest", "interpolate_and_align", "label_trajectory", "normalize", "pairwise", "run",
    "sbd", "silhouette", "sweep_k", "validate", "write_labels", "write_report", "write_scores",
]
