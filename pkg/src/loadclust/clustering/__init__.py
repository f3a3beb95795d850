from .base import (
    ALGORITHMS,
    LINKAGES,
    ClusterAssignment,
    ClusterConfig,
    canonical_relabel,
    descent_violations,
)
from .hierarchical import agglomerate, hierarchical
from .kmeans import kmeans
from .kmedoids import kmedoids
from .kshape import kshape, shape_extraction
from .sweep import KSweepResult, SweepEntry, elbow_k, run_algorithm, sweep_k

__all__ = [
    "ALGORITHMS", "LINKAGES", "ClusterAssignment", "ClusterConfig", "KSweepResult",
    "SweepEntry", "agglomerate", "canonical_relabel", "descent_violations", "elbow_k",
    "hierarchical", "kmeans", "kmedoids", "kshape", "run_algorithm", "shape_extraction",
    "sweep_k",
]
