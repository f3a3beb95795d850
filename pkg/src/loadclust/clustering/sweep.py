"""Run one algorithm over a range of k and suggest a k."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .._parallel import parallel_map
from ..errors import KTooLarge
from ..metrics import pairwise
from .base import data_of
from .hierarchical import hierarchical
from .kmeans import kmeans
from .kmedoids import kmedoids
from .kshape import kshape

SUGGEST_METHODS = ("elbow", "best_silhouette")


@dataclass(frozen=True)
class SweepEntry:
    k: int
    inertia: float
    silhouette: float | None
    davies_bouldin: float | None
    calinski_harabasz: float | None

    def as_dict(self):
        return {"k": self.k, "inertia": self.inertia, "silhouette": self.silhouette,
                "davies_bouldin": self.davies_bouldin,
                "calinski_harabasz": self.calinski_harabasz}


@dataclass(frozen=True)
class KSweepResult:
    per_k: tuple
    suggested_k: int
    method: str
    assignments: dict

    @property
    def ks(self):
        return [e.k for e in self.per_k]

    @property
    def inertias(self):
        return [e.inertia for e in self.per_k]


def run_algorithm(matrix, config, distances=None):
    """Dispatch on ``config.algorithm``."""
    if config.algorithm == "kmeans":
        return kmeans(matrix, config)
    if config.algorithm == "kmedoids":
        return kmedoids(matrix, config, distances)
    if config.algorithm == "hierarchical":
        return hierarchical(matrix, config, distances)
    if config.algorithm == "kshape":
        return kshape(matrix, config)
    raise ValueError(f"unknown algorithm {config.algorithm!r}")


def elbow_k(ks, inertias):
    """k whose (k, inertia) point lies farthest from the chord between the
    first and last points. Ties go to the smallest k."""
    ks = np.asarray(ks, dtype=float)
    y = np.asarray(inertias, dtype=float)
    if ks.size <= 2:
        return int(ks[0])
    dx, dy = ks[-1] - ks[0], y[-1] - y[0]
    # perpendicular distance up to the constant chord length
    dist = np.abs(dy * (ks - ks[0]) - dx * (y - y[0]))
    return int(ks[int(np.argmax(dist))])


def sweep_k(matrix, config, k_range, method="elbow", distances=None):
    """Cluster for every k in the inclusive ``k_range`` and score each run."""
    from ..validity import evaluate

    if method not in SUGGEST_METHODS:
        raise ValueError(f"method must be one of {SUGGEST_METHODS}")
    X, _ = data_of(matrix)
    k_min, k_max = int(k_range[0]), int(k_range[1])
    if k_min < 2 or k_max < k_min:
        raise ValueError(f"invalid k range [{k_min}, {k_max}]")
    if k_max > X.shape[0]:
        raise KTooLarge(f"k_max={k_max} exceeds the number of series n={X.shape[0]}")
    needs_matrix = (config.algorithm in ("kmedoids", "hierarchical")
                    or config.distance.variant != "euclidean")
    if distances is None and needs_matrix:
        distances = pairwise(X, config.distance, strict=False)

    def one(k):
        assignment = run_algorithm(matrix, replace(config, k=k), distances)
        report = evaluate(matrix, assignment, config.distance, distances)
        return assignment, report

    results = parallel_map(one, range(k_min, k_max + 1))
    entries, assignments = [], {}
    for k, (assignment, report) in zip(range(k_min, k_max + 1), results):
        entries.append(SweepEntry(k, report.inertia, report.silhouette,
                                  report.davies_bouldin, report.calinski_harabasz))
        assignments[k] = assignment
    if method == "elbow":
        suggested = elbow_k([e.k for e in entries], [e.inertia for e in entries])
    else:
        scored = [e for e in entries if e.silhouette is not None]
        suggested = max(scored, key=lambda e: (e.silhouette, -e.k)).k if scored else k_min
    return KSweepResult(tuple(entries), suggested, method, assignments)
