from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import KTooLarge, ValidationError, WardRequiresEuclidean
from ..metrics import DistanceKind, EUCLIDEAN

ALGORITHMS = ("kmeans", "kmedoids", "hierarchical", "kshape")
LINKAGES = ("ward", "complete", "average", "single")

DEFAULT_MAX_ITER = 300
DEFAULT_N_INIT = 10
# secondary stop on relative objective change
REL_TOL = 1e-6


@dataclass(frozen=True)
class ClusterConfig:
    algorithm: str = "kmeans"
    k: int | None = 4
    distance: DistanceKind = EUCLIDEAN
    seed: int = 0
    max_iter: int = DEFAULT_MAX_ITER
    n_init: int = DEFAULT_N_INIT
    linkage: str = "ward"

    def problems(self, prefix="cluster"):
        out = []
        if self.algorithm not in ALGORITHMS:
            out.append((f"{prefix}.algorithm", f"must be one of {ALGORITHMS}"))
        if self.k is not None and (not isinstance(self.k, (int, np.integer)) or self.k < 2):
            out.append((f"{prefix}.k", "must be an integer >= 2"))
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2 ** 64:
            out.append((f"{prefix}.seed", "must be an unsigned 64-bit integer"))
        if not isinstance(self.max_iter, (int, np.integer)) or self.max_iter < 1:
            out.append((f"{prefix}.max_iter", "must be a positive integer"))
        if not isinstance(self.n_init, (int, np.integer)) or self.n_init < 1:
            out.append((f"{prefix}.n_init", "must be a positive integer"))
        if self.linkage not in LINKAGES:
            out.append((f"{prefix}.linkage", f"must be one of {LINKAGES}"))
        variant = self.distance.variant
        if self.algorithm == "kshape" and variant != "sbd":
            out.append((f"{prefix}.distance", "kshape requires the sbd distance"))
        if self.algorithm == "kmeans" and variant != "euclidean":
            out.append((f"{prefix}.distance", "kmeans requires the euclidean distance"))
        if (self.algorithm == "hierarchical" and self.linkage == "ward"
                and variant != "euclidean"):
            out.append((f"{prefix}.distance", "ward linkage requires the euclidean distance"))
        return out

    def check(self, n):
        """Raise on an invalid configuration for a run over ``n`` rows."""
        if (self.algorithm == "hierarchical" and self.linkage == "ward"
                and self.distance.variant != "euclidean"):
            raise WardRequiresEuclidean("ward linkage requires the euclidean distance")
        problems = self.problems()
        if self.k is None:
            problems.append(("cluster.k", "k must be set for a single run"))
        if problems:
            raise ValidationError(problems)
        if self.k > n:
            raise KTooLarge(f"k={self.k} exceeds the number of series n={n}")


@dataclass(frozen=True)
class ClusterAssignment:
    """Result of one clustering run.

    ``clusters[i]`` is the cluster of ``labels[i]``. Cluster ids are
    canonical: walking the labels in lexicographic order, ids appear as
    0, 1, 2, ...
    """

    labels: tuple
    clusters: np.ndarray
    centers: np.ndarray
    inertia: float
    iterations: int
    converged: bool
    algorithm: str = ""
    history: tuple = ()
    restart_histories: tuple = ()
    medoids: tuple | None = None
    merges: tuple | None = None
    flags: tuple = field(default=())

    @property
    def k(self):
        return int(self.centers.shape[0])

    @property
    def labels_to_cluster(self):
        return {lab: int(c) for lab, c in zip(self.labels, self.clusters)}

    def members(self, cluster_id):
        return [lab for lab, c in zip(self.labels, self.clusters) if c == cluster_id]

    def sizes(self):
        return np.bincount(self.clusters, minlength=self.k)


def canonical_relabel(clusters, labels):
    """Map raw cluster ids to ids ordered by first appearance in sorted-label order.

    Returns ``(new_clusters, order)`` where ``order[new_id] = old_id``.
    """
    clusters = np.asarray(clusters, dtype=int)
    mapping, order = {}, []
    for i in sorted(range(len(labels)), key=lambda i: labels[i]):
        c = int(clusters[i])
        if c not in mapping:
            mapping[c] = len(order)
            order.append(c)
    return np.array([mapping[int(c)] for c in clusters], dtype=int), order


def finalize(labels, raw_clusters, centers, **kwargs):
    clusters, order = canonical_relabel(raw_clusters, labels)
    centers = np.asarray(centers, dtype=float)[order]
    medoids = kwargs.pop("medoids", None)
    if medoids is not None:
        medoids = tuple(int(medoids[o]) for o in order)
    return ClusterAssignment(tuple(labels), clusters, centers, medoids=medoids, **kwargs)


def restart_rng(seed, k, restart):
    """Private RNG stream per (seed, k, restart); independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(k), int(restart)]))


def descent_violations(history, rtol=1e-12):
    """Indices where an objective history increases beyond rounding noise."""
    h = list(history)
    return [i for i in range(1, len(h)) if h[i] > h[i - 1] + rtol * max(1.0, abs(h[i - 1]))]


def data_of(matrix):
    data = np.asarray(getattr(matrix, "data", matrix), dtype=float)
    labels = getattr(matrix, "labels", None)
    if labels is None:
        labels = tuple(f"{i:06d}" for i in range(data.shape[0]))
    return data, tuple(labels)
