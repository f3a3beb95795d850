"""Cluster validity indexes: Silhouette, Davies-Bouldin, Calinski-Harabasz.

Silhouette uses the clustering's own distance. Davies-Bouldin and
Calinski-Harabasz are centroid based and always work in the euclidean space
of the represented matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoincidentCentroids, DegenerateK
from .metrics import EUCLIDEAN, DistanceKind, pairwise


@dataclass(frozen=True)
class ValidityReport:
    silhouette: float | None
    davies_bouldin: float | None
    calinski_harabasz: float | None
    inertia: float
    elapsed: float = 0.0
    config_echo: dict = field(default_factory=dict)
    flags: tuple = ()

    def as_dict(self):
        return {
            "silhouette": self.silhouette,
            "davies_bouldin": self.davies_bouldin,
            "calinski_harabasz": self.calinski_harabasz,
            "inertia": self.inertia,
        }


def _parts(matrix, assignment):
    X = np.asarray(getattr(matrix, "data", matrix), dtype=float)
    clusters = np.asarray(getattr(assignment, "clusters", assignment), dtype=int)
    ids = np.unique(clusters)
    return X, clusters, ids


def _check_k(k, n, upper=True):
    if k < 2 or (upper and k > n - 1):
        raise DegenerateK(f"index undefined for k={k} with n={n}")


def silhouette_samples(matrix, assignment, kind: DistanceKind = EUCLIDEAN, distances=None):
    X, clusters, ids = _parts(matrix, assignment)
    n = len(clusters)
    _check_k(len(ids), n)
    D = distances.values if distances is not None else pairwise(X, kind, strict=False).values
    # mean distance from each point to each cluster
    onehot = (clusters[:, None] == ids[None, :]).astype(float)
    sizes = onehot.sum(axis=0)
    sums = D @ onehot
    own = np.searchsorted(ids, clusters)
    own_size = sizes[own]
    a = np.where(own_size > 1, sums[np.arange(n), own] / np.maximum(own_size - 1, 1), 0.0)
    means = sums / sizes[None, :]
    means[np.arange(n), own] = np.inf
    b = means.min(axis=1)
    denom = np.maximum(a, b)
    s = np.where(denom > 0, (b - a) / np.where(denom > 0, denom, 1.0), 0.0)
    s[own_size == 1] = 0.0
    return s


def silhouette(matrix, assignment, kind: DistanceKind = EUCLIDEAN, distances=None) -> float:
    """Mean silhouette; singleton clusters contribute 0."""
    return float(silhouette_samples(matrix, assignment, kind, distances).mean())


def _centroids(X, clusters, ids):
    return np.vstack([X[clusters == c].mean(axis=0) for c in ids])


def davies_bouldin(matrix, assignment) -> float:
    X, clusters, ids = _parts(matrix, assignment)
    k = len(ids)
    _check_k(k, len(clusters), upper=False)
    C = _centroids(X, clusters, ids)
    S = np.array([np.sqrt(((X[clusters == c] - C[i]) ** 2).sum(axis=1)).mean()
                  for i, c in enumerate(ids)])
    M = np.sqrt(((C[:, None, :] - C[None, :, :]) ** 2).sum(axis=-1))
    off = ~np.eye(k, dtype=bool)
    if np.any(M[off] == 0):
        raise CoincidentCentroids("two clusters share the same centroid")
    R = np.where(off, (S[:, None] + S[None, :]) / np.where(off, M, 1.0), -np.inf)
    return float(R.max(axis=1).mean())


def calinski_harabasz(matrix, assignment) -> float:
    """Returns ``inf`` when the within-cluster scatter is zero."""
    X, clusters, ids = _parts(matrix, assignment)
    n, k = len(clusters), len(ids)
    _check_k(k, n)
    C = _centroids(X, clusters, ids)
    sizes = np.array([(clusters == c).sum() for c in ids])
    overall = X.mean(axis=0)
    between = float((sizes * ((C - overall) ** 2).sum(axis=1)).sum())
    within = float(sum(((X[clusters == c] - C[i]) ** 2).sum() for i, c in enumerate(ids)))
    if within == 0:
        return math.inf
    return (between / (k - 1)) / (within / (n - k))


def evaluate(matrix, assignment, kind: DistanceKind = EUCLIDEAN, distances=None,
             elapsed=0.0, config_echo=None) -> ValidityReport:
    """All three indexes plus inertia. Undefined indexes become ``None`` with a flag."""
    flags = []
    if kind.variant != "euclidean":
        flags.append(f"davies_bouldin_and_calinski_harabasz_in_euclidean_space_not_{kind.variant}")
    values = {}
    for name, fn in (("silhouette", lambda: silhouette(matrix, assignment, kind, distances)),
                     ("davies_bouldin", lambda: davies_bouldin(matrix, assignment)),
                     ("calinski_harabasz", lambda: calinski_harabasz(matrix, assignment))):
        try:
            values[name] = fn()
        except (DegenerateK, CoincidentCentroids) as exc:
            values[name] = None
            flags.append(f"{name}_undefined: {exc}")
    if values["calinski_harabasz"] is not None and math.isinf(values["calinski_harabasz"]):
        flags.append("calinski_harabasz_infinite: zero within-cluster scatter")
    flags.extend(getattr(assignment, "flags", ()))
    return ValidityReport(inertia=float(assignment.inertia), elapsed=float(elapsed),
                          config_echo=dict(config_echo or {}), flags=tuple(flags), **values)
