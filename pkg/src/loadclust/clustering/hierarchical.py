"""Agglomerative clustering with Lance-Williams distance updates."""

from __future__ import annotations

import numpy as np

from ..metrics import pairwise
from .base import data_of, finalize


def _lance_williams(linkage, d_il, d_jl, d_ij, n_i, n_j, n_l):
    if linkage == "single":
        return np.minimum(d_il, d_jl)
    if linkage == "complete":
        return np.maximum(d_il, d_jl)
    if linkage == "average":
        return (n_i * d_il + n_j * d_jl) / (n_i + n_j)
    # ward, on plain (not squared) euclidean distances
    total = n_i + n_j + n_l
    sq = ((n_i + n_l) * d_il ** 2 + (n_j + n_l) * d_jl ** 2 - n_l * d_ij ** 2) / total
    return np.sqrt(np.maximum(sq, 0.0))


def agglomerate(D, linkage, n_clusters):
    """Merge clusters until ``n_clusters`` remain.

    A cluster is identified by its smallest member index; among equally
    close pairs the one with the smallest ``(i, j)`` merges first. Returns
    the member lists of the surviving clusters and the merge log
    ``(i, j, distance, new_size)``.
    """
    n = D.shape[0]
    work = np.array(D, dtype=float)
    np.fill_diagonal(work, np.inf)
    active = np.ones(n, dtype=bool)
    sizes = np.ones(n)
    members = {i: [i] for i in range(n)}
    merges = []
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    for _ in range(n - n_clusters):
        masked = np.where(upper & active[:, None] & active[None, :], work, np.inf)
        flat = int(np.argmin(masked))
        i, j = divmod(flat, n)
        d_ij = work[i, j]
        others = np.flatnonzero(active)
        others = others[(others != i) & (others != j)]
        new = _lance_williams(linkage, work[i, others], work[j, others], d_ij,
                              sizes[i], sizes[j], sizes[others])
        work[i, others] = new
        work[others, i] = new
        active[j] = False
        work[j, :] = np.inf
        work[:, j] = np.inf
        sizes[i] += sizes[j]
        members[i] = sorted(members[i] + members.pop(j))
        merges.append((i, j, float(d_ij), int(sizes[i])))
    return [members[i] for i in np.flatnonzero(active)], merges


def hierarchical(matrix, config, distances=None):
    """Cut the dendrogram at ``config.k`` clusters; centers are member means and
    inertia is the within-cluster SSE about them."""
    X, labels = data_of(matrix)
    config.check(X.shape[0])
    D = distances.values if distances is not None else pairwise(X, config.distance, strict=False).values
    groups, merges = agglomerate(D, config.linkage, config.k)
    raw = np.empty(X.shape[0], dtype=int)
    for c, idx in enumerate(groups):
        raw[idx] = c
    centers = np.vstack([X[idx].mean(axis=0) for idx in groups])
    sse = float(((X - centers[raw]) ** 2).sum())
    return finalize(labels, raw, centers, inertia=sse, iterations=len(merges),
                    converged=True, algorithm="hierarchical", merges=tuple(merges))
