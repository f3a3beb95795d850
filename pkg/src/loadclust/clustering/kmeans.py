"""Lloyd k-means with k-means++ seeding."""

from __future__ import annotations

import numpy as np

from .._parallel import parallel_map
from .base import REL_TOL, data_of, finalize, restart_rng


def _sq_dists(X, C):
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=-1)


def kmeans_plusplus(X, k, rng):
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    closest = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            pool = np.setdiff1d(np.arange(n), chosen)
            nxt = int(pool[rng.integers(pool.size)])
        else:
            nxt = int(rng.choice(n, p=closest / total))
        chosen.append(nxt)
        closest = np.minimum(closest, ((X - X[nxt]) ** 2).sum(axis=1))
    return X[chosen].copy()


def _repair_empty(X, labels, centers, k):
    """Give every empty cluster the point farthest from its own centroid."""
    labels = labels.copy()
    counts = np.bincount(labels, minlength=k)
    for j in np.flatnonzero(counts == 0):
        own = ((X - centers[labels]) ** 2).sum(axis=1)
        own[counts[labels] <= 1] = -1.0
        i = int(np.argmax(own))
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] = 1
        centers[j] = X[i]
    return labels


def _means(X, labels, k):
    return np.vstack([X[labels == j].mean(axis=0) for j in range(k)])


def lloyd(X, centers, max_iter):
    """Run Lloyd iterations; returns labels, centers, sse, iterations, converged, history."""
    k = centers.shape[0]
    centers = centers.copy()
    d2 = _sq_dists(X, centers)
    labels = d2.argmin(axis=1)
    history = [float(d2[np.arange(len(X)), labels].sum())]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        labels = _repair_empty(X, labels, centers, k)
        centers = _means(X, labels, k)
        d2 = _sq_dists(X, centers)
        new = d2.argmin(axis=1)
        history.append(float(d2[np.arange(len(X)), new].sum()))
        if np.array_equal(new, labels):
            converged = True
            break
        prev = history[-2]
        labels = new
        if prev > 0 and (prev - history[-1]) <= REL_TOL * prev:
            converged = True
            break
    labels = _repair_empty(X, labels, centers, k)
    centers = _means(X, labels, k)
    sse = float(((X - centers[labels]) ** 2).sum())
    if sse < history[-1]:
        history.append(sse)
    return labels, centers, sse, it, converged, history


def kmeans(matrix, config):
    """Best-of-``n_init`` Lloyd k-means; inertia is the within-cluster SSE."""
    X, labels = data_of(matrix)
    config.check(X.shape[0])
    k = config.k

    def one(restart):
        rng = restart_rng(config.seed, k, restart)
        return lloyd(X, kmeans_plusplus(X, k, rng), config.max_iter)

    runs = parallel_map(one, range(config.n_init))
    best = min(range(len(runs)), key=lambda r: (runs[r][2], r))
    raw, centers, sse, iters, converged, history = runs[best]
    return finalize(labels, raw, centers, inertia=sse, iterations=iters,
                    converged=converged, algorithm="kmeans", history=tuple(history),
                    restart_histories=tuple(tuple(r[5]) for r in runs))
