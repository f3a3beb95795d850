"""k-Shape: SBD assignment plus shape-extraction centroids."""

from __future__ import annotations

import numpy as np

from .._parallel import parallel_map
from ..metrics import sbd_many, shift_series
from .base import data_of, finalize, restart_rng


def zscore_rows(X):
    mu = X.mean(axis=1, keepdims=True)
    sd = X.std(axis=1, keepdims=True)
    return np.where(sd > 0, (X - mu) / np.where(sd > 0, sd, 1.0), 0.0)


def is_z_normalized(X, atol=1e-8):
    mu = X.mean(axis=1)
    sd = X.std(axis=1)
    return bool(np.all(np.abs(mu) <= atol) and np.all((np.abs(sd - 1) <= atol) | (sd <= atol)))


def shape_extraction(members, reference):
    """Centroid maximizing the summed squared NCC to the (aligned) members.

    Members are first shifted onto ``reference`` when it is non-zero, then
    z-normalized. The centroid is the dominant eigenvector of ``Q^T S Q``
    where ``S = A^T A`` and ``Q`` removes the mean; its sign is chosen so
    that most members correlate positively with it.
    """
    A = np.atleast_2d(np.asarray(members, dtype=float))
    d = A.shape[1]
    if np.linalg.norm(reference) > 0:
        _, shifts = sbd_many(reference[None, :], A)
        A = np.vstack([shift_series(a, int(w)) for a, w in zip(A, shifts[0])])
    A = zscore_rows(A)
    if not np.any(A):
        return np.zeros(d)
    Q = np.eye(d) - 1.0 / d
    M = Q.T @ (A.T @ A) @ Q
    _, vecs = np.linalg.eigh(M)
    c = vecs[:, -1]
    dots = A @ c
    pos, neg = int((dots > 0).sum()), int((dots < 0).sum())
    if neg > pos or (neg == pos and dots.sum() < 0):
        c = -c
    return zscore_rows(c[None, :])[0]


def _kshape_plusplus(X, k, rng):
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    closest = sbd_many(X, X[chosen])[0][:, 0] ** 2
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            pool = np.setdiff1d(np.arange(n), chosen)
            nxt = int(pool[rng.integers(pool.size)])
        else:
            nxt = int(rng.choice(n, p=closest / total))
        chosen.append(nxt)
        closest = np.minimum(closest, sbd_many(X, X[nxt:nxt + 1])[0][:, 0] ** 2)
    return X[chosen].copy()


def _repair_empty(labels, dist, centroids, X, k):
    labels = labels.copy()
    counts = np.bincount(labels, minlength=k)
    for j in np.flatnonzero(counts == 0):
        own = dist[np.arange(len(X)), labels].copy()
        own[counts[labels] <= 1] = -1.0
        i = int(np.argmax(own))
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] = 1
        centroids[j] = X[i]
    return labels


def refine(X, centroids, max_iter):
    k = centroids.shape[0]
    centroids = centroids.copy()
    labels = None
    history = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        dist = sbd_many(X, centroids)[0]
        new = _repair_empty(dist.argmin(axis=1), dist, centroids, X, k)
        history.append(float(dist[np.arange(len(X)), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            converged = True
            break
        labels = new
        centroids = np.vstack([shape_extraction(X[labels == j], centroids[j]) for j in range(k)])
    if not converged:
        dist = sbd_many(X, centroids)[0]
        labels = _repair_empty(dist.argmin(axis=1), dist, centroids, X, k)
        history.append(float(dist[np.arange(len(X)), labels].sum()))
    inertia = float(sbd_many(X, centroids)[0][np.arange(len(X)), labels].sum())
    return labels, centroids, inertia, it, converged, history


def kshape(matrix, config):
    """k-Shape clustering; inertia is the summed SBD to the assigned centroid.

    Rows that are not z-normalized are z-normalized here and the result
    carries the ``z_normalized_internally`` flag.
    """
    X, labels = data_of(matrix)
    config.check(X.shape[0])
    flags = ()
    if not is_z_normalized(X):
        X = zscore_rows(X)
        flags = ("z_normalized_internally",)
    k = config.k

    def one(restart):
        rng = restart_rng(config.seed, k, restart)
        return refine(X, _kshape_plusplus(X, k, rng), config.max_iter)

    runs = parallel_map(one, range(config.n_init))
    best = min(range(len(runs)), key=lambda r: (runs[r][2], r))
    raw, centroids, inertia, iters, converged, history = runs[best]
    return finalize(labels, raw, centroids, inertia=inertia, iterations=iters,
                    converged=converged, algorithm="kshape", history=tuple(history),
                    restart_histories=tuple(tuple(r[5]) for r in runs), flags=flags)
