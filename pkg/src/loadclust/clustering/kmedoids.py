"""Partitioning Around Medoids (BUILD + SWAP, with seeded restarts)."""

from __future__ import annotations

import numpy as np

from ..metrics import pairwise
from .._parallel import parallel_map
from .base import data_of, finalize, restart_rng


def pam_build(D, k):
    medoids = [int(np.argmin(D.sum(axis=1)))]
    nearest = D[medoids[0]].copy()
    while len(medoids) < k:
        gains = np.maximum(nearest[None, :] - D, 0.0).sum(axis=1)
        gains[medoids] = -np.inf
        c = int(np.argmax(gains))
        medoids.append(c)
        nearest = np.minimum(nearest, D[c])
    return medoids


def pam_swap(D, medoids, max_iter):
    """Best-improvement swaps until no swap lowers the total dissimilarity."""
    medoids = list(medoids)
    cost = float(D[:, medoids].min(axis=1).sum())
    history = [cost]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        best = (cost, None, None)
        for slot in range(len(medoids)):
            others = medoids[:slot] + medoids[slot + 1:]
            rest = D[:, others].min(axis=1) if others else np.full(D.shape[0], np.inf)
            trial = np.minimum(D, rest[None, :]).sum(axis=1)
            trial[medoids] = np.inf
            o = int(np.argmin(trial))
            if trial[o] < best[0]:
                best = (float(trial[o]), slot, o)
        new_cost, slot, o = best
        if slot is None or new_cost >= cost - 1e-12 * max(1.0, cost):
            converged = True
            break
        medoids[slot] = o
        cost = new_cost
        history.append(cost)
    return medoids, cost, it, converged, history


def kmedoids(matrix, config, distances=None):
    """PAM clustering under ``config.distance``; inertia is the summed distance to medoids.

    Restart 0 starts from BUILD; the other ``n_init - 1`` restarts start from
    seeded random medoid sets, since SWAP only reaches a local optimum. The
    cheapest result wins, ties going to the earliest restart.
    """
    X, labels = data_of(matrix)
    config.check(X.shape[0])
    D = distances.values if distances is not None else pairwise(X, config.distance, strict=False).values
    n, k = X.shape[0], config.k

    def one(restart):
        if restart == 0:
            start = pam_build(D, k)
        else:
            rng = restart_rng(config.seed, k, restart)
            start = [int(i) for i in rng.choice(n, size=k, replace=False)]
        return pam_swap(D, start, config.max_iter)

    runs = parallel_map(one, range(config.n_init))
    best = min(range(len(runs)), key=lambda r: (runs[r][1], r))
    medoids, cost, iters, converged, history = runs[best]
    medoids = sorted(medoids)
    raw = D[:, medoids].argmin(axis=1)
    return finalize(labels, raw, X[medoids], medoids=medoids,
                    inertia=float(D[np.arange(n), np.asarray(medoids)[raw]].sum()),
                    iterations=iters, converged=converged, algorithm="kmedoids",
                    history=tuple(history), restart_histories=tuple(tuple(r[4]) for r in runs))
