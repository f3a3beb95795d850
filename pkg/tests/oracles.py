"""Slow, independent reference implementations used as test oracles.

Nothing here imports from loadclust.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def dtw_recursive(x, y, window=None):
    x = [float(v) for v in x]
    y = [float(v) for v in y]

    @lru_cache(maxsize=None)
    def cost(i, j):
        if window is not None and abs(i - j) > window:
            return math.inf
        # d * d is the correctly rounded square; libm pow(d, 2) can be an ulp off
        diff = x[i] - y[j]
        local = diff * diff
        if i == 0 and j == 0:
            return local
        best = math.inf
        if i > 0:
            best = min(best, cost(i - 1, j))
        if j > 0:
            best = min(best, cost(i, j - 1))
        if i > 0 and j > 0:
            best = min(best, cost(i - 1, j - 1))
        return local + best

    return math.sqrt(cost(len(x) - 1, len(y) - 1))


def sbd_scan(x, y):
    """Brute force over every shift; returns (distance, max NCC)."""
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    d = len(x)
    norm = math.sqrt(sum(v * v for v in x)) * math.sqrt(sum(v * v for v in y))
    best = -math.inf
    for w in range(-(d - 1), d):
        cc = sum(x[i] * y[i - w] for i in range(d) if 0 <= i - w < d)
        best = max(best, cc / norm)
    return 1.0 - best, best


def _dist(a, b):
    return math.sqrt(sum((p - q) ** 2 for p, q in zip(a, b)))


def _mean(rows):
    return [sum(col) / len(rows) for col in zip(*rows)]


def silhouette_direct(X, labels, dist=_dist):
    X = [list(map(float, r)) for r in X]
    labels = list(labels)
    ids = sorted(set(labels))
    total = 0.0
    for i, xi in enumerate(X):
        own = [j for j in range(len(X)) if labels[j] == labels[i] and j != i]
        if not own:
            continue
        a = sum(dist(xi, X[j]) for j in own) / len(own)
        b = min(sum(dist(xi, X[j]) for j in range(len(X)) if labels[j] == c)
                / sum(1 for j in range(len(X)) if labels[j] == c)
                for c in ids if c != labels[i])
        total += (b - a) / max(a, b) if max(a, b) > 0 else 0.0
    return total / len(X)


def davies_bouldin_direct(X, labels):
    X = [list(map(float, r)) for r in X]
    ids = sorted(set(labels))
    members = {c: [X[i] for i in range(len(X)) if labels[i] == c] for c in ids}
    cent = {c: _mean(members[c]) for c in ids}
    scat = {c: sum(_dist(r, cent[c]) for r in members[c]) / len(members[c]) for c in ids}
    return sum(max((scat[a] + scat[b]) / _dist(cent[a], cent[b]) for b in ids if b != a)
               for a in ids) / len(ids)


def calinski_harabasz_direct(X, labels):
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels)
    ids = sorted(set(labels.tolist()))
    n, k = len(X), len(ids)
    mu = X.mean(axis=0)
    B = np.zeros((X.shape[1], X.shape[1]))
    W = np.zeros_like(B)
    for c in ids:
        Xc = X[labels == c]
        mc = Xc.mean(axis=0)
        B += len(Xc) * np.outer(mc - mu, mc - mu)
        W += (Xc - mc).T @ (Xc - mc)
    return (np.trace(B) / (k - 1)) / (np.trace(W) / (n - k))


def agglomerative_naive(X, linkage, n_clusters, D=None):
    """Recompute every inter-cluster linkage from the members at each merge."""
    X = np.asarray(X, dtype=float)
    n = len(X)
    if D is None:
        D = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
    clusters = [[i] for i in range(n)]

    def link(a, b):
        pairs = [D[i, j] for i in a for j in b]
        if linkage == "single":
            return min(pairs)
        if linkage == "complete":
            return max(pairs)
        if linkage == "average":
            return sum(pairs) / len(pairs)
        ca, cb = X[a].mean(axis=0), X[b].mean(axis=0)
        return math.sqrt(2 * len(a) * len(b) / (len(a) + len(b))) * float(np.linalg.norm(ca - cb))

    while len(clusters) > n_clusters:
        best = None
        for p, q in itertools.combinations(range(len(clusters)), 2):
            a, b = clusters[p], clusters[q]
            key = (link(a, b), min(a), min(b))
            if best is None or key < best[0]:
                best = (key, p, q)
        _, p, q = best
        clusters[p] = sorted(clusters[p] + clusters[q])
        del clusters[q]
    return {frozenset(c) for c in clusters}


def best_medoids(D, k):
    """Exhaustive search over all medoid subsets; returns (cost, subsets achieving it)."""
    n = D.shape[0]
    scored = []
    for subset in itertools.combinations(range(n), k):
        cost = float(D[:, list(subset)].min(axis=1).sum())
        scored.append((cost, subset))
    best = min(c for c, _ in scored)
    return best, [s for c, s in scored if c <= best + 1e-9 * max(1.0, best)]


def best_sse_partition(X, k):
    """Exhaustive minimum within-cluster SSE partition of a small point set."""
    X = np.asarray(X, dtype=float)
    n = len(X)
    best = (math.inf, None)
    for assign in itertools.product(range(k), repeat=n):
        if len(set(assign)) < k or assign[0] != 0:
            continue
        a = np.array(assign)
        sse = sum(((X[a == c] - X[a == c].mean(axis=0)) ** 2).sum() for c in range(k))
        if sse < best[0]:
            best = (sse, a)
    return best


def partition(labels_seq):
    groups = {}
    for i, c in enumerate(labels_seq):
        groups.setdefault(int(c), set()).add(i)
    return {frozenset(g) for g in groups.values()}


def fpca_dense(X, p, center=True):
    """Scores via np.cov and a general (non-symmetric) eigensolver."""
    X = np.asarray(X, dtype=float)
    Xc = X - X.mean(axis=0) if center else X
    C = np.cov(X, rowvar=False) if center else Xc.T @ Xc / (len(X) - 1)
    vals, vecs = np.linalg.eig(C)
    vals, vecs = vals.real, vecs.real
    order = np.argsort(-vals)
    vecs = vecs[:, order[:p]]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    for j in range(p):
        i = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[i, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return Xc @ vecs, vals[order[:p]] / vals.sum()


def _z(v):
    v = np.asarray(v, dtype=float)
    s = v.std()
    return (v - v.mean()) / s if s > 0 else np.zeros_like(v)


def _shift(y, w):
    out = np.zeros_like(y)
    for i in range(len(y)):
        if 0 <= i - w < len(y):
            out[i] = y[i - w]
    return out


def _best_shift(ref, y):
    d = len(ref)
    best = (-math.inf, 0)
    for w in sorted(range(-(d - 1), d), key=lambda w: (abs(w), w > 0)):
        cc = float(np.dot(ref, _shift(y, w)))
        if cc > best[0] + 1e-12:
            best = (cc, w)
    return best[1]


def shape_centroid(rows, iterations=3):
    """Power-iteration shape extraction with brute-force alignment."""
    rows = [_z(r) for r in rows]
    d = len(rows[0])
    c = np.zeros(d)
    for _ in range(iterations):
        aligned = [_z(_shift(r, _best_shift(c, r))) if np.any(c) else r for r in rows]
        S = sum(np.outer(a, a) for a in aligned)
        P = np.eye(d) - np.full((d, d), 1.0 / d)
        M = P @ S @ P
        v = np.random.default_rng(0).standard_normal(d)
        for _ in range(500):
            v = M @ v
            v /= np.linalg.norm(v)
        if sum(float(np.dot(a, v)) for a in aligned) < 0:
            v = -v
        c = _z(v)
    return c


def kshape_exhaustive(X, k=2):
    """Minimum summed-SBD partition over all 2-way splits, with shape centroids."""
    X = np.asarray(X, dtype=float)
    n = len(X)
    best = (math.inf, None)
    for assign in itertools.product(range(k), repeat=n):
        if assign[0] != 0 or len(set(assign)) < k:
            continue
        a = np.array(assign)
        cost = 0.0
        for c in range(k):
            cen = shape_centroid(X[a == c])
            cost += sum(sbd_scan(x, cen)[0] for x in X[a == c])
        if cost < best[0]:
            best = (cost, a)
    return best
