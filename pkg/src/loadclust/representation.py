"""Row-wise normalization and functional PCA.

Both transforms implement :class:`Representation`, so a new representation
(an auto-encoder, a spline basis) can be dropped into the pipeline without
touching the other stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .dataset import TimeSeriesDataset

NORMALIZATIONS = ("z_score", "mean", "min_max", "none")


@dataclass(frozen=True)
class RepresentedMatrix:
    labels: tuple
    data: np.ndarray
    transforms: tuple = ()
    explained_variance_ratio: tuple | None = None

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] != len(self.labels):
            raise ValueError(f"data shape {data.shape} does not match {len(self.labels)} labels")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "transforms", tuple(self.transforms))

    @classmethod
    def from_dataset(cls, dataset: TimeSeriesDataset):
        return cls(dataset.labels, dataset.values, ())

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def m(self):
        return self.data.shape[1]


@dataclass(frozen=True)
class FPCAConfig:
    p: int = 3
    center: bool = True


class Representation(Protocol):
    name: str

    def apply(self, matrix: RepresentedMatrix) -> RepresentedMatrix: ...


def _as_matrix(obj) -> RepresentedMatrix:
    if isinstance(obj, RepresentedMatrix):
        return obj
    if isinstance(obj, TimeSeriesDataset):
        return RepresentedMatrix.from_dataset(obj)
    raise TypeError(f"expected TimeSeriesDataset or RepresentedMatrix, got {type(obj).__name__}")


def normalize(dataset, kind: str = "z_score") -> RepresentedMatrix:
    """Normalize every series independently.

    z_score uses the population standard deviation. ``mean`` divides by the
    series mean. Flat rows (or zero-mean rows for ``mean``) cannot be
    normalized; they become zeros (ones for ``mean``) and their labels are
    listed under ``degenerate`` in the provenance entry.
    """
    if kind not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {kind!r}; expected one of {NORMALIZATIONS}")
    src = _as_matrix(dataset)
    x = src.data
    out = np.array(x, dtype=float)
    if kind == "z_score":
        mu = x.mean(axis=1, keepdims=True)
        sigma = x.std(axis=1, keepdims=True)
        bad = (sigma[:, 0] <= 1e-12 * np.maximum(1.0, np.abs(mu[:, 0])))
        safe = np.where(sigma > 0, sigma, 1.0)
        out = (x - mu) / safe
        out[bad] = 0.0
    elif kind == "mean":
        mu = x.mean(axis=1, keepdims=True)
        bad = np.abs(mu[:, 0]) <= 1e-12
        out = x / np.where(bad[:, None], 1.0, mu)
        out[bad] = 1.0
    elif kind == "min_max":
        lo = x.min(axis=1, keepdims=True)
        span = x.max(axis=1, keepdims=True) - lo
        bad = span[:, 0] <= 1e-12 * np.maximum(1.0, np.abs(lo[:, 0]))
        out = (x - lo) / np.where(bad[:, None], 1.0, span)
        out[bad] = 0.0
    else:
        bad = np.zeros(src.n, dtype=bool)

    entry = {"name": "normalize", "kind": kind,
             "degenerate": [src.labels[i] for i in np.flatnonzero(bad)]}
    return RepresentedMatrix(src.labels, out, src.transforms + (entry,),
                             src.explained_variance_ratio)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def fpca(matrix, config: FPCAConfig = FPCAConfig()) -> RepresentedMatrix:
    """Project the curves on the leading eigenfunctions of their covariance.

    The curves are sampled on a uniform grid, so the covariance operator is
    discretized as the ordinary sample covariance matrix. The eigenproblem
    is solved on the d x d covariance when d <= n, otherwise on the n x n
    Gram matrix.
    """
    src = _as_matrix(matrix)
    n, d = src.data.shape
    p = int(config.p)
    if n < 2:
        raise ValueError("fpca needs at least 2 series")
    if not 1 <= p <= min(n - 1, d):
        raise ValueError(f"p={p} outside [1, min(n-1, d)] = [1, {min(n - 1, d)}]")

    x = src.data
    xc = x - x.mean(axis=0) if config.center else x.copy()
    if d <= n:
        cov = xc.T @ xc / (n - 1)
        evals, evecs = np.linalg.eigh(cov)
        order = np.argsort(evals)[::-1]
        evals, evecs = np.clip(evals[order], 0.0, None), evecs[:, order]
        loadings = evecs[:, :p]
        total = float(np.trace(cov))
    else:
        gram = xc @ xc.T / (n - 1)
        evals, u = np.linalg.eigh(gram)
        order = np.argsort(evals)[::-1]
        evals, u = np.clip(evals[order], 0.0, None), u[:, order]
        total = float(np.trace(gram))
        tol = max(evals[0], 1.0) * 1e-12 if evals.size else 0.0
        loadings = np.zeros((d, p))
        for j in range(p):
            if evals[j] > tol:
                loadings[:, j] = xc.T @ u[:, j] / np.sqrt(evals[j] * (n - 1))
    loadings = _fix_signs(loadings)
    scores = xc @ loadings
    ratio = tuple(float(v) for v in (evals[:p] / total if total > 0 else np.zeros(p)))

    entry = {"name": "fpca", "p": p, "center": bool(config.center)}
    return RepresentedMatrix(src.labels, scores, src.transforms + (entry,), ratio)


@dataclass(frozen=True)
class Normalization:
    kind: str = "z_score"
    name: str = field(default="normalize", init=False)

    def apply(self, matrix):
        return normalize(matrix, self.kind)


@dataclass(frozen=True)
class FPCA:
    config: FPCAConfig = FPCAConfig()
    name: str = field(default="fpca", init=False)

    def apply(self, matrix):
        return fpca(matrix, self.config)
