"""Dissimilarity measures: euclidean, dynamic time warping, shape-based distance."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from ._parallel import parallel_map
from .errors import EmptySeries, InfeasibleWindow, LengthMismatch, ZeroVector

DISTANCES = ("euclidean", "dtw", "sbd")

# NCC values within this of the maximum are treated as tied
_SHIFT_TIE_TOL = 1e-12


@dataclass(frozen=True)
class DistanceKind:
    variant: str = "euclidean"
    dtw_window: int | None = None

    def __post_init__(self):
        if self.variant not in DISTANCES:
            raise ValueError(f"unknown distance {self.variant!r}; expected one of {DISTANCES}")
        if self.dtw_window is not None:
            if self.variant != "dtw":
                raise ValueError("dtw_window only applies to the dtw distance")
            if int(self.dtw_window) < 0:
                raise ValueError("dtw_window must be >= 0")

    def __call__(self, x, y):
        return distance(x, y, self)


EUCLIDEAN = DistanceKind("euclidean")
SBD = DistanceKind("sbd")


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray
    kind: DistanceKind

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return self.values.shape[0]


def _vec(x):
    return np.asarray(x, dtype=float).ravel()


def euclidean(x, y) -> float:
    x, y = _vec(x), _vec(y)
    if x.shape != y.shape:
        raise LengthMismatch(f"lengths differ: {x.size} vs {y.size}")
    return float(np.sqrt(np.sum((x - y) ** 2)))


@numba.njit(cache=True, nogil=True)
def _dtw_accumulated(x, y, window):
    n, m = x.shape[0], y.shape[0]
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, n + 1):
        lo = max(1, i - window)
        hi = min(m, i + window)
        for j in range(lo, hi + 1):
            diff = x[i - 1] - y[j - 1]
            cost = diff * diff
            best = acc[i - 1, j]
            if acc[i, j - 1] < best:
                best = acc[i, j - 1]
            if acc[i - 1, j - 1] < best:
                best = acc[i - 1, j - 1]
            acc[i, j] = cost + best
    return acc[n, m]


def dtw(x, y, window: int | None = None) -> float:
    """DTW with squared local cost; returns the square root of the path cost.

    ``window`` is a Sakoe-Chiba half-width: cells with ``|i - j| > window``
    are excluded.
    """
    x, y = _vec(x), _vec(y)
    if x.size == 0 or y.size == 0:
        raise EmptySeries("dtw needs non-empty series")
    if window is None:
        w = max(x.size, y.size)
    else:
        w = int(window)
        if w < abs(x.size - y.size):
            raise InfeasibleWindow(
                f"window {w} cannot align lengths {x.size} and {y.size}")
    return float(np.sqrt(_dtw_accumulated(x, y, w)))


def _shift_order(d):
    """Lag indices (into a 'full' correlation of length 2d-1) in tie-break order."""
    lags = np.arange(-(d - 1), d)
    return np.lexsort((lags > 0, np.abs(lags))), lags


def _pick(ncc, d):
    order, lags = _shift_order(d)
    ordered = ncc[..., order]
    best = ordered.max(axis=-1, keepdims=True)
    first = np.argmax(ordered >= best - _SHIFT_TIE_TOL, axis=-1)
    return np.take_along_axis(ordered, first[..., None], -1)[..., 0], lags[order][first]


def ncc_direct(x, y) -> np.ndarray:
    """Normalized cross-correlation for every lag ``w`` in ``[-(d-1), d-1]``.

    Entry ``w + d - 1`` holds ``sum_i x[i] * y[i - w] / (|x| |y|)`` with
    zero padding, i.e. the correlation after shifting ``y`` right by ``w``.
    """
    x, y = _vec(x), _vec(y)
    if x.shape != y.shape:
        raise LengthMismatch(f"lengths differ: {x.size} vs {y.size}")
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ZeroVector("NCC is undefined for a zero-norm series")
    return np.correlate(x, y, "full") / (nx * ny)


def ncc_fft(X, Y) -> np.ndarray:
    """Batched NCC through the FFT; result has shape ``(len(X), len(Y), 2d-1)``.

    Pairs involving a zero-norm row get an all-zero correlation.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    d = X.shape[1]
    if Y.shape[1] != d:
        raise LengthMismatch(f"lengths differ: {d} vs {Y.shape[1]}")
    size = 1 << int(np.ceil(np.log2(2 * d - 1)))
    fx = np.fft.rfft(X, size)
    fy = np.fft.rfft(Y, size)
    circ = np.fft.irfft(fx[:, None, :] * np.conj(fy)[None, :, :], size)
    full = np.concatenate([circ[..., size - (d - 1):], circ[..., :d]], axis=-1)
    norms = np.linalg.norm(X, axis=1)[:, None] * np.linalg.norm(Y, axis=1)[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = full / norms[..., None]
    out[norms == 0] = 0.0
    return out


def sbd(x, y) -> tuple[float, int]:
    """Shape-based distance ``1 - max_w NCC_w(x, y)`` and the maximizing shift.

    Ties go to the smallest ``|w|``, then to the negative shift.
    """
    ncc = ncc_direct(x, y)
    value, shift = _pick(ncc, _vec(x).size)
    return float(max(0.0, 1.0 - value)), int(shift)


def sbd_many(X, Y) -> tuple[np.ndarray, np.ndarray]:
    """SBD of every row of ``X`` against every row of ``Y`` via :func:`ncc_fft`."""
    ncc = ncc_fft(X, Y)
    value, shift = _pick(ncc, ncc.shape[-1] // 2 + 1)
    return np.maximum(0.0, 1.0 - value), shift


def shift_series(y, w):
    """Shift ``y`` right by ``w`` steps (left if negative), zero padding."""
    y = _vec(y)
    out = np.zeros_like(y)
    if w >= 0:
        out[w:] = y[:y.size - w]
    else:
        out[:w] = y[-w:]
    return out


def distance(x, y, kind: DistanceKind = EUCLIDEAN) -> float:
    if kind.variant == "euclidean":
        return euclidean(x, y)
    if kind.variant == "dtw":
        return dtw(x, y, kind.dtw_window)
    return sbd(x, y)[0]


def cross_distances(X, Y, kind: DistanceKind = EUCLIDEAN) -> np.ndarray:
    """Rectangular distance matrix between the rows of ``X`` and of ``Y``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if kind.variant == "euclidean":
        return np.sqrt(((X[:, None, :] - Y[None, :, :]) ** 2).sum(axis=-1))
    if kind.variant == "sbd":
        return sbd_many(X, Y)[0]
    return np.array([[dtw(x, y, kind.dtw_window) for y in Y] for x in X])


def pairwise(matrix, kind: DistanceKind = EUCLIDEAN, strict: bool = True) -> DistanceMatrix:
    """Symmetric distance matrix over the rows of ``matrix``.

    Only the upper triangle is evaluated, rows in parallel. Under SBD a zero
    row raises :class:`ZeroVector` when ``strict``; otherwise it sits at
    distance 1 from every other row.
    """
    data = getattr(matrix, "data", matrix)
    X = np.asarray(data, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise ValueError("pairwise needs at least 2 rows")
    if kind.variant == "sbd" and strict:
        zero = np.flatnonzero(np.linalg.norm(X, axis=1) == 0)
        if zero.size:
            raise ZeroVector(f"row {int(zero[0])} has zero norm; SBD undefined")

    def upper_row(i):
        rest = X[i + 1:]
        if rest.shape[0] == 0:
            return np.empty(0)
        if kind.variant == "euclidean":
            return np.sqrt(np.sum((rest - X[i]) ** 2, axis=1))
        if kind.variant == "sbd":
            dist = sbd_many(X[i:i + 1], rest)[0][0]
            if not strict and not np.linalg.norm(X[i]):
                dist[:] = 1.0
            return dist
        w = max(X.shape[1], 1) if kind.dtw_window is None else int(kind.dtw_window)
        return np.array([np.sqrt(_dtw_accumulated(X[i], y, w)) for y in rest])

    rows = parallel_map(upper_row, range(n))
    out = np.zeros((n, n))
    for i, row in enumerate(rows):
        out[i, i + 1:] = row
    out = out + out.T
    return DistanceMatrix(out, kind)
