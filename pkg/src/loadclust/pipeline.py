"""End-to-end job: ingest, aggregate, align, represent, cluster, score, write.

Outputs of one run (all written atomically into ``output_dir``):

``labels.json``
    ``{"run_id", "clusters": {"<id>": [labels...]}, "assignment": {label: id}}``
``scores.json``
    validity indexes, inertia, ``elapsed_seconds``, the echoed configuration,
    dropped series and, for a sweep, the ``per_k`` table.
``report.html``
    self-contained per-cluster plot (when ``report`` is on).
``figures/*.png``
    matplotlib figures (when ``figures`` is on).
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import shutil
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .clustering import KSweepResult, run_algorithm, sweep_k
from .config import RunConfig, validate
from .dataset import aggregate, ingest, interpolate_and_align
from .errors import DataError, StageError
from .metrics import pairwise
from .report import render_report
from .representation import fpca, normalize
from .validity import ValidityReport, evaluate

logger = logging.getLogger(__name__)

LABELS_FILE = "labels.json"
SCORES_FILE = "scores.json"
REPORT_FILE = "report.html"
FIGURES_DIR = "figures"


@dataclass
class RunOutputs:
    labels_file: Path
    scores_file: Path
    report_file: Path | None
    run_id: str
    figure_files: tuple = ()
    assignment: object = None
    validity: ValidityReport | None = None
    sweep: KSweepResult | None = None
    dataset: object = None
    extras: dict = field(default_factory=dict)


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def atomic_write(path, data):
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": "\n"})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def compute_run_id(config: RunConfig, input_bytes: bytes) -> str:
    """Digest of the canonical configuration (paths excluded) and the input bytes."""
    h = hashlib.sha256()
    h.update(config.canonical_json(exclude=("input_path", "output_dir")).encode())
    h.update(hashlib.sha256(input_bytes).hexdigest().encode())
    return h.hexdigest()[:16]


def labels_document(assignment, run_id=None):
    clusters = {str(c): sorted(assignment.members(c)) for c in range(assignment.k)}
    return {"run_id": run_id, "clusters": clusters,
            "assignment": dict(sorted(assignment.labels_to_cluster.items()))}


def write_labels(assignment, path, run_id=None):
    return atomic_write(path, dumps(labels_document(assignment, run_id)))


def scores_document(report, *, run_id=None, sweep=None, config=None, dropped=None,
                    assignment=None, explained_variance_ratio=None):
    if isinstance(report, KSweepResult):
        sweep, entry = report, next(e for e in report.per_k if e.k == report.suggested_k)
        report = ValidityReport(entry.silhouette, entry.davies_bouldin, entry.calinski_harabasz,
                                entry.inertia)
    doc = {
        "run_id": run_id,
        "mode": "sweep" if sweep is not None else "fixed",
        "silhouette": report.silhouette,
        "davies_bouldin": report.davies_bouldin,
        "calinski_harabasz": report.calinski_harabasz,
        "inertia": report.inertia,
        "elapsed_seconds": max(0.0, float(report.elapsed)),
        "config": config if config is not None else report.config_echo,
        "flags": list(report.flags),
        "dropped_labels": dict(sorted((dropped or {}).items())),
    }
    if assignment is not None:
        doc["k"] = assignment.k
        doc["n_series"] = len(assignment.labels)
        doc["cluster_sizes"] = assignment.sizes().tolist()
        doc["iterations"] = assignment.iterations
        doc["converged"] = assignment.converged
    if explained_variance_ratio is not None:
        doc["explained_variance_ratio"] = list(explained_variance_ratio)
    if sweep is not None:
        doc["per_k"] = [e.as_dict() for e in sweep.per_k]
        doc["suggested_k"] = sweep.suggested_k
        doc["suggestion_method"] = sweep.method
    return doc


def write_scores(report, path, **meta):
    """``report`` is a :class:`ValidityReport` or a :class:`KSweepResult`."""
    return atomic_write(path, dumps(scores_document(report, **meta)))


def write_report(dataset, assignment, path, **kwargs):
    """``dataset`` is a TimeSeriesDataset or RepresentedMatrix whose rows are drawn."""
    curves = getattr(dataset, "values", None)
    if curves is None:
        curves = dataset.data
    kwargs.setdefault("grid", getattr(dataset, "grid", None))
    return atomic_write(path, render_report(curves, dataset.labels, assignment, **kwargs))


class _Stages:
    def __init__(self):
        self.completed = []

    def __call__(self, name, fn, *args, **kwargs):
        try:
            out = fn(*args, **kwargs)
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, exc, self.completed) from exc
        self.completed.append(name)
        logger.debug("stage %s done", name)
        return out


def _read_input(path):
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read input {path}: {exc}") from exc


def _cluster_and_score(config, matrix):
    c = config.cluster
    distances = None
    if c.algorithm in ("kmedoids", "hierarchical") or c.distance.variant != "euclidean":
        distances = pairwise(matrix, c.distance, strict=False)
    if config.k_sweep is not None:
        ks = config.k_sweep
        sweep = sweep_k(matrix, c, (ks.k_min, ks.k_max), method=ks.method, distances=distances)
        return sweep.assignments[sweep.suggested_k], sweep, distances
    return run_algorithm(matrix, c, distances), None, distances


def run(config) -> RunOutputs:
    """Execute one job; raises :class:`StageError` and leaves no new files on failure."""
    config = validate(config)
    stage = _Stages()
    started = time.perf_counter()

    raw_bytes = stage("read", _read_input, config.input_path)
    run_id = compute_run_id(config, raw_bytes)
    table = stage("ingest", ingest, raw_bytes, config.mapping, config.timestamp_format,
                  config.delimiter)
    table = stage("aggregate", aggregate, table, config.resolution, config.aggregation_method)
    dataset = stage("interpolate", interpolate_and_align, table, config.max_gap,
                    drop_insufficient=True, unit=config.unit)
    normalized = stage("normalize", normalize, dataset, config.normalization)
    matrix = normalized
    if config.fpca is not None:
        matrix = stage("fpca", fpca, normalized, config.fpca)
    assignment, sweep, distances = stage("cluster", _cluster_and_score, config, matrix)
    elapsed = time.perf_counter() - started
    echo = config.to_dict()
    validity = stage("score", evaluate, matrix, assignment, config.cluster.distance, distances,
                     elapsed if config.record_elapsed else 0.0, echo)

    outputs = stage("write", _write_outputs, config, run_id, dataset, normalized, matrix,
                    assignment, validity, sweep)
    outputs.assignment, outputs.validity, outputs.sweep = assignment, validity, sweep
    outputs.dataset = dataset
    logger.info("run %s: k=%d, silhouette=%s, elapsed %.2fs", run_id, assignment.k,
                validity.silhouette, time.perf_counter() - started)
    return outputs


def _write_outputs(config, run_id, dataset, normalized, matrix, assignment, validity, sweep):
    out_dir = Path(config.output_dir)
    created = not out_dir.exists()
    out_dir.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out_dir))
    try:
        files = [LABELS_FILE, SCORES_FILE]
        (staging / LABELS_FILE).write_text(dumps(labels_document(assignment, run_id)), encoding="utf-8")
        scores = scores_document(validity, run_id=run_id, sweep=sweep, config=validity.config_echo,
                                 dropped=dataset.dropped, assignment=assignment,
                                 explained_variance_ratio=matrix.explained_variance_ratio)
        (staging / SCORES_FILE).write_text(dumps(scores), encoding="utf-8")
        if config.report:
            html = render_report(normalized.data, normalized.labels, assignment, grid=dataset.grid,
                                 title=f"Clusters: {assignment.algorithm}, k={assignment.k}",
                                 validity=validity, run_id=run_id, dropped=dataset.dropped)
            (staging / REPORT_FILE).write_text(html, encoding="utf-8")
            files.append(REPORT_FILE)
        figures = []
        if config.figures:
            from .plotting import plot_clusters, plot_sweep

            (staging / FIGURES_DIR).mkdir()
            plot_clusters(staging / FIGURES_DIR / "clusters.png", normalized.data,
                          normalized.labels, assignment, grid=dataset.grid)
            figures.append(f"{FIGURES_DIR}/clusters.png")
            if sweep is not None:
                plot_sweep(staging / FIGURES_DIR / "sweep.png", sweep)
                figures.append(f"{FIGURES_DIR}/sweep.png")
            (out_dir / FIGURES_DIR).mkdir(exist_ok=True)
        for name in files + figures:
            os.replace(staging / name, out_dir / name)
    except BaseException:
        if created:
            shutil.rmtree(out_dir, ignore_errors=True)
        raise
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return RunOutputs(out_dir / LABELS_FILE, out_dir / SCORES_FILE,
                      out_dir / REPORT_FILE if config.report else None, run_id,
                      tuple(out_dir / f for f in figures))

