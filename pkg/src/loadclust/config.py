"""Declarative run configuration: parsing, defaults and aggregated validation.

A configuration is a JSON document. Only ``input_path``, ``mapping`` and
``output_dir`` are required, plus exactly one of ``cluster.k`` (a single
run) or ``k_sweep`` (a sweep over k). Every other field has a documented
default and is echoed back explicitly by :meth:`RunConfig.to_dict`.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path

from .clustering.base import ClusterConfig, DEFAULT_MAX_ITER, DEFAULT_N_INIT
from .dataset import DEFAULT_MAX_GAP, DEFAULT_TIMESTAMP_FORMAT, ColumnMapping
from .errors import ValidationError
from .metrics import DISTANCES, DistanceKind
from .representation import NORMALIZATIONS, FPCAConfig

DEFAULTS = {
    "timestamp_format": DEFAULT_TIMESTAMP_FORMAT,
    "delimiter": ",",
    "unit": "",
    "aggregation": {"resolution": "15min", "method": "mean"},
    "interpolation": {"max_gap": DEFAULT_MAX_GAP},
    "normalization": "z_score",
    "representation": {"kind": "none"},
    "cluster": {
        "algorithm": "kmeans",
        "k": None,
        "distance": {"kind": "euclidean", "dtw_window": None},
        "seed": 0,
        "max_iter": DEFAULT_MAX_ITER,
        "n_init": DEFAULT_N_INIT,
        "linkage": "ward",
    },
    "k_sweep": None,
    "report": True,
    "figures": False,
    "record_elapsed": True,
}

TOP_LEVEL_KEYS = {"input_path", "mapping", "output_dir"} | set(DEFAULTS)

_DURATION = re.compile(r"^\s*(\d+)\s*(s|sec|min|m|h|d)?\s*$")
_UNIT_SECONDS = {"s": 1, "sec": 1, "min": 60, "m": 60, "h": 3600, "d": 86400, None: 60}


def parse_duration(value) -> timedelta:
    """``"15min"``, ``"1h"``, ``"30s"``, ``"1d"``; a bare number means minutes."""
    if isinstance(value, bool):
        raise ValueError(f"not a duration: {value!r}")
    if isinstance(value, (int, float)):
        value = str(int(value)) if float(value).is_integer() else value
    m = _DURATION.match(str(value))
    if not m:
        raise ValueError(f"not a duration: {value!r}")
    seconds = int(m.group(1)) * _UNIT_SECONDS[m.group(2)]
    if seconds <= 0:
        raise ValueError("duration must be positive")
    return timedelta(seconds=seconds)


def format_duration(td: timedelta) -> str:
    s = int(td.total_seconds())
    return f"{s // 60}min" if s % 60 == 0 else f"{s}s"


@dataclass(frozen=True)
class KSweep:
    k_min: int
    k_max: int
    method: str = "elbow"


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    mapping: ColumnMapping
    output_dir: str
    timestamp_format: str = DEFAULT_TIMESTAMP_FORMAT
    delimiter: str = ","
    unit: str = ""
    resolution: timedelta = timedelta(minutes=15)
    aggregation_method: str = "mean"
    max_gap: int | None = DEFAULT_MAX_GAP
    normalization: str = "z_score"
    fpca: FPCAConfig | None = None
    cluster: ClusterConfig = field(default_factory=ClusterConfig)
    k_sweep: KSweep | None = None
    report: bool = True
    figures: bool = False
    record_elapsed: bool = True

    def to_dict(self):
        c = self.cluster
        return {
            "input_path": str(self.input_path),
            "mapping": {"time_column": self.mapping.time_column,
                        "value_column": self.mapping.value_column,
                        "label_column": self.mapping.label_column},
            "output_dir": str(self.output_dir),
            "timestamp_format": self.timestamp_format,
            "delimiter": self.delimiter,
            "unit": self.unit,
            "aggregation": {"resolution": format_duration(self.resolution),
                            "method": self.aggregation_method},
            "interpolation": {"max_gap": self.max_gap},
            "normalization": self.normalization,
            "representation": ({"kind": "none"} if self.fpca is None else
                               {"kind": "fpca", "p": self.fpca.p, "center": self.fpca.center}),
            "cluster": {
                "algorithm": c.algorithm,
                "k": c.k,
                "distance": {"kind": c.distance.variant, "dtw_window": c.distance.dtw_window},
                "seed": int(c.seed),
                "max_iter": c.max_iter,
                "n_init": c.n_init,
                "linkage": c.linkage,
            },
            "k_sweep": (None if self.k_sweep is None else
                        {"k_min": self.k_sweep.k_min, "k_max": self.k_sweep.k_max,
                         "method": self.k_sweep.method}),
            "report": self.report,
            "figures": self.figures,
            "record_elapsed": self.record_elapsed,
        }

    def canonical_json(self, exclude=("output_dir",)):
        d = {k: v for k, v in self.to_dict().items() if k not in exclude}
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


def _merge(defaults, given):
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        if isinstance(out.get(key), dict) and isinstance(value, dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def validate(raw) -> RunConfig:
    """Check every constraint and materialize defaults.

    ``raw`` is a dict (or an already-built :class:`RunConfig`, which is
    round-tripped through its dict form). All violations are collected into
    one :class:`ValidationError`.
    """
    if isinstance(raw, RunConfig):
        raw = raw.to_dict()
    if not isinstance(raw, dict):
        raise ValidationError([("", "configuration must be a JSON object")])
    problems = []
    for key in sorted(set(raw) - TOP_LEVEL_KEYS):
        problems.append((key, "unknown field"))
    cfg = _merge(DEFAULTS, raw)

    for key in ("input_path", "output_dir"):
        if not isinstance(cfg.get(key), str) or not cfg.get(key):
            problems.append((key, "required non-empty path"))

    mapping = None
    m = cfg.get("mapping")
    if not isinstance(m, dict):
        problems.append(("mapping", "required object with time_column, value_column, label_column"))
    else:
        for extra in sorted(set(m) - {"time_column", "value_column", "label_column"}):
            problems.append((f"mapping.{extra}", "unknown field"))
        mapping = ColumnMapping(m.get("time_column"), m.get("value_column"), m.get("label_column"))
        problems += [(f"mapping.{p}", msg) for p, msg in mapping.problems()]

    for key in ("timestamp_format", "unit"):
        if not isinstance(cfg[key], str):
            problems.append((key, "must be a string"))
    if not isinstance(cfg["delimiter"], str) or len(cfg["delimiter"]) != 1:
        problems.append(("delimiter", "must be a single character"))

    agg = cfg["aggregation"]
    resolution = timedelta(minutes=15)
    if not isinstance(agg, dict):
        problems.append(("aggregation", "must be an object"))
        agg = DEFAULTS["aggregation"]
    try:
        resolution = parse_duration(agg.get("resolution"))
    except ValueError as exc:
        problems.append(("aggregation.resolution", str(exc)))
    if agg.get("method") not in ("sum", "mean"):
        problems.append(("aggregation.method", "must be 'sum' or 'mean'"))

    interp = cfg["interpolation"] if isinstance(cfg["interpolation"], dict) else {}
    max_gap = interp.get("max_gap", DEFAULT_MAX_GAP)
    if max_gap is not None and (not _is_int(max_gap) or max_gap < 0):
        problems.append(("interpolation.max_gap", "must be a non-negative integer or null"))

    if cfg["normalization"] not in NORMALIZATIONS:
        problems.append(("normalization", f"must be one of {NORMALIZATIONS}"))

    fpca = None
    rep = cfg["representation"]
    if not isinstance(rep, dict) or rep.get("kind") not in ("none", "fpca"):
        problems.append(("representation.kind", "must be 'none' or 'fpca'"))
    elif rep["kind"] == "fpca":
        p = rep.get("p", 3)
        center = rep.get("center", True)
        if not _is_int(p) or p < 1:
            problems.append(("representation.p", "must be a positive integer"))
        if not isinstance(center, bool):
            problems.append(("representation.center", "must be a boolean"))
        fpca = FPCAConfig(p if _is_int(p) else 3, bool(center))

    cl = cfg["cluster"]
    dist = cl.get("distance") if isinstance(cl.get("distance"), dict) else {}
    for extra in sorted(set(cl) - set(DEFAULTS["cluster"])):
        problems.append((f"cluster.{extra}", "unknown field"))
    kind = dist.get("kind", "euclidean")
    window = dist.get("dtw_window")
    distance = DistanceKind()
    if kind not in DISTANCES:
        problems.append(("cluster.distance.kind", f"must be one of {DISTANCES}"))
    elif window is not None and (not _is_int(window) or window < 0 or kind != "dtw"):
        problems.append(("cluster.distance.dtw_window",
                         "must be a non-negative integer, and only with the dtw distance"))
    else:
        distance = DistanceKind(kind, window)
    algorithm = cl.get("algorithm")
    k = cl.get("k")
    cluster = ClusterConfig(
        algorithm=algorithm, k=k if (k is None or _is_int(k)) else -1, distance=distance,
        seed=cl.get("seed") if _is_int(cl.get("seed")) else -1,
        max_iter=cl.get("max_iter") if _is_int(cl.get("max_iter")) else 0,
        n_init=cl.get("n_init") if _is_int(cl.get("n_init")) else 0,
        linkage=cl.get("linkage"))
    problems += [(p, msg) for p, msg in cluster.problems() if not
                 (p == "cluster.distance" and kind not in DISTANCES)]

    sweep = None
    ks = cfg["k_sweep"]
    if ks is not None:
        if not isinstance(ks, dict):
            problems.append(("k_sweep", "must be an object or null"))
        else:
            k_min, k_max = ks.get("k_min"), ks.get("k_max")
            method = ks.get("method", "elbow")
            if not _is_int(k_min) or k_min < 2:
                problems.append(("k_sweep.k_min", "must be an integer >= 2"))
            if not _is_int(k_max) or (_is_int(k_min) and k_max < k_min):
                problems.append(("k_sweep.k_max", "must be an integer >= k_min"))
            if method not in ("elbow", "best_silhouette"):
                problems.append(("k_sweep.method", "must be 'elbow' or 'best_silhouette'"))
            sweep = KSweep(k_min, k_max, method)
    if (k is None) == (ks is None):
        problems.append(("cluster.k", "set exactly one of cluster.k (single run) or k_sweep"))

    if fpca is not None and algorithm == "kshape":
        problems.append(("representation.kind", "kshape clusters curves; fpca scores are not series"))

    for key in ("report", "figures", "record_elapsed"):
        if not isinstance(cfg[key], bool):
            problems.append((key, "must be a boolean"))

    if problems:
        raise ValidationError(problems)
    return RunConfig(
        input_path=cfg["input_path"], mapping=mapping, output_dir=cfg["output_dir"],
        timestamp_format=cfg["timestamp_format"], delimiter=cfg["delimiter"], unit=cfg["unit"],
        resolution=resolution, aggregation_method=agg["method"], max_gap=max_gap,
        normalization=cfg["normalization"], fpca=fpca, cluster=cluster, k_sweep=sweep,
        report=cfg["report"], figures=cfg["figures"], record_elapsed=cfg["record_elapsed"])


def apply_overrides(raw: dict, overrides) -> dict:
    """Apply ``dotted.key=value`` overrides; values are parsed as JSON when possible."""
    out = copy.deepcopy(raw)
    for item in overrides or ():
        if "=" not in item:
            raise ValidationError([(item, "override must look like key=value")])
        key, _, text = item.partition("=")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        node = out
        parts = key.strip().split(".")
        for part in parts[:-1]:
            if not isinstance(node.get(part), dict):
                node[part] = {}
            node = node[part]
        node[parts[-1]] = value
    return out


def load_config(path, overrides=()) -> dict:
    """Read a JSON config file and apply overrides; relative paths resolve against the file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError([(str(path), f"cannot read configuration: {exc}")]) from exc
    if not isinstance(raw, dict):
        raise ValidationError([(str(path), "configuration must be a JSON object")])
    raw = apply_overrides(raw, overrides)
    for key in ("input_path", "output_dir"):
        if isinstance(raw.get(key), str) and not Path(raw[key]).is_absolute():
            raw[key] = str((path.parent / raw[key]).resolve())
    return raw
