"""Cluster-membership codes across a sequence of runs.

Given runs for, say, four days, each label gets a code such as ``"3313"``:
its cluster id in each run, in order, with ``x`` where the label is absent
from a run.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

ABSENT = "x"


@dataclass(frozen=True)
class Trajectory:
    codes: dict  # label -> code
    frequency: dict  # code -> number of labels, most frequent first

    def as_dict(self):
        return {"codes": self.codes, "frequency": self.frequency}


def _assignment_of(run):
    if isinstance(run, dict):
        return run.get("assignment", run)
    labels_file = getattr(run, "labels_file", None)
    if labels_file is None:
        path = Path(run)
        labels_file = path / "labels.json" if path.is_dir() else path
    with open(labels_file, encoding="utf-8") as fh:
        return json.load(fh)["assignment"]


def label_trajectory(runs) -> Trajectory:
    """Build per-label trajectory codes.

    ``runs`` items may be :class:`~loadclust.pipeline.RunOutputs`, paths to
    a labels file or to a run directory, or plain ``{label: cluster}`` maps.
    When any cluster id has more than one digit the positions are joined
    with ``.`` so codes stay unambiguous.
    """
    assignments = [_assignment_of(r) for r in runs]
    if len(assignments) < 2:
        raise ValueError("a trajectory needs at least two runs")
    all_labels = sorted(set().union(*assignments))
    wide = any(int(c) >= 10 for a in assignments for c in a.values())
    sep = "." if wide else ""
    codes = {}
    for label in all_labels:
        codes[label] = sep.join(str(a[label]) if label in a else ABSENT for a in assignments)
    counts = Counter(codes.values())
    frequency = dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
    return Trajectory(codes, frequency)
