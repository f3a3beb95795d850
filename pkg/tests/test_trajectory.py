import json
from collections import Counter

import pytest

from loadclust.trajectory import label_trajectory


def test_stable_label():
    runs = [{"A": 1, "B": 0}] * 4
    assert label_trajectory(runs).codes["A"] == "1111"


def test_absent_marker():
    runs = [{"A": 3, "B": 0}, {"A": 3, "B": 1}, {"B": 2}, {"A": 3, "B": 0}]
    traj = label_trajectory(runs)
    assert traj.codes == {"A": "33x3", "B": "0120"}


def test_frequency_counts():
    runs = [{"a": 0, "b": 0, "c": 1, "d": 1}, {"a": 0, "b": 0, "c": 1, "e": 2}]
    traj = label_trajectory(runs)
    assert traj.frequency == {"00": 2, "11": 1, "1x": 1, "x2": 1}
    assert sum(traj.frequency.values()) == 5
    assert list(traj.frequency)[0] == "00"


def test_wide_ids_use_separator():
    runs = [{"a": 10, "b": 2}, {"a": 1, "b": 2}]
    assert label_trajectory(runs).codes == {"a": "10.1", "b": "2.2"}


def test_needs_two_runs():
    with pytest.raises(ValueError):
        label_trajectory([{"a": 0}])


def test_reads_files_and_dirs(tmp_path):
    for i, mapping in enumerate([{"A": 0, "B": 1}, {"A": 1, "B": 1}]):
        d = tmp_path / f"run{i}"
        d.mkdir()
        (d / "labels.json").write_text(json.dumps({"assignment": mapping}))
    traj = label_trajectory([tmp_path / "run0", tmp_path / "run1" / "labels.json"])
    assert traj.codes == {"A": "01", "B": "11"}
    assert Counter(traj.codes.values()) == Counter(traj.frequency)
