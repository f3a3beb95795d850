"""Acceptance suite: one test per criterion, summarized at the end of the run.

Run on its own with ``pytest tests/test_acceptance.py``.
"""

import json
import time
from collections import Counter
from datetime import datetime, timedelta

import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from loadclust.clustering import ClusterConfig, agglomerate, descent_violations, kmedoids
from loadclust.fixtures import template_curve
from loadclust.metrics import DistanceKind, dtw, pairwise, sbd
from loadclust.pipeline import run
from loadclust.representation import FPCAConfig, RepresentedMatrix, fpca, normalize
from loadclust.trajectory import label_trajectory
from loadclust.validity import calinski_harabasz, davies_bouldin, silhouette
from oracles import (
    agglomerative_naive,
    best_medoids,
    calinski_harabasz_direct,
    davies_bouldin_direct,
    dtw_recursive,
    fpca_dense,
    sbd_scan,
    silhouette_direct,
)

acceptance = pytest.mark.acceptance


def predicted(out, labels):
    doc = json.loads(out.labels_file.read_text())
    return [doc["assignment"][lab] for lab in labels]


@acceptance(1, "distance oracles (dtw exact, sbd within 1e-8)")
def test_distance_oracles():
    rng = np.random.default_rng(2024)
    dtw([0.0, 1.0], [1.0])  # compile outside the timed region
    start = time.perf_counter()
    for _ in range(200):
        x = rng.normal(size=int(rng.integers(1, 13)))
        y = rng.normal(size=int(rng.integers(1, 13)))
        assert dtw(x, y) == dtw_recursive(x, y)
    worst = 0.0
    for _ in range(200):
        d = int(rng.integers(1, 65))
        x, y = rng.normal(size=(2, d))
        worst = max(worst, abs(sbd(x, y)[0] - sbd_scan(x, y)[0]))
    assert worst < 1e-8
    assert time.perf_counter() - start < 10


@acceptance(2, "validity index oracles within 1e-7")
def test_validity_oracles():
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    for _ in range(50):
        k = int(rng.integers(2, 4))
        n = int(rng.integers(k + 1, 21))
        d = int(rng.integers(1, 9))
        X = rng.normal(size=(n, d))
        labels = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
        rng.shuffle(labels)
        assert abs(silhouette(X, labels) - silhouette_direct(X, labels)) < 1e-7
        assert abs(davies_bouldin(X, labels) - davies_bouldin_direct(X, labels)) < 1e-7
        assert abs(calinski_harabasz(X, labels) - calinski_harabasz_direct(X, labels)) < 1e-7
    assert time.perf_counter() - start < 5


@acceptance(3, "clustering oracles (hierarchical vs naive, PAM vs exhaustive)")
def test_clustering_oracles():
    rng = np.random.default_rng(99)
    start = time.perf_counter()
    for _ in range(100):
        n = int(rng.integers(2, 8))
        X = rng.normal(size=(n, int(rng.integers(1, 4))))
        k = int(rng.integers(1, n + 1))
        D = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
        for linkage in ("ward", "complete", "average", "single"):
            groups, _ = agglomerate(D, linkage, k)
            assert {frozenset(g) for g in groups} == agglomerative_naive(X, linkage, k, D=D)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        X = rng.normal(size=(n, int(rng.integers(1, 4))))
        out = kmedoids(RepresentedMatrix(tuple(f"{i}" for i in range(n)), X),
                       ClusterConfig("kmedoids", k=2))
        D = pairwise(X, DistanceKind("euclidean")).values
        best, subsets = best_medoids(D, 2)
        assert abs(out.inertia - best) <= 1e-9 * max(1.0, best)
        assert tuple(sorted(out.medoids)) in subsets
    assert time.perf_counter() - start < 30


@acceptance(4, "template recovery ARI >= 0.95 (kmeans/euclid/z-score, kshape/sbd shifted)")
def test_recovery(write_config, four_templates, shifted_templates, tmp_path):
    start = time.perf_counter()
    out = run(write_config(four_templates))
    ari = adjusted_rand_score(four_templates.truth_vector, predicted(out, four_templates.dataset.labels))
    assert ari >= 0.95, ari

    csv = tmp_path / "shifted.csv"
    shifted_templates.dataset.to_long_csv(csv)
    raw = write_config(shifted_templates, input_path=str(csv), output_dir=str(tmp_path / "ks"),
                       cluster={"algorithm": "kshape", "distance": {"kind": "sbd"}})
    out = run(raw)
    ari = adjusted_rand_score(shifted_templates.truth_vector,
                              predicted(out, shifted_templates.dataset.labels))
    assert ari >= 0.95, ari
    assert time.perf_counter() - start < 60


@acceptance(5, "elbow over k in [2, 8] suggests 4 with non-increasing inertia")
def test_elbow(write_config, four_templates):
    start = time.perf_counter()
    out = run(write_config(four_templates, cluster={"k": None}, k_sweep={"k_min": 2, "k_max": 8}))
    scores = json.loads(out.scores_file.read_text())
    assert [e["k"] for e in scores["per_k"]] == list(range(2, 9))
    assert scores["suggested_k"] == 4
    inertia = [e["inertia"] for e in scores["per_k"]]
    assert all(b <= a for a, b in zip(inertia, inertia[1:])), inertia
    assert time.perf_counter() - start < 60


@acceptance(6, "FPCA vs dense eigendecomposition; rank-1 ratio 1.0")
def test_fpca():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n, d = int(rng.integers(4, 30)), int(rng.integers(2, 40))
        p = int(rng.integers(1, min(n - 1, d) + 1))
        X = rng.normal(size=(n, d)) * rng.uniform(0.1, 5, size=d)
        out = fpca(RepresentedMatrix(tuple(f"{i}" for i in range(n)), X), FPCAConfig(p=p))
        ref, ratio = fpca_dense(X, p)
        # ties in the spectrum would make components non-unique; random data has none
        assert np.max(np.abs(out.data - ref)) < 1e-8
        assert np.allclose(out.explained_variance_ratio, ratio, atol=1e-10)
    shape = rng.normal(size=24)
    X = np.outer(rng.normal(size=15), shape)
    out = fpca(RepresentedMatrix(tuple(f"{i}" for i in range(15)), X), FPCAConfig(p=1))
    assert abs(out.explained_variance_ratio[0] - 1.0) < 1e-9


@acceptance(7, "monotonic descent of kmeans and PAM objectives")
def test_monotonic_descent(write_config, four_templates):
    out = run(write_config(four_templates))
    histories = list(out.assignment.restart_histories)
    assert len(histories) == 10
    m = normalize(RepresentedMatrix.from_dataset(four_templates.dataset), "z_score")
    pam = kmedoids(m, ClusterConfig("kmedoids", k=4))
    assert len(pam.restart_histories) == 10
    histories.extend(pam.restart_histories)
    violations = [i for h in histories for i in descent_violations(h, rtol=0)]
    assert violations == []


@acceptance(8, "determinism across thread counts; labels partition; k panels")
def test_determinism(write_config, four_templates, monkeypatch):
    raw = write_config(four_templates, record_elapsed=False)
    blobs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("CLUSTER_THREADS", threads)
        out = run(raw)
        blobs.append({p.name: p.read_bytes() for p in (out.labels_file, out.scores_file,
                                                         out.report_file)})
    assert blobs[0] == blobs[1]

    doc = json.loads(blobs[0]["labels.json"])
    members = [lab for labs in doc["clusters"].values() for lab in labs]
    assert sorted(members) == sorted(four_templates.dataset.labels)
    assert len(members) == len(set(members))

    html = blobs[0]["report.html"].decode()
    counts = [int(chunk.split('"', 1)[0]) for chunk in html.split('data-members="')[1:]]
    assert len(counts) == 4 and sum(counts) == four_templates.dataset.n


SEASONS = ("2017-01-18", "2017-04-19", "2017-07-19", "2017-10-18")
GROUPS = {
    # group: (count, template per season or None when absent)
    "A": (12, ["residential_two_peak"] * 4),
    "B": (10, ["nonresidential_flat"] * 4),
    "C": (4, ["residential_two_peak", "residential_two_peak", "summer_flattened",
              "residential_two_peak"]),
    "D": (8, ["hybrid"] * 4),
    "E": (3, ["residential_two_peak", "residential_two_peak", None, "residential_two_peak"]),
    "F": (6, ["summer_flattened"] * 4),
}


def _seasonal_csv(path, season, rng):
    day = datetime.strptime(SEASONS[season], "%Y-%m-%d")
    lines = ["label,timestamp,value"]
    truth = {}
    for group, (count, plan) in GROUPS.items():
        for i in range(count):
            template = plan[season]
            if template is None:
                continue
            label = f"{group}{i:02d}"
            truth[label] = template
            curve = rng.uniform(0.5, 2) * (template_curve(template) + 0.04 * rng.standard_normal(96))
            for j, v in enumerate(curve):
                stamp = (day + j * timedelta(minutes=15)).strftime("%Y-%m-%dT%H:%M")
                lines.append(f"{label},{stamp},{float(v)!r}")
    path.write_text("\n".join(lines) + "\n")
    return truth


def _expected_ids(truth):
    # canonical ids: templates numbered by first appearance in sorted label order
    ids = {}
    for label in sorted(truth):
        ids.setdefault(truth[label], len(ids))
    return {label: ids[truth[label]] for label in truth}


@acceptance(9, "seasonal trajectory codes and frequency table")
def test_trajectory(tmp_path):
    rng = np.random.default_rng(17)
    runs, expected = [], []
    for season in range(4):
        csv = tmp_path / f"season{season}.csv"
        truth = _seasonal_csv(csv, season, rng)
        expected.append(_expected_ids(truth))
        runs.append(run({"input_path": str(csv), "output_dir": str(tmp_path / f"run{season}"),
                         "mapping": {"time_column": "timestamp", "value_column": "value",
                                     "label_column": "label"},
                         "cluster": {"k": 4}}))
    traj = label_trajectory(runs)

    everyone = sorted(set().union(*expected))
    want = {lab: "".join(str(e[lab]) if lab in e else "x" for e in expected) for lab in everyone}
    assert traj.codes == want
    assert all(want[f"A{i:02d}"] == want["A00"] and len(set(want["A00"])) == 1 for i in range(12))
    assert all(c[2] == "x" for lab, c in want.items() if lab.startswith("E"))
    assert dict(Counter(want.values())) == traj.frequency
    assert sum(traj.frequency.values()) == len(everyone)
    # the same codes come back from the run directories on disk
    assert label_trajectory([r.labels_file.parent for r in runs]).codes == want
