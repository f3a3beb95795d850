import json

import pytest

from loadclust.fixtures import generate_fixture

_ACCEPTANCE = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when not in ("setup", "call"):
        return
    number, title = marker.args
    failed = call.excinfo is not None
    prev = _ACCEPTANCE.get(number, (title, True))
    if call.when == "call" or failed:
        _ACCEPTANCE[number] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")


@pytest.fixture(scope="session")
def four_templates():
    return generate_fixture(50, noise_sigma=0.05, seed=11)


@pytest.fixture(scope="session")
def shifted_templates():
    return generate_fixture(50, noise_sigma=0.05, seed=12, max_shift=8)


@pytest.fixture
def write_config(tmp_path):
    """Write a fixture CSV plus a config pointing at it; returns the config dict."""

    def make(fixture, **fields):
        csv_path = tmp_path / "input.csv"
        if not csv_path.exists():
            fixture.dataset.to_long_csv(csv_path)
        cfg = {
            "input_path": str(csv_path),
            "output_dir": str(tmp_path / "out"),
            "mapping": {"time_column": "timestamp", "value_column": "value",
                        "label_column": "label"},
            "cluster": {"k": 4},
        }
        for key, value in fields.items():
            if isinstance(value, dict) and isinstance(cfg.get(key), dict):
                cfg[key] = {**cfg[key], **value}
            else:
                cfg[key] = value
        (tmp_path / "config.json").write_text(json.dumps(cfg))
        return cfg

    return make
