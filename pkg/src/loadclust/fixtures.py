"""Synthetic daily load profiles with known generating templates."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np

from .dataset import TimeSeriesDataset

STEPS_PER_DAY = 96
RESOLUTION = timedelta(minutes=15)
HOURS = np.arange(STEPS_PER_DAY) * 24.0 / STEPS_PER_DAY


def _bump(center, width):
    return np.exp(-0.5 * ((HOURS - center) / width) ** 2)


def _plateau(start, end, edge=0.6):
    return 1.0 / (1.0 + np.exp(-(HOURS - start) / edge)) - 1.0 / (1.0 + np.exp(-(HOURS - end) / edge))


TEMPLATES = {
    # morning peak, midday valley, higher evening peak
    "residential_two_peak": lambda: 0.3 + 0.55 * _bump(8.0, 1.2) + 1.0 * _bump(20.5, 1.8),
    # business-hours plateau
    "nonresidential_flat": lambda: 0.25 + 0.9 * _plateau(8.0, 18.5),
    # two peaks with the central hours filled in (air conditioning)
    "summer_flattened": lambda: 0.35 + 0.35 * _bump(8.5, 1.3) + 0.55 * _plateau(11.0, 17.5, 1.0)
    + 0.7 * _bump(21.0, 1.6),
    # dominant early-morning peak over a daytime shoulder
    "hybrid": lambda: 0.3 + 1.0 * _bump(6.5, 1.1) + 0.3 * _plateau(9.0, 16.0, 1.0)
    + 0.35 * _bump(19.5, 1.4),
}


def template_curve(name):
    return TEMPLATES[name]()


@dataclass(frozen=True)
class Fixture:
    dataset: TimeSeriesDataset
    truth: dict  # label -> template name

    @property
    def truth_vector(self):
        names = sorted(set(self.truth.values()))
        return np.array([names.index(self.truth[lab]) for lab in self.dataset.labels])


def generate_fixture(n_per_template=50, templates=tuple(TEMPLATES), noise_sigma=0.05, seed=0,
                     max_shift=0, amplitude=(0.5, 2.0),
                     day=datetime(2017, 1, 18)) -> Fixture:
    """Noisy, randomly scaled copies of each template.

    ``noise_sigma`` is relative to the unit-scale template. ``max_shift``
    circularly rolls each copy by up to that many 15-minute steps. Labels are
    ``S0000, S0001, ...`` in a seeded random order so they carry no hint of
    the template.
    """
    if n_per_template < 1:
        raise ValueError("n_per_template must be >= 1")
    templates = tuple(templates)
    unknown = [t for t in templates if t not in TEMPLATES]
    if unknown:
        raise ValueError(f"unknown templates {unknown}; expected {sorted(TEMPLATES)}")
    rng = np.random.default_rng(seed)
    total = n_per_template * len(templates)
    slots = rng.permutation(total)
    rows = np.empty((total, STEPS_PER_DAY))
    truth = {}
    i = 0
    for name in templates:
        base = template_curve(name)
        for _ in range(n_per_template):
            curve = base + noise_sigma * rng.standard_normal(STEPS_PER_DAY)
            if max_shift:
                curve = np.roll(curve, int(rng.integers(-max_shift, max_shift + 1)))
            scale = rng.uniform(*amplitude) if amplitude else 1.0
            slot = int(slots[i])
            rows[slot] = scale * curve
            truth[f"S{slot:04d}"] = name
            i += 1
    labels = tuple(f"S{j:04d}" for j in range(total))
    grid = tuple(day + j * RESOLUTION for j in range(STEPS_PER_DAY))
    return Fixture(TimeSeriesDataset(labels, grid, rows, unit="kW", resolution=RESOLUTION), truth)
