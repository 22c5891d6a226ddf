"""Seeded trial streams and the JSON experiment report shared by the algorithm modules."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np


class IterationCapExceeded(RuntimeError):
    pass


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def trial_streams(rng, trials: int) -> list[np.random.Generator]:
    """Independent per-trial generators; identical for identical parent seeds."""
    if isinstance(rng, np.random.Generator):
        return rng.spawn(trials)
    return [np.random.default_rng(s) for s in np.random.SeedSequence(rng).spawn(trials)]


@dataclass
class ExperimentReport:
    name: str
    trials: int
    mean_queries: float
    stderr: float
    success_probability: float
    expected: float | None = None
    seed: int | None = None
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.success_probability <= 1.0:
            raise ValueError("success probability outside [0, 1]")

    @classmethod
    def from_counts(cls, name, counts, successes, expected=None, seed=None, params=None, extra=None):
        c = np.asarray(counts, dtype=float)
        sd = float(c.std(ddof=1)) if c.size > 1 else 0.0
        return cls(
            name,
            int(c.size),
            float(c.mean()),
            sd / math.sqrt(c.size) if c.size else 0.0,
            successes / c.size if c.size else 0.0,
            expected,
            seed,
            dict(params or {}),
            dict(extra or {}),
        )

    def relative_error(self) -> float:
        return abs(self.mean_queries - self.expected) / self.expected

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=_jsonable, sort_keys=True)


def _jsonable(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)
