"""Search counters: the cost model is the number of ``post`` invocations."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, fields


@dataclass
class Metrics:
    post_calls: int = 0
    successors_generated: int = 0
    distinct_states: int = 0
    transitions_explored: int = 0
    max_search_depth: int = 0
    aux_bits_per_state: int = 0
    descriptor_bytes: int = 0
    wall_time: float = 0.0

    COUNTERS = (
        "post_calls",
        "successors_generated",
        "distinct_states",
        "transitions_explored",
        "max_search_depth",
    )

    def counters(self) -> dict:
        return {name: getattr(self, name) for name in self.COUNTERS}

    def to_json(self) -> dict:
        return asdict(self)

    def __iadd__(self, other: "Metrics"):
        for f in fields(self):
            if f.name == "max_search_depth":
                self.max_search_depth = max(self.max_search_depth, other.max_search_depth)
            elif f.name == "aux_bits_per_state":
                self.aux_bits_per_state = max(self.aux_bits_per_state, other.aux_bits_per_state)
            else:
                setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self


class Stopwatch:
    def __init__(self, metrics: Metrics):
        self.metrics = metrics

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.metrics.wall_time += time.perf_counter() - self._t0
        return False
