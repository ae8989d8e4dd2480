"""Constrained shortest-path search and single-pass traversal simulation."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .model import ModelError, Network, check_path_chain
from .pathsearch import MAX_DEPTH, find_constrained_shortest
from .rules import ChangeSet, apply_generic_rule_to_link

TICK_NS = 100


def to_ticks(duration_ns: int, tick_ns: int = TICK_NS) -> int:
    """Convert nanoseconds to ticks, rounding half up."""
    if duration_ns < 0:
        raise ValueError("duration must be non-negative")
    return (2 * int(duration_ns) + tick_ns) // (2 * tick_ns)


@dataclass
class TraversalStep:
    index: int
    link_id: int
    applied: list[ChangeSet] = field(default_factory=list)


@dataclass
class TraversalReport:
    path: list[int]
    steps: list[TraversalStep]
    time_to_link: int = 0
    per_step_times: list[int] = field(default_factory=list)

    @property
    def total_time(self) -> int:
        return sum(self.per_step_times)


def find_shortest_path(network: Network, tick_ns: int = TICK_NS) -> tuple[list[int], int]:
    """Shortest simple start-to-end link path no shorter than half the container count.

    Returns the link ids and the search time in ticks.
    """
    min_len = max(1, len(network.containers) // 2)
    began = time.perf_counter_ns()
    path = find_constrained_shortest(network, min_len, MAX_DEPTH)
    elapsed = time.perf_counter_ns() - began
    if path is None:
        raise ModelError(
            f"no simple start-to-end path with at least {min_len} links"
        )
    return path, to_ticks(elapsed, tick_ns)


def simulate_traversal(
    network: Network, path: list[int], tick_ns: int = TICK_NS,
) -> TraversalReport:
    """Walk ``path`` once, trying every generic rule once per link.

    Rules are tried in ascending id; each sees the effects of the rules run
    before it on the same link, but no rule is re-checked afterwards.
    """
    check_path_chain(network, path)
    rule_ids = sorted(network.generic_rules)
    steps = []
    times = []
    for index, link_id in enumerate(path):
        step = TraversalStep(index, link_id)
        began = time.perf_counter_ns()
        for rid in rule_ids:
            changes = apply_generic_rule_to_link(network, rid, link_id)
            if changes is not None:
                step.applied.append(changes)
        times.append(to_ticks(time.perf_counter_ns() - began, tick_ns))
        steps.append(step)
    return TraversalReport(list(path), steps, per_step_times=times)
