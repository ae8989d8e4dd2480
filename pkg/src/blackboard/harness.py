"""Experiment harness: single tests, combinations and one-factor sweeps.

Each test generates a network, finds the constrained shortest path,
saves the initial network, simulates traversal while writing one change
file per link, and reports timings in ticks and storage sizes in bytes.
"""

from __future__ import annotations

import configparser
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import persistence
from .netgen import (
    SETTING_NAMES, FactAssignment, GenerationError, GenerationParams, _parse_probability,
    generate_network,
)
from .traversal import TICK_NS, find_shortest_path, simulate_traversal

log = logging.getLogger(__name__)

# attribute -> results column header
SETTING_COLUMNS = {
    "fact_count": "Fact Count",
    "rule_count": "Rule Count",
    "link_count": "Link Count",
    "container_count": "Container Count",
    "common_property_count": "Common Property Count",
    "properties_per_rule": "Number of Common Properties per Rule",
    "fact_assignment": "Fact Assignment Method",
    "hybrid_rule_chance": "Hybrid Rule Chance",
    "ignore_chance": "IgnoreIfNotPresent Chance",
    "create_chance": "CreateIfNotPresent Chance",
}
METRIC_COLUMNS = (
    "Time to Link", "Average Time to State", "Total Traversal Time",
    "Initial Network Size", "Average State Size", "Total Storage Size", "Path Length",
)
COLUMNS = ["Combination ID", "Test ID", *SETTING_COLUMNS.values(), *METRIC_COLUMNS]

DEFAULT_SWEEP = (
    ("fact_count", (50, 100, 150, 200)),
    ("rule_count", (50, 100, 150, 200)),
    ("link_count", (100, 150, 200, 250, 300)),
    ("container_count", (50, 100, 150, 200)),
    ("common_property_count", (20, 50, 100, 150)),
    ("properties_per_rule", (1, 2, 5, 10)),
    ("hybrid_rule_chance", (0.25, 0.5, 0.75, 1.0)),
    ("ignore_chance", (0.25, 0.5, 0.75, 1.0)),
    ("create_chance", (0.25, 0.5, 0.75, 1.0)),
)


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    base: GenerationParams = field(default_factory=GenerationParams)
    sweep: list[tuple[str, tuple]] = field(default_factory=lambda: list(DEFAULT_SWEEP))
    # run every combination under both fact-assignment methods
    cross_assignment: bool = True
    # when sweeping container count, keep the base links-per-container ratio
    scale_links_with_containers: bool = True
    tests_per_combination: int = 50
    master_seed: int = 0
    out_dir: Path = Path("out")
    jobs: int = 1
    tick_ns: int = TICK_NS

    def combinations(self) -> list[GenerationParams]:
        """Parameter sets in combination-id order."""
        levels: list[GenerationParams] = []
        for attr, values in self.sweep:
            for value in values:
                changes = {attr: value}
                if attr == "container_count" and self.scale_links_with_containers:
                    ratio = self.base.link_count / self.base.container_count
                    changes["link_count"] = round(ratio * value)
                levels.append(self.base.replace(**changes))
        if not levels:
            levels = [self.base]
        if not self.cross_assignment:
            return levels
        return [
            params.replace(fact_assignment=method)
            for params in levels for method in FactAssignment
        ]


@dataclass
class TestResult:
    __test__ = False  # not a pytest class

    combination_id: int
    test_id: int
    params: GenerationParams
    time_to_link: int
    avg_time_to_state: float
    total_traversal_time: int
    initial_network_size: int
    avg_state_size: float
    total_storage_size: int
    path_length: int

    def as_row(self) -> dict[str, object]:
        row: dict[str, object] = {
            "Combination ID": self.combination_id, "Test ID": self.test_id,
        }
        for attr, column in SETTING_COLUMNS.items():
            value = getattr(self.params, attr)
            row[column] = value.value if isinstance(value, FactAssignment) else value
        row.update(zip(METRIC_COLUMNS, (
            self.time_to_link, self.avg_time_to_state, self.total_traversal_time,
            self.initial_network_size, self.avg_state_size, self.total_storage_size,
            self.path_length,
        )))
        return row


def derive_seed(master_seed: int, combination_id: int, test_id: int) -> int:
    """64-bit per-test seed, independent across (combination, test) pairs."""
    seq = np.random.SeedSequence([master_seed, combination_id, test_id])
    return int(seq.generate_state(1, np.uint64)[0])


def file_id(config: ExperimentConfig, combination_id: int, test_id: int) -> int:
    """Sweep-wide test number used to name save and change files."""
    return combination_id * config.tests_per_combination + test_id


def run_test(
    params: GenerationParams, combination_id: int, test_id: int, seed: int,
    out_dir: str | os.PathLike, file_key=None, tick_ns: int = TICK_NS,
) -> TestResult:
    """Generate, pathfind, save and traverse one network.

    Raises :class:`GenerationError` if no traversable network is found.
    """
    out_dir = Path(out_dir)
    key = test_id if file_key is None else file_key
    network = generate_network(params, seed)
    path, time_to_link = find_shortest_path(network, tick_ns)
    network.shortest_path = path
    _, initial_size = persistence.save_initial(network, out_dir, key)
    report = simulate_traversal(network, path, tick_ns)
    state_sizes = [
        persistence.write_change_file(out_dir, key, step)[1] for step in report.steps
    ]
    return TestResult(
        combination_id=combination_id,
        test_id=test_id,
        params=params,
        time_to_link=time_to_link,
        avg_time_to_state=persistence.mean(report.per_step_times),
        total_traversal_time=report.total_time,
        initial_network_size=initial_size,
        avg_state_size=persistence.mean(state_sizes),
        total_storage_size=initial_size + sum(state_sizes),
        path_length=len(path),
    )


def _run_task(task) -> TestResult | None:
    params, combo, test, seed, out_dir, key, tick_ns = task
    try:
        return run_test(params, combo, test, seed, out_dir, key, tick_ns)
    except GenerationError as exc:
        log.warning("combination %d test %d failed: %s", combo, test, exc)
        return None


def _tasks(config: ExperimentConfig, combination_ids: list[int]):
    combos = config.combinations()
    for combo in combination_ids:
        for test in range(config.tests_per_combination):
            yield (
                combos[combo], combo, test, derive_seed(config.master_seed, combo, test),
                config.out_dir, file_id(config, combo, test), config.tick_ns,
            )


def _execute(config: ExperimentConfig, combination_ids: list[int]) -> list[TestResult]:
    tasks = list(_tasks(config, combination_ids))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    done = [r for r in results if r is not None]
    return sorted(done, key=lambda r: (r.combination_id, r.test_id))


def run_combination(
    config: ExperimentConfig, combination_id: int,
) -> tuple[list[TestResult], dict[str, object] | None]:
    """Run every test of one combination and write its combo CSV.

    Returns the successful results and their average row (``None`` when
    every test failed).
    """
    if not 0 <= combination_id < len(config.combinations()):
        raise IndexError(f"combination id {combination_id} out of range")
    results = _execute(config, [combination_id])
    if not results:
        log.warning("combination %d produced no successful tests", combination_id)
        return [], None
    rows = [r.as_row() for r in results]
    persistence.write_combo_csv(rows, config.out_dir, combination_id, COLUMNS)
    return results, persistence.average_rows(rows, COLUMNS, METRIC_COLUMNS)


def run_sweep(config: ExperimentConfig) -> list[dict[str, object]]:
    """Run all combinations and write combo CSVs plus the final dataset."""
    combos = list(range(len(config.combinations())))
    results = _execute(config, combos)
    if not results:
        raise GenerationError("no test in the sweep succeeded")
    exported = persistence.export_results([r.as_row() for r in results], config.out_dir,
                                          COLUMNS, METRIC_COLUMNS)
    return exported.averages


# -- config files ------------------------------------------------------------

_SETTING_ATTRS = {name: attr for attr, name in SETTING_NAMES}


def _parse_value(attr: str, text: str):
    text = text.strip()
    if attr == "fact_assignment":
        return FactAssignment(text.capitalize())
    if attr in ("hybrid_rule_chance", "ignore_chance", "create_chance"):
        return _parse_probability(text)
    return int(text)


def _attr(name: str) -> str:
    key = name.strip().lower().replace("_", " ")
    if key in _SETTING_ATTRS:
        return _SETTING_ATTRS[key]
    raise ConfigError(f"unknown parameter {name!r}")


def parse_config(text: str, **overrides) -> ExperimentConfig:
    """Build a config from INI-style text.

    ``[base]`` holds generation parameters by name (``fact count = 100``),
    ``[sweep]`` holds comma-separated levels per parameter and ``[run]``
    holds ``tests per combination``, ``master seed``, ``cross assignment``
    and ``scale links with containers``. A file without a ``[sweep]``
    section runs the base parameters only.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
        base = {}
        if parser.has_section("base"):
            for name, value in parser.items("base"):
                attr = _attr(name)
                base[attr] = _parse_value(attr, value)
        sweep = []
        if parser.has_section("sweep"):
            for name, value in parser.items("sweep"):
                attr = _attr(name)
                sweep.append((attr, tuple(_parse_value(attr, v) for v in value.split(","))))
        kwargs = {"base": GenerationParams(**base), "sweep": sweep}
        if parser.has_section("run"):
            run = parser["run"]
            if "tests per combination" in run:
                kwargs["tests_per_combination"] = run.getint("tests per combination")
            if "master seed" in run:
                kwargs["master_seed"] = run.getint("master seed")
            if "cross assignment" in run:
                kwargs["cross_assignment"] = run.getboolean("cross assignment")
            if "scale links with containers" in run:
                kwargs["scale_links_with_containers"] = run.getboolean("scale links with containers")
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        config = ExperimentConfig(**kwargs)
        config.out_dir = Path(config.out_dir)
        config.combinations()  # validates every level
    except (configparser.Error, ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    if config.tests_per_combination < 1 or config.jobs < 1 or config.tick_ns < 1:
        raise ConfigError("tests per combination, jobs and tick length must be positive")
    return config


def load_config(path: str | os.PathLike, **overrides) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"), **overrides)
