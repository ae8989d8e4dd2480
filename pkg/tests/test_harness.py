import itertools

import pytest

from blackboard.harness import (
    COLUMNS, METRIC_COLUMNS, ConfigError, ExperimentConfig, derive_seed, file_id, parse_config,
    run_combination, run_sweep, run_test,
)
from blackboard.netgen import FactAssignment, GenerationParams
from blackboard.persistence import read_csv
from oracles import exact_mean

DEFAULTS = GenerationParams()
SMALL = GenerationParams(fact_count=30, rule_count=20, link_count=24, container_count=12,
                         common_property_count=10, properties_per_rule=3)


def tree(root):
    return {
        p.relative_to(root).as_posix(): p.read_bytes()
        for p in sorted(root.rglob("*.txt"))
    }


def test_run_test_default(tmp_path):
    result = run_test(DEFAULTS, 0, 0, 123, tmp_path)
    assert result.path_length >= 25
    assert result.total_traversal_time >= 0 and result.time_to_link >= 0
    saves = tmp_path / "saves" / "0.txt"
    changes = sorted((tmp_path / "changes").glob("0-*.txt"))
    assert len(changes) == result.path_length
    on_disk = saves.stat().st_size + sum(p.stat().st_size for p in changes)
    assert result.total_storage_size == on_disk
    assert result.initial_network_size == saves.stat().st_size
    assert result.avg_state_size == exact_mean([p.stat().st_size for p in changes])


def test_run_test_is_deterministic(tmp_path):
    a = run_test(DEFAULTS, 0, 0, 99, tmp_path / "a", file_key=5)
    b = run_test(DEFAULTS, 0, 0, 99, tmp_path / "b", file_key=5)
    assert tree(tmp_path / "a") == tree(tmp_path / "b")
    for field in ("initial_network_size", "avg_state_size", "total_storage_size", "path_length"):
        assert getattr(a, field) == getattr(b, field)


def test_result_identities(tmp_path):
    result = run_test(SMALL, 3, 4, 1, tmp_path)
    row = result.as_row()
    assert list(row) == COLUMNS
    assert row["Combination ID"] == 3 and row["Test ID"] == 4
    assert row["Fact Assignment Method"] == "Uniform"
    assert result.total_storage_size >= result.initial_network_size
    assert result.avg_time_to_state * result.path_length == pytest.approx(result.total_traversal_time)


def test_derived_seeds_are_distinct():
    seeds = {derive_seed(7, c, t) for c, t in itertools.product(range(80), range(50))}
    assert len(seeds) == 80 * 50
    assert derive_seed(7, 0, 0) != derive_seed(8, 0, 0)
    assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)


def test_default_sweep_shape():
    config = ExperimentConfig()
    combos = config.combinations()
    assert len(combos) == 2 * sum(len(levels) for _, levels in config.sweep)
    assert combos[0].fact_assignment is FactAssignment.UNIFORM
    assert combos[1].fact_assignment is FactAssignment.RANDOM
    scaled = [c for c in combos if c.container_count == 200]
    assert scaled and all(c.link_count == 400 for c in scaled)


def test_combination_of_one_test(tmp_path):
    config = ExperimentConfig(base=SMALL, sweep=[], tests_per_combination=1, out_dir=tmp_path)
    results, avg = run_combination(config, 1)
    (row,) = [r.as_row() for r in results]
    assert row["Fact Assignment Method"] == "Random"
    for col in METRIC_COLUMNS:
        assert avg[col] == row[col]


def test_combination_of_fifty_tests(tmp_path):
    config = ExperimentConfig(base=DEFAULTS, sweep=[], cross_assignment=False, out_dir=tmp_path)
    results, avg = run_combination(config, 0)
    assert len(results) == 50
    rows = read_csv(tmp_path / "comboResults" / "0.csv")
    assert len(rows) == 50
    assert [int(r["Test ID"]) for r in rows] == list(range(50))
    for col in METRIC_COLUMNS:
        assert avg[col] == exact_mean([r[col] for r in rows])
    assert all(int(r["Path Length"]) >= 25 for r in rows)


def test_combination_out_of_range(tmp_path):
    config = ExperimentConfig(base=SMALL, sweep=[], out_dir=tmp_path)
    with pytest.raises(IndexError):
        run_combination(config, 2)


def test_failed_tests_are_excluded(tmp_path, caplog):
    hopeless = GenerationParams(container_count=50, link_count=20, max_link_attempts=2)
    config = ExperimentConfig(base=hopeless, sweep=[], cross_assignment=False,
                              tests_per_combination=2, out_dir=tmp_path)
    results, avg = run_combination(config, 0)
    assert results == [] and avg is None
    assert "failed" in caplog.text


def test_sweep_counts(tmp_path):
    config = ExperimentConfig(base=SMALL, sweep=[("fact_count", (20, 40))], cross_assignment=False,
                              tests_per_combination=2, out_dir=tmp_path)
    averages = run_sweep(config)
    assert len(list((tmp_path / "saves").iterdir())) == 4
    assert len(list((tmp_path / "comboResults").iterdir())) == 2
    final = read_csv(tmp_path / "results.csv")
    assert len(final) == len(averages) == 2
    assert [r["Fact Count"] for r in final] == ["20", "40"]
    assert {file_id(config, c, t) for c in range(2) for t in range(2)} == {0, 1, 2, 3}


def test_sweep_is_reproducible(tmp_path):
    config = dict(base=SMALL, sweep=[("rule_count", (5, 10))], tests_per_combination=2)
    run_sweep(ExperimentConfig(out_dir=tmp_path / "a", **config))
    run_sweep(ExperimentConfig(out_dir=tmp_path / "b", **config))
    assert tree(tmp_path / "a") == tree(tmp_path / "b")


CONFIG_TEXT = """
[base]
fact count = 30
rule count = 20
link count = 24
container count = 12
common property count = 10
properties per rule = 3
fact assignment = random
hybrid rule chance = 50%
ignore chance = 0.5

[sweep]
container count = 10, 12
create chance = 0, 1

[run]
tests per combination = 3
master seed = 11
cross assignment = no
"""


def test_parse_config():
    config = parse_config(CONFIG_TEXT, jobs=2)
    assert config.base.fact_assignment is FactAssignment.RANDOM
    assert config.base.hybrid_rule_chance == 0.5 and config.base.ignore_chance == 0.5
    assert config.tests_per_combination == 3 and config.master_seed == 11 and config.jobs == 2
    combos = config.combinations()
    assert [(c.container_count, c.link_count, c.create_chance) for c in combos] == [
        (10, 20, 0.25), (12, 24, 0.25), (12, 24, 0.0), (12, 24, 1.0),
    ]


@pytest.mark.parametrize("text", [
    "[base]\nfact count = many\n",
    "[base]\nwidget count = 3\n",
    "[base]\ncontainer count = 1\n",
    "[sweep]\nignore chance = 0.5, 2\n",
    "[run]\ntests per combination = 0\n",
    "not an ini file",
])
def test_invalid_config(text):
    with pytest.raises(ConfigError):
        parse_config(text)
