"""Plaintext save files, per-link change files and CSV result exports.

Every line has the form ``type,action,value1,value2,...``. Save files
describe a whole network::

    setting,fact count,100
    commonproperty,addition,0,cp0
    fact,addition,3,7,True                      # id, property id, value
    plainfact,addition,4,has Wi-Fi,False        # id, description, value
    container,addition,0,container0
    attach,addition,0,3                         # container id, fact id
    link,addition,0,5,9,link0                   # id, origin, destination, description
    basicrule,addition,0,1.2,3                  # id, inputs, outputs
    action,addition,0,notify
    genericrule,addition,0,gr0,True,False,2-True.5-False,,,
    start container,addition,5
    end container,addition,9
    shortest path,addition,0.14.27

A generic rule line holds id, title, create flag, ignore flag and then the
before-one, before-two, after-one and after-two lists as ``.``-separated
``property-Boolean`` pairs. Change files start with the link being
traversed, then one ``genericrule,run,<id>`` line per rule that ran
followed by its fact records.
"""

from __future__ import annotations

import csv
import hashlib
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .model import (
    ActionStub, BasicRule, CommonProperty, ConditionPair, Container, Fact,
    GenericRule, Link, ModelError, Network,
)
from .rules import ChangeKind, ChangeRecord
from .traversal import TraversalStep

SAVES_DIR = "saves"
CHANGES_DIR = "changes"
COMBO_DIR = "comboResults"
FINAL_DATASET = "results.csv"


class FormatError(ValueError):
    """A save or change file line does not follow the grammar."""

    def __init__(self, message: str, line_no: int | None = None, token: str | None = None):
        where = f"line {line_no}: " if line_no is not None else ""
        what = f" (token {token!r})" if token is not None else ""
        super().__init__(f"{where}{message}{what}")
        self.line_no = line_no
        self.token = token


def _bool(value: bool) -> str:
    return "True" if value else "False"


def _text(value: str) -> str:
    if "," in value or "\n" in value or "\r" in value:
        raise ValueError(f"text field may not contain commas or newlines: {value!r}")
    return value


def _pairs(pairs: list[ConditionPair]) -> str:
    return ".".join(f"{p.property_id}-{_bool(p.value)}" for p in pairs)


def _ids(ids: Iterable[int]) -> str:
    return ".".join(str(i) for i in ids)


def _line(*tokens) -> str:
    return ",".join(str(t) for t in tokens) + "\n"


def dumps_network(network: Network) -> str:
    out = []
    for name, value in network.settings.items():
        out.append(_line("setting", _text(name), _text(value)))
    for cp in network.common_properties.values():
        out.append(_line("commonproperty", "addition", cp.id, _text(cp.description)))
    for fact in network.facts.values():
        if fact.is_instance:
            out.append(_line("fact", "addition", fact.id, fact.property_id, _bool(fact.value)))
        else:
            out.append(_line("plainfact", "addition", fact.id, _text(fact.description),
                             _bool(fact.value)))
    for c in network.containers.values():
        out.append(_line("container", "addition", c.id, _text(c.description)))
    for c in network.containers.values():
        for fid in c.fact_ids:
            out.append(_line("attach", "addition", c.id, fid))
    for link in network.links.values():
        out.append(_line("link", "addition", link.id, link.origin, link.destination,
                         _text(link.description)))
    for rule in network.basic_rules.values():
        out.append(_line("basicrule", "addition", rule.id, _ids(rule.input_fact_ids),
                         _ids(rule.output_fact_ids)))
    for action in network.actions.values():
        out.append(_line("action", "addition", action.id, _text(action.description)))
    for rule in network.generic_rules.values():
        out.append(_line(
            "genericrule", "addition", rule.id, _text(rule.title),
            _bool(rule.create_if_not_present), _bool(rule.ignore_if_not_present),
            *(_pairs(pairs) for pairs in rule.condition_lists()),
        ))
    if network.start_container is not None:
        out.append(_line("start container", "addition", network.start_container))
    if network.end_container is not None:
        out.append(_line("end container", "addition", network.end_container))
    if network.shortest_path is not None:
        out.append(_line("shortest path", "addition", _ids(network.shortest_path)))
    return "".join(out)


# -- parsing -----------------------------------------------------------------

class _Reader:
    def __init__(self, line_no: int, tokens: list[str]):
        self.line_no = line_no
        self.tokens = tokens

    def expect(self, count: int) -> None:
        if len(self.tokens) != count:
            raise FormatError(
                f"{self.tokens[0]!r} line needs {count} fields, got {len(self.tokens)}",
                self.line_no,
            )

    def integer(self, i: int) -> int:
        token = self.tokens[i]
        if not _is_uint(token):
            raise FormatError("expected a non-negative integer", self.line_no, token)
        return int(token)

    def boolean(self, i: int) -> bool:
        return _parse_bool(self.tokens[i], self.line_no)

    def ids(self, i: int) -> list[int]:
        token = self.tokens[i]
        if not token:
            return []
        parts = token.split(".")
        if not all(_is_uint(p) for p in parts):
            raise FormatError("expected a period-separated id list", self.line_no, token)
        return [int(p) for p in parts]

    def pairs(self, i: int) -> list[ConditionPair]:
        token = self.tokens[i]
        if not token:
            return []
        result = []
        for item in token.split("."):
            prop, sep, value = item.partition("-")
            if not sep or not _is_uint(prop):
                raise FormatError("expected property-Boolean pair", self.line_no, item)
            result.append(ConditionPair(int(prop), _parse_bool(value, self.line_no)))
        return result


def _is_uint(token: str) -> bool:
    return token.isascii() and token.isdigit()


def _parse_bool(token: str, line_no: int) -> bool:
    if token == "True":
        return True
    if token == "False":
        return False
    raise FormatError("expected True or False", line_no, token)


def _split_lines(text: str):
    for line_no, raw in enumerate(text.split("\n"), start=1):
        if raw == "":
            continue
        yield _Reader(line_no, raw.split(","))


def loads_network(text: str) -> Network:
    network = Network()
    for r in _split_lines(text):
        kind = r.tokens[0]
        try:
            if kind == "setting":
                r.expect(3)
                network.settings[r.tokens[1]] = r.tokens[2]
            elif kind == "commonproperty":
                r.expect(4)
                network.add(CommonProperty(r.integer(2), r.tokens[3]))
            elif kind == "fact":
                r.expect(5)
                network.add(Fact(r.integer(2), r.boolean(4), property_id=r.integer(3)))
            elif kind == "plainfact":
                r.expect(5)
                network.add(Fact(r.integer(2), r.boolean(4), description=r.tokens[3]))
            elif kind == "container":
                r.expect(4)
                network.add(Container(r.integer(2), r.tokens[3]))
            elif kind == "attach":
                r.expect(4)
                network.attach_fact(r.integer(2), r.integer(3))
            elif kind == "link":
                r.expect(6)
                network.add(Link(r.integer(2), r.integer(3), r.integer(4), r.tokens[5]))
            elif kind == "basicrule":
                r.expect(5)
                network.add(BasicRule(r.integer(2), r.ids(3), r.ids(4)))
            elif kind == "action":
                r.expect(4)
                network.add(ActionStub(r.integer(2), r.tokens[3]))
            elif kind == "genericrule":
                r.expect(10)
                network.add(GenericRule(
                    r.integer(2), r.tokens[3],
                    before_one=r.pairs(6), before_two=r.pairs(7),
                    after_one=r.pairs(8), after_two=r.pairs(9),
                    create_if_not_present=r.boolean(4), ignore_if_not_present=r.boolean(5),
                ))
            elif kind == "start container":
                r.expect(3)
                network.start_container = r.integer(2)
            elif kind == "end container":
                r.expect(3)
                network.end_container = r.integer(2)
            elif kind == "shortest path":
                r.expect(3)
                network.shortest_path = r.ids(2)
            else:
                raise FormatError("unknown line type", r.line_no, kind)
        except ModelError as exc:
            raise FormatError(str(exc), r.line_no) from exc
    try:
        network.validate()
    except ModelError as exc:
        raise FormatError(str(exc)) from exc
    return network


def load_network(path: str | os.PathLike) -> Network:
    return loads_network(Path(path).read_text(encoding="utf-8"))


def _write(path: Path, text: str) -> int:
    data = text.encode("utf-8")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return len(data)


def save_initial(network: Network, directory: str | os.PathLike, test_id) -> tuple[Path, int]:
    """Write ``saves/<test_id>.txt``; returns the path and its size in bytes."""
    path = Path(directory) / SAVES_DIR / f"{test_id}.txt"
    return path, _write(path, dumps_network(network))


def network_digest(network: Network) -> str:
    return hashlib.sha256(dumps_network(network).encode("utf-8")).hexdigest()


# -- change files ------------------------------------------------------------

def _record_line(record: ChangeRecord) -> str:
    if record.kind is ChangeKind.FACT_ADDED:
        return _line("fact", "addition", record.fact_id, record.property_id,
                     _bool(record.value), record.container_id)
    return _line("fact", "change", record.fact_id, _bool(record.value))


def dumps_step(step: TraversalStep) -> str:
    out = [_line("link", "traverse", step.link_id)]
    for changes in step.applied:
        out.append(_line("genericrule", "run", changes.rule_id))
        out.extend(_record_line(r) for r in changes.records)
    return "".join(out)


def write_change_file(directory: str | os.PathLike, test_id, step: TraversalStep) -> tuple[Path, int]:
    """Write ``changes/<test_id>-<step index>.txt``; returns path and byte count."""
    path = Path(directory) / CHANGES_DIR / f"{test_id}-{step.index}.txt"
    return path, _write(path, dumps_step(step))


def apply_changes(network: Network, text: str) -> int:
    """Replay one change file onto ``network``; returns the number of fact records."""
    applied = 0
    for r in _split_lines(text):
        kind, action = r.tokens[0], r.tokens[1] if len(r.tokens) > 1 else ""
        try:
            if kind == "link" and action == "traverse":
                r.expect(3)
                if r.integer(2) not in network.links:
                    raise FormatError("unknown link", r.line_no, r.tokens[2])
            elif kind == "genericrule" and action == "run":
                r.expect(3)
                if r.integer(2) not in network.generic_rules:
                    raise FormatError("unknown generic rule", r.line_no, r.tokens[2])
            elif kind == "fact" and action == "addition":
                r.expect(6)
                fid = network.add(Fact(r.integer(2), r.boolean(4), property_id=r.integer(3)))
                network.attach_fact(r.integer(5), fid)
                applied += 1
            elif kind == "fact" and action == "change":
                r.expect(4)
                fid = r.integer(2)
                if fid not in network.facts:
                    raise FormatError("unknown fact", r.line_no, r.tokens[2])
                network.facts[fid].value = r.boolean(3)
                applied += 1
            else:
                raise FormatError("unknown change line", r.line_no, f"{kind},{action}")
        except ModelError as exc:
            raise FormatError(str(exc), r.line_no) from exc
    return applied


def change_files(directory: str | os.PathLike, test_id) -> list[Path]:
    """Change files of one test, ordered by traversal iterator."""
    prefix = f"{test_id}-"
    found = []
    for path in Path(directory).glob(f"{test_id}-*.txt"):
        suffix = path.stem[len(prefix):]
        if suffix.isdigit():
            found.append((int(suffix), path))
    return [p for _, p in sorted(found)]


# -- result export -----------------------------------------------------------

def mean(values: list) -> float:
    """Arithmetic mean with a correctly rounded sum."""
    return math.fsum(values) / len(values)


@dataclass
class ExportedResults:
    combo_files: dict[int, Path]
    final_dataset: Path
    averages: list[dict[str, object]]


def average_rows(
    rows: list[dict[str, object]], columns: list[str], metrics: Iterable[str],
) -> dict[str, object]:
    """Means of the metric columns; other columns (ids, settings) are carried through."""
    metrics = set(metrics)
    avg: dict[str, object] = {}
    for col in columns:
        if col == "Test ID":
            continue
        avg[col] = mean([row[col] for row in rows]) if col in metrics else rows[0][col]
    return avg


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns: list[str], rows: list[dict[str, object]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])


def write_combo_csv(
    rows: list[dict[str, object]], directory: str | os.PathLike, combination_id: int,
    columns: list[str],
) -> Path:
    path = Path(directory) / COMBO_DIR / f"{combination_id}.csv"
    _write_csv(path, columns, sorted(rows, key=lambda r: r["Test ID"]))
    return path


def export_results(
    rows: list[dict[str, object]], directory: str | os.PathLike,
    columns: list[str], metrics: Iterable[str],
) -> ExportedResults:
    """Write one CSV per combination and the final dataset of per-combination means."""
    if not rows:
        raise ValueError("no results to export")
    metrics = list(metrics)
    by_combo: dict[int, list[dict[str, object]]] = {}
    for row in rows:
        by_combo.setdefault(int(row["Combination ID"]), []).append(row)
    combo_files = {}
    averages = []
    for combo, combo_rows in sorted(by_combo.items()):
        combo_files[combo] = write_combo_csv(combo_rows, directory, combo, columns)
        averages.append(average_rows(
            sorted(combo_rows, key=lambda r: r["Test ID"]), columns, metrics,
        ))
    final = Path(directory) / FINAL_DATASET
    _write_csv(final, [c for c in columns if c != "Test ID"], averages)
    return ExportedResults(combo_files, final, averages)


def read_csv(path: str | os.PathLike) -> list[dict[str, str]]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
