"""Basic rule firing and two-phase generic rule evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .model import ConditionPair, Fact, GenericRule, ModelError, Network


class ChangeKind(Enum):
    FACT_ADDED = "addition"
    FACT_CHANGED = "change"


@dataclass(frozen=True)
class ChangeRecord:
    kind: ChangeKind
    container_id: int | None
    fact_id: int
    property_id: int | None
    value: bool


@dataclass
class ChangeSet:
    rule_id: int
    records: list[ChangeRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)


def _rule(network: Network, rule_id: int) -> GenericRule:
    try:
        return network.generic_rules[rule_id]
    except KeyError:
        raise ModelError(f"unknown generic rule id {rule_id}") from None


def _container(network: Network, container_id: int):
    try:
        return network.containers[container_id]
    except KeyError:
        raise ModelError(f"unknown container id {container_id}") from None


# -- basic rules -------------------------------------------------------------

def evaluate_basic_rule(network: Network, rule_id: int) -> tuple[bool, ChangeSet]:
    """Fire the rule if all its inputs are true; outputs are set to true."""
    try:
        rule = network.basic_rules[rule_id]
    except KeyError:
        raise ModelError(f"unknown basic rule id {rule_id}") from None
    changes = ChangeSet(rule_id)
    facts = network.facts
    if not all(facts[fid].value for fid in rule.input_fact_ids):
        return False, changes
    for fid in rule.output_fact_ids:
        fact = facts[fid]
        if not fact.value:
            fact.value = True
            changes.records.append(ChangeRecord(
                ChangeKind.FACT_CHANGED, network.container_of(fid), fid, fact.property_id, True,
            ))
    return True, changes


def run_basic_inference(network: Network, order: Iterable[int] | None = None) -> int:
    """Scan rules until a full pass fires nothing; each rule fires at most once.

    ``order`` overrides the default ascending-id scan order. Returns the
    number of firings.
    """
    scan = list(order) if order is not None else sorted(network.basic_rules)
    fired: set[int] = set()
    while True:
        fired_this_pass = 0
        for rid in scan:
            if rid in fired:
                continue
            triggered, _ = evaluate_basic_rule(network, rid)
            if triggered:
                fired.add(rid)
                fired_this_pass += 1
        if not fired_this_pass:
            return len(fired)


# -- generic rules -----------------------------------------------------------

def _conditions_hold(
    network: Network, container_id: int, pairs: list[ConditionPair], ignore_absent: bool,
) -> bool:
    facts = network.facts
    fact_ids = network.containers[container_id].fact_ids
    for prop, wanted in pairs:
        bound = [facts[fid].value for fid in fact_ids if facts[fid].property_id == prop]
        if not bound:
            if not ignore_absent:
                return False
        elif any(value != wanted for value in bound):
            return False
    return True


def check_generic_rule(network: Network, rule_id: int, c1: int, c2: int) -> bool:
    """Checking phase. Never mutates the network.

    Absent properties are forgiven only when the rule's
    ``ignore_if_not_present`` flag is set; a present fact holding the wrong
    value always fails the check.
    """
    rule = _rule(network, rule_id)
    _container(network, c1)
    _container(network, c2)
    ignore = rule.ignore_if_not_present
    return (
        _conditions_hold(network, c1, rule.before_one, ignore)
        and _conditions_hold(network, c2, rule.before_two, ignore)
    )


def _apply_after(
    network: Network, container_id: int, pairs: list[ConditionPair], create: bool,
    changes: ChangeSet,
) -> None:
    for prop, target in pairs:
        matches = network.facts_with_property(container_id, prop)
        for fid in matches:
            fact = network.facts[fid]
            if fact.value != target:
                fact.value = target
                changes.records.append(ChangeRecord(
                    ChangeKind.FACT_CHANGED, container_id, fid, prop, target,
                ))
        if not matches and create:
            fid = network.add(Fact(None, target, property_id=prop))
            network.attach_fact(container_id, fid)
            changes.records.append(ChangeRecord(
                ChangeKind.FACT_ADDED, container_id, fid, prop, target,
            ))


def execute_generic_rule(network: Network, rule_id: int, c1: int, c2: int) -> ChangeSet:
    """Execution phase: write after-run values, container one first.

    The caller is responsible for having checked the rule on this pair.
    """
    rule = _rule(network, rule_id)
    _container(network, c1)
    _container(network, c2)
    changes = ChangeSet(rule_id)
    _apply_after(network, c1, rule.after_one, rule.create_if_not_present, changes)
    _apply_after(network, c2, rule.after_two, rule.create_if_not_present, changes)
    return changes


def apply_generic_rule_to_link(network: Network, rule_id: int, link_id: int) -> ChangeSet | None:
    """Check then execute the rule on a link's (origin, destination) pair.

    Returns ``None`` when the rule is not compatible with the link.
    """
    try:
        link = network.links[link_id]
    except KeyError:
        raise ModelError(f"unknown link id {link_id}") from None
    if not check_generic_rule(network, rule_id, link.origin, link.destination):
        return None
    return execute_generic_rule(network, rule_id, link.origin, link.destination)
