"""Domain entities of the extended Blackboard Architecture.

A :class:`Network` owns every entity by id. Facts are either *instance*
facts, which take their meaning from a :class:`CommonProperty`, or plain
facts carrying their own description. Containers group facts; links are
directed container-to-container relationships.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Union


class ModelError(ValueError):
    """Raised when an operation would break the network's integrity."""


@dataclass
class CommonProperty:
    id: int | None
    description: str


@dataclass
class Fact:
    """A boolean node. Exactly one of ``property_id``/``description`` is set."""

    id: int | None
    value: bool
    property_id: int | None = None
    description: str | None = None

    @property
    def is_instance(self) -> bool:
        return self.property_id is not None


@dataclass
class Container:
    id: int | None
    description: str
    fact_ids: list[int] = field(default_factory=list)


@dataclass
class Link:
    id: int | None
    origin: int
    destination: int
    description: str = ""


@dataclass
class BasicRule:
    id: int | None
    input_fact_ids: list[int]
    output_fact_ids: list[int]


class ConditionPair(NamedTuple):
    property_id: int
    value: bool


@dataclass
class GenericRule:
    """Instance-agnostic rule over a (container one, container two) pair."""

    id: int | None
    title: str
    before_one: list[ConditionPair] = field(default_factory=list)
    before_two: list[ConditionPair] = field(default_factory=list)
    after_one: list[ConditionPair] = field(default_factory=list)
    after_two: list[ConditionPair] = field(default_factory=list)
    ignore_if_not_present: bool = False
    create_if_not_present: bool = False

    def condition_lists(self) -> tuple[list[ConditionPair], ...]:
        return (self.before_one, self.before_two, self.after_one, self.after_two)


@dataclass
class ActionStub:
    """Placeholder for actions; never executed."""

    id: int | None
    description: str


Entity = Union[CommonProperty, Fact, Container, Link, BasicRule, GenericRule, ActionStub]

# entity type -> name of the Network collection holding it
_COLLECTIONS = {
    CommonProperty: "common_properties",
    Fact: "facts",
    Container: "containers",
    Link: "links",
    BasicRule: "basic_rules",
    GenericRule: "generic_rules",
    ActionStub: "actions",
}

MAX_RULE_ARITY = 4


@dataclass
class Network:
    """The complete blackboard state.

    ``settings`` holds the generation parameters (name -> text value) the
    network was built from; it is empty for hand-built networks.
    """

    common_properties: dict[int, CommonProperty] = field(default_factory=dict)
    facts: dict[int, Fact] = field(default_factory=dict)
    containers: dict[int, Container] = field(default_factory=dict)
    links: dict[int, Link] = field(default_factory=dict)
    basic_rules: dict[int, BasicRule] = field(default_factory=dict)
    generic_rules: dict[int, GenericRule] = field(default_factory=dict)
    actions: dict[int, ActionStub] = field(default_factory=dict)
    start_container: int | None = None
    end_container: int | None = None
    shortest_path: list[int] | None = None
    settings: dict[str, str] = field(default_factory=dict)
    _owner: dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    # -- insertion ---------------------------------------------------------

    def next_id(self, kind: type) -> int:
        collection = getattr(self, _COLLECTIONS[kind])
        return max(collection, default=-1) + 1

    def add(self, entity: Entity) -> int:
        """Store ``entity``, assigning the next sequential id when it has none."""
        try:
            name = _COLLECTIONS[type(entity)]
        except KeyError:
            raise TypeError(f"not a network entity: {entity!r}") from None
        collection = getattr(self, name)
        if entity.id is None:
            entity.id = self.next_id(type(entity))
        elif not isinstance(entity.id, int) or entity.id < 0:
            raise ModelError(f"ids must be non-negative integers, got {entity.id!r}")
        if entity.id in collection:
            raise ModelError(f"duplicate {type(entity).__name__} id {entity.id}")
        self._check_entity(entity)
        collection[entity.id] = entity
        if isinstance(entity, Container):
            fact_ids, entity.fact_ids = list(entity.fact_ids), []
            for fid in fact_ids:
                self.attach_fact(entity.id, fid)
        return entity.id

    def _check_entity(self, entity: Entity) -> None:
        if isinstance(entity, CommonProperty):
            if not entity.description:
                raise ModelError("common property description must be non-empty")
        elif isinstance(entity, Fact):
            if (entity.property_id is None) == (entity.description is None):
                raise ModelError(
                    f"fact {entity.id} needs exactly one of property_id or description"
                )
            if entity.property_id is not None:
                self._require(self.common_properties, entity.property_id, "common property")
        elif isinstance(entity, Container):
            for fid in entity.fact_ids:
                self._require(self.facts, fid, "fact")
        elif isinstance(entity, Link):
            self._require(self.containers, entity.origin, "container")
            self._require(self.containers, entity.destination, "container")
            if entity.origin == entity.destination:
                raise ModelError(f"link {entity.id} is a self-link")
        elif isinstance(entity, BasicRule):
            for ids, label in ((entity.input_fact_ids, "inputs"), (entity.output_fact_ids, "outputs")):
                if not 1 <= len(ids) <= MAX_RULE_ARITY:
                    raise ModelError(f"basic rule {entity.id} needs 1-4 {label}, got {len(ids)}")
                for fid in ids:
                    self._require(self.facts, fid, "fact")
        elif isinstance(entity, GenericRule):
            for pairs in entity.condition_lists():
                seen = set()
                for pair in pairs:
                    self._require(self.common_properties, pair.property_id, "common property")
                    if pair.property_id in seen:
                        raise ModelError(
                            f"generic rule {entity.id} repeats property {pair.property_id} in one list"
                        )
                    seen.add(pair.property_id)

    @staticmethod
    def _require(collection: dict, key: int, label: str) -> None:
        if key not in collection:
            raise ModelError(f"unknown {label} id {key}")

    # -- containers --------------------------------------------------------

    def attach_fact(self, container_id: int, fact_id: int) -> None:
        self._require(self.containers, container_id, "container")
        self._require(self.facts, fact_id, "fact")
        if fact_id in self._owner:
            raise ModelError(
                f"fact {fact_id} already attached to container {self._owner[fact_id]}"
            )
        self.containers[container_id].fact_ids.append(fact_id)
        self._owner[fact_id] = container_id

    def container_of(self, fact_id: int) -> int | None:
        return self._owner.get(fact_id)

    def facts_with_property(self, container_id: int, property_id: int) -> list[int]:
        """Ids of the container's instance facts bound to ``property_id``, in attachment order."""
        self._require(self.containers, container_id, "container")
        facts = self.facts
        return [
            fid for fid in self.containers[container_id].fact_ids
            if facts[fid].property_id == property_id
        ]

    def set_endpoints(self, start: int, end: int) -> None:
        self._require(self.containers, start, "container")
        self._require(self.containers, end, "container")
        if start == end:
            raise ModelError("start and end containers must differ")
        self.start_container, self.end_container = start, end

    def out_links(self) -> dict[int, list[Link]]:
        """Outgoing links per container, each list in ascending link id."""
        adjacency: dict[int, list[Link]] = {cid: [] for cid in self.containers}
        for lid in sorted(self.links):
            link = self.links[lid]
            adjacency[link.origin].append(link)
        return adjacency

    # -- integrity ---------------------------------------------------------

    def validate(self) -> None:
        """Full-scan integrity check; raises :class:`ModelError` on the first violation."""
        for kind, name in _COLLECTIONS.items():
            for key, entity in getattr(self, name).items():
                if not isinstance(entity, kind) or entity.id != key:
                    raise ModelError(f"{name}[{key}] is keyed inconsistently")
        for entity in itertools.chain(
            self.common_properties.values(), self.facts.values(), self.links.values(),
            self.basic_rules.values(), self.generic_rules.values(),
        ):
            self._check_entity(entity)
        owner: dict[int, int] = {}
        for cid, container in self.containers.items():
            for fid in container.fact_ids:
                self._require(self.facts, fid, "fact")
                if fid in owner:
                    raise ModelError(f"fact {fid} appears in containers {owner[fid]} and {cid}")
                owner[fid] = cid
        if owner != self._owner:
            raise ModelError("fact ownership index is out of sync with container lists")
        if self.start_container is not None:
            self._require(self.containers, self.start_container, "container")
        if self.end_container is not None:
            self._require(self.containers, self.end_container, "container")
        if (
            self.start_container is not None
            and self.start_container == self.end_container
        ):
            raise ModelError("start and end containers must differ")
        if self.shortest_path is not None:
            check_path_chain(self, self.shortest_path)


def check_path_chain(network: Network, path: list[int]) -> None:
    """Raise unless ``path`` is a start-to-end chain of existing links."""
    if not path:
        raise ModelError("path is empty")
    for lid in path:
        if lid not in network.links:
            raise ModelError(f"path references unknown link {lid}")
    links = [network.links[lid] for lid in path]
    if links[0].origin != network.start_container:
        raise ModelError("path does not leave the start container")
    if links[-1].destination != network.end_container:
        raise ModelError("path does not reach the end container")
    for a, b in zip(links, links[1:]):
        if a.destination != b.origin:
            raise ModelError(f"links {a.id} and {b.id} do not chain")


def add_entity(network: Network, entity: Entity) -> int:
    return network.add(entity)


def attach_fact(network: Network, container_id: int, fact_id: int) -> None:
    network.attach_fact(container_id, fact_id)


def facts_with_property(network: Network, container_id: int, property_id: int) -> list[int]:
    return network.facts_with_property(container_id, property_id)
