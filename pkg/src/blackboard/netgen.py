"""Seeded random generation of experiment networks.

Generation runs in a fixed order so that a ``(params, seed)`` pair always
yields the same network: common properties and facts, generic rules,
containers, fact assignment, start/end selection, then links (regenerated
until the network is traversable).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import (
    CommonProperty, ConditionPair, Container, Fact, GenericRule, Link, Network,
)
from .pathsearch import MAX_DEPTH, find_long_path


class GenerationError(RuntimeError):
    """The link generator ran out of attempts to build a traversable network."""


class FactAssignment(Enum):
    UNIFORM = "Uniform"
    RANDOM = "Random"


class RuleMethod(Enum):
    UNIFORM = "uniform"
    RANDOM = "random"
    HYBRID = "hybrid"


# (attribute, setting name as written to save files / config files)
SETTING_NAMES = (
    ("fact_count", "fact count"),
    ("rule_count", "rule count"),
    ("link_count", "link count"),
    ("container_count", "container count"),
    ("common_property_count", "common property count"),
    ("properties_per_rule", "properties per rule"),
    ("fact_assignment", "fact assignment"),
    ("hybrid_rule_chance", "hybrid rule chance"),
    ("ignore_chance", "ignore chance"),
    ("create_chance", "create chance"),
)


@dataclass(frozen=True)
class GenerationParams:
    """Network generation inputs; defaults are the standard experiment settings."""

    fact_count: int = 100
    rule_count: int = 100
    link_count: int = 100
    container_count: int = 50
    common_property_count: int = 50
    properties_per_rule: int = 10
    fact_assignment: FactAssignment = FactAssignment.UNIFORM
    hybrid_rule_chance: float = 0.5
    ignore_chance: float = 0.25
    create_chance: float = 0.25
    max_link_attempts: int = 1000

    def __post_init__(self):
        if not isinstance(self.fact_assignment, FactAssignment):
            object.__setattr__(self, "fact_assignment", FactAssignment(self.fact_assignment))
        for name in ("fact_count", "rule_count", "link_count", "container_count",
                     "common_property_count", "properties_per_rule", "max_link_attempts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.container_count < 2:
            raise ValueError("container_count must be >= 2")
        if self.properties_per_rule > self.common_property_count:
            raise ValueError("properties_per_rule exceeds common_property_count")
        for name in ("hybrid_rule_chance", "ignore_chance", "create_chance"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    @property
    def min_path_length(self) -> int:
        return self.container_count // 2

    def replace(self, **changes) -> "GenerationParams":
        return dataclasses.replace(self, **changes)

    def to_settings(self) -> dict[str, str]:
        out = {}
        for attr, name in SETTING_NAMES:
            value = getattr(self, attr)
            out[name] = value.value if isinstance(value, Enum) else repr(value)
        return out

    @classmethod
    def from_settings(cls, settings: dict[str, str]) -> "GenerationParams":
        """Inverse of :meth:`to_settings`; missing names keep their defaults."""
        kwargs = {}
        fields = {f.name: f for f in dataclasses.fields(cls)}
        for attr, name in SETTING_NAMES:
            if name not in settings:
                continue
            text = settings[name].strip()
            if attr == "fact_assignment":
                kwargs[attr] = FactAssignment(text.capitalize())
            elif fields[attr].type == "int":
                kwargs[attr] = int(text)
            else:
                kwargs[attr] = _parse_probability(text)
        return cls(**kwargs)


def _parse_probability(text: str) -> float:
    if text.endswith("%"):
        return float(text[:-1]) / 100.0
    return float(text)


class Rng:
    """Seeded PCG64 stream with the handful of draws the generator needs.

    Sampling is built only on bounded integer draws and uniform doubles,
    both of which PCG64 produces identically on every platform.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        return int(self._gen.integers(n))

    def chance(self, p: float) -> bool:
        return bool(self._gen.random() < p)

    def coin(self) -> bool:
        return self.below(2) == 1

    def sample(self, n: int, k: int) -> list[int]:
        """``k`` distinct values from ``range(n)`` (partial Fisher-Yates)."""
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


# -- properties, facts, rules ------------------------------------------------

def generate_properties_and_facts(
    params: GenerationParams, rng: Rng,
) -> tuple[list[CommonProperty], list[Fact]]:
    props = [CommonProperty(i, f"cp{i}") for i in range(params.common_property_count)]
    facts = []
    for i in range(params.fact_count):
        prop = rng.below(params.common_property_count)
        facts.append(Fact(i, rng.coin(), property_id=prop))
    return props, facts


def _random_pairs(props: list[int], rng: Rng) -> list[ConditionPair]:
    return [ConditionPair(p, rng.coin()) for p in props]


def _hybrid_props(before: list[int], n_props: int, chance: float, rng: Rng) -> list[int]:
    after = list(before)
    for i in range(len(after)):
        if not rng.chance(chance):
            continue
        # resample to a property not already in the list (so it differs from before[i])
        free = [p for p in range(n_props) if p not in after]
        if free:
            after[i] = free[rng.below(len(free))]
    return after


def generate_generic_rule(
    params: GenerationParams, rng: Rng, rule_id: int = 0,
    method: RuleMethod | None = None,
) -> GenericRule:
    """Random generic rule using one of the three construction methods.

    The method is drawn with equal probability unless ``method`` is given.
    """
    n, k = params.common_property_count, params.properties_per_rule
    if k > n:
        raise ValueError("properties_per_rule exceeds common_property_count")
    drawn = list(RuleMethod)[rng.below(3)]
    method = method or drawn
    before_one = rng.sample(n, k)
    before_two = rng.sample(n, k)
    if method is RuleMethod.UNIFORM:
        after_one, after_two = list(before_one), list(before_two)
    elif method is RuleMethod.RANDOM:
        after_one, after_two = rng.sample(n, k), rng.sample(n, k)
    else:
        after_one = _hybrid_props(before_one, n, params.hybrid_rule_chance, rng)
        after_two = _hybrid_props(before_two, n, params.hybrid_rule_chance, rng)
    rule = GenericRule(
        rule_id,
        f"gr{rule_id}",
        before_one=_random_pairs(before_one, rng),
        before_two=_random_pairs(before_two, rng),
        after_one=_random_pairs(after_one, rng),
        after_two=_random_pairs(after_two, rng),
    )
    rule.ignore_if_not_present = rng.chance(params.ignore_chance)
    rule.create_if_not_present = rng.chance(params.create_chance)
    return rule


# -- containers and links ----------------------------------------------------

def assign_facts(
    params: GenerationParams, containers: list[int], facts: list[int], rng: Rng,
) -> dict[int, list[int]]:
    """Map container id -> attached fact ids."""
    if not containers:
        raise ValueError("no containers to assign facts to")
    attached: dict[int, list[int]] = {cid: [] for cid in containers}
    if params.fact_assignment is FactAssignment.UNIFORM:
        remaining = list(facts)
        while remaining:
            for cid in containers:
                if not remaining:
                    break
                attached[cid].append(remaining.pop(rng.below(len(remaining))))
    else:
        for fid in facts:
            attached[containers[rng.below(len(containers))]].append(fid)
    return attached


def pick_endpoints(containers: list[int], rng: Rng) -> tuple[int, int]:
    if len(containers) < 2:
        raise ValueError("need at least two containers")
    start, end = rng.sample(len(containers), 2)
    return containers[start], containers[end]


def _other(containers: list[int], index: int, rng: Rng) -> int:
    j = rng.below(len(containers) - 1)
    return containers[j + 1 if j >= index else j]


def _link_attempt(params: GenerationParams, containers: list[int], rng: Rng) -> list[Link]:
    links: list[Link] = []
    remaining = params.link_count
    n = len(containers)
    while remaining >= n:
        for i, cid in enumerate(containers):
            links.append(Link(len(links), cid, _other(containers, i, rng), f"link{len(links)}"))
        remaining -= n
    for _ in range(remaining):
        a, b = rng.sample(n, 2)
        links.append(Link(len(links), containers[a], containers[b], f"link{len(links)}"))
    return links


def generate_links(
    params: GenerationParams, network: Network, rng: Rng,
) -> list[Link]:
    """Create links on ``network`` until it passes :func:`validate_traversability`.

    Every failed attempt deletes all links and starts over.
    """
    containers = sorted(network.containers)
    for _ in range(params.max_link_attempts):
        network.links.clear()
        links = _link_attempt(params, containers, rng)
        for link in links:
            network.add(link)
        if validate_traversability(network):
            return links
    network.links.clear()
    raise GenerationError(
        f"no traversable network after {params.max_link_attempts} link attempts "
        f"({params.container_count} containers, {params.link_count} links)"
    )


def validate_traversability(network: Network, max_depth: int = MAX_DEPTH) -> bool:
    """True iff a simple start-to-end path exists of length >= half the container count."""
    if network.start_container is None or network.end_container is None:
        raise ValueError("network has no start/end containers")
    if not network.links:
        return False
    min_len = max(1, len(network.containers) // 2)
    return find_long_path(network, min_len, max_depth) is not None


def generate_network(params: GenerationParams, seed: int) -> Network:
    rng = Rng(seed)
    network = Network(settings=params.to_settings())
    props, facts = generate_properties_and_facts(params, rng)
    for prop in props:
        network.add(prop)
    for fact in facts:
        network.add(fact)
    for i in range(params.rule_count):
        network.add(generate_generic_rule(params, rng, i))
    for i in range(params.container_count):
        network.add(Container(i, f"container{i}"))
    containers = list(range(params.container_count))
    attached = assign_facts(params, containers, [f.id for f in facts], rng)
    for cid in containers:
        for fid in attached[cid]:
            network.attach_fact(cid, fid)
    network.set_endpoints(*pick_endpoints(containers, rng))
    generate_links(params, network, rng)
    return network
