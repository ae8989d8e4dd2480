"""Blackboard Architecture with containers, links, common properties and generic rules."""

from .model import (
    ActionStub, BasicRule, CommonProperty, ConditionPair, Container, Fact, GenericRule,
    Link, ModelError, Network,
)
from .netgen import FactAssignment, GenerationError, GenerationParams, Rng, generate_network
from .rules import (
    ChangeKind, ChangeRecord, ChangeSet, apply_generic_rule_to_link, check_generic_rule,
    evaluate_basic_rule, execute_generic_rule, run_basic_inference,
)
from .traversal import find_shortest_path, simulate_traversal, to_ticks

__all__ = [
    "ActionStub", "BasicRule", "CommonProperty", "ConditionPair", "Container", "Fact",
    "GenericRule", "Link", "ModelError", "Network",
    "FactAssignment", "GenerationError", "GenerationParams", "Rng", "generate_network",
    "ChangeKind", "ChangeRecord", "ChangeSet", "apply_generic_rule_to_link",
    "check_generic_rule", "evaluate_basic_rule", "execute_generic_rule", "run_basic_inference",
    "find_shortest_path", "simulate_traversal", "to_ticks",
]
