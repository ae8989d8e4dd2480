# %% [markdown]
# # Promoting an employee with a generic rule
#
# A two-container model: a person and the team they join. One generic rule
# is written against common properties, so it can fire on any link whose
# endpoints match, without naming specific facts.

# %%
from blackboard import (
    CommonProperty, ConditionPair, Container, Fact, GenericRule, Link, Network,
    apply_generic_rule_to_link, check_generic_rule,
)
from blackboard.persistence import dumps_network, dumps_step
from blackboard.traversal import TraversalStep

net = Network()
for name in ("isEmployee", "isManager", "isTeam", "hasManager"):
    net.add(CommonProperty(None, name))
is_employee, is_manager, is_team, has_manager = range(4)

net.add(Fact(None, True, property_id=is_employee))
net.add(Fact(None, True, property_id=is_team))
net.add(Fact(None, False, property_id=has_manager))
person = net.add(Container(None, "John Doe", [0]))
team = net.add(Container(None, "Front Desk", [1, 2]))
joins = net.add(Link(None, person, team, "member of"))

# %% [markdown]
# The person has no `isManager` fact at all. With ignore-if-not-present set,
# that absence is forgiven during checking, and create-if-not-present lets
# execution add the missing fact.

# %%
rule = net.add(GenericRule(
    None, "Promote Employee",
    before_one=[ConditionPair(is_employee, True), ConditionPair(is_manager, False)],
    before_two=[ConditionPair(is_team, True), ConditionPair(has_manager, False)],
    after_one=[ConditionPair(is_manager, True)],
    after_two=[ConditionPair(has_manager, True)],
    ignore_if_not_present=True,
    create_if_not_present=True,
))
print("compatible:", check_generic_rule(net, rule, person, team))

changes = apply_generic_rule_to_link(net, rule, joins)
for record in changes.records:
    print(record.kind.value, "fact", record.fact_id, "in", net.containers[record.container_id].description,
          "->", net.common_properties[record.property_id].description, "=", record.value)

# %% [markdown]
# The change file for this link records exactly what was written.

# %%
print(dumps_step(TraversalStep(0, joins, [changes])))

# %% [markdown]
# A second pass finds the rule incompatible: John Doe now holds
# `isManager = True`, and a value mismatch is never forgiven.

# %%
print("second run:", apply_generic_rule_to_link(net, rule, joins))
print(dumps_network(net))
