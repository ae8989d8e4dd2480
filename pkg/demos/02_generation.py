# %% [markdown]
# # Generating a random network
#
# Default parameters give 100 facts over 50 containers, 100 generic rules and
# 100 links. Generation is reproducible from a single integer seed.

# %%
from collections import Counter

import numpy as np

from blackboard import FactAssignment, GenerationParams, generate_network
from blackboard.pathsearch import find_long_path

params = GenerationParams()
net = generate_network(params, seed=7)
print(len(net.facts), "facts,", len(net.containers), "containers,", len(net.links), "links")

# %% [markdown]
# Uniform assignment deals facts round-robin; random assignment does not.

# %%
for method in FactAssignment:
    n = generate_network(params.replace(fact_assignment=method), seed=7)
    sizes = np.array([len(c.fact_ids) for c in n.containers.values()])
    print(f"{method.value:8s} facts per container: min {sizes.min()} max {sizes.max()} std {sizes.std():.2f}")

# %% [markdown]
# Each link pass gives every container one outgoing link, so the out-degree
# is at least two at the defaults. The generator keeps redrawing links until
# a long enough route from start to end exists.

# %%
out_degree = Counter(link.origin for link in net.links.values())
print("out-degree histogram:", sorted(Counter(out_degree.values()).items()))
path = find_long_path(net, params.min_path_length)
print("start", net.start_container, "end", net.end_container, "witness path length", len(path))

# %% [markdown]
# Rule bodies come from three methods picked with equal odds.

# %%
widths = [len(r.before_one) for r in net.generic_rules.values()]
print("conditions per list:", set(widths))
print("ignore flags set:", sum(r.ignore_if_not_present for r in net.generic_rules.values()))
print("create flags set:", sum(r.create_if_not_present for r in net.generic_rules.values()))
