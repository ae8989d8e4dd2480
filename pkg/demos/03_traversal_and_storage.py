# %% [markdown]
# # Traversing a network and replaying it from disk
#
# The harness saves the initial network, walks the shortest qualifying path
# and writes one small change file per link. Loading the save and applying
# the change files in order rebuilds the final state.

# %%
import tempfile
from pathlib import Path

from blackboard import GenerationParams, find_shortest_path, generate_network, simulate_traversal
from blackboard.persistence import (
    apply_changes, change_files, load_network, network_digest, save_initial, write_change_file,
)

params = GenerationParams(ignore_chance=0.75, create_chance=0.75)
net = generate_network(params, seed=3)
path, ticks = find_shortest_path(net)
net.shortest_path = path
print(f"path of {len(path)} links found in {ticks} ticks")

# %%
out = Path(tempfile.mkdtemp())
save, size = save_initial(net, out, 0)
report = simulate_traversal(net, path)
sizes = [write_change_file(out, 0, step)[1] for step in report.steps]
fired = sum(len(step.applied) for step in report.steps)
print(f"initial save {size} bytes, {len(sizes)} change files, {sum(sizes)} bytes of changes")
print(f"{fired} rule applications, traversal took {report.total_time} ticks")

# %%
replayed = load_network(save)
for change in change_files(out / "changes", 0):
    apply_changes(replayed, change.read_text())
print("replayed state matches:", network_digest(replayed) == network_digest(net))

# %% [markdown]
# The first change file with any rule activity:

# %%
busy = next(p for p in change_files(out / "changes", 0) if "genericrule" in p.read_text())
print(busy.name)
print(busy.read_text())
