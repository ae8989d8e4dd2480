# %% [markdown]
# # A small parameter sweep
#
# Vary one parameter at a time, run several seeded tests per level, and look
# at the averaged metrics. Timings are in 100 ns ticks and depend on the
# machine; sizes and path lengths are exact and reproducible.

# %%
import tempfile
from pathlib import Path

import numpy as np

from blackboard.harness import ExperimentConfig, run_sweep

out = Path(tempfile.mkdtemp())
config = ExperimentConfig(
    sweep=[("container_count", (50, 100)), ("properties_per_rule", (1, 5))],
    tests_per_combination=5,
    master_seed=1,
    out_dir=out,
    jobs=4,
)
averages = run_sweep(config)

# %%
print(f"{'containers':>10} {'props/rule':>10} {'assign':>8} {'init bytes':>11} {'path':>6} {'ticks':>8}")
for row in averages:
    print(f"{row['Container Count']:>10} {row['Number of Common Properties per Rule']:>10} "
          f"{row['Fact Assignment Method']:>8} {row['Initial Network Size']:>11.1f} "
          f"{row['Path Length']:>6.1f} {row['Total Traversal Time']:>8.0f}")

# %% [markdown]
# Path length tracks half the container count closely.

# %%
by_c = {}
for row in averages[:4]:
    by_c.setdefault(row["Container Count"], []).append(row["Path Length"])
for c, lengths in by_c.items():
    print(c, "containers: mean path", np.mean(lengths), "floor(C/2) =", c // 2)

print("results written to", out / "results.csv")
