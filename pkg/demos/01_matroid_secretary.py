# Ordinal secretary on a partition matroid
#
# The algorithm never sees a weight. It only learns, at each arrival, how
# the arrived elements rank against each other.

# %%
import numpy as np

from ordsec.core import HiddenWeightStore, OrdinalOracle, sample_arrival, EVALUATION_KEY
from ordsec.matroid import PartitionMatroid, linear_matroid_secretary, matroid_greedy_ordinal

rng = np.random.default_rng(7)
n = 30
M = PartitionMatroid(rng.integers(0, 5, n), np.full(5, 2))
store = HiddenWeightStore(rng.random(n))

# %% offline optimum: greedy needs only the order
opt = store.value(EVALUATION_KEY, sorted(matroid_greedy_ordinal(OrdinalOracle.offline(store), M)))

# %% average over random arrival orders
vals = []
for s in range(2000):
    seq = sample_arrival(n, s)
    S = linear_matroid_secretary(M, seq, OrdinalOracle(store, seq))
    vals.append(store.value(EVALUATION_KEY, sorted(S)))
print(f"opt {opt:.3f}  mean alg {np.mean(vals):.3f}  ratio {opt / np.mean(vals):.3f}")

# %% threshold policies and the deterministic lower-bound family
from ordsec.matroid import best_deterministic_threshold, lower_bound_formula

for n in (100, 400):
    sw = best_deterministic_threshold(n, trials=300, seed=1)
    print(n, sw.k, "best threshold", sw.position, "ratio", round(sw.ratio, 3),
          "formula", round(lower_bound_formula(n, sw.k), 3))
