# Bipartite and general matching with ordinal information

# %%
import numpy as np

from ordsec.core import EVALUATION_KEY, HiddenWeightStore, sample_arrival
from ordsec.matching import (BipartiteInstance, GeneralInstance, bipartite_oracle, bipartite_secretary,
                             general_oracle, general_secretary, max_weight_matching_exact)

rng = np.random.default_rng(0)
b = BipartiteInstance.from_matrix(rng.random((20, 20)))
store = HiddenWeightStore(b.weight)
opt = max_weight_matching_exact(b)[1]

vals = []
for s in range(1000):
    seq = sample_arrival(b.n_left, s)
    res = bipartite_secretary(b.without_weights(), seq, bipartite_oracle(b, store, seq))
    vals.append(store.value(EVALUATION_KEY, sorted(res.selected)))
print(f"bipartite 20x20: ratio {opt / np.mean(vals):.3f}  (bound 2e = {2 * np.e:.3f})")

# %% general graph, vertices arrive
n = 12
iu, iv = np.triu_indices(n, 1)
g = GeneralInstance(n, iu, iv, rng.random(iu.size))
store = HiddenWeightStore(g.weight)
opt = max_weight_matching_exact(g)[1]
vals = []
for s in range(1000):
    seq = sample_arrival(n, s)
    res = general_secretary(g.without_weights(), seq, general_oracle(g, store, seq))
    vals.append(store.value(EVALUATION_KEY, sorted(res.selected)))
print(f"general n=12: ratio {opt / np.mean(vals):.3f}")
