# Submodular matroid secretary through a linear ordinal algorithm
#
# A sample phase runs greedy, later arrivals are forwarded to a linear
# algorithm that only sees a synthetic order built from greedy steps.

# %%
import itertools

import numpy as np

from ordsec.core import sample_arrival
from ordsec.matroid import UniformMatroid
from ordsec.submodular import CoverageFunction, MarginalOracle, online_p_reduction

rng = np.random.default_rng(3)
n, U = 10, 20
f = CoverageFunction(rng.random(U), [np.flatnonzero(rng.random(U) < 0.25) for _ in range(n)])
M = UniformMatroid(n, 3)
opt = max(f.value(S) for S in itertools.combinations(range(n), 3))

# %%
vals = []
for s in range(3000):
    seq = sample_arrival(n, s)
    res = online_p_reduction(MarginalOracle(f, seq), M, seq, 0.5, rng=np.random.default_rng(s))
    vals.append(f.value(sorted(res.selected)))
print(f"opt {opt:.3f}  mean {np.mean(vals):.3f}  ratio {opt / np.mean(vals):.2f}")

# %% one run in detail
seq = sample_arrival(n, 11)
res = online_p_reduction(MarginalOracle(f, seq), M, seq, 0.5, rng=np.random.default_rng(11))
print("sample", res.sample, "greedy", res.greedy.solution)
print("forwarded order", res.order, "selected", sorted(res.selected))
