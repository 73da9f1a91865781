# Two sanity properties of ordinal algorithms
#
# 1. A strictly increasing transform of the weights changes nothing.
# 2. Collapsing weights to {0, 1} along the order never helps the algorithm.

# %%
from ordsec.harness import ExperimentConfig, run_experiment

kw = dict(trials=20, seed=5, keep_selected=True)
a = run_experiment(ExperimentConfig("general", 10, transform="none", **kw), write=False)
b = run_experiment(ExperimentConfig("general", 10, transform="cubic", **kw), write=False)
print("same selections:", [r.selected for r in a.reports] == [r.selected for r in b.reports])

# %%
import numpy as np

from ordsec.reduction import reduce_to_01_weights

w = np.array([5.0, 4.0, 3.5, 1.0, 0.5])
red = reduce_to_01_weights(w, optimal={0, 1}, chosen={1, 3})
print(red.weights, round(red.ratio_before, 3), "->", red.ratio_bound)
