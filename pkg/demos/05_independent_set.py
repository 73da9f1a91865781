# Independent set on unit-disk graphs: Sample-and-Price and its offline twin

# %%
import math

from ordsec.harness import ExperimentConfig, run_experiment
from ordsec.indepset import ratio_bound

p = math.sqrt(5 / 6)
for alg in ("sample-and-price", "simulate"):
    res = run_experiment(ExperimentConfig("indepset", 20, trials=2000, instances=3, seed=9,
                                          algorithm=alg, p=p), write=False)
    print(alg, [round(e.ratio, 2) for e in res.estimates])
print("bound", round(ratio_bound(5, p), 2))
