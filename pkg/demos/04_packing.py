# Packing LP secretary, compared against the fractional LP optimum

# %%
from ordsec.harness import ExperimentConfig, run_experiment

cfg = ExperimentConfig("packing", 60, trials=300, instances=3, seed=4, params={"m": 6, "d": 2, "B": 2})
res = run_experiment(cfg, write=False)
for e in res.estimates:
    print(f"LP opt {e.optimum:.3f}  mean {e.mean_value:.3f}  ratio {e.ratio:.3f} +- {e.se:.3f}")

# %% the LP itself, with its duality-gap certificate
from ordsec.harness import make_instance
from ordsec.packing import fractional_lp_optimum, sampling_probability

lp = fractional_lp_optimum(make_instance(cfg, 0))
print("value", round(lp.objective, 4), "gap", lp.gap, "sample prob", round(sampling_probability(2, 2), 5))
