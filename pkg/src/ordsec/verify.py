"""Quick property suites behind ``ordsec verify``.

Each check runs at small scale and returns a :class:`Check`. They mirror
the invariants the test suite asserts at full scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import EVALUATION_KEY, HiddenWeightStore, OrdinalOracle, mix64, sample_arrival
from .harness import PROBLEMS, ExperimentConfig, run_experiment
from .matching import GeneralInstance, greedy_matching_ordinal, max_weight_matching_exact
from .matroid import UniformMatroid
from .reduction import reduce_to_01_weights
from .submodular import CoverageFunction, MarginalOracle, greedy_submodular, greedy_acceptance_step


@dataclass
class Check:
    name: str
    ok: bool
    detail: str


_SMALL = {"bipartite": 8, "general": 8, "packing": 12, "indepset": 10, "matroid": 12, "submodular": 7}


def check_purity(seed=0, trials=20) -> Check:
    bad = []
    for name, n in _SMALL.items():
        for alg in PROBLEMS[name].algorithms:
            runs = []
            for tr in ("none", "cubic"):
                cfg = ExperimentConfig(name, n, trials=trials, instances=2, seed=seed, algorithm=alg,
                                       transform=tr, keep_selected=True)
                runs.append([r.selected for r in run_experiment(cfg, write=False).reports])
            if runs[0] != runs[1]:
                bad.append(f"{name}/{alg}")
    return Check("ordinal purity (x^3 + x)", not bad, ", ".join(bad) or "all selections identical")


def check_determinism(seed=0, trials=20) -> Check:
    cfg = ExperimentConfig("bipartite", 6, trials=trials, instances=2, seed=seed)
    a = run_experiment(cfg, write=False).csv_text()
    b = run_experiment(cfg, write=False).csv_text()
    return Check("seeded replay", a == b, "csv identical" if a == b else "csv differs")


def check_greedy_matching(seed=0, count=500) -> Check:
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(count):
        n = int(rng.integers(2, 9))
        iu, iv = np.triu_indices(n, 1)
        keep = rng.random(iu.size) < 0.6
        if not keep.any():
            continue
        w = rng.random(int(keep.sum()))
        g = GeneralInstance(n, iu[keep], iv[keep], w)
        store = HiddenWeightStore(w)
        greedy = greedy_matching_ordinal(OrdinalOracle.offline(store), g)
        opt = max_weight_matching_exact(g)[1]
        if opt > 0:
            worst = min(worst, w[greedy].sum() / opt)
    return Check("greedy matching >= opt/2", worst >= 0.5, f"worst greedy/opt = {worst:.4f}")


def check_reduction(seed=0, count=300) -> Check:
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        w = np.round(rng.random(n) * 4, 1)
        opt = set(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
        alg = set(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False).tolist())
        red = reduce_to_01_weights(w, opt, alg)
        if red.ratio_bound < red.ratio_before - 1e-12:
            violations += 1
        if np.any(np.diff(red.weights[red.order]) > 0):
            violations += 1
    return Check("0/1 reduction never improves the ratio", violations == 0, f"{violations} violations")


def check_forwarding_order(seed=0, count=200) -> Check:
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        U = 2 * n
        f = CoverageFunction(rng.random(U), [np.flatnonzero(rng.random(U) < 0.3) for _ in range(n)])
        mat = UniformMatroid(n, int(rng.integers(1, n + 1)))
        seq = sample_arrival(n, int(rng.integers(1 << 62)))
        seq.cursor = n
        oracle = MarginalOracle(f, seq)
        L = [int(e) for e in seq.permutation[: int(rng.integers(0, n))]]
        greedy = greedy_submodular(oracle, mat, L)
        vals = []
        for u in set(range(n)) - set(L):
            s = greedy_acceptance_step(oracle, mat, greedy.solution, u)
            if s is not None:
                vals.append((s, f.marginal(u, greedy.prefix(s))))
        for s1, v1 in vals:
            for s2, v2 in vals:
                if s1 < s2 and v1 < v2 - 1e-12:
                    violations += 1
    return Check("forwarding order respects true marginals", violations == 0, f"{violations} violations")


SUITES = (check_purity, check_determinism, check_greedy_matching, check_reduction, check_forwarding_order)


def run_all(seed=0) -> list[Check]:
    return [suite(seed=mix64(seed, i) & 0xFFFFFFFF) for i, suite in enumerate(SUITES)]
