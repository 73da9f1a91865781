"""Monte-Carlo experiments: seeded trials, exact optima, ratio estimates.

Every trial draws its own arrival order from
``mix64(master_seed, instance_id, trial)``; the instance itself comes from
``mix64(master_seed, instance_id, 2**63)``. Algorithms get a weight-free copy
of the instance plus an ordinal oracle; numeric weights are only read here,
through :data:`EVALUATION_KEY`, to score the outcome.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from dataclasses import dataclass, field, fields

import numpy as np

from .core import EVALUATION_KEY, HiddenWeightStore, OrdinalOracle, mix64, sample_arrival
from .errors import CapabilityError, FeasibilityError, ParameterError
from .indepset import (
    default_probability,
    is_independent,
    max_weight_independent_set_exact,
    random_unit_disk,
    sample_and_price,
    simulate,
)
from .instances import CoverageInstance, Document, MatroidInstance, read_document, write_document
from .matching import (
    BipartiteInstance,
    GeneralInstance,
    bipartite_oracle,
    bipartite_secretary,
    general_oracle,
    general_secretary,
    is_matching,
    max_weight_matching_exact,
)
from .matroid import (
    GlobalOrderThresholdPolicy,
    PartitionMatroid,
    linear_matroid_secretary,
    matroid_greedy_ordinal,
    run_threshold_policy,
)
from .packing import (
    PackingInstance,
    fractional_lp_optimum,
    is_feasible_assignment,
    packing_oracle,
    packing_secretary,
)
from .submodular import CoverageFunction, MarginalOracle, SubmodularFunction, online_p_reduction

__all__ = [
    "ExperimentConfig",
    "TrialReport",
    "RatioEstimate",
    "ExperimentResult",
    "aggregate_ratio",
    "run_experiment",
    "load_config",
    "save_config",
    "write_trace_csv",
    "cubic",
    "PROBLEMS",
    "CSV_COLUMNS",
    "INSTANCE_SALT",
]

CSV_COLUMNS = ("experiment_id", "instance_id", "trial", "seed", "alg_value", "opt_value", "feasible")
INSTANCE_SALT = 1 << 63
# exhaustive submodular optimum: number of k-subsets allowed
SUBSET_LIMIT = 200_000


def cubic(x):
    """The strictly increasing map x -> x^3 + x."""
    x = np.asarray(x, dtype=float)
    return x ** 3 + x


@dataclass
class ExperimentConfig:
    problem: str
    n: int
    trials: int = 1000
    instances: int = 1
    seed: int = 0
    algorithm: str | None = None
    p: float | None = None
    transform: str = "none"
    experiment_id: str = "exp"
    out: str | None = None
    params: dict = field(default_factory=dict)
    keep_selected: bool = False

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ParameterError(f"unknown problem '{self.problem}'; choose from {sorted(PROBLEMS)}")
        if int(self.trials) < 1:
            raise ParameterError("trials must be >= 1")
        if int(self.instances) < 1:
            raise ParameterError("instances must be >= 1")
        if int(self.n) < 1:
            raise ParameterError("n must be >= 1")
        if self.transform not in ("none", "cubic"):
            raise ParameterError("transform must be 'none' or 'cubic'")
        if self.p is not None and not 0.0 <= float(self.p) <= 1.0:
            raise ParameterError("p must be a probability")
        self.n, self.trials, self.instances = int(self.n), int(self.trials), int(self.instances)
        self.seed = int(self.seed)
        problem = PROBLEMS[self.problem]
        if self.algorithm is None:
            self.algorithm = problem.algorithms[0]
        if self.algorithm not in problem.algorithms:
            raise ParameterError(f"algorithm '{self.algorithm}' not available for {self.problem}")

    def param(self, name, default):
        v = self.params.get(name, default)
        return type(default)(v) if default is not None else v


@dataclass
class TrialReport:
    instance_id: int
    trial: int
    seed: int
    alg_value: float
    opt_value: float
    feasible: bool
    selected: frozenset | None = None
    trace: list | None = None


@dataclass
class RatioEstimate:
    """``optimum / mean(alg values)`` for one fixed instance."""

    ratio: float
    se: float
    trials: int
    optimum: float
    mean_value: float
    unbounded: bool = False


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    estimates: list
    reports: list
    csv_path: str | None = None
    summary_path: str | None = None

    @property
    def max_ratio(self) -> float:
        return max(e.ratio for e in self.estimates)

    @property
    def mean_ratio(self) -> float:
        return float(np.mean([e.ratio for e in self.estimates]))

    def csv_text(self) -> str:
        return _csv_text(self.config, self.reports)

    def summary_text(self) -> str:
        return _summary_text(self)


def aggregate_ratio(reports, optimum: float) -> RatioEstimate:
    """Ratio of the optimum to the mean algorithm value over one instance.

    ``reports`` holds :class:`TrialReport` objects or plain values. The
    standard error comes from the delta method on the denominator:
    ``opt * se(mean) / mean^2``. A zero mean with a positive optimum is
    flagged as unbounded instead of dividing by zero.
    """
    vals = np.array([r.alg_value if isinstance(r, TrialReport) else r for r in reports], dtype=float)
    if vals.size == 0:
        raise ParameterError("no trials to aggregate")
    mean = float(vals.mean())
    se_mean = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
    if mean <= 0.0:
        if optimum > 0:
            return RatioEstimate(math.inf, math.inf, vals.size, float(optimum), mean, True)
        return RatioEstimate(1.0, 0.0, vals.size, float(optimum), mean)
    return RatioEstimate(optimum / mean, optimum * se_mean / mean ** 2, vals.size, float(optimum), mean)


# --------------------------------------------------------------------------
# problem registry
# --------------------------------------------------------------------------


class Problem:
    """Generation, evaluation and the ordinal run for one problem kind."""

    name = ""
    algorithms: tuple = ()

    def generate(self, cfg, rng):
        raise NotImplementedError

    def weights(self, inst) -> np.ndarray:
        raise NotImplementedError

    def with_weights(self, inst, w):
        raise NotImplementedError

    def store(self, inst) -> HiddenWeightStore:
        return HiddenWeightStore(self.weights(inst))

    def transformed(self, inst, phi):
        return self.with_weights(inst, phi(self.weights(inst)))

    def arrival_size(self, inst) -> int:
        raise NotImplementedError

    def optimum(self, inst, store) -> float:
        raise NotImplementedError

    def run(self, inst, store, arrival, rng, cfg):
        """Returns ``(selected, trace)``."""
        raise NotImplementedError

    def feasible(self, inst, selected) -> bool:
        raise NotImplementedError

    def value(self, inst, store, selected) -> float:
        return store.value(EVALUATION_KEY, sorted(selected))


class _Bipartite(Problem):
    name = "bipartite"
    algorithms = ("secretary",)

    def generate(self, cfg, rng):
        n_right = cfg.param("n_right", cfg.n)
        return BipartiteInstance.from_matrix(1.0 - rng.random((cfg.n, n_right)))

    def weights(self, inst):
        return inst.weight

    def with_weights(self, inst, w):
        return BipartiteInstance(inst.n_left, inst.n_right, inst.left, inst.right, w)

    def arrival_size(self, inst):
        return inst.n_left

    def optimum(self, inst, store):
        return max_weight_matching_exact(inst, store)[1]

    def run(self, inst, store, arrival, rng, cfg):
        res = bipartite_secretary(inst.without_weights(), arrival, bipartite_oracle(inst, store, arrival))
        return res.selected, res.trace

    def feasible(self, inst, selected):
        eu, ev = inst.endpoints()
        return is_matching(eu, ev, selected)


class _General(_Bipartite):
    name = "general"
    algorithms = ("secretary",)

    def generate(self, cfg, rng):
        n = cfg.n
        iu, iv = np.triu_indices(n, 1)
        keep = rng.random(iu.size) < cfg.param("density", 0.5)
        w = 1.0 - rng.random(int(keep.sum()))
        return GeneralInstance(n, iu[keep], iv[keep], w)

    def with_weights(self, inst, w):
        return GeneralInstance(inst.n, inst.u, inst.v, w)

    def arrival_size(self, inst):
        return inst.n

    def run(self, inst, store, arrival, rng, cfg):
        res = general_secretary(inst.without_weights(), arrival, general_oracle(inst, store, arrival))
        return res.selected, res.trace


class _Packing(Problem):
    name = "packing"
    algorithms = ("secretary",)

    def generate(self, cfg, rng):
        # every option touches exactly d resources; capacities give ratio B
        n = cfg.n
        m, K = cfg.param("m", 6), cfg.param("K", 3)
        d, B = cfg.param("d", 2), cfg.param("B", 2)
        if d > m:
            raise ParameterError("column sparsity d cannot exceed m")
        cons = np.zeros((m, n, K))
        for j in range(n):
            for k in range(K):
                res = rng.choice(m, size=d, replace=False)
                cons[res, j, k] = 0.5 + 0.5 * (1.0 - rng.random(d))
        peak = cons.reshape(m, -1).max(axis=1)
        peak[peak == 0] = 1.0
        caps = (B + 0.5) * peak
        return PackingInstance(caps, 1.0 - rng.random((n, K)), cons)

    def weights(self, inst):
        return inst.profits.ravel()

    def with_weights(self, inst, w):
        return PackingInstance(inst.capacities, np.asarray(w).reshape(inst.n, inst.K), inst.consumption)

    def arrival_size(self, inst):
        return inst.n

    def optimum(self, inst, store):
        return fractional_lp_optimum(inst, store).objective

    def run(self, inst, store, arrival, rng, cfg):
        y = packing_secretary(inst.without_weights(), arrival, packing_oracle(inst, store, arrival),
                              p=cfg.p, check=False)
        return frozenset(int(o) for o in np.flatnonzero(y.ravel())), None

    def feasible(self, inst, selected):
        y = np.zeros(inst.n * inst.K)
        y[list(selected)] = 1
        return is_feasible_assignment(inst, y)


class _IndepSet(Problem):
    name = "indepset"
    algorithms = ("sample-and-price", "simulate")

    def generate(self, cfg, rng):
        return random_unit_disk(cfg.n, cfg.param("avg_degree", 4.0), rng)

    def weights(self, inst):
        return inst.weights

    def with_weights(self, inst, w):
        g = inst.without_weights()
        g.weights = np.asarray(w, dtype=float)
        return g

    def arrival_size(self, inst):
        return inst.n

    def optimum(self, inst, store):
        return max_weight_independent_set_exact(inst, store.reveal(EVALUATION_KEY))[1]

    def run(self, inst, store, arrival, rng, cfg):
        g = inst.without_weights()
        p = cfg.p if cfg.p is not None else default_probability(g.alpha1)
        if cfg.algorithm == "simulate":
            return frozenset(simulate(g, OrdinalOracle.offline(store), p=p, rng=rng)), None
        return frozenset(sample_and_price(g, arrival, OrdinalOracle(store, arrival), p=p, rng=rng)), None

    def feasible(self, inst, selected):
        return is_independent(inst, selected)


class _Matroid(Problem):
    name = "matroid"
    algorithms = ("secretary", "threshold")

    def generate(self, cfg, rng):
        n = cfg.n
        nb = max(1, cfg.param("blocks", max(1, n // 5)))
        block_of = rng.integers(0, nb, n)
        caps = rng.integers(1, cfg.param("max_capacity", 2) + 1, nb)
        return MatroidInstance(PartitionMatroid(block_of, caps), 1.0 - rng.random(n))

    def weights(self, inst):
        return inst.weights

    def with_weights(self, inst, w):
        return MatroidInstance(inst.matroid, np.asarray(w, dtype=float), inst.order)

    def store(self, inst):
        return HiddenWeightStore(inst.weights, order=inst.order)

    def arrival_size(self, inst):
        return inst.matroid.n

    def optimum(self, inst, store):
        return self.value(inst, store, matroid_greedy_ordinal(OrdinalOracle.offline(store), inst.matroid))

    def run(self, inst, store, arrival, rng, cfg):
        if cfg.algorithm == "threshold":
            # the policy knows the global order in advance, not the structure
            order = OrdinalOracle.offline(store).rank_prefix()
            t = cfg.param("threshold", max(1, inst.matroid.n // 2))
            return frozenset(run_threshold_policy(GlobalOrderThresholdPolicy(t), inst.matroid,
                                                  order, arrival)), None
        return frozenset(linear_matroid_secretary(inst.matroid, arrival, OrdinalOracle(store, arrival))), None

    def feasible(self, inst, selected):
        return inst.matroid.is_independent(sorted(selected))


class MarginalTransform(SubmodularFunction):
    """Wraps a function so every marginal is passed through an odd,
    strictly increasing ``phi``. Orders of marginals (and their signs) are
    unchanged, so the marginal oracle answers exactly as before. ``value``
    keeps the wrapped function's values."""

    def __init__(self, base: SubmodularFunction, phi):
        self.base = base
        self.phi = phi
        self.n = base.n

    def value(self, subset):
        return self.base.value(subset)

    def marginal(self, e, subset):
        m = self.base.marginal(e, subset)
        return float(math.copysign(float(self.phi(abs(m))), m)) if m else 0.0


class _Submodular(Problem):
    name = "submodular"
    algorithms = ("online-p",)

    def generate(self, cfg, rng):
        n = cfg.n
        U = cfg.param("universe", 2 * n)
        density = cfg.param("density", 0.2)
        covers = [np.flatnonzero(rng.random(U) < density) for _ in range(n)]
        k = cfg.param("k", max(1, n // 3))
        return CoverageInstance(CoverageFunction(1.0 - rng.random(U), covers), k)

    def weights(self, inst):
        return inst.function.universe_weights

    def with_weights(self, inst, w):
        return CoverageInstance(CoverageFunction(w, inst.function.covers), inst.k)

    def transformed(self, inst, phi):
        return CoverageInstance(MarginalTransform(inst.function, phi), inst.k)

    def store(self, inst):
        return inst.function

    def arrival_size(self, inst):
        return inst.n

    def optimum(self, inst, f):
        n, k = inst.n, min(inst.k, inst.n)
        if math.comb(n, k) > SUBSET_LIMIT:
            raise CapabilityError(f"exhaustive submodular optimum limited to {SUBSET_LIMIT} subsets")
        # coverage is monotone, so some maximal subset is optimal
        return max(f.value(S) for S in itertools.combinations(range(n), k))

    def run(self, inst, f, arrival, rng, cfg):
        p = 0.5 if cfg.p is None else cfg.p
        res = online_p_reduction(MarginalOracle(f, arrival), inst.matroid, arrival, p, rng=rng)
        return res.selected, None

    def feasible(self, inst, selected):
        return inst.matroid.is_independent(sorted(selected))

    def value(self, inst, f, selected):
        return f.value(sorted(selected))


PROBLEMS = {p.name: p for p in (_Bipartite(), _General(), _Packing(), _IndepSet(), _Matroid(), _Submodular())}


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------


def instance_seed(master: int, instance_id: int) -> int:
    return mix64(master, instance_id, INSTANCE_SALT)


def trial_seed(master: int, instance_id: int, trial: int) -> int:
    return mix64(master, instance_id, trial)


def make_instance(cfg: ExperimentConfig, instance_id: int):
    problem = PROBLEMS[cfg.problem]
    inst = problem.generate(cfg, np.random.default_rng(instance_seed(cfg.seed, instance_id)))
    if cfg.transform == "cubic":
        inst = problem.transformed(inst, cubic)
    return inst


def run_trials(cfg: ExperimentConfig, instance, instance_id: int, trials=None, keep_trace=False):
    """Run the configured algorithm on one instance; returns (optimum, reports)."""
    problem = PROBLEMS[cfg.problem]
    store = problem.store(instance)
    try:
        opt = problem.optimum(instance, store)
    except CapabilityError as exc:
        raise CapabilityError(f"instance {instance_id}: {exc}") from exc
    n_arrive = problem.arrival_size(instance)
    reports = []
    for t in (range(cfg.trials) if trials is None else trials):
        s = trial_seed(cfg.seed, instance_id, t)
        arrival = sample_arrival(n_arrive, s)
        rng = np.random.default_rng(mix64(s, 1))
        selected, trace = problem.run(instance, store, arrival, rng, cfg)
        ok = problem.feasible(instance, selected)
        if not ok:
            raise FeasibilityError(
                f"{cfg.problem}/{cfg.algorithm}: infeasible output on instance {instance_id}, trial {t} (seed {s})")
        reports.append(TrialReport(instance_id, t, s, problem.value(instance, store, selected), opt, ok,
                                   selected if cfg.keep_selected else None,
                                   trace if keep_trace else None))
    return opt, reports


def run_experiment(cfg: ExperimentConfig, write=True) -> ExperimentResult:
    """Generate the instances, run every trial and estimate the ratios.

    With ``write`` and ``cfg.out`` set, writes the per-trial CSV to
    ``cfg.out`` and the summary next to it (``<out>.summary``).
    """
    estimates, reports = [], []
    for i in range(cfg.instances):
        inst = make_instance(cfg, i)
        opt, reps = run_trials(cfg, inst, i)
        estimates.append(aggregate_ratio(reps, opt))
        reports.extend(reps)
    result = ExperimentResult(cfg, estimates, reports)
    if write and cfg.out:
        result.csv_path = os.fspath(cfg.out)
        result.summary_path = result.csv_path + ".summary"
        d = os.path.dirname(result.csv_path)
        if d:
            os.makedirs(d, exist_ok=True)
        with open(result.csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(result.csv_text())
        with open(result.summary_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(result.summary_text())
    return result


def _csv_text(cfg, reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow([cfg.experiment_id, r.instance_id, r.trial, r.seed,
                    repr(float(r.alg_value)), repr(float(r.opt_value)), int(r.feasible)])
    return buf.getvalue()


def _config_scalars(cfg: ExperimentConfig) -> dict:
    out = {}
    for f in fields(cfg):
        if f.name in ("params", "keep_selected", "out"):
            continue
        v = getattr(cfg, f.name)
        if v is not None:
            out[f.name] = v
    out.update(cfg.params)
    return out


def _summary_text(result: ExperimentResult) -> str:
    from .instances import format_document

    scalars = _config_scalars(result.config)
    scalars["max_ratio"] = result.max_ratio
    scalars["mean_ratio"] = result.mean_ratio
    rows = [[i, e.ratio, e.se, e.mean_value, e.optimum, e.trials, int(e.unbounded)]
            for i, e in enumerate(result.estimates)]
    doc = Document("summary", scalars, {"instances": rows})
    return format_document(doc, "instances: id ratio se mean_value optimum trials unbounded")


_CONFIG_FIELDS = {"problem": str, "n": int, "trials": int, "instances": int, "seed": int,
                  "algorithm": str, "p": float, "transform": str, "experiment_id": str, "out": str}


def _number(s: str):
    try:
        return int(s)
    except ValueError:
        try:
            return float(s)
        except ValueError:
            return s


def config_from_document(doc: Document) -> ExperimentConfig:
    if doc.kind != "config":
        raise ParameterError(f"expected a config document, got '{doc.kind}'")
    kw, params = {}, {}
    for k, v in doc.scalars.items():
        if k in _CONFIG_FIELDS:
            try:
                kw[k] = _CONFIG_FIELDS[k](v)
            except ValueError as exc:
                raise ParameterError(f"bad value for '{k}': {v!r}") from exc
        else:
            params[k] = _number(v)
    for req in ("problem", "n"):
        if req not in kw:
            raise ParameterError(f"config is missing '{req}'")
    return ExperimentConfig(params=params, **kw)


def load_config(path) -> ExperimentConfig:
    return config_from_document(read_document(path))


def save_config(cfg: ExperimentConfig, path):
    scalars = _config_scalars(cfg)
    if cfg.out:
        scalars["out"] = cfg.out
    write_document(Document("config", scalars), path)


def write_trace_csv(reports, instance, store, path=None) -> str:
    """Per-round matching traces with each round's contribution ``A_l``
    (the weight of the edge added in that round, else 0)."""
    w = store.reveal(EVALUATION_KEY)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["instance_id", "trial", "round", "vertex", "edge", "rank", "accepted", "contribution"])
    for r in reports:
        for t in r.trace or ():
            contrib = float(w[t.edge]) if t.accepted else 0.0
            out.writerow([r.instance_id, r.trial, t.round, t.vertex,
                          "" if t.edge is None else t.edge, "" if t.rank is None else t.rank,
                          int(t.accepted), repr(contrib)])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
