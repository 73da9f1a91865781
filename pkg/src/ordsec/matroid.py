"""Matroids, the structure-oblivious threshold policy and its lower-bound family."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import EVALUATION_KEY, ArrivalSequence, HiddenWeightStore, OrdinalOracle, advance, mix64
from .errors import ContractError, ParameterError

__all__ = [
    "Matroid",
    "UniformMatroid",
    "PartitionMatroid",
    "GraphicMatroid",
    "matroid_greedy_ordinal",
    "ClassicSecretary",
    "SampleGreedyLinear",
    "default_linear_algorithm",
    "linear_matroid_secretary",
    "LowerBoundInstance",
    "generate_lower_bound_instance",
    "GlobalOrderThresholdPolicy",
    "RandomizedThresholdPolicy",
    "run_threshold_policy",
    "threshold_value_curve",
    "ThresholdSweep",
    "best_deterministic_threshold",
    "lower_bound_formula",
]


class Matroid:
    """Ground set ``0..n-1`` with an independence test.

    Subclasses implement :meth:`tracker`, an incremental independence state
    that answers ``can_add`` and records ``add``.
    """

    kind = "abstract"

    def __init__(self, n: int):
        if n < 0:
            raise ParameterError("ground set size must be non-negative")
        self.n = int(n)

    def tracker(self):
        raise NotImplementedError

    def is_independent(self, subset) -> bool:
        t = self.tracker()
        for e in subset:
            e = int(e)
            if not 0 <= e < self.n or not t.can_add(e):
                return False
            t.add(e)
        return True

    def rank(self) -> int:
        t = self.tracker()
        r = 0
        for e in range(self.n):
            if t.can_add(e):
                t.add(e)
                r += 1
        return r


class _CountTracker:
    __slots__ = ("members", "limit")

    def __init__(self, limit):
        self.members = set()
        self.limit = limit

    def can_add(self, e):
        return e not in self.members and len(self.members) < self.limit

    def add(self, e):
        self.members.add(e)


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, n: int, k: int):
        super().__init__(n)
        if k < 0:
            raise ParameterError("uniform matroid rank must be non-negative")
        self.k = int(k)

    def tracker(self):
        return _CountTracker(self.k)

    def __repr__(self):
        return f"UniformMatroid(n={self.n}, k={self.k})"


class _PartitionTracker:
    __slots__ = ("members", "block", "room")

    def __init__(self, block, capacities):
        self.members = set()
        self.block = block
        self.room = list(capacities)

    def can_add(self, e):
        return e not in self.members and self.room[self.block[e]] > 0

    def add(self, e):
        self.members.add(e)
        self.room[self.block[e]] -= 1


class PartitionMatroid(Matroid):
    """Blocks with capacities; ``block_of[e]`` names the block of element e."""

    kind = "partition"

    def __init__(self, block_of, capacities):
        block_of = [int(b) for b in block_of]
        super().__init__(len(block_of))
        capacities = [int(c) for c in capacities]
        if any(c < 0 for c in capacities):
            raise ParameterError("capacities must be non-negative")
        if block_of and (min(block_of) < 0 or max(block_of) >= len(capacities)):
            raise ParameterError("block index out of range")
        self.block_of = block_of
        self.capacities = capacities

    @classmethod
    def from_blocks(cls, blocks, capacities):
        n = sum(len(b) for b in blocks)
        block_of = [-1] * n
        for i, members in enumerate(blocks):
            for e in members:
                block_of[e] = i
        if -1 in block_of:
            raise ParameterError("blocks must cover 0..n-1 exactly once")
        return cls(block_of, capacities)

    @property
    def blocks(self):
        out = [[] for _ in self.capacities]
        for e, b in enumerate(self.block_of):
            out[b].append(e)
        return out

    def tracker(self):
        return _PartitionTracker(self.block_of, self.capacities)

    def __repr__(self):
        return f"PartitionMatroid(n={self.n}, blocks={len(self.capacities)})"


class _ForestTracker:
    def __init__(self, ends, n_vertices):
        self.ends = ends
        self.parent = list(range(n_vertices))
        self.members = set()

    def _find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def can_add(self, e):
        u, v = self.ends[e]
        return e not in self.members and self._find(u) != self._find(v)

    def add(self, e):
        u, v = self.ends[e]
        self.parent[self._find(u)] = self._find(v)
        self.members.add(e)


class GraphicMatroid(Matroid):
    """Edges of a multigraph; independent sets are forests."""

    kind = "graphic"

    def __init__(self, n_vertices: int, edges):
        edges = [(int(u), int(v)) for u, v in edges]
        super().__init__(len(edges))
        self.n_vertices = int(n_vertices)
        if any(not (0 <= u < n_vertices and 0 <= v < n_vertices) for u, v in edges):
            raise ParameterError("edge endpoint out of range")
        self.edges = edges

    def tracker(self):
        return _ForestTracker(self.edges, self.n_vertices)


def matroid_greedy_ordinal(oracle: OrdinalOracle, matroid: Matroid) -> set[int]:
    """Max-weight basis by scanning the full rank order greedily (offline)."""
    order = oracle.rank_prefix()
    if len(order) != matroid.n:
        raise ContractError("greedy basis needs the whole ground set to have arrived")
    t = matroid.tracker()
    chosen = set()
    for e in order:
        e = int(e)
        if t.can_add(e):
            t.add(e)
            chosen.add(e)
    return chosen


class ClassicSecretary:
    """Single-choice secretary: skip ``floor(n/e)``, then take the first
    element that beats everything seen so far."""

    def __init__(self, n: int, matroid: Matroid):
        self.n = n
        self.sample = int(math.floor(n / math.e))
        self.tracker = matroid.tracker()
        self.seen = 0
        self.best = None
        self.done = False

    def offer(self, u: int, view) -> bool:
        self.seen += 1
        is_best = self.best is None or view.compare(u, self.best) == -1
        if is_best:
            self.best = u
        if self.seen <= self.sample or self.done or not is_best:
            return False
        if self.tracker.can_add(u):
            self.tracker.add(u)
            self.done = True
            return True
        return False


class SampleGreedyLinear:
    """Ordinal matroid secretary: skip ``floor(n/e)`` elements, then accept u
    when it belongs to the greedy basis of ``sample + u`` and stays
    independent with what was accepted."""

    def __init__(self, n: int, matroid: Matroid):
        self.n = n
        self.matroid = matroid
        self.sample_size = int(math.floor(n / math.e))
        self.sample: list[int] = []
        self.tracker = matroid.tracker()
        self.seen = 0

    def offer(self, u: int, view) -> bool:
        self.seen += 1
        if self.seen <= self.sample_size:
            self.sample.append(u)
            return False
        pool = set(self.sample)
        pool.add(u)
        t = self.matroid.tracker()
        in_basis = False
        for e in view.rank_prefix():
            if e in pool and t.can_add(e):
                t.add(e)
                if e == u:
                    in_basis = True
                    break
        if in_basis and self.tracker.can_add(u):
            self.tracker.add(u)
            return True
        return False


def default_linear_algorithm(n: int, matroid: Matroid):
    if matroid.rank() <= 1:
        return ClassicSecretary(n, matroid)
    return SampleGreedyLinear(n, matroid)


def linear_matroid_secretary(matroid: Matroid, arrival: ArrivalSequence, oracle, algorithm=None) -> set[int]:
    """Feed the arrival stream to a linear ordinal algorithm; return its picks."""
    alg = (algorithm or default_linear_algorithm)(len(arrival), matroid)
    chosen = set()
    while arrival.cursor < len(arrival):
        u = advance(arrival)
        if alg.offer(u, oracle):
            chosen.add(u)
    return chosen


# --------------------------------------------------------------------------
# Lower-bound family for structure-oblivious thresholds
# --------------------------------------------------------------------------


@dataclass
class LowerBoundInstance:
    """One instance of the path family: 1 + k segments, n + 1 edges.

    Block 0 is the first segment (all ones). Blocks 1..k each hold one
    valuable edge plus ``n/k - i`` zero edges. ``order`` lists the edges
    from best to worst: first-segment ones, then valuable ones, then zeros.
    """

    n: int
    k: int
    i: int
    matroid: PartitionMatroid
    weights: HiddenWeightStore
    order: np.ndarray
    valuable: np.ndarray

    @property
    def optimum(self) -> float:
        return float(self.k + 1)


def generate_lower_bound_instance(n: int, k: int, i: int, seed) -> LowerBoundInstance:
    if k < 1 or n < 1 or n % k:
        raise ParameterError("k must divide n")
    if not 1 <= i <= n // k:
        raise ParameterError("instance index must lie in [1, n/k]")
    rng = np.random.default_rng(seed)
    ones_first = (i - 1) * k + 1
    zeros_per_segment = n // k - i
    block_of = [0] * ones_first
    valuable = []
    zeros = []
    for s in range(1, k + 1):
        valuable.append(len(block_of))
        block_of.append(s)
        for _ in range(zeros_per_segment):
            zeros.append(len(block_of))
            block_of.append(s)
    assert len(block_of) == n + 1
    weights = np.zeros(n + 1)
    weights[:ones_first] = 1.0
    weights[valuable] = 1.0
    order = np.concatenate([
        rng.permutation(np.arange(ones_first)),
        rng.permutation(np.asarray(valuable, dtype=np.int64)),
        rng.permutation(np.asarray(zeros, dtype=np.int64)),
    ]).astype(np.int64)
    matroid = PartitionMatroid(block_of, [1] * (k + 1))
    return LowerBoundInstance(n, k, i, matroid, HiddenWeightStore(weights, order=order),
                              order, np.asarray(valuable, dtype=np.int64))


@dataclass(frozen=True)
class GlobalOrderThresholdPolicy:
    """Accept an arriving element iff it is among the top ``threshold_position``
    elements of the global order and keeps the accepted set independent."""

    threshold_position: int

    def draw(self, rng=None) -> int:
        return self.threshold_position


@dataclass(frozen=True)
class RandomizedThresholdPolicy:
    """Distribution over threshold positions."""

    positions: tuple
    probabilities: tuple

    def __post_init__(self):
        if len(self.positions) != len(self.probabilities) or not self.positions:
            raise ParameterError("positions and probabilities must align")
        if not math.isclose(sum(self.probabilities), 1.0, abs_tol=1e-9):
            raise ParameterError("probabilities must sum to 1")

    def draw(self, rng) -> int:
        return int(rng.choice(self.positions, p=self.probabilities))


def run_threshold_policy(policy, matroid: Matroid, order, arrival: ArrivalSequence, rng=None) -> set[int]:
    """Run a structure-oblivious threshold policy on one arrival sequence.

    ``order`` is the global ordering of all elements (best first), handed to
    the policy in advance. Positions are 1-based: position t admits the top
    t elements.
    """
    order = np.asarray(order, dtype=np.int64)
    t = policy.draw(rng)
    rank = np.empty(order.size, dtype=np.int64)
    rank[order] = np.arange(1, order.size + 1)
    tracker = matroid.tracker()
    accepted = set()
    while arrival.cursor < len(arrival):
        e = advance(arrival)
        if rank[e] <= t and tracker.can_add(e):
            tracker.add(e)
            accepted.add(e)
    return accepted


def threshold_value_curve(matroid: PartitionMatroid, order, weights, arrival_times) -> np.ndarray:
    """Value of every deterministic threshold on one realisation.

    Returns ``v`` with ``v[t]`` equal to the weight collected by threshold
    position ``t`` (``t = 0 .. n``) for capacity-one partition matroids. The
    first arriving admitted element of each block is the one accepted, so
    each block contributes the weight of its earliest arrival among its top
    ranked members. Evaluation path: needs cardinal weights.
    """
    if any(c != 1 for c in matroid.capacities):
        raise ParameterError("curve evaluation supports capacity-one blocks only")
    order = np.asarray(order, dtype=np.int64)
    n = order.size
    weights = np.asarray(weights, dtype=float)
    times = np.asarray(arrival_times, dtype=np.int64)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    block = np.asarray(matroid.block_of, dtype=np.int64)
    nblocks = len(matroid.capacities)
    by_block = np.lexsort((rank, block))
    b_sorted = block[by_block]
    # decreasing offsets per block make the running minimum restart at each block
    keyed = times[by_block] + (nblocks - b_sorted) * (n + 1)
    running = np.minimum.accumulate(keyed)
    first_arrival = running - (nblocks - b_sorted) * (n + 1)
    inv_time = np.empty(n, dtype=np.int64)
    inv_time[times] = np.arange(n)
    contrib = weights[inv_time[first_arrival]]
    prev = np.empty_like(contrib)
    prev[1:] = contrib[:-1]
    starts = np.ones(n, dtype=bool)
    starts[1:] = b_sorted[1:] != b_sorted[:-1]
    prev[starts] = 0.0
    delta = np.zeros(n + 1)
    np.add.at(delta, rank[by_block] + 1, contrib - prev)
    return np.cumsum(delta)


def lower_bound_formula(n: int, k: int) -> float:
    """The bound ``k / ((k^2/n) log(n/k) + 1)`` on the best threshold's ratio."""
    return k / ((k * k / n) * math.log(n / k) + 1.0)


@dataclass
class ThresholdSweep:
    n: int
    k: int
    position: int
    value: float
    stderr: float
    curve: np.ndarray = field(repr=False)
    samples: int = 0

    @property
    def optimum(self) -> float:
        return float(self.k + 1)

    @property
    def ratio(self) -> float:
        return self.optimum / self.value


def best_deterministic_threshold(n: int, k: int | None = None, trials: int = 200, seed: int = 0) -> ThresholdSweep:
    """Sweep every threshold position against the uniform instance mixture.

    Each of the ``n/k`` instances is equally likely; every (instance, trial)
    pair draws a fresh within-class ordering and a fresh arrival order.
    Position ``t`` ranges over ``1 .. n+1``.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    if k is None:
        k = math.isqrt(n)
    m = n // k
    total = np.zeros(n + 2)
    total_sq = np.zeros(n + 2)
    for i in range(1, m + 1):
        for r in range(trials):
            s = mix64(seed, n, k, i, r)
            inst = generate_lower_bound_instance(n, k, i, s)
            rng = np.random.default_rng(mix64(s, 1))
            times = np.empty(n + 1, dtype=np.int64)
            times[rng.permutation(n + 1)] = np.arange(n + 1)
            curve = threshold_value_curve(inst.matroid, inst.order,
                                          inst.weights.reveal(EVALUATION_KEY), times)
            total += curve
            total_sq += curve * curve
    count = m * trials
    mean = total / count
    best = int(np.argmax(mean[1:])) + 1
    se = 0.0
    if count > 1:
        var = max(total_sq[best] / count - mean[best] ** 2, 0.0) * count / (count - 1)
        se = math.sqrt(var / count)
    return ThresholdSweep(n, k, best, float(mean[best]), se, mean, samples=count)
