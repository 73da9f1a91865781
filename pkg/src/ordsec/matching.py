"""Online matching with ordinal edge information.

Bipartite case: the right side is static, left vertices arrive in random
order. After a sample of ``floor(n/e)`` left vertices, every arriving vertex
recomputes a greedy matching on the arrived subgraph and proposes the edge
greedy gives it; the proposal is kept if it is still compatible with the
matching built so far.

General graphs reuse the same loop after splitting the arrival order: the
first ``floor(n/2)`` vertices become the static side and the next
``floor(n/(2e))`` form the sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _kernels
from .core import EVALUATION_KEY, ArrivalSequence, HiddenWeightStore, OrdinalOracle, advance
from .errors import CapabilityError, ParameterError

__all__ = [
    "BipartiteInstance",
    "GeneralInstance",
    "RoundTrace",
    "MatchingResult",
    "bipartite_oracle",
    "general_oracle",
    "greedy_matching_ordinal",
    "bipartite_secretary",
    "general_secretary",
    "max_weight_matching_exact",
    "is_matching",
    "EXACT_GENERAL_LIMIT",
]

#: Largest general graph (in vertices) the exhaustive oracle accepts.
EXACT_GENERAL_LIMIT = 16


@dataclass
class BipartiteInstance:
    """Left vertices ``0..n_left-1`` arrive online; right ones are static.

    Edge ``e`` joins ``left[e]`` and ``right[e]`` with weight ``weight[e]``.
    """

    n_left: int
    n_right: int
    left: np.ndarray
    right: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        self.left = np.asarray(self.left, dtype=np.int64)
        self.right = np.asarray(self.right, dtype=np.int64)
        self.weight = self.left.astype(float) * 0 if self.weight is None else np.asarray(self.weight, dtype=float)
        if not (self.left.shape == self.right.shape == self.weight.shape):
            raise ParameterError("edge arrays must have equal length")
        if self.n_left < 1:
            raise ParameterError("need at least one online vertex")
        if self.left.size:
            if self.left.min() < 0 or self.left.max() >= self.n_left:
                raise ParameterError("left endpoint out of range")
            if self.right.min() < 0 or self.right.max() >= self.n_right:
                raise ParameterError("right endpoint out of range")
        if np.any(self.weight < 0):
            raise ParameterError("edge weights must be non-negative")
        pairs = self.left * max(self.n_right, 1) + self.right
        if np.unique(pairs).size != pairs.size:
            raise ParameterError("parallel edges are not allowed")

    @property
    def n_edges(self) -> int:
        return self.left.size

    @classmethod
    def from_matrix(cls, w):
        """Complete bipartite graph; ``w[l, r]`` is the weight of edge (l, r)."""
        w = np.asarray(w, dtype=float)
        nl, nr = w.shape
        ll, rr = np.meshgrid(np.arange(nl), np.arange(nr), indexing="ij")
        return cls(nl, nr, ll.ravel(), rr.ravel(), w.ravel())

    def endpoints(self):
        """Edge endpoints in a shared vertex numbering (right side shifted)."""
        return self.left, self.right + self.n_left

    def without_weights(self):
        """Same graph with all weights zeroed; what an algorithm gets to see."""
        return BipartiteInstance(self.n_left, self.n_right, self.left, self.right, None)


@dataclass
class GeneralInstance:
    n: int
    u: np.ndarray
    v: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=np.int64)
        self.v = np.asarray(self.v, dtype=np.int64)
        self.weight = self.u.astype(float) * 0 if self.weight is None else np.asarray(self.weight, dtype=float)
        if not (self.u.shape == self.v.shape == self.weight.shape):
            raise ParameterError("edge arrays must have equal length")
        if self.n < 1:
            raise ParameterError("need at least one vertex")
        if self.u.size:
            if min(self.u.min(), self.v.min()) < 0 or max(self.u.max(), self.v.max()) >= self.n:
                raise ParameterError("endpoint out of range")
        if np.any(self.u == self.v):
            raise ParameterError("self-loops are not allowed")
        if np.any(self.weight < 0):
            raise ParameterError("edge weights must be non-negative")
        a, b = np.minimum(self.u, self.v), np.maximum(self.u, self.v)
        if np.unique(a * self.n + b).size != a.size:
            raise ParameterError("parallel edges are not allowed")

    @property
    def n_edges(self) -> int:
        return self.u.size

    def endpoints(self):
        return self.u, self.v

    def without_weights(self):
        return GeneralInstance(self.n, self.u, self.v, None)


@dataclass(frozen=True)
class RoundTrace:
    """One post-sample round: the arriving vertex, the greedy proposal for it
    (edge id or None), its position in the oracle order of that round, and
    whether it was added."""

    round: int
    vertex: int
    edge: int | None
    rank: int | None
    accepted: bool


@dataclass
class MatchingResult:
    edges: list
    trace: list = field(default_factory=list)

    @property
    def selected(self) -> frozenset:
        return frozenset(self.edges)


def bipartite_oracle(instance: BipartiteInstance, store: HiddenWeightStore, arrival: ArrivalSequence) -> OrdinalOracle:
    return OrdinalOracle(store, arrival, owners=instance.left)


def general_oracle(instance: GeneralInstance, store: HiddenWeightStore, arrival: ArrivalSequence) -> OrdinalOracle:
    return OrdinalOracle(store, arrival, owners=np.stack([instance.u, instance.v], axis=1))


def is_matching(eu, ev, edges) -> bool:
    seen = set()
    for e in edges:
        for x in (int(eu[e]), int(ev[e])):
            if x in seen:
                return False
            seen.add(x)
    return True


def greedy_matching_ordinal(oracle: OrdinalOracle, instance, vertices=None) -> list[int]:
    """Greedy matching over arrived edges in rank order (ties: edge id).

    ``vertices`` restricts to the induced subgraph on that vertex set, in the
    instance's shared numbering (right side of a bipartite instance is
    shifted by ``n_left``).
    """
    eu, ev = instance.endpoints()
    order = oracle.rank_prefix() if oracle.sequence.cursor else np.zeros(0, dtype=np.int64)
    n_vertices = int(max(eu.max(initial=-1), ev.max(initial=-1)) + 1)
    if vertices is not None:
        inside = np.zeros(max(n_vertices, 1), dtype=bool)
        inside[np.asarray(list(vertices), dtype=np.int64)] = True
        order = order[inside[eu[order]] & inside[ev[order]]]
    mask = _kernels.greedy_matching_mask(eu[order], ev[order], max(n_vertices, 1))
    return [int(e) for e in order[mask]]


def _secretary_rounds(oracle, eu, ev, n_vertices, arrival, rounds_left, eligible):
    """Shared loop: each arriving vertex proposes its greedy edge."""
    matched = np.zeros(n_vertices, dtype=bool)
    chosen = []
    trace = []
    r = 0
    while rounds_left():
        ell = advance(arrival)
        order = oracle.rank_prefix()
        if eligible is not None:
            order = order[eligible(order)]
        ou, ov = eu[order], ev[order]
        idx = _kernels.greedy_partner_edge(ou, ov, n_vertices, ell)
        if idx < 0:
            trace.append(RoundTrace(r, ell, None, None, False))
        else:
            e = int(order[idx])
            ok = not matched[eu[e]] and not matched[ev[e]]
            if ok:
                matched[eu[e]] = matched[ev[e]] = True
                chosen.append(e)
            trace.append(RoundTrace(r, ell, e, int(idx), ok))
        r += 1
    return chosen, trace


def bipartite_secretary(instance: BipartiteInstance, arrival: ArrivalSequence, oracle: OrdinalOracle) -> MatchingResult:
    n = instance.n_left
    if len(arrival) != n:
        raise ParameterError("arrival sequence must cover the online side")
    for _ in range(int(math.floor(n / math.e))):
        advance(arrival)
    eu, ev = instance.endpoints()
    chosen, trace = _secretary_rounds(
        oracle, eu, ev, instance.n_left + instance.n_right, arrival,
        lambda: arrival.cursor < n, None,
    )
    return MatchingResult(chosen, trace)


def general_secretary(instance: GeneralInstance, arrival: ArrivalSequence, oracle: OrdinalOracle) -> MatchingResult:
    n = instance.n
    if len(arrival) != n:
        raise ParameterError("arrival sequence must cover all vertices")
    n_static = n // 2
    n_sample = int(math.floor(n / (2 * math.e)))
    static = np.zeros(n, dtype=bool)
    for _ in range(n_static):
        static[advance(arrival)] = True
    for _ in range(min(n_sample, n - n_static)):
        advance(arrival)
    eu, ev = instance.endpoints()
    crossing = static[eu] != static[ev]
    chosen, trace = _secretary_rounds(
        oracle, eu, ev, n, arrival,
        lambda: arrival.cursor < n, lambda order: crossing[order],
    )
    return MatchingResult(chosen, trace)


def max_weight_matching_exact(instance, store: HiddenWeightStore | None = None):
    """Optimal matching ``(edge ids, total weight)``; evaluation path.

    Bipartite instances go through an assignment solver; general graphs use
    an exhaustive subset DP limited to :data:`EXACT_GENERAL_LIMIT` vertices.
    """
    w = instance.weight if store is None else store.reveal(EVALUATION_KEY)
    if isinstance(instance, BipartiteInstance):
        mat = np.zeros((instance.n_left, instance.n_right))
        idx = np.full((instance.n_left, instance.n_right), -1, dtype=np.int64)
        mat[instance.left, instance.right] = w
        idx[instance.left, instance.right] = np.arange(instance.n_edges)
        rows, cols = linear_sum_assignment(mat, maximize=True)
        edges = [int(idx[r, c]) for r, c in zip(rows, cols) if idx[r, c] >= 0 and mat[r, c] > 0]
        return sorted(edges), float(sum(w[e] for e in edges))
    n = instance.n
    if n > EXACT_GENERAL_LIMIT:
        raise CapabilityError(f"exact general matching supports n <= {EXACT_GENERAL_LIMIT}, got {n}")
    mat = np.full((n, n), -1.0)
    idx = np.full((n, n), -1, dtype=np.int64)
    mat[instance.u, instance.v] = w
    mat[instance.v, instance.u] = w
    idx[instance.u, instance.v] = np.arange(instance.n_edges)
    idx[instance.v, instance.u] = np.arange(instance.n_edges)
    best, choice = _kernels.matching_dp(n, mat)
    mask = (1 << n) - 1
    edges = []
    while mask:
        i = (mask & -mask).bit_length() - 1
        j = int(choice[mask])
        mask &= ~(1 << i)
        if j >= 0:
            edges.append(int(idx[i, j]))
            mask &= ~(1 << j)
    return sorted(edges), float(sum(w[e] for e in edges))
