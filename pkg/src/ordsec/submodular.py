"""Submodular objectives behind a marginal-order oracle, and the reduction
from the submodular to the linear matroid secretary problem.

The reduction rejects a Binomial(n, 1/2) prefix, runs Greedy on it, and for
every later element replays Greedy on ``M + u``. Elements Greedy would accept
are forwarded (with probability p) to a linear ordinal algorithm together
with a synthetic order: earlier acceptance step first, and within one step
the oracle's order of marginals with respect to the shared greedy prefix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import ArrivalSequence, advance
from .errors import InformationLeakError, ParameterError
from .matroid import Matroid, default_linear_algorithm

__all__ = [
    "ZERO_MARKER",
    "SubmodularFunction",
    "LinearFunction",
    "CoverageFunction",
    "CutFunction",
    "MarginalOracle",
    "GreedyResult",
    "greedy_submodular",
    "positivity_test",
    "ForwardedElement",
    "SyntheticOrder",
    "ReductionResult",
    "online_p_reduction",
    "greedy_acceptance_step",
]

#: Virtual element with marginal exactly 0; ranks below every real element of
#: equal marginal so that ``f(u|S) >= 0`` reads as "u precedes the marker".
ZERO_MARKER = -1


class SubmodularFunction:
    """Set function on ``0..n-1`` with ``f(empty) = 0``."""

    n: int

    def value(self, subset) -> float:
        raise NotImplementedError

    def marginal(self, e: int, subset) -> float:
        s = frozenset(subset)
        if e in s:
            return 0.0
        return self.value(s | {e}) - self.value(s)


class LinearFunction(SubmodularFunction):
    def __init__(self, weights):
        self.weights = np.asarray(weights, dtype=float)
        self.n = self.weights.size

    def value(self, subset) -> float:
        return math.fsum(self.weights[e] for e in subset)

    def marginal(self, e, subset):
        return 0.0 if e in subset else float(self.weights[e])


class CoverageFunction(SubmodularFunction):
    """Weighted coverage: element e covers ``covers[e]`` out of a weighted universe."""

    def __init__(self, universe_weights, covers: Sequence):
        self.universe_weights = np.asarray(universe_weights, dtype=float)
        if np.any(self.universe_weights < 0):
            raise ParameterError("universe weights must be non-negative")
        self.covers = [frozenset(int(x) for x in c) for c in covers]
        self.n = len(self.covers)

    def value(self, subset) -> float:
        items = set()
        for e in subset:
            items |= self.covers[e]
        return math.fsum(self.universe_weights[x] for x in sorted(items))

    def marginal(self, e, subset):
        if e in subset:
            return 0.0
        covered = set()
        for s in subset:
            covered |= self.covers[s]
        return math.fsum(self.universe_weights[x] for x in sorted(self.covers[e] - covered))


class CutFunction(SubmodularFunction):
    """Weighted cut of an undirected graph; non-monotone."""

    def __init__(self, n, edges):
        self.n = int(n)
        self.edges = [(int(u), int(v), float(w)) for u, v, w in edges]

    def value(self, subset) -> float:
        s = set(subset)
        return math.fsum(w for u, v, w in self.edges if (u in s) != (v in s))


class MarginalOracle:
    """Ordinal access to marginal values ``f(e|S)`` of arrived elements.

    :meth:`order` ranks the requested elements, every member of ``S`` and the
    :data:`ZERO_MARKER` by marginal, best first. Ties: non-members of S before
    members of S before the marker, then ascending id.
    """

    def __init__(self, function: SubmodularFunction, sequence: ArrivalSequence):
        if function.n != len(sequence):
            raise ParameterError("function and sequence sizes differ")
        self._f = function
        self._sequence = sequence
        self.queries = 0

    @property
    def n(self) -> int:
        return self._f.n

    def _check(self, elements):
        for e in elements:
            if not self._sequence.arrived(e):
                raise InformationLeakError(f"element {e} has not arrived")

    def order(self, S, among=None) -> list[int]:
        S = frozenset(int(e) for e in S)
        if among is None:
            among = self._sequence.permutation[: self._sequence.cursor]
        among = [int(e) for e in among]
        self._check(S)
        self._check(among)
        self.queries += 1
        keyed = [(-self._f.marginal(e, S), 0, e) for e in among if e not in S]
        keyed += [(0.0, 1, e) for e in S]
        keyed.append((0.0, 2, ZERO_MARKER))
        keyed.sort()
        return [e for _, _, e in keyed]

    def weight(self, element):
        raise InformationLeakError("the marginal oracle does not expose values")


def positivity_test(oracle: MarginalOracle, u: int, M) -> bool:
    """True iff ``f(u|M) >= 0``, decided from the order ``O(M)`` alone."""
    order = oracle.order(M, among=[u])
    pos = {e: i for i, e in enumerate(order)}
    refs = list(M) if M else [ZERO_MARKER]
    return all(pos[u] < pos[r] for r in refs)


@dataclass
class GreedyResult:
    solution: list
    steps: list

    def prefix(self, step: int) -> list:
        """``M_u`` for an element accepted at ``step`` of Greedy on ``M + u``.

        Before ``u`` is taken that run re-accepts ``M`` in order, one element
        per step, so the prefix is the first ``step - 1`` solution elements.
        """
        return self.solution[: step - 1]


def greedy_submodular(oracle: MarginalOracle, matroid: Matroid, elements) -> GreedyResult:
    """Ordinal Greedy: repeatedly take the best-marginal remaining element,
    keep it if independent and its marginal is non-negative."""
    remaining = set(int(e) for e in elements)
    M: list[int] = []
    steps: list[int] = []
    tracker = matroid.tracker()
    step = 0
    while remaining:
        step += 1
        order = oracle.order(M, among=remaining)
        u = next(e for e in order if e in remaining)
        remaining.discard(u)
        if not tracker.can_add(u):
            continue
        pos = {e: i for i, e in enumerate(order)}
        refs = M if M else [ZERO_MARKER]
        if all(pos[u] < pos[r] for r in refs):
            tracker.add(u)
            M.append(u)
            steps.append(step)
    return GreedyResult(M, steps)


def greedy_acceptance_step(oracle: MarginalOracle, matroid: Matroid, M: Sequence[int], u: int):
    """Step at which Greedy run on ``M + u`` accepts ``u``, or None.

    ``M`` must be a Greedy output, so Greedy on ``M`` alone re-accepts it in
    the same order; only the position of ``u`` needs to be found.
    """
    res = greedy_submodular(oracle, matroid, list(M) + [u])
    if u not in res.solution:
        return None
    return res.steps[res.solution.index(u)]


@dataclass(frozen=True)
class ForwardedElement:
    element: int
    greedy_step: int | None
    positive: bool


class SyntheticOrder:
    """Ordinal view handed to the linear algorithm.

    Positively forwarded elements rank by acceptance step, then by the
    oracle's order of marginals with respect to the common greedy prefix.
    Zero-branch elements rank below all of them, by ascending id.
    """

    def __init__(self, oracle: MarginalOracle, greedy: GreedyResult):
        self._oracle = oracle
        self._greedy = greedy
        self._items: dict[int, ForwardedElement] = {}
        self._cache: list | None = None

    def add(self, item: ForwardedElement):
        self._items[item.element] = item
        self._cache = None

    def __contains__(self, e):
        return e in self._items

    def __len__(self):
        return len(self._items)

    def rank_prefix(self) -> list[int]:
        if self._cache is not None:
            return self._cache
        groups: dict[int, list] = {}
        zeros = []
        for e, item in self._items.items():
            if item.positive:
                groups.setdefault(item.greedy_step, []).append(e)
            else:
                zeros.append(e)
        out = []
        for s in sorted(groups):
            members = groups[s]
            if len(members) > 1:
                members_set = set(members)
                order = self._oracle.order(self._greedy.prefix(s), among=members)
                members = [e for e in order if e in members_set]
            out.extend(members)
        out.extend(sorted(zeros))
        self._cache = out
        return out

    def compare(self, a: int, b: int) -> int:
        if a not in self._items or b not in self._items:
            raise InformationLeakError("comparison with an element not yet forwarded")
        if a == b:
            return -1
        order = self.rank_prefix()
        return -1 if order.index(a) < order.index(b) else 1

    def weight(self, element):
        raise InformationLeakError("linear algorithms receive ordinal information only")


@dataclass
class ReductionResult:
    """Outcome of one Online(p) run; ``order`` is the synthetic order the
    linear algorithm saw at the end, best first."""

    selected: frozenset
    sample: list
    greedy: GreedyResult
    N: frozenset
    Q: frozenset
    forwarded: list = field(default_factory=list)
    order: list = field(default_factory=list)


def online_p_reduction(
    oracle: MarginalOracle,
    matroid: Matroid,
    arrival: ArrivalSequence,
    p: float,
    linear_alg: Callable = default_linear_algorithm,
    rng=None,
    sample_size: int | None = None,
    coins=None,
) -> ReductionResult:
    """Online(p): reduce the submodular problem to a linear ordinal algorithm.

    ``sample_size`` and ``coins`` (a mapping element -> bool) override the
    internal randomness; they exist so expectations can be enumerated.
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must be a probability")
    n = len(arrival)
    if rng is None:
        rng = np.random.default_rng()
    X = int(rng.binomial(n, 0.5)) if sample_size is None else int(sample_size)
    if not 0 <= X <= n:
        raise ParameterError("sample size out of range")
    sample = [advance(arrival) for _ in range(X)]
    greedy = greedy_submodular(oracle, matroid, sample)
    view = SyntheticOrder(oracle, greedy)
    linear = linear_alg(n - X, matroid)
    N, Q = set(), set()
    forwarded = []
    while arrival.cursor < n:
        u = advance(arrival)
        step = greedy_acceptance_step(oracle, matroid, greedy.solution, u)
        positive = False
        if step is not None:
            heads = (rng.random() < p) if coins is None else bool(coins[u])
            if heads:
                positive = True
                N.add(u)
        item = ForwardedElement(u, step if positive else None, positive)
        forwarded.append(ForwardedElement(u, step, positive))
        view.add(item)
        if linear.offer(u, view):
            Q.add(u)
    return ReductionResult(frozenset(Q & N), sample, greedy, frozenset(N), frozenset(Q),
                           forwarded, view.rank_prefix() if len(view) else [])
