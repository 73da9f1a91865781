"""Random-order arrival model and the ordinal oracle.

Algorithms never touch numeric weights. They receive an :class:`OrdinalOracle`
bound to an :class:`ArrivalSequence` and may only ask for the strict order of
the elements that have arrived so far, or compare two arrived elements. The
numeric weights live in a :class:`HiddenWeightStore` that releases them only
against :data:`EVALUATION_KEY`, which is held by evaluation code (the
harness and the exact oracles).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContractError,
    EmptyInstanceError,
    EmptyPrefixError,
    ExhaustedError,
    InformationLeakError,
    ParameterError,
)

__all__ = [
    "EVALUATION_KEY",
    "ArrivalSequence",
    "HiddenWeightStore",
    "OrdinalOracle",
    "advance",
    "sample_arrival",
    "rank_prefix",
    "compare",
    "mix64",
]

_MASK64 = (1 << 64) - 1


def mix64(*values: int) -> int:
    """Fold integers into one 64-bit seed with the SplitMix64 finalizer.

    The mixing is order sensitive, so ``mix64(a, b) != mix64(b, a)`` in
    general.
    """
    h = 0x9E3779B97F4A7C15
    for v in values:
        h = (h ^ (int(v) & _MASK64)) & _MASK64
        h = (h + 0x9E3779B97F4A7C15) & _MASK64
        z = h
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        h = z ^ (z >> 31)
    return h


class _EvaluationKey:
    __slots__ = ()

    def __repr__(self):
        return "EVALUATION_KEY"


#: Capability that unlocks :meth:`HiddenWeightStore.reveal`. Only evaluation
#: code (harness, exact oracles, tests acting as the evaluator) uses it.
EVALUATION_KEY = _EvaluationKey()


class HiddenWeightStore:
    """Sealed non-negative weights and the strict total order they induce.

    Ties are broken by ascending element id unless an explicit ``order`` is
    supplied; an explicit order must list every element once and be
    consistent with the weights (non-increasing along the order).
    """

    def __init__(self, weights, order=None):
        w = np.asarray(weights, dtype=float).reshape(-1)
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ParameterError("weights must be finite and non-negative")
        if order is None:
            order = np.lexsort((np.arange(w.size), -w))
        else:
            order = np.asarray(order, dtype=np.int64)
            if order.shape != w.shape or not np.array_equal(np.sort(order), np.arange(w.size)):
                raise ContractError("order must be a permutation of all element ids")
            if np.any(np.diff(w[order]) > 0):
                raise ContractError("order is inconsistent with the weights")
        positions = np.empty(w.size, dtype=np.int64)
        positions[order] = np.arange(w.size)
        self.__weights = w
        self._order = order
        self._positions = positions

    def __len__(self):
        return self.__weights.size

    def reveal(self, key) -> np.ndarray:
        if key is not EVALUATION_KEY:
            raise InformationLeakError("cardinal weights are sealed")
        return self.__weights.copy()

    def value(self, key, elements) -> float:
        """Total weight of ``elements``; evaluation path only."""
        if key is not EVALUATION_KEY:
            raise InformationLeakError("cardinal weights are sealed")
        idx = np.fromiter(elements, dtype=np.int64)
        return float(self.__weights[idx].sum()) if idx.size else 0.0


@dataclass
class ArrivalSequence:
    permutation: np.ndarray
    seed: int
    cursor: int = 0
    _times: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.permutation = np.asarray(self.permutation, dtype=np.int64)
        n = self.permutation.size
        if not np.array_equal(np.sort(self.permutation), np.arange(n)):
            raise ContractError("arrival order must be a permutation of 0..n-1")
        if not 0 <= self.cursor <= n:
            raise ContractError("cursor out of range")
        self._times = np.empty(n, dtype=np.int64)
        self._times[self.permutation] = np.arange(n)

    def __len__(self):
        return self.permutation.size

    @property
    def arrival_times(self) -> np.ndarray:
        """Position of every id in the arrival order (read-only view)."""
        t = self._times.view()
        t.flags.writeable = False
        return t

    def arrived(self, element: int) -> bool:
        return bool(self._times[element] < self.cursor)

    def advance(self) -> int:
        return advance(self)

    def remaining(self) -> int:
        return len(self) - self.cursor


def sample_arrival(n: int, seed: int) -> ArrivalSequence:
    """Uniform random arrival order of ``n`` ids, reproducible from ``seed``."""
    if n < 1:
        raise EmptyInstanceError("an arrival sequence needs n >= 1")
    rng = np.random.default_rng(int(seed) & _MASK64)
    # Generator.permutation is a Fisher-Yates shuffle
    return ArrivalSequence(rng.permutation(n), seed=int(seed))


def advance(seq: ArrivalSequence) -> int:
    if seq.cursor >= len(seq):
        raise ExhaustedError("all elements have already arrived")
    e = int(seq.permutation[seq.cursor])
    seq.cursor += 1
    return e


class OrdinalOracle:
    """Ordinal view of hidden weights restricted to arrived elements.

    ``owners`` maps each weighted element to the arrival units that reveal
    it: an element counts as arrived once all of its owners have arrived.
    With ``owners=None`` elements and arrival units coincide. Edges of a
    bipartite graph have their online endpoint as single owner; edges of a
    general graph have both endpoints.
    """

    def __init__(self, store: HiddenWeightStore, sequence: ArrivalSequence, owners=None):
        n = len(store)
        if owners is None:
            if len(sequence) != n:
                raise ParameterError("sequence and store sizes differ")
            owners = np.arange(n, dtype=np.int64)
        owners = np.asarray(owners, dtype=np.int64)
        owners = owners.reshape(n, -1) if n else owners.reshape(0, 1)
        self._store = store
        self._sequence = sequence
        self._element_time = sequence._times[owners].max(axis=1) if n else np.zeros(0, np.int64)
        self._order = store._order
        self._order_time = self._element_time[self._order]

    @classmethod
    def offline(cls, store: HiddenWeightStore) -> "OrdinalOracle":
        """Oracle over a fully arrived ground set, for offline subroutines."""
        n = len(store)
        seq = ArrivalSequence(np.arange(n), seed=0, cursor=n)
        return cls(store, seq)

    @property
    def n(self) -> int:
        return len(self._store)

    @property
    def sequence(self) -> ArrivalSequence:
        return self._sequence

    def arrived(self, element: int) -> bool:
        return bool(self._element_time[element] < self._sequence.cursor)

    def rank_prefix(self) -> np.ndarray:
        """Arrived elements from best to worst."""
        if self._sequence.cursor == 0:
            raise EmptyPrefixError("no element has arrived yet")
        return self._order[self._order_time < self._sequence.cursor]

    def compare(self, a: int, b: int) -> int:
        """-1 if ``a`` ranks first, 1 if ``b`` does (cmp convention).

        ``compare(x, x)`` is -1.
        """
        c = self._sequence.cursor
        if self._element_time[a] >= c or self._element_time[b] >= c:
            raise InformationLeakError(f"compare({a}, {b}) touches an element that has not arrived")
        pos = self._store._positions
        return -1 if pos[a] <= pos[b] else 1

    def weight(self, element):
        raise InformationLeakError("the ordinal oracle does not expose weights")


def rank_prefix(oracle: OrdinalOracle) -> np.ndarray:
    return oracle.rank_prefix()


def compare(oracle: OrdinalOracle, a: int, b: int) -> int:
    return oracle.compare(a, b)
