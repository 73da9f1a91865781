"""Online packing LPs with ordinal profits.

Requests arrive in random order, each with ``K`` options. Option ``(j, k)``
earns profit ``c[j, k]`` and consumes ``a[i, j, k]`` of resource ``i``.
Only profits are ordinal; consumptions and capacities are structural and
visible to the algorithm. Option ``(j, k)`` has element id ``j * K + k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import EVALUATION_KEY, ArrivalSequence, HiddenWeightStore, OrdinalOracle, advance
from .errors import ParameterError
from .simplex import LPResult, solve_bounded_lp

__all__ = [
    "PackingInstance",
    "sampling_probability",
    "packing_oracle",
    "greedy_assignment_ordinal",
    "packing_secretary",
    "fractional_lp_optimum",
    "is_feasible_assignment",
]


@dataclass
class PackingInstance:
    capacities: np.ndarray  # (m,)
    profits: np.ndarray  # (n, K)
    consumption: np.ndarray  # (m, n, K)

    def __post_init__(self):
        self.capacities = np.asarray(self.capacities, dtype=float)
        self.consumption = np.asarray(self.consumption, dtype=float)
        if self.profits is None:
            self.profits = np.zeros(self.consumption.shape[1:])
        self.profits = np.atleast_2d(np.asarray(self.profits, dtype=float))
        m = self.capacities.size
        n, K = self.profits.shape
        if self.consumption.shape != (m, n, K):
            raise ParameterError(f"consumption must have shape {(m, n, K)}")
        if np.any(self.capacities <= 0):
            raise ParameterError("capacities must be positive")
        if np.any(self.profits < 0) or np.any(self.consumption < 0):
            raise ParameterError("profits and consumptions must be non-negative")

    @property
    def m(self) -> int:
        return self.capacities.size

    @property
    def n(self) -> int:
        return self.profits.shape[0]

    @property
    def K(self) -> int:
        return self.profits.shape[1]

    @property
    def d(self) -> int:
        """Column sparsity: most resources any single option touches."""
        return int((self.consumption > 0).sum(axis=0).max()) if self.consumption.size else 0

    @property
    def B(self) -> int:
        """Capacity ratio ``min_i floor(b_i / max_{j,k} a_ijk)``."""
        peak = self.consumption.reshape(self.m, -1).max(axis=1)
        with np.errstate(divide="ignore"):
            ratios = np.where(peak > 0, np.floor(self.capacities / np.where(peak > 0, peak, 1)), np.inf)
        return int(ratios.min()) if np.isfinite(ratios.min()) else np.iinfo(np.int64).max

    @property
    def option_matrix(self) -> np.ndarray:
        """Consumption with one column per option id."""
        return self.consumption.reshape(self.m, self.n * self.K)

    @property
    def request_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), self.K)

    def without_weights(self):
        return PackingInstance(self.capacities, None, self.consumption)


def sampling_probability(d: int, B: int) -> float:
    """``e (2d)^(1/B) / (1 + e (2d)^(1/B))``."""
    if d < 1 or B < 1:
        raise ParameterError("d and B must be at least 1")
    t = math.e * (2 * d) ** (1.0 / B)
    return t / (1.0 + t)


def packing_oracle(instance: PackingInstance, store: HiddenWeightStore, arrival: ArrivalSequence) -> OrdinalOracle:
    return OrdinalOracle(store, arrival, owners=instance.request_of)


def is_feasible_assignment(instance: PackingInstance, y, tol=1e-9) -> bool:
    y = np.asarray(y).reshape(instance.n, instance.K)
    if np.any(y.sum(axis=1) > 1):
        return False
    load = np.einsum("ijk,jk->i", instance.consumption, y)
    return bool(np.all(load <= instance.capacities + tol))


def greedy_assignment_ordinal(oracle: OrdinalOracle, instance: PackingInstance, requests=None) -> np.ndarray:
    """Greedy 0/1 assignment over arrived options in rank order.

    Ties in profit fall back to option id, i.e. (request, option) ascending.
    Returns an ``(n, K)`` 0/1 array.
    """
    order = oracle.rank_prefix() if oracle.sequence.cursor else np.zeros(0, dtype=np.int64)
    req = instance.request_of
    if requests is not None:
        keep = np.zeros(instance.n, dtype=bool)
        keep[np.asarray(list(requests), dtype=np.int64)] = True
        order = order[keep[req[order]]]
    mask = _kernels.greedy_assignment_mask(order, req, instance.option_matrix, instance.capacities)
    y = np.zeros(instance.n * instance.K, dtype=np.int64)
    y[order[mask]] = 1
    return y.reshape(instance.n, instance.K)


def packing_secretary(instance: PackingInstance, arrival: ArrivalSequence, oracle: OrdinalOracle,
                      p: float | None = None, check=True) -> np.ndarray:
    """Sample ``floor(p n)`` requests, then for each later request adopt its row
    of the greedy assignment on the arrived requests unless it would break a
    capacity. Returns the ``(n, K)`` 0/1 assignment."""
    n = instance.n
    if len(arrival) != n:
        raise ParameterError("arrival sequence must cover all requests")
    if p is None:
        p = sampling_probability(instance.d, instance.B)
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must be a probability")
    for _ in range(int(math.floor(p * n))):
        advance(arrival)
    cons = instance.option_matrix
    req = instance.request_of
    caps = instance.capacities
    load = np.zeros(instance.m)
    y = np.zeros(n * instance.K, dtype=np.int64)
    while arrival.cursor < n:
        j = advance(arrival)
        order = oracle.rank_prefix()
        o = _kernels.greedy_assigned_option(order, req, cons, caps, j)
        if o >= 0 and np.all(load + cons[:, o] <= caps):
            y[o] = 1
            load += cons[:, o]
        if check and np.any(load > caps):
            raise AssertionError("capacity violated")
    return y.reshape(n, instance.K)


def fractional_lp_optimum(instance: PackingInstance, store: HiddenWeightStore | None = None) -> LPResult:
    """LP relaxation optimum (evaluation path). ``x`` is returned as ``(n, K)``."""
    c = instance.profits.ravel() if store is None else store.reveal(EVALUATION_KEY)
    n, K = instance.n, instance.K
    rows = np.zeros((n, n * K))
    rows[np.repeat(np.arange(n), K), np.arange(n * K)] = 1.0
    A = np.vstack([instance.option_matrix, rows])
    b = np.concatenate([instance.capacities, np.ones(n)])
    res = solve_bounded_lp(c, A, b)
    res.x = res.x.reshape(n, K)
    return res
