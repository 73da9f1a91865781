"""Conversion of a weighted instance to 0/1 weights without improving the
ratio of an ordinal algorithm.

Given the optimum's elements ``a_1 > ... > a_k`` and the algorithm's set,
every element ranked below ``a_k`` drops to 0 and every element ranked above
``a_i`` (and below ``a_{i-1}``) is levelled down to ``w(a_i)``. The lowest
non-zero level is then pushed to 0 or merged into the level above, whichever
raises OPT/ALG (the ratio is monotone in that level). Repeating leaves one
non-zero level, which is rescaled to 1. The strict order is kept as a weak
order: tied elements stay in their original relative order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError

__all__ = ["ZeroOneReduction", "reduce_to_01_weights", "ratio"]


def ratio(opt: float, alg: float) -> float:
    if alg > 0:
        return opt / alg
    return math.inf if opt > 0 else 1.0


@dataclass
class ZeroOneReduction:
    weights: np.ndarray  # transformed weights in {0, 1}
    order: np.ndarray  # original strict order, consistent with ``weights``
    ratio_before: float
    ratio_bound: float  # OPT-set / ALG-set ratio after the transformation


def reduce_to_01_weights(weights, optimal, chosen, order=None) -> ZeroOneReduction:
    """Transform ``weights`` to {0, 1} keeping ``order`` as a weak order.

    ``order`` is the global strict order (best first); by default weight
    descending with ties by id. ``optimal`` and ``chosen`` are element sets.
    """
    w = np.asarray(weights, dtype=float).copy()
    n = w.size
    if order is None:
        order = np.lexsort((np.arange(n), -w))
    order = np.asarray(order, dtype=np.int64)
    if order.size != n or np.any(np.diff(w[order]) > 0):
        raise ContractError("order is not consistent with the weights")
    optimal = set(int(e) for e in optimal)
    chosen = set(int(e) for e in chosen)
    if not optimal:
        raise ContractError("optimal set must be non-empty")
    if not (optimal | chosen) <= set(range(n)):
        raise ContractError("element id out of range")

    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    before = ratio(math.fsum(w[list(optimal)]), math.fsum(w[list(chosen)]))

    opt_sorted = sorted(optimal, key=lambda e: pos[e])
    # level[e]: index into the level list, -1 meaning weight 0
    level = np.full(n, -1, dtype=np.int64)
    values = [float(w[a]) for a in opt_sorted]
    idx = 0
    for e in order:
        if idx < len(opt_sorted) and pos[e] > pos[opt_sorted[idx]]:
            idx += 1
        if idx >= len(opt_sorted):
            break
        level[e] = idx
    # ``values`` may contain equal neighbours; they are levels all the same
    q = [sum(1 for a in opt_sorted if level[a] == j) for j in range(len(values))]
    r = [int(np.sum([level[e] == j for e in chosen])) for j in range(len(values))]

    def current(vals):
        opt = math.fsum(q[j] * vals[j] for j in range(len(vals)) if vals[j] > 0)
        alg = math.fsum(r[j] * vals[j] for j in range(len(vals)) if vals[j] > 0)
        return opt, alg

    # the top level stays; lower ones collapse to 0 or to the level above
    top_value = values[0]
    j = len(values) - 1
    while j >= 1:
        lo = list(values)
        lo[j] = 0.0
        hi = list(values)
        hi[j] = values[j - 1]
        if ratio(*current(lo)) > ratio(*current(hi)):
            values = lo
        else:
            values = hi
        # values at j is either 0 or equal to the level above it; propagate
        # equality upwards by merging counts into j - 1 when raised
        if values[j] > 0:
            q[j - 1] += q[j]
            r[j - 1] += r[j]
            level[level == j] = j - 1
        else:
            level[level == j] = -1
        q[j] = r[j] = 0
        values[j] = 0.0
        j -= 1
    out = (level == 0).astype(float) if top_value > 0 else np.zeros(n)
    after = ratio(math.fsum(out[list(optimal)]), math.fsum(out[list(chosen)]))
    return ZeroOneReduction(out, order, before, after)
