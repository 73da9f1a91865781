"""Compiled inner loops. Every kernel consumes rank-ordered index arrays only."""

import numpy as np
from numba import njit


@njit(cache=True)
def greedy_matching_mask(eu, ev, n_vertices):
    """Greedy over edges given best-first; mask of accepted edges."""
    used = np.zeros(n_vertices, dtype=np.bool_)
    out = np.zeros(eu.size, dtype=np.bool_)
    for i in range(eu.size):
        a = eu[i]
        b = ev[i]
        if not used[a] and not used[b]:
            used[a] = True
            used[b] = True
            out[i] = True
    return out


@njit(cache=True)
def greedy_partner_edge(eu, ev, n_vertices, target):
    """Index (into the given order) of the greedy edge covering ``target``, or -1."""
    used = np.zeros(n_vertices, dtype=np.bool_)
    for i in range(eu.size):
        a = eu[i]
        b = ev[i]
        if not used[a] and not used[b]:
            if a == target or b == target:
                return i
            used[a] = True
            used[b] = True
    return -1


@njit(cache=True)
def greedy_assignment_mask(order, request_of, consumption, capacities):
    """Greedy over options given best-first.

    ``consumption`` has one row per resource and one column per option.
    """
    m = capacities.size
    load = np.zeros(m)
    taken = np.zeros(request_of.max() + 1 if request_of.size else 1, dtype=np.bool_)
    out = np.zeros(order.size, dtype=np.bool_)
    for t in range(order.size):
        o = order[t]
        j = request_of[o]
        if taken[j]:
            continue
        ok = True
        for i in range(m):
            if load[i] + consumption[i, o] > capacities[i]:
                ok = False
                break
        if ok:
            for i in range(m):
                load[i] += consumption[i, o]
            taken[j] = True
            out[t] = True
    return out


@njit(cache=True)
def greedy_assigned_option(order, request_of, consumption, capacities, target):
    """Option chosen for request ``target`` by the greedy assignment, or -1."""
    m = capacities.size
    load = np.zeros(m)
    taken = np.zeros(request_of.max() + 1 if request_of.size else 1, dtype=np.bool_)
    for t in range(order.size):
        o = order[t]
        j = request_of[o]
        if taken[j]:
            continue
        ok = True
        for i in range(m):
            if load[i] + consumption[i, o] > capacities[i]:
                ok = False
                break
        if ok:
            if j == target:
                return o
            for i in range(m):
                load[i] += consumption[i, o]
            taken[j] = True
    return -1


@njit(cache=True)
def matching_dp(n, weight):
    """Exact max-weight matching by subset DP; ``weight`` is an n x n matrix
    with -1 marking absent edges. Returns (best value table, partner choice)."""
    size = 1 << n
    best = np.zeros(size)
    choice = np.full(size, -1, dtype=np.int64)
    for mask in range(1, size):
        i = 0
        while not (mask >> i) & 1:
            i += 1
        rest = mask & ~(1 << i)
        b = best[rest]
        c = -1
        for j in range(i + 1, n):
            if (rest >> j) & 1 and weight[i, j] >= 0:
                v = weight[i, j] + best[rest & ~(1 << j)]
                if v > b:
                    b = v
                    c = j
        best[mask] = b
        choice[mask] = c
    return best, choice
