"""Online weighted independent set in graphs of bounded local independence.

Sample-and-price rejects a Binomial(n, p) prefix, builds a greedy maximal
independent set ``M1`` of it by weight rank, and afterwards accepts a vertex
when it outranks every ``M1`` neighbour and keeps the solution independent.
:func:`simulate` is the offline coupling used to analyse it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ArrivalSequence, OrdinalOracle, advance
from .errors import CapabilityError, ParameterError

__all__ = [
    "LocalGraph",
    "unit_disk_graph",
    "random_unit_disk",
    "default_probability",
    "ratio_bound",
    "sample_and_price",
    "simulate",
    "max_weight_independent_set_exact",
    "verify_local_independence",
    "is_independent",
    "EXACT_MWIS_LIMIT",
]

EXACT_MWIS_LIMIT = 24


@dataclass
class LocalGraph:
    weights: np.ndarray
    neighbors: list  # list of frozensets
    alpha1: int = 1
    points: np.ndarray | None = None
    radius: float | None = None

    def __post_init__(self):
        if self.weights is None:
            self.weights = np.zeros(len(self.neighbors))
        self.weights = np.asarray(self.weights, dtype=float)
        if np.any(self.weights < 0):
            raise ParameterError("vertex weights must be non-negative")
        self.neighbors = [frozenset(int(x) for x in nb) for nb in self.neighbors]
        if len(self.neighbors) != self.weights.size:
            raise ParameterError("one neighbourhood per vertex required")
        for v, nb in enumerate(self.neighbors):
            if v in nb or any(v not in self.neighbors[u] for u in nb):
                raise ParameterError("adjacency must be symmetric and loop-free")
        if self.alpha1 < 1:
            raise ParameterError("alpha1 must be >= 1")

    @property
    def n(self) -> int:
        return self.weights.size

    @classmethod
    def from_edges(cls, weights, edges, alpha1=1):
        n = len(weights)
        nb = [set() for _ in range(n)]
        for u, v in edges:
            nb[u].add(v)
            nb[v].add(u)
        return cls(weights, nb, alpha1)

    def edges(self):
        return [(u, v) for u in range(self.n) for v in self.neighbors[u] if u < v]

    def without_weights(self):
        return LocalGraph(None, self.neighbors, self.alpha1, self.points, self.radius)


def unit_disk_graph(points, weights, radius: float = 1.0) -> LocalGraph:
    """Edge iff Euclidean distance <= radius; local independence number 5."""
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    adj = (diff ** 2).sum(-1) <= radius * radius
    np.fill_diagonal(adj, False)
    nb = [np.flatnonzero(row) for row in adj]
    return LocalGraph(weights, nb, alpha1=5, points=pts, radius=radius)


def random_unit_disk(n: int, avg_degree: float = 4.0, rng=None, radius: float = 1.0) -> LocalGraph:
    """Uniform points in a square sized so the expected degree is about
    ``avg_degree`` (ignoring boundary effects); weights uniform on (0, 1]."""
    rng = np.random.default_rng(rng)
    side = math.sqrt(max(n - 1, 1) * math.pi * radius * radius / avg_degree)
    pts = rng.random((n, 2)) * side
    w = 1.0 - rng.random(n)
    return unit_disk_graph(pts, w, radius)


def default_probability(alpha1: int) -> float:
    return math.sqrt(alpha1 / (alpha1 + 1))


def ratio_bound(alpha1: int, p: float | None = None) -> float:
    """Inverse of ``(1 - alpha1 (1-p)/p) * (1-p)/alpha1``."""
    if p is None:
        p = default_probability(alpha1)
    return 1.0 / ((1 - alpha1 * (1 - p) / p) * ((1 - p) / alpha1))


def is_independent(graph: LocalGraph, S) -> bool:
    S = set(S)
    return all(not (graph.neighbors[v] & S) for v in S)


def sample_and_price(graph: LocalGraph, arrival: ArrivalSequence, oracle: OrdinalOracle,
                     p: float | None = None, rng=None, sample_size: int | None = None) -> set[int]:
    n = graph.n
    if len(arrival) != n:
        raise ParameterError("arrival sequence must cover all vertices")
    if p is None:
        p = default_probability(graph.alpha1)
    if not 0.0 < p < 1.0:
        raise ParameterError("p must lie in (0, 1)")
    if sample_size is None:
        sample_size = int(np.random.default_rng(rng).binomial(n, p))
    for _ in range(sample_size):
        advance(arrival)
    M1 = set()
    if sample_size:
        for v in oracle.rank_prefix():
            v = int(v)
            if not (graph.neighbors[v] & M1):
                M1.add(v)
    S = set()
    while arrival.cursor < n:
        v = advance(arrival)
        nb = graph.neighbors[v]
        # an empty price is passed vacuously
        beats_price = all(oracle.compare(v, u) == -1 for u in nb & M1)
        if beats_price and not (nb & S):
            S.add(v)
    return S


def simulate(graph: LocalGraph, oracle: OrdinalOracle, p: float | None = None, rng=None, coins=None) -> set[int]:
    """Offline analysis twin of :func:`sample_and_price`.

    ``oracle`` must see the whole vertex set. ``coins`` (vertex -> bool,
    True meaning heads) replaces the random coin flips.
    """
    if p is None:
        p = default_probability(graph.alpha1)
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must be a probability")
    rng = np.random.default_rng(rng) if coins is None else None
    M1, M2 = set(), []
    for v in oracle.rank_prefix():
        v = int(v)
        if graph.neighbors[v] & M1:
            continue
        heads = bool(coins[v]) if coins is not None else rng.random() < p
        if heads:
            M1.add(v)
        else:
            M2.append(v)
    S = set(M2)
    for w in M2:
        if w in S and graph.neighbors[w] & S:
            S -= graph.neighbors[w]
            S.discard(w)
    return S


def max_weight_independent_set_exact(graph: LocalGraph, weights=None):
    """Branch and bound on bitmasks with max-degree branching.

    Returns ``(set, weight)``. Raises :class:`CapabilityError` above
    :data:`EXACT_MWIS_LIMIT` vertices.
    """
    n = graph.n
    if n > EXACT_MWIS_LIMIT:
        raise CapabilityError(f"exact independent set supports n <= {EXACT_MWIS_LIMIT}, got {n}")
    w = graph.weights if weights is None else np.asarray(weights, dtype=float)
    wl = [float(x) for x in w]
    nbm = [sum(1 << u for u in graph.neighbors[v]) for v in range(n)]
    best = [0.0, 0]

    def bound(mask):
        s = 0.0
        m = mask
        while m:
            low = m & -m
            s += wl[low.bit_length() - 1]
            m ^= low
        return s

    def rec(mask, value, chosen):
        if not mask:
            if value > best[0]:
                best[0], best[1] = value, chosen
            return
        if value + bound(mask) <= best[0]:
            return
        # pivot on the vertex with most neighbours inside the mask
        m = mask
        piv, deg = -1, -1
        while m:
            low = m & -m
            v = low.bit_length() - 1
            d = bin(nbm[v] & mask).count("1")
            if d > deg:
                piv, deg = v, d
            m ^= low
        if deg == 0:
            rec(0, value + bound(mask), chosen | mask)
            return
        rec(mask & ~(1 << piv) & ~nbm[piv], value + wl[piv], chosen | (1 << piv))
        rec(mask & ~(1 << piv), value, chosen)

    rec((1 << n) - 1, 0.0, 0)
    S = {v for v in range(n) if best[1] >> v & 1}
    return S, math.fsum(wl[v] for v in S)


def _max_independent_size(vertices, graph: LocalGraph) -> int:
    """Largest independent subset of ``vertices`` (exact, small sets)."""
    vs = list(vertices)
    g = LocalGraph(np.ones(len(vs)), [[j for j, u in enumerate(vs) if u in graph.neighbors[v]] for v in vs])
    if g.n == 0:
        return 0
    S, _ = max_weight_independent_set_exact(g)
    return len(S)


def verify_local_independence(graph: LocalGraph, alpha1: int, exact_limit: int = EXACT_MWIS_LIMIT,
                              samples: int = 2000, rng=None) -> bool:
    """True iff no neighbourhood contains ``alpha1 + 1`` independent vertices.

    Neighbourhoods up to ``exact_limit`` vertices are checked exactly; larger
    ones by randomized greedy search, which can only miss violations.
    """
    rng = np.random.default_rng(rng)
    for v in range(graph.n):
        nb = sorted(graph.neighbors[v])
        if len(nb) <= alpha1:
            continue
        if len(nb) <= exact_limit:
            if _max_independent_size(nb, graph) > alpha1:
                return False
            continue
        for _ in range(samples):
            S = set()
            for u in rng.permutation(nb):
                if not (graph.neighbors[int(u)] & S):
                    S.add(int(u))
            if len(S) > alpha1:
                return False
    return True

