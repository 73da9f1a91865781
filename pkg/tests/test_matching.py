import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_matching_weight

from ordsec.core import ArrivalSequence, HiddenWeightStore, OrdinalOracle, sample_arrival
from ordsec.errors import CapabilityError, ParameterError
from ordsec.harness import ExperimentConfig, run_trials, write_trace_csv
from ordsec.matching import (
    BipartiteInstance,
    GeneralInstance,
    bipartite_oracle,
    bipartite_secretary,
    general_oracle,
    general_secretary,
    greedy_matching_ordinal,
    is_matching,
    max_weight_matching_exact,
)


def offline_greedy(inst):
    return greedy_matching_ordinal(OrdinalOracle.offline(HiddenWeightStore(inst.weight)), inst)


def test_path_greedy_and_optimum():
    g = GeneralInstance(4, [0, 1, 2], [1, 2, 3], [1.5, 2.0, 1.5])
    assert offline_greedy(g) == [1]
    edges, value = max_weight_matching_exact(g)
    assert edges == [0, 2] and value == 3.0


def test_empty_and_star():
    assert offline_greedy(GeneralInstance(3, [], [], [])) == []
    star = GeneralInstance(4, [0, 0, 0], [1, 2, 3], [5.0, 4.0, 3.0])
    assert offline_greedy(star) == [0]
    assert max_weight_matching_exact(star)[1] == 5.0


def test_single_edge_and_diagonal():
    assert max_weight_matching_exact(GeneralInstance(2, [0], [1], [2.5]))[1] == 2.5
    b = BipartiteInstance.from_matrix([[9, 1, 1], [1, 9, 1], [1, 1, 9]])
    edges, value = max_weight_matching_exact(b)
    assert value == 27.0 and edges == [0, 4, 8]


def test_general_limit():
    n = 17
    with pytest.raises(CapabilityError):
        max_weight_matching_exact(GeneralInstance(n, [0], [1], [1.0]))


def test_instance_validation():
    with pytest.raises(ParameterError):
        GeneralInstance(3, [0, 1], [1, 0], [1.0, 1.0])  # parallel
    with pytest.raises(ParameterError):
        GeneralInstance(3, [0], [0], [1.0])
    with pytest.raises(ParameterError):
        BipartiteInstance(1, 1, [0], [0], [-1.0])


def test_weight_free_copy():
    g = GeneralInstance(3, [0, 1], [1, 2], [1.0, 2.0])
    assert g.without_weights().weight.tolist() == [0.0, 0.0]


@pytest.mark.parametrize("seed", range(60))
def test_exact_general_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < 0.5
    w = rng.random(int(keep.sum()))
    g = GeneralInstance(n, iu[keep], iv[keep], w)
    edges, value = max_weight_matching_exact(g)
    assert is_matching(g.u, g.v, edges)
    assert math.isclose(value, brute_matching_weight(list(zip(g.u, g.v)), w), abs_tol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32))
def test_exact_bipartite_matches_brute_force(nl, nr, seed):
    rng = np.random.default_rng(seed)
    w = np.where(rng.random((nl, nr)) < 0.7, rng.random((nl, nr)), 0.0)
    b = BipartiteInstance.from_matrix(w)
    _, value = max_weight_matching_exact(b)
    edges = [(l, nl + r) for l, r in zip(b.left, b.right)]
    assert math.isclose(value, brute_matching_weight(edges, b.weight), abs_tol=1e-12)


def test_single_online_vertex_takes_best_edge():
    b = BipartiteInstance.from_matrix([[1.0, 3.0, 2.0]])
    seq = sample_arrival(1, 0)
    res = bipartite_secretary(b.without_weights(), seq, bipartite_oracle(b, HiddenWeightStore(b.weight), seq))
    assert res.edges == [1]


def run_bipartite_on(b, perm):
    seq = ArrivalSequence(np.asarray(perm), seed=0)
    res = bipartite_secretary(b.without_weights(), seq, bipartite_oracle(b, HiddenWeightStore(b.weight), seq))
    return sum(b.weight[e] for e in res.edges)


def run_general_on(g, perm):
    seq = ArrivalSequence(np.asarray(perm), seed=0)
    res = general_secretary(g.without_weights(), seq, general_oracle(g, HiddenWeightStore(g.weight), seq))
    return sum(g.weight[e] for e in res.edges)


def mc_check(exact, runner, n, trials=6000):
    vals = np.array([runner(sample_arrival(n, s).permutation) for s in range(trials)])
    se = vals.std(ddof=1) / math.sqrt(trials)
    assert abs(vals.mean() - exact) <= 3 * se + 1e-12


def test_bipartite_3x3_enumeration_vs_simulation():
    b = BipartiteInstance.from_matrix([[0.9, 0.2, 0.5], [0.4, 0.8, 0.1], [0.3, 0.6, 0.7]])
    exact = np.mean([run_bipartite_on(b, p) for p in itertools.permutations(range(3))])
    mc_check(exact, lambda p: run_bipartite_on(b, p), 3)


def test_triangle_enumeration_vs_simulation():
    g = GeneralInstance(3, [0, 1, 0], [1, 2, 2], [3.0, 2.0, 1.0])
    vals = [run_general_on(g, p) for p in itertools.permutations(range(3))]
    exact = np.mean(vals)
    # n = 3: one static vertex, no sample; rounds 2 and 3 propose crossing edges
    assert exact > 0
    mc_check(exact, lambda p: run_general_on(g, p), 3)


def test_two_vertices_single_edge():
    g = GeneralInstance(2, [0], [1], [1.0])
    for p in ([0, 1], [1, 0]):
        assert run_general_on(g, p) == 1.0


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32))
def test_outputs_are_matchings_on_post_sample_vertices(n, seed):
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < 0.5
    g = GeneralInstance(n, iu[keep], iv[keep], rng.random(int(keep.sum())))
    seq = sample_arrival(n, seed)
    res = general_secretary(g.without_weights(), seq, general_oracle(g, HiddenWeightStore(g.weight), seq))
    assert is_matching(g.u, g.v, res.edges)
    late = set(seq.permutation[n // 2 + int(n / (2 * math.e)):].tolist())
    for e in res.edges:
        assert int(g.u[e]) in late or int(g.v[e]) in late


def test_contributions_sum_to_matching_weight():
    cfg = ExperimentConfig("bipartite", 12, trials=50, seed=3)
    from ordsec.harness import make_instance

    inst = make_instance(cfg, 0)
    store = HiddenWeightStore(inst.weight)
    _, reports = run_trials(cfg, inst, 0, keep_trace=True)
    text = write_trace_csv(reports, inst, store)
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    for r in reports:
        contrib = [float(x[-1]) for x in rows if int(x[1]) == r.trial]
        assert math.fsum(contrib) == pytest.approx(r.alg_value, abs=1e-12)
        assert sum(float(x[-1]) for x in rows if int(x[1]) == r.trial and x[6] == "1") == \
            pytest.approx(r.alg_value, abs=1e-12)


def test_squared_weights_change_nothing():
    rng = np.random.default_rng(2)
    w = 1 + rng.random((6, 6))
    b1, b2 = BipartiteInstance.from_matrix(w), BipartiteInstance.from_matrix(w ** 2)
    for s in range(40):
        s1, s2 = sample_arrival(6, s), sample_arrival(6, s)
        r1 = bipartite_secretary(b1, s1, bipartite_oracle(b1, HiddenWeightStore(b1.weight), s1))
        r2 = bipartite_secretary(b2, s2, bipartite_oracle(b2, HiddenWeightStore(b2.weight), s2))
        assert r1.edges == r2.edges
