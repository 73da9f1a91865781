import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordsec.core import ArrivalSequence, sample_arrival
from ordsec.errors import InformationLeakError, ParameterError
from ordsec.matroid import ClassicSecretary, PartitionMatroid, UniformMatroid
from ordsec.submodular import (
    ZERO_MARKER,
    CoverageFunction,
    CutFunction,
    LinearFunction,
    MarginalOracle,
    greedy_acceptance_step,
    greedy_submodular,
    online_p_reduction,
    positivity_test,
)


def full_oracle(f):
    seq = ArrivalSequence(np.arange(f.n), seed=0, cursor=f.n)
    return MarginalOracle(f, seq)


def random_coverage(rng, n):
    U = int(rng.integers(1, 2 * n + 2))
    return CoverageFunction(rng.random(U), [np.flatnonzero(rng.random(U) < 0.35) for _ in range(n)])


def test_greedy_linear_example():
    res = greedy_submodular(full_oracle(LinearFunction([3, 1, 5])), UniformMatroid(3, 2), range(3))
    assert res.solution == [2, 0] and res.steps == [1, 2]


def test_greedy_coverage_duplicate():
    f = CoverageFunction([5.0, 3.0], [[0], [0], [1]])
    res = greedy_submodular(full_oracle(f), UniformMatroid(3, 2), range(3))
    assert res.solution[0] in (0, 1)
    assert res.solution[1] == 2 and res.steps[1] == 2


def test_greedy_skips_negative_marginals():
    # star cut: centre 0 with leaves 1, 2; once 0 is taken every leaf lowers the cut
    f = CutFunction(3, [(0, 1, 1.0), (0, 2, 1.0)])
    res = greedy_submodular(full_oracle(f), UniformMatroid(3, 3), range(3))
    assert res.solution == [0]


def test_positivity_examples():
    lin = full_oracle(LinearFunction([4.0, 1.0, 2.0]))
    assert positivity_test(lin, 0, [1, 2])
    assert positivity_test(lin, 0, [])
    dup = full_oracle(CoverageFunction([1.0], [[0], [0]]))
    assert positivity_test(dup, 1, [0])  # marginal exactly 0
    cut = CutFunction(3, [(0, 1, 1.0), (0, 2, 1.0)])
    assert cut.marginal(1, {0}) < 0
    assert not positivity_test(full_oracle(cut), 1, [0])
    assert positivity_test(full_oracle(cut), 0, [])


def test_marker_sits_below_zero_marginals():
    oracle = full_oracle(CoverageFunction([1.0], [[0], []]))
    assert oracle.order([], among=[0, 1]) == [0, 1, ZERO_MARKER]


def test_oracle_refuses_unarrived_and_values():
    seq = sample_arrival(3, 0)
    oracle = MarginalOracle(LinearFunction([1, 2, 3]), seq)
    with pytest.raises(InformationLeakError):
        oracle.order([], among=[0])
    with pytest.raises(InformationLeakError):
        oracle.weight(0)


def test_single_element_boundary():
    f = LinearFunction([1.0])
    outcomes = set()
    for s in range(40):
        seq = sample_arrival(1, s)
        res = online_p_reduction(MarginalOracle(f, seq), UniformMatroid(1, 1), seq, 1.0,
                                 linear_alg=ClassicSecretary, rng=np.random.default_rng(s))
        outcomes.add((len(res.sample), len(res.selected)))
    assert outcomes == {(1, 0), (0, 1)}


def test_reduction_rejects_bad_probability():
    seq = sample_arrival(2, 0)
    with pytest.raises(ParameterError):
        online_p_reduction(MarginalOracle(LinearFunction([1, 1]), seq), UniformMatroid(2, 1), seq, 1.5)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**32), st.sampled_from([0.0, 0.5, 1.0]))
def test_output_is_independent_subset_of_N(n, seed, p):
    rng = np.random.default_rng(seed)
    f = random_coverage(rng, n)
    M = UniformMatroid(n, int(rng.integers(1, n + 1))) if seed % 2 else PartitionMatroid(
        rng.integers(0, 2, n), [1, 2])
    seq = sample_arrival(n, seed)
    res = online_p_reduction(MarginalOracle(f, seq), M, seq, p, rng=np.random.default_rng(seed))
    assert res.selected <= res.N
    assert M.is_independent(sorted(res.selected))
    if p == 0.0:
        assert not res.selected


def test_linear_single_secretary_contract():
    for s in range(50):
        rng = np.random.default_rng(s)
        f = LinearFunction(rng.random(8))
        seq = sample_arrival(8, s)
        res = online_p_reduction(MarginalOracle(f, seq), UniformMatroid(8, 1), seq, 1.0,
                                 linear_alg=ClassicSecretary, rng=rng)
        assert len(res.selected) <= 1 and res.selected <= res.N


def test_forwarding_order_is_consistent_with_marginals():
    """Ordering check in the evaluation path on every sample outcome."""
    rng = np.random.default_rng(11)
    for _ in range(150):
        n = int(rng.integers(2, 8))
        f = random_coverage(rng, n)
        M = UniformMatroid(n, int(rng.integers(1, n + 1)))
        oracle = full_oracle(f)
        for r in range(n):
            for L in itertools.combinations(range(n), r):
                g = greedy_submodular(oracle, M, L)
                vals = []
                for u in set(range(n)) - set(L):
                    s = greedy_acceptance_step(oracle, M, g.solution, u)
                    if s is not None:
                        vals.append((s, f.marginal(u, g.prefix(s))))
                for (s1, v1), (s2, v2) in itertools.product(vals, vals):
                    if s1 < s2:
                        assert v1 >= v2 - 1e-12


def test_prefix_is_greedy_state_before_acceptance():
    f = LinearFunction([5.0, 4.0, 3.0, 2.0])
    oracle = full_oracle(f)
    M = UniformMatroid(4, 3)
    g = greedy_submodular(oracle, M, [0, 2])
    assert greedy_acceptance_step(oracle, M, g.solution, 1) == 2
    assert g.prefix(2) == [0]
    assert greedy_acceptance_step(oracle, M, g.solution, 3) == 3
    assert g.prefix(3) == [0, 2]


def test_synthetic_order_ranks_zero_branch_last():
    f = LinearFunction([1.0, 5.0, 4.0, 3.0])
    seq = ArrivalSequence(np.array([0, 1, 2, 3]), seed=0)
    coins = {1: False, 2: True, 3: True}
    res = online_p_reduction(MarginalOracle(f, seq), UniformMatroid(4, 2), seq, 0.5,
                             sample_size=1, coins=coins, rng=np.random.default_rng(0))
    assert res.order == [2, 3, 1]


def test_marginal_oracle_ignores_scaling_of_coverage():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(1, 8))
        f = random_coverage(rng, n)
        g = CoverageFunction(f.universe_weights * 7.5, f.covers)
        S = [e for e in range(n) if rng.random() < 0.4]
        assert full_oracle(f).order(S) == full_oracle(g).order(S)
