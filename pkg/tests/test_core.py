import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordsec.core import (
    EVALUATION_KEY,
    ArrivalSequence,
    HiddenWeightStore,
    OrdinalOracle,
    advance,
    compare,
    mix64,
    rank_prefix,
    sample_arrival,
)
from ordsec.errors import (
    ContractError,
    EmptyInstanceError,
    EmptyPrefixError,
    ExhaustedError,
    InformationLeakError,
    ParameterError,
)


def arrived_oracle(weights):
    store = HiddenWeightStore(weights)
    seq = sample_arrival(len(weights), 1)
    seq.cursor = len(weights)
    return OrdinalOracle(store, seq)


def test_single_element_arrival():
    for seed in (0, 7, 2**64 - 1):
        assert sample_arrival(1, seed).permutation.tolist() == [0]


def test_same_seed_same_permutation():
    a, b = sample_arrival(5, 1234), sample_arrival(5, 1234)
    assert a.permutation.tolist() == b.permutation.tolist()
    assert a.cursor == 0


def test_empty_arrival_rejected():
    with pytest.raises(EmptyInstanceError):
        sample_arrival(0, 1)


def test_uniform_over_permutations():
    counts = Counter(tuple(sample_arrival(3, mix64(s)).permutation) for s in range(60000))
    assert len(counts) == 6
    for perm in itertools.permutations(range(3)):
        assert abs(counts[perm] / 60000 - 1 / 6) <= 0.01


def test_advance_walks_permutation():
    seq = ArrivalSequence(np.array([2, 0, 1]), seed=0)
    assert advance(seq) == 2 and seq.cursor == 1
    assert [advance(seq), advance(seq)] == [0, 1]
    with pytest.raises(ExhaustedError):
        advance(seq)


def test_bad_permutation_rejected():
    with pytest.raises(ContractError):
        ArrivalSequence(np.array([0, 0, 1]), seed=0)


def test_rank_prefix_examples():
    assert rank_prefix(arrived_oracle([5, 3, 9])).tolist() == [2, 0, 1]
    assert rank_prefix(arrived_oracle([4, 4])).tolist() == [0, 1]


def test_rank_prefix_needs_arrivals():
    oracle = OrdinalOracle(HiddenWeightStore([1.0, 2.0]), sample_arrival(2, 3))
    with pytest.raises(EmptyPrefixError):
        oracle.rank_prefix()


def test_compare_examples():
    seq = ArrivalSequence(np.array([0, 1, 2]), seed=0)
    oracle = OrdinalOracle(HiddenWeightStore([7.0, 2.0, 1.0]), seq)
    advance(seq)
    advance(seq)
    assert compare(oracle, 0, 1) == -1
    assert compare(oracle, 1, 0) == 1
    assert compare(oracle, 1, 1) == -1
    with pytest.raises(InformationLeakError):
        compare(oracle, 0, 2)


def test_weights_are_sealed():
    store = HiddenWeightStore([1.0, 2.0])
    oracle = arrived_oracle([1.0, 2.0])
    with pytest.raises(InformationLeakError):
        oracle.weight(0)
    with pytest.raises(InformationLeakError):
        store.reveal(None)
    with pytest.raises(InformationLeakError):
        store.value("key", [0])
    assert store.reveal(EVALUATION_KEY).tolist() == [1.0, 2.0]
    assert store.value(EVALUATION_KEY, [0, 1]) == 3.0


def test_negative_or_nan_weights_rejected():
    with pytest.raises(ParameterError):
        HiddenWeightStore([1.0, -1.0])
    with pytest.raises(ParameterError):
        HiddenWeightStore([np.nan])


def test_explicit_order_must_match_weights():
    HiddenWeightStore([1.0, 1.0, 0.0], order=[1, 0, 2])
    with pytest.raises(ContractError):
        HiddenWeightStore([1.0, 2.0], order=[0, 1])


def test_owned_elements_arrive_with_all_owners():
    # edge 0 = (0, 1), edge 1 = (1, 2)
    seq = ArrivalSequence(np.array([1, 0, 2]), seed=0)
    oracle = OrdinalOracle(HiddenWeightStore([1.0, 5.0]), seq, owners=[[0, 1], [1, 2]])
    advance(seq)
    assert not oracle.arrived(0)
    advance(seq)
    assert oracle.rank_prefix().tolist() == [0]
    advance(seq)
    assert oracle.rank_prefix().tolist() == [1, 0]


def test_mix64_is_order_sensitive_and_64_bit():
    assert mix64(1, 2) != mix64(2, 1)
    assert 0 <= mix64(2**70, -1) < 2**64
    assert mix64(5, 6) == mix64(5, 6)


weights_st = st.lists(st.floats(0, 100, allow_nan=False), min_size=1, max_size=30)


@settings(max_examples=200, deadline=None)
@given(weights_st, st.integers(0, 2**63), st.data())
def test_prefix_is_strict_order_of_arrived(w, seed, data):
    n = len(w)
    seq = sample_arrival(n, seed)
    oracle = OrdinalOracle(HiddenWeightStore(w), seq)
    c = data.draw(st.integers(1, n))
    seq.cursor = c
    order = oracle.rank_prefix().tolist()
    assert sorted(order) == sorted(seq.permutation[:c].tolist())
    for a, b in zip(order, order[1:]):
        assert (w[a], -a) > (w[b], -b)


@settings(max_examples=200, deadline=None)
@given(weights_st, st.integers(0, 2**63))
def test_monotone_transform_keeps_answers(w, seed):
    w = np.asarray(w)
    n = w.size
    s1, s2 = sample_arrival(n, seed), sample_arrival(n, seed)
    o1 = OrdinalOracle(HiddenWeightStore(w), s1)
    o2 = OrdinalOracle(HiddenWeightStore(w ** 3 + w), s2)
    for c in range(1, n + 1):
        s1.cursor = s2.cursor = c
        assert o1.rank_prefix().tolist() == o2.rank_prefix().tolist()
