import numpy as np
import pytest

from ordsec.core import EVALUATION_KEY
from ordsec.harness import PROBLEMS, ExperimentConfig, make_instance
from ordsec.instances import FormatError, MatroidInstance, dump_instance, load_instance, parse_document
from ordsec.matching import GeneralInstance
from ordsec.matroid import generate_lower_bound_instance


@pytest.mark.parametrize("problem, n", [("bipartite", 5), ("general", 7), ("packing", 6),
                                        ("indepset", 9), ("matroid", 10), ("submodular", 6)])
def test_round_trip_is_bit_exact(problem, n, tmp_path):
    inst = make_instance(ExperimentConfig(problem, n, seed=11), 0)
    path = tmp_path / "inst.txt"
    text = dump_instance(inst, path, comment="round trip")
    back = load_instance(path)
    assert dump_instance(back) == dump_instance(inst)
    assert text.startswith("ordsec v1 ")
    prob = PROBLEMS[problem]
    assert np.array_equal(prob.weights(back), prob.weights(inst))


def test_lower_bound_instance_keeps_order(tmp_path):
    lb = generate_lower_bound_instance(16, 4, 2, seed=1)
    inst = MatroidInstance(lb.matroid, lb.weights.reveal(EVALUATION_KEY), lb.order)
    back = load_instance(dump_instance(inst))
    assert back.order.tolist() == lb.order.tolist()
    assert back.matroid.block_of == lb.matroid.block_of


def test_parse_rules():
    doc = parse_document("""
# leading comment
ordsec v1 general
n: 3   # trailing comment
edges:
0 1
1 2
weights:
0.1
2.5
""")
    assert doc.kind == "general" and doc.scalars == {"n": "3"}
    assert doc.sections["edges"] == [["0", "1"], ["1", "2"]]
    g = load_instance("ordsec v1 general\nn: 3\nedges:\n0 1\nweights:\n0.1\n")
    assert g.weight.tolist() == [0.1]


@pytest.mark.parametrize("text", [
    "",
    "ordsec v2 general\n",
    "ordsec v1 nonsense\n",
    "ordsec v1 general\n0 1\n",
    "ordsec v1 general\nedges:\n0 1\n",
    "ordsec v1 general\nn: x\n",
])
def test_malformed_documents(text):
    with pytest.raises(FormatError):
        load_instance(text) if text.startswith("ordsec") else parse_document(text)


def test_repr_floats_survive():
    w = np.array([0.1, 1 / 3, 2 ** -40, 1e300, 0.30000000000000004])
    g = GeneralInstance(6, [0, 1, 2, 3, 4], [1, 2, 3, 4, 5], w)
    assert load_instance(dump_instance(g)).weight.tolist() == w.tolist()
