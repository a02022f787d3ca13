import json
import random

import pytest

from powcirc import (
    Arena,
    BadLabel,
    CycleDetected,
    MalformedCircuit,
    UnknownNode,
    britton_reduce,
    bg_tower_word,
    circuit_from_json,
    circuit_to_json,
    dumps,
    loads,
    pc_eval_exact,
    pc_reduce,
    reduced_from_json,
    reduced_to_json,
    word_from_json,
    word_to_json,
)
from powcirc.baumslag import bg_parse
from support import binary_basis_circuit, random_marking, random_power_circuit


def test_circuit_round_trip_is_bit_exact():
    pc, m = binary_basis_circuit()
    text = dumps(circuit_to_json(pc, {"M": m}))
    pc2, marks, order = circuit_from_json(loads(text))
    assert pc2 == pc and marks == {"M": m} and order is None
    assert dumps(circuit_to_json(pc2, marks)) == text


def test_layout():
    pc, m = binary_basis_circuit()
    data = circuit_to_json(pc, {"M": m})
    assert data["nodes"] == [0, 1, 2, 3, 4, 5]
    assert data["edges"][0] == {"src": 1, "dst": 0, "sign": 1}
    assert data["markings"] == {"M": {"0": -1, "3": 1, "4": 1}}


def test_random_round_trips():
    rng = random.Random(50)
    for _ in range(100):
        pc = random_power_circuit(rng, rng.randint(0, 8), max_exp=30)
        marks = {"x": random_marking(rng, pc), "y": random_marking(rng, pc)}
        text = dumps(circuit_to_json(pc, marks))
        pc2, marks2, _ = circuit_from_json(loads(text))
        assert dumps(circuit_to_json(pc2, marks2)) == text
        # key order in the input does not matter
        shuffled = json.loads(text)
        rng.shuffle(shuffled["edges"])
        assert dumps(circuit_to_json(*circuit_from_json(shuffled)[:2])) == text


def test_reduced_round_trip():
    pc, m = binary_basis_circuit()
    res = pc_reduce(pc, {"M": m})
    text = dumps(reduced_to_json(res.reduced, res.markings))
    g, marks = reduced_from_json(loads(text))
    g.check()
    assert tuple(g.order) == tuple(res.reduced.order)
    assert pc_eval_exact(g.circuit, marks["M"]) == 23
    assert dumps(reduced_to_json(g, marks)) == text


@pytest.mark.parametrize("data, err", [
    ({"nodes": [0], "edges": [{"src": 0, "dst": 0, "sign": 1}]}, CycleDetected),
    ({"nodes": [0, 1], "edges": [{"src": 1, "dst": 0, "sign": 2}]}, BadLabel),
    ({"nodes": [0, 1], "edges": [{"src": 1, "dst": 0, "sign": 0}]}, BadLabel),
    ({"nodes": [0], "edges": [{"src": 0, "dst": 7, "sign": 1}]}, UnknownNode),
    ({"nodes": [0], "markings": {"M": {"3": 1}}}, UnknownNode),
    ({"nodes": [0, 0]}, MalformedCircuit),
    ({"edges": []}, MalformedCircuit),
    ({"nodes": [0, 1], "edges": [{"src": 1, "dst": 0, "sign": 1}, {"src": 1, "dst": 0, "sign": -1}]},
     MalformedCircuit),
])
def test_rejects_bad_circuits(data, err):
    with pytest.raises(err):
        circuit_from_json(data)


def test_rejects_bad_text():
    with pytest.raises(MalformedCircuit):
        loads("{nodes")


def test_word_round_trip():
    w = britton_reduce("btBaabTTa")
    data = word_to_json(w)
    kinds = [("beta" in e) for e in data["word"]]
    assert kinds == [False, True, False, True, False, True, False]
    back = word_from_json(loads(dumps(data)))
    assert back.key == word_from_json(data).key
    assert back.reduced
    assert dumps(word_to_json(back)) == dumps(data)


def test_word_round_trip_tower():
    w = britton_reduce(bg_tower_word(6))
    back = word_from_json(loads(dumps(word_to_json(w))))
    assert len(back.pairs) == 1 and not back.betas


def test_word_malformed():
    data = word_to_json(bg_parse("ab", Arena()))
    data["word"] = data["word"][:-1]
    with pytest.raises(MalformedCircuit):
        word_from_json(data)
