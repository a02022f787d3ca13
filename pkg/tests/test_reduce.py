import random

import pytest

from powcirc import (
    ChainOverflow,
    DuplicateValue,
    EMPTY,
    Marking,
    MuTooLarge,
    NonCompactSuccessor,
    NotAPowerCircuit,
    OffsetTooLarge,
    Ordering,
    PowerCircuit,
    PreconditionViolated,
    ReductionState,
    pc_compare,
    pc_eval_exact,
    pc_node_exponents,
    pc_reduce,
    pc_reduce_sequential,
    pc_sign,
    pc_tower_chain,
    rpc_compare_compact,
    rpc_extend_chains,
    rpc_initial_chain,
    rpc_insert_nodes,
    rpc_maximal_chains,
    rpc_trim,
    rpc_update_markings,
    rpc_update_nodes,
)
from support import exact_value, random_marking, random_power_circuit, reduced_from


def exponents(g):
    e = pc_node_exponents(g.circuit, g.order, 1 << 12)
    return [e[p] for p in g.order]


def values_of(g, nodes):
    e = pc_node_exponents(g.circuit, g.order, 1 << 12)
    return [e[p] for p in nodes]


# 1, 2, 4, 8 | 2**8, 2**9 | 2**512
THREE_CHAINS = [{}, {0: 1}, {1: 1}, {0: -1, 2: 1}, {3: 1}, {0: 1, 3: 1}, {5: 1}]

# 1, 2, 4, 8, 2**5, 2**32: the reduced part before extending chains
BEFORE_EXTEND = [{}, {0: 1}, {1: 1}, {0: -1, 2: 1}, {0: 1, 2: 1}, {4: 1}]


def test_initial_chain():
    g = reduced_from(THREE_CHAINS)
    g.check()
    assert len(rpc_initial_chain(g)) == 4
    assert len(rpc_initial_chain(reduced_from([{}]))) == 1


def test_initial_chain_of_tower():
    pc, ids = pc_tower_chain(4)
    from powcirc import ReducedPC
    g = ReducedPC(pc, ids)
    g.check()
    assert values_of(g, rpc_initial_chain(g).nodes) == [0, 1, 2]


def test_maximal_chains():
    assert [len(c) for c in rpc_maximal_chains(reduced_from(THREE_CHAINS))] == [4, 2, 1]
    assert len(rpc_maximal_chains(reduced_from([{}]))) == 1
    # 1, 2, 4, 8 and 2**10
    g = reduced_from([{}, {0: 1}, {1: 1}, {0: -1, 2: 1}, {1: 1, 3: 1}])
    assert len(rpc_maximal_chains(g)) == 2


def test_compare_compact():
    g = reduced_from([{}, {0: 1}, {1: 1}, {0: -1, 2: 1}])
    assert rpc_compare_compact(g, {2: 1}, {1: 1}, 2) is Ordering.EQ
    assert rpc_compare_compact(g, {3: 1, 0: -1}, {2: 1, 1: 1}, 0) is Ordering.GT
    assert rpc_compare_compact(g, {3: 1}, {3: 1}, 0) is Ordering.EQ
    assert rpc_compare_compact(g, {1: 1}, {1: 1}, 1) is Ordering.LT
    with pytest.raises(OffsetTooLarge):
        rpc_compare_compact(g, {1: 1}, {1: 1}, 100)


def test_compare_compact_exhaustive():
    g = reduced_from(THREE_CHAINS[:6])
    exps = exponents(g)
    rng = random.Random(3)
    for _ in range(300):
        l = {p: rng.choice((-1, 1)) for p in g.order if rng.random() < 0.3}
        m = {p: rng.choice((-1, 1)) for p in g.order if rng.random() < 0.3}
        if not (g.is_compact(l) and g.is_compact(m)):
            continue
        k = rng.randint(0, 10)
        vl = sum(s << exps[p] for p, s in l.items())
        vm = sum(s << exps[p] for p, s in m.items())
        assert rpc_compare_compact(g, l, m, k) == Ordering.of(vl, vm + k)


def test_insert_nodes():
    g = reduced_from([{}, {0: 1}, {1: 1}])
    g2 = rpc_insert_nodes(g, {10: {0: -1, 2: 1}})
    g2.check()
    assert exponents(g2) == [0, 1, 2, 3]
    assert len(rpc_maximal_chains(g2)) == 1
    assert rpc_insert_nodes(g, {}).order == g.order
    g3 = rpc_insert_nodes(reduced_from([{}]), {5: {0: 1}})
    assert exponents(g3) == [0, 1] and len(g3) == 2


def test_insert_makes_second_chain():
    # 1, 2, 4 and then 16: two chains
    g = rpc_insert_nodes(reduced_from([{}, {0: 1}, {1: 1}]), {7: {2: 1}})
    g.check()
    assert exponents(g) == [0, 1, 2, 4]
    assert [len(c) for c in rpc_maximal_chains(g)] == [3, 1]


def test_insert_errors():
    g = reduced_from([{}, {0: 1}, {1: 1}])
    with pytest.raises(DuplicateValue):
        rpc_insert_nodes(g, {9: {1: 1}})
    with pytest.raises(NonCompactSuccessor):
        rpc_insert_nodes(g, {9: {0: 1, 1: 1}})


def test_extend_chains_example():
    g = reduced_from(BEFORE_EXTEND)
    g.check()
    assert [len(c) for c in rpc_maximal_chains(g)] == [4, 1, 1]
    out = rpc_extend_chains(g, 3)
    out.check()
    chains = [values_of(out, c.nodes) for c in rpc_maximal_chains(out)]
    assert chains == [list(range(0, 9)), [32, 33, 34, 35]]


def test_extend_single_node():
    out = rpc_extend_chains(reduced_from([{}]), 1)
    assert exponents(out) == [0, 1]


def test_extend_mu_zero_two_node_chain():
    out = rpc_extend_chains(reduced_from([{}, {0: 1}]), 0)
    out.check()
    # only the node on top of the first chain is added
    assert exponents(out) == [0, 1, 2]


def test_extend_mu_too_large():
    with pytest.raises(MuTooLarge):
        rpc_extend_chains(reduced_from([{}, {0: 1}]), 50)


def _state(gamma, pending, markings=None):
    return ReductionState(gamma, {p: Marking(m) for p, m in pending.items()},
                          {k: Marking(v) for k, v in (markings or {}).items()})


def test_update_nodes_merges_equal_values():
    g = reduced_from([{}, {0: 1}, {1: 1}, {0: -1, 2: 1}])
    st = _state(g, {10: {0: -1, 2: 1}, 11: {0: -1, 2: 1}})
    out = rpc_update_nodes(st)
    assert len(out.gamma) == len(g)
    assert out.classes[10] == out.classes[11] == 3


def test_update_nodes_example():
    # pending minimal nodes of value 2**3, 2**3 and 2**32 over 1, 2, 4, 8, 2**5
    g = reduced_from(BEFORE_EXTEND[:5])
    st = _state(g, {20: {0: -1, 2: 1}, 21: {0: -1, 2: 1}, 22: {4: 1}})
    with pytest.raises(PreconditionViolated):
        # five pending nodes need a first chain of at least four nodes
        rpc_update_nodes(_state(reduced_from([{}, {0: 1}]), {20: {0: 1}, 21: {}, 22: {}, 23: {}, 24: {}}))
    out = rpc_update_nodes(st)
    out.gamma.check()
    assert len(out.gamma) == len(g) + 1
    assert sorted(exponents(out.gamma)) == [0, 1, 2, 3, 5, 32]
    assert out.classes[20] == out.classes[21]
    assert rpc_update_nodes(_state(g, {})).gamma.order == g.order


def test_update_markings():
    # chain 1, 2, 4, 8, 16
    g = reduced_from([{}, {0: 1}, {1: 1}, {0: -1, 2: 1}, {2: 1}])
    # nodes 100 and 101 are inserted nodes of value 8
    st = ReductionState(g, {}, {"M": Marking({100: 1, 101: 1}), "E": EMPTY}, {100: 3, 101: 3}, ())
    out = rpc_update_markings(st)
    assert out.markings["M"] == {4: 1}
    assert out.markings["E"] == EMPTY
    st = ReductionState(g, {}, {"M": Marking({2: 1, 3: 1})}, {}, ())
    assert rpc_update_markings(st).markings["M"] == {2: -1, 4: 1}


def test_update_markings_overflow():
    g = reduced_from([{}, {0: 1}])
    st = ReductionState(g, {}, {"M": Marking({0: 1, 1: 1, 9: 1})}, {9: 1}, ())
    with pytest.raises(ChainOverflow):
        rpc_update_markings(st)


def test_reduce_two_leaves():
    pc = PowerCircuit({0: {}, 1: {}})
    res = pc_reduce(pc, {"M": {0: 1, 1: 1}})
    res.reduced.check()
    m = res.markings["M"]
    assert pc_eval_exact(res.reduced.circuit, m) == 2
    assert len(m) == 1 and values_of(res.reduced, list(m)) == [1]
    assert res.node_map[0] == res.node_map[1]


def test_reduce_layered_example():
    # five nodes of values 1, 1, 4, 2, 2**7 and the marking 1 - 1 + 4 - 2 + 128
    pc = PowerCircuit({0: {}, 1: {}, 2: {0: 1, 1: 1}, 3: {0: 1}, 4: {1: 1, 2: 1, 3: 1}})
    res = pc_reduce(pc, {"M": {0: 1, 1: -1, 2: 1, 3: -1, 4: 1}})
    res.reduced.check()
    assert res.iterations == 3
    ex = exponents(res.reduced)
    assert {0, 1, 2, 3, 7, 8} <= set(ex)
    m = res.markings["M"]
    assert sorted(values_of(res.reduced, m)) == [1, 7]
    assert all(s == 1 for s in m.values())


def test_reduce_negative_successor():
    pc = PowerCircuit({0: {}, 1: {0: -1}})
    with pytest.raises(NotAPowerCircuit):
        pc_reduce(pc)


def test_reduce_empty():
    res = pc_reduce(PowerCircuit())
    assert len(res.reduced) >= 0 and res.markings == {}


@pytest.mark.parametrize("reducer", [pc_reduce, pc_reduce_sequential])
def test_reducers_preserve_values(reducer):
    rng = random.Random(11)
    for _ in range(300):
        pc = random_power_circuit(rng, rng.randint(1, 9), max_exp=48)
        marks = {"a": random_marking(rng, pc), "b": random_marking(rng, pc)}
        res = reducer(pc, marks)
        res.reduced.check()
        for name, m in marks.items():
            out = res.markings[name]
            assert res.reduced.is_compact(out)
            assert pc_eval_exact(res.reduced.circuit, out) == exact_value(pc, m)
        exps = pc_node_exponents(pc, pc.nodes)
        rexps = pc_node_exponents(res.reduced.circuit, res.reduced.order, 1 << 12)
        for p, q in res.node_map.items():
            assert exps[p] == rexps[q]


def test_reduce_is_idempotent():
    rng = random.Random(5)
    for _ in range(50):
        pc = random_power_circuit(rng, rng.randint(1, 7), max_exp=30)
        m = random_marking(rng, pc)
        first = pc_reduce(pc, {"m": m})
        second = pc_reduce(first.reduced.circuit, {"m": first.markings["m"]})
        v = pc_eval_exact(first.reduced.circuit, first.markings["m"])
        assert pc_eval_exact(second.reduced.circuit, second.markings["m"]) == v


def test_compare_tower():
    pc, ids = pc_tower_chain(10)
    assert pc_compare(pc, {ids[10]: 1}, {ids[9]: 1}) is Ordering.GT
    assert pc_compare(pc, {ids[10]: 1}, {ids[10]: 1}) is Ordering.EQ
    assert pc_compare(pc, {ids[9]: 1}, {ids[10]: 1}, "layered") is Ordering.LT


def test_compare_tower_differences():
    # tau(6) - tau(5) is positive, tau(5) + tau(5) < tau(6)
    pc, ids = pc_tower_chain(6)
    assert pc_sign(pc, {ids[6]: 1, ids[5]: -1}) is Ordering.GT
    assert pc_compare(pc, {ids[6]: 1}, {ids[5]: 1, ids[4]: 1}) is Ordering.GT


def test_compare_unknown_method():
    pc, ids = pc_tower_chain(1)
    with pytest.raises(ValueError):
        pc_compare(pc, {ids[0]: 1}, {ids[1]: 1}, "magic")


@pytest.mark.parametrize("method", ["sequential", "layered"])
def test_compare_random(method):
    rng = random.Random(17 if method == "layered" else 19)
    for _ in range(400):
        pc = random_power_circuit(rng, rng.randint(1, 10), max_exp=40)
        l = random_marking(rng, pc)
        m = random_marking(rng, pc)
        assert pc_compare(pc, l, m, method) == Ordering.of(exact_value(pc, l), exact_value(pc, m))


def test_trim_gives_fixed_point():
    rng = random.Random(23)
    for _ in range(100):
        pc = random_power_circuit(rng, rng.randint(1, 8), max_exp=40)
        m = random_marking(rng, pc)
        res = pc_reduce(pc, {"m": m})
        g, marks = rpc_trim(res.reduced, res.markings)
        g.check()
        assert pc_eval_exact(g.circuit, marks["m"]) == exact_value(pc, m)
        again = pc_reduce(g.circuit, marks)
        g2, marks2 = rpc_trim(again.reduced, again.markings)
        assert g2.circuit == g.circuit and marks2 == marks
