"""Shared generators and oracles for the test suite."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Sequence

from powcirc import (
    ArithCircuit,
    ArithGate,
    BoolCircuit,
    BoolGate,
    Marking,
    PowerCircuit,
    ReducedPC,
)


def binary_basis_circuit():
    """Nodes of value 1, 2, 4, 8, 16, 32 and the marking -1 + 8 + 16 = 23."""
    succ = {
        0: {},
        1: {0: 1},
        2: {1: 1},
        3: {0: 1, 1: 1},
        4: {2: 1},
        5: {0: 1, 2: 1},
    }
    return PowerCircuit(succ), Marking({0: -1, 3: 1, 4: 1})


def reduced_from(succ: Sequence[Dict[int, int]]) -> ReducedPC:
    """Reduced circuit whose node ``i`` has successor marking ``succ[i]``,
    listed by increasing value."""
    pc = PowerCircuit({i: m for i, m in enumerate(succ)})
    return ReducedPC(pc, range(len(succ)))


def random_power_circuit(rng: random.Random, n: int, max_exp: int = 64,
                         density: float = 0.4) -> PowerCircuit:
    """Random power circuit with ``n`` nodes, every exponent in ``[0, max_exp]``.

    Nodes are added one at a time; a candidate successor marking is kept only
    when its value is a legal exponent.
    """
    succ: Dict[int, Dict[int, int]] = {}
    exps: List[int] = []
    for p in range(n):
        while True:
            signs = {q: rng.choice((-1, 1)) for q in range(p) if rng.random() < density}
            e = sum(s << exps[q] for q, s in signs.items())
            if e < 0:
                signs = {q: -s for q, s in signs.items()}
                e = -e
            if e <= max_exp:
                break
        succ[p] = signs
        exps.append(e)
    return PowerCircuit(succ)


def random_marking(rng: random.Random, pc: PowerCircuit, density: float = 0.5) -> Marking:
    return Marking({p: rng.choice((-1, 1)) for p in pc.nodes if rng.random() < density})


def exact_value(pc: PowerCircuit, m) -> int:
    """Independent evaluator: plain recursion with memo, no budget."""
    memo: Dict[int, int] = {}

    def node(p):
        if p not in memo:
            memo[p] = 2 ** sum(s * node(q) for q, s in pc.successors(p).items())
        return memo[p]

    return sum(s * node(p) for p, s in m.items())


def random_arith(rng: random.Random, n: int) -> ArithCircuit:
    """Random circuit of ``n`` gates; the first gate is ZERO."""
    gates = [ArithGate("ZERO")]
    while len(gates) < n:
        k = len(gates)
        op = rng.choice(("PLUS", "MINUS", "EXP2", "EXP2"))
        if op == "PLUS":
            gates.append(ArithGate(op, (rng.randrange(k), rng.randrange(k))))
        else:
            gates.append(ArithGate(op, (rng.randrange(k),)))
    return ArithCircuit(tuple(gates), n - 1)


def random_layered(rng: random.Random, n_inputs: int, depth: int, max_gates: int) -> BoolCircuit:
    """Random layered OR/NOT circuit with at most ``max_gates`` gates."""
    gates = [BoolGate("input", (), 0) for _ in range(n_inputs)]
    prev = list(range(n_inputs))
    budget = max_gates - n_inputs
    for level in range(1, depth + 1):
        levels_left = depth - level
        width = rng.randint(1, max(1, min(8, budget - levels_left)))
        if level == depth:
            width = 1
        cur = []
        for _ in range(width):
            if rng.random() < 0.4:
                g = BoolGate("not", (rng.choice(prev),), level)
            else:
                k = rng.randint(1, min(3, len(prev)))
                g = BoolGate("or", tuple(rng.sample(prev, k)), level)
            gates.append(g)
            cur.append(len(gates) - 1)
        budget -= width
        prev = cur
    return BoolCircuit(tuple(gates), len(gates) - 1)


def fraction_pair(r, m):
    return (Fraction(r), m)
