"""Arithmetic circuits over ``0, +, -, 2**x`` and their power-circuit form.

A circuit is a list of gates; gate ``i`` has an op ``ZERO`` (no inputs),
``PLUS`` (two), ``MINUS`` (one, negation) or ``EXP2`` (one) and the ids of
its inputs.  ``out`` names the output gate.  The JSON form spells ops in
lower case: ``{"gates": [{"op": "plus", "in": [0, 1]}, ...], "out": 2}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .core import DEFAULT_BUDGET_BITS, Marking, PowerCircuit, pc_depth
from .errors import EvalBudgetExceeded, MalformedCircuit, NotAPowerCircuit, NotDyadic

ARITY = {"ZERO": 0, "PLUS": 2, "MINUS": 1, "EXP2": 1}


@dataclass(frozen=True)
class ArithGate:
    op: str
    inputs: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ArithCircuit:
    gates: Tuple[ArithGate, ...]
    out: int

    def __post_init__(self):
        n = len(self.gates)
        for i, g in enumerate(self.gates):
            if g.op not in ARITY:
                raise MalformedCircuit("gate %d: unknown op %r" % (i, g.op))
            if len(g.inputs) != ARITY[g.op]:
                raise MalformedCircuit("gate %d: %s takes %d inputs" % (i, g.op, ARITY[g.op]))
            for j in g.inputs:
                if not 0 <= j < n:
                    raise MalformedCircuit("gate %d reads missing gate %d" % (i, j))
        if not 0 <= self.out < n:
            raise MalformedCircuit("output gate %d does not exist" % self.out)
        self.topological_order()

    def __len__(self):
        return len(self.gates)

    def topological_order(self) -> List[int]:
        state: Dict[int, int] = {}
        order: List[int] = []
        for root in range(len(self.gates)):
            if root in state:
                continue
            stack = [(root, iter(self.gates[root].inputs))]
            state[root] = 1
            while stack:
                g, it = stack[-1]
                for j in it:
                    if j not in state:
                        state[j] = 1
                        stack.append((j, iter(self.gates[j].inputs)))
                        break
                    if state[j] == 1:
                        raise MalformedCircuit("cycle through gate %d" % j)
                else:
                    stack.pop()
                    state[g] = 2
                    order.append(g)
        return order

    def depth(self) -> int:
        """Longest path, counted in wires."""
        d: Dict[int, int] = {}
        for g in self.topological_order():
            ins = self.gates[g].inputs
            d[g] = 1 + max(d[j] for j in ins) if ins else 0
        return max(d.values())

    def exp_depth(self) -> int:
        """Largest number of ``EXP2`` gates on a path."""
        d: Dict[int, int] = {}
        for g in self.topological_order():
            gate = self.gates[g]
            d[g] = max((d[j] for j in gate.inputs), default=0) + (gate.op == "EXP2")
        return max(d.values())


def arith_eval_exact(c: ArithCircuit, budget_bits: int = DEFAULT_BUDGET_BITS) -> Fraction:
    """Exact value of the output gate.

    ``2**x`` of a negative integer gives a dyadic fraction; ``2**x`` of a
    non-integer is irrational and raises NotDyadic.
    """
    val: Dict[int, Fraction] = {}
    for g in c.topological_order():
        gate = c.gates[g]
        if gate.op == "ZERO":
            v = Fraction(0)
        elif gate.op == "PLUS":
            v = val[gate.inputs[0]] + val[gate.inputs[1]]
        elif gate.op == "MINUS":
            v = -val[gate.inputs[0]]
        else:
            x = val[gate.inputs[0]]
            if x.denominator != 1:
                raise NotDyadic("gate %d: 2**(%s) is not dyadic" % (g, x))
            e = int(x)
            if abs(e) > budget_bits:
                raise EvalBudgetExceeded("gate %d: 2**%d exceeds the budget" % (g, e))
            v = Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)
        val[g] = v
    return val[c.out]


def _balanced(terms: List[int], gates: List[ArithGate]) -> int:
    while len(terms) > 1:
        nxt = []
        for k in range(0, len(terms) - 1, 2):
            gates.append(ArithGate("PLUS", (terms[k], terms[k + 1])))
            nxt.append(len(gates) - 1)
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


def pc_to_arith(pc: PowerCircuit, m: Mapping[int, int]) -> ArithCircuit:
    """Arithmetic circuit computing ``value(m)``.

    One ``ZERO`` gate, one ``EXP2`` gate per node, and a balanced sum for every
    successor marking and for ``m`` (negative terms pass a ``MINUS`` gate).
    """
    m = pc.check_marking(m)
    gates: List[ArithGate] = [ArithGate("ZERO")]
    node_gate: Dict[int, int] = {}

    def sum_of(marking: Mapping[int, int]) -> int:
        if not marking:
            return 0
        terms = []
        for q in sorted(marking):
            t = node_gate[q]
            if marking[q] < 0:
                gates.append(ArithGate("MINUS", (t,)))
                t = len(gates) - 1
            terms.append(t)
        return _balanced(terms, gates)

    for p in pc.topological_order():
        x = sum_of(pc.successors(p))
        gates.append(ArithGate("EXP2", (x,)))
        node_gate[p] = len(gates) - 1
    out = sum_of(m)
    c = ArithCircuit(tuple(gates), out)

    n = len(pc)
    edges = sum(len(pc.successors(p)) for p in pc.nodes)
    assert len(c) <= 2 * edges + 3 * n + 1
    if n:
        assert c.exp_depth() == pc_depth(pc) + 1
        assert c.depth() <= (pc_depth(pc) + 2) * ((n - 1).bit_length() + 2)
    return c


def _linear_forms(c: ArithCircuit) -> Tuple[List[int], Dict[int, Dict[int, int]]]:
    """EXP2 gates in topological order and, per gate, its value as a
    Z-linear combination of EXP2 gate values."""
    exps: List[int] = []
    forms: Dict[int, Dict[int, int]] = {}
    for g in c.topological_order():
        gate = c.gates[g]
        if gate.op == "ZERO":
            f = {}
        elif gate.op == "EXP2":
            exps.append(g)
            f = {g: 1}
        elif gate.op == "MINUS":
            f = {h: -a for h, a in forms[gate.inputs[0]].items()}
        else:
            f = dict(forms[gate.inputs[0]])
            for h, a in forms[gate.inputs[1]].items():
                f[h] = f.get(h, 0) + a
            f = {h: a for h, a in f.items() if a}
        forms[g] = f
    return exps, forms


def arith_to_pc(c: ArithCircuit) -> Tuple[PowerCircuit, Marking, bool]:
    """Power-circuit form of an arithmetic circuit.

    With ``n`` gates, there are ``n`` leaves of value 1 and, for every ``EXP2``
    gate ``h``, a chain of ``n`` nodes with values ``value(h) * 2**l``.  The
    flag is False when some ``EXP2`` gate receives a negative number, in which
    case the returned graph is not a power circuit.
    """
    n = len(c)
    exps, forms = _linear_forms(c)
    for f in forms.values():
        assert all(abs(a) < 1 << n for a in f.values())
    leaves = list(range(n))
    chain: Dict[int, List[int]] = {}
    nid = n
    for h in exps:
        chain[h] = list(range(nid, nid + n))
        nid += n

    def bits_on_chains(form: Mapping[int, int]) -> Dict[int, int]:
        out = {}
        for h, a in form.items():
            s = 1 if a > 0 else -1
            a = abs(a)
            for bit in range(a.bit_length()):
                if (a >> bit) & 1:
                    out[chain[h][bit]] = s
        return out

    succ: Dict[int, Dict[int, int]] = {p: {} for p in leaves}
    for h in exps:
        base = bits_on_chains(forms[c.gates[h].inputs[0]])
        for l, p in enumerate(chain[h]):
            signs = dict(base)
            for k in range(l):
                signs[leaves[k]] = 1
            succ[p] = signs
    pc = PowerCircuit(succ, nid)
    out_gate = c.gates[c.out]
    if out_gate.op == "EXP2":
        m = Marking({chain[c.out][0]: 1})
    else:
        m = Marking(bits_on_chains(forms[c.out]))

    assert len(pc) <= n * n + n
    assert pc_depth(pc) <= c.exp_depth()

    from .reduce import pc_reduce
    try:
        pc_reduce(pc)
        integral = True
    except NotAPowerCircuit:
        integral = False
    return pc, m, integral


def arith_to_json(c: ArithCircuit) -> dict:
    return {"gates": [{"op": g.op.lower(), "in": list(g.inputs)} for g in c.gates], "out": c.out}


def arith_from_json(data: Mapping) -> ArithCircuit:
    try:
        gates = tuple(ArithGate(str(g["op"]).upper(), tuple(int(i) for i in g.get("in", ()))) for g in data["gates"])
        return ArithCircuit(gates, int(data["out"]))
    except (KeyError, TypeError) as e:
        raise MalformedCircuit("bad arithmetic circuit: %s" % e) from None
