"""Boolean circuits and their encoding as a power-circuit comparison.

``bool_normalize`` turns an AND/OR/NOT circuit into a layered OR/NOT circuit:
every gate on level ``k`` reads only gates on level ``k-1`` and the output is
on the last level.  ``bool_to_pc_gadget`` builds a power circuit with two
nodes ``A`` and ``B`` such that, once the inputs are wired in,
``value(A) <= value(B)`` exactly when the circuit outputs 1.

The encoding uses nodes ``X_i`` of value ``2**i`` (one per gate), a tower
``T_0 .. T_{2D+1+l}`` with ``T_j`` of value ``tau(j)``, and per level ``k`` the
nodes ``R_k = T_{2k+l}`` and ``S_k`` of value ``tau(2k-1+l) / 2``.  An input
node has value ``2**i * tau(l-1)`` times ``top = T_l`` when the input is 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .core import Marking, PowerCircuit, pc_depth, tower
from .errors import DepthBoundViolated, MalformedCircuit, NotLayered
from .sdr import cr

OPS = ("input", "and", "or", "not")


@dataclass(frozen=True)
class BoolGate:
    op: str
    inputs: Tuple[int, ...] = ()
    level: Optional[int] = None


@dataclass(frozen=True)
class BoolCircuit:
    """Gates ``0..n-1``; ``input`` gates are numbered in input order."""

    gates: Tuple[BoolGate, ...]
    out: int

    def __post_init__(self):
        n = len(self.gates)
        for i, g in enumerate(self.gates):
            if g.op not in OPS:
                raise MalformedCircuit("gate %d: unknown op %r" % (i, g.op))
            if g.op == "input" and g.inputs:
                raise MalformedCircuit("input gate %d has inputs" % i)
            if g.op == "not" and len(g.inputs) != 1:
                raise MalformedCircuit("not gate %d needs one input" % i)
            if g.op in ("and", "or") and not g.inputs:
                raise MalformedCircuit("gate %d has no inputs" % i)
            for j in g.inputs:
                if not 0 <= j < n:
                    raise MalformedCircuit("gate %d reads missing gate %d" % (i, j))
        if not 0 <= self.out < n:
            raise MalformedCircuit("output gate %d does not exist" % self.out)
        self.topological_order()

    @property
    def inputs(self) -> List[int]:
        return [i for i, g in enumerate(self.gates) if g.op == "input"]

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

    def depths(self) -> Dict[int, int]:
        d: Dict[int, int] = {}
        for g in self.topological_order():
            ins = self.gates[g].inputs
            d[g] = 1 + max(d[j] for j in ins) if ins else 0
        return d

    def depth(self) -> int:
        return self.depths()[self.out]

    def is_layered(self) -> bool:
        """OR/NOT only, explicit levels, inputs on level 0, wires go up one level."""
        top = self.gates[self.out].level
        for g in self.gates:
            if g.level is None or g.op == "and":
                return False
            if (g.op == "input") != (g.level == 0):
                return False
            if any(self.gates[j].level != g.level - 1 for j in g.inputs):
                return False
        return top == max(g.level for g in self.gates)


def bool_eval(c: BoolCircuit, assignment: Sequence[int]) -> int:
    """Value of the output; ``assignment[k]`` feeds the ``k``-th input gate."""
    ins = c.inputs
    if len(assignment) != len(ins):
        raise ValueError("expected %d input bits, got %d" % (len(ins), len(assignment)))
    val: Dict[int, int] = dict(zip(ins, (1 if a else 0 for a in assignment)))
    for g in c.topological_order():
        gate = c.gates[g]
        if gate.op == "input":
            continue
        xs = [val[j] for j in gate.inputs]
        if gate.op == "and":
            val[g] = int(all(xs))
        elif gate.op == "or":
            val[g] = int(any(xs))
        else:
            val[g] = 1 - xs[0]
    return val[c.out]


def bool_normalize(c: BoolCircuit, depth_bound: Optional[int] = None) -> BoolCircuit:
    """Equivalent layered OR/NOT circuit.

    Every AND becomes NOT(OR(NOT x, ...)), which at most triples the depth.
    The result has one copy of every needed gate per level; a copy on level
    ``k`` reads the copies on level ``k-1``, and inputs are carried upwards by
    one-input OR gates.  The output sits on level ``max(depth, depth_bound)``.
    """
    if depth_bound is not None and c.depth() > depth_bound:
        raise DepthBoundViolated("depth %d exceeds the bound %d" % (c.depth(), depth_bound))
    gates: List[BoolGate] = list(c.gates)
    remap = {i: i for i in range(len(gates))}
    for i, g in enumerate(c.gates):
        if g.op == "and":
            negs = []
            for j in g.inputs:
                gates.append(BoolGate("not", (j,)))
                negs.append(len(gates) - 1)
            gates.append(BoolGate("or", tuple(negs)))
            gates.append(BoolGate("not", (len(gates) - 1,)))
            remap[i] = len(gates) - 1
    fixed = [BoolGate(g.op, tuple(remap.get(j, j) for j in g.inputs)) for g in gates]
    # the original AND gates are unused now
    oc = BoolCircuit(tuple(fixed), remap[c.out])
    depth = oc.depth()
    if depth_bound is not None:
        assert depth <= 3 * depth_bound
        depth = max(depth, depth_bound)

    # gates needed on each level, from the output down
    need: List[set] = [set() for _ in range(depth + 1)]
    need[depth].add(oc.out)
    for k in range(depth, 0, -1):
        for g in need[k]:
            gate = oc.gates[g]
            need[k - 1].update(gate.inputs if gate.op != "input" else (g,))
    inputs = oc.inputs
    for g in inputs:
        need[0].add(g)
    out_gates: List[BoolGate] = []
    ids: Dict[Tuple[int, int], int] = {}
    for g in inputs:
        ids[(0, g)] = len(out_gates)
        out_gates.append(BoolGate("input", (), 0))
    for k in range(1, depth + 1):
        for g in sorted(need[k]):
            gate = oc.gates[g]
            if gate.op == "input":
                new = BoolGate("or", (ids[(k - 1, g)],), k)
            else:
                new = BoolGate(gate.op, tuple(ids[(k - 1, j)] for j in gate.inputs), k)
            ids[(k, g)] = len(out_gates)
            out_gates.append(new)
    res = BoolCircuit(tuple(out_gates), ids[(depth, oc.out)])
    assert res.is_layered()
    return res


def log_star(n: int) -> int:
    """Smallest ``i`` with ``tau(i) >= n``."""
    i = 0
    while tower(i) < n:
        i += 1
    return i


@dataclass
class GadgetResult:
    circuit: PowerCircuit
    V: List[int]
    top: int
    A: int
    B: int
    ell: int
    size_param: int
    depth_param: int
    gate_nodes: Dict[int, int] = field(default_factory=dict)

    def apply(self, assignment: Sequence[int]) -> PowerCircuit:
        """The circuit with ``V_i -> top`` present exactly when input ``i`` is 1."""
        if len(assignment) != len(self.V):
            raise ValueError("expected %d input bits, got %d" % (len(self.V), len(assignment)))
        succ = {p: self.circuit.successors(p) for p in self.circuit.nodes}
        for v, a in zip(self.V, assignment):
            if a:
                signs = dict(succ[v])
                signs[self.top] = 1
                succ[v] = Marking(signs)
        return PowerCircuit(succ, self.circuit.next_id)


def bool_to_pc_gadget(c: BoolCircuit) -> GadgetResult:
    """Power circuit whose ``A <= B`` comparison evaluates the layered circuit ``c``.

    Circuits with fewer than three gates use three as the size parameter.
    """
    if not c.is_layered():
        raise NotLayered("the circuit must be layered OR/NOT (see bool_normalize)")
    D = c.gates[c.out].level
    L = max(len(c.gates), 3)
    ell = log_star(L) + 3
    succ: Dict[int, Dict[int, int]] = {}
    nid = [0]

    def new(signs: Dict[int, int]) -> int:
        p = nid[0]
        nid[0] += 1
        succ[p] = signs
        return p

    X: List[int] = []
    for i in range(L + 1):
        digits = cr(i).stripped()
        X.append(new({X[j]: d for j, d in enumerate(digits) if d}))
    T: List[int] = []
    for j in range(2 * D + 2 + ell):
        e = 0 if j == 0 else tower(j - 1) if j <= 5 else None
        if e is not None and e <= L:
            T.append(X[e])
        else:
            T.append(new({T[j - 1]: 1}))
    R = [T[2 * k + ell] for k in range(D + 1)]
    S = [None] + [new({R[k - 1]: 1, X[0]: -1}) for k in range(1, D + 1)]
    top = T[ell]

    P: Dict[int, int] = {}
    V: List[int] = []
    for g, gate in enumerate(c.gates):
        i = g + 1
        if gate.op == "input":
            P[g] = new({X[i]: 1, T[ell - 1]: 1})
            V.append(P[g])
        elif gate.op == "or":
            q = new({**{P[u]: 1 for u in set(gate.inputs)}, X[i]: 1})
            P[g] = new({q: 1, X[i]: 1})
        else:
            k = gate.level
            P[g] = new({R[k]: 1, S[k]: 1, P[gate.inputs[0]]: -1, X[i]: 1})
    pc = PowerCircuit(succ, nid[0])
    res = GadgetResult(pc, V, top, T[2 * D + 1 + ell], P[c.out], ell, L, D, P)
    assert pc_depth(pc) == 2 * D + ell + 1
    assert len(pc) <= 3 * (L + D) + ell + 3
    return res


def bool_to_json(c: BoolCircuit) -> dict:
    gates = []
    for g in c.gates:
        d = {"op": g.op, "in": list(g.inputs)}
        if g.level is not None:
            d["level"] = g.level
        gates.append(d)
    return {"gates": gates, "out": c.out}


def bool_from_json(data: Mapping) -> BoolCircuit:
    try:
        gates = tuple(BoolGate(str(g["op"]).lower(), tuple(int(i) for i in g.get("in", ())),
                               None if g.get("level") is None else int(g["level"]))
                      for g in data["gates"])
        return BoolCircuit(gates, int(data["out"]))
    except (KeyError, TypeError) as e:
        raise MalformedCircuit("bad Boolean circuit: %s" % e) from None
