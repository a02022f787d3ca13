"""Power circuits: acyclic graphs with edge labels in {-1, +1}.

Each node ``P`` has the successor marking ``Lambda_P`` (the labels of its
outgoing edges) and the value ``2 ** value(Lambda_P)``.  A marking assigns a
sign to finitely many nodes; its value is the signed sum of the node values.
"""
from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from .errors import (
    BadLabel,
    CycleDetected,
    EvalBudgetExceeded,
    NegativeExponent,
    NotAPowerCircuit,
    UnknownNode,
)

DEFAULT_BUDGET_BITS = 1 << 20

NodeId = int


class Marking(Mapping[int, int]):
    """Immutable map from node ids to signs; absent nodes have sign 0."""

    __slots__ = ("_signs", "_hash")

    def __init__(self, signs: Optional[Mapping[int, int]] = None):
        clean = {}
        if signs:
            for node, s in dict(signs).items():
                if s not in (-1, 0, 1):
                    raise BadLabel("sign %r on node %r" % (s, node))
                if s:
                    clean[int(node)] = int(s)
        self._signs = clean
        self._hash = None

    @classmethod
    def _trusted(cls, signs: Dict[int, int]) -> "Marking":
        m = cls.__new__(cls)
        m._signs = signs
        m._hash = None
        return m

    def __getitem__(self, node):
        return self._signs[node]

    def sign(self, node) -> int:
        return self._signs.get(node, 0)

    def __iter__(self):
        return iter(self._signs)

    def __len__(self):
        return len(self._signs)

    def __contains__(self, node):
        return node in self._signs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._signs.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Marking):
            return self._signs == other._signs
        if isinstance(other, Mapping):
            return self._signs == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __neg__(self) -> "Marking":
        return Marking._trusted({k: -v for k, v in self._signs.items()})

    @property
    def support(self) -> frozenset:
        return frozenset(self._signs)

    def relabel(self, mapping: Mapping[int, int]) -> "Marking":
        return Marking._trusted({mapping[k]: v for k, v in self._signs.items()})

    def __repr__(self):
        return "Marking(%r)" % dict(sorted(self._signs.items()))


EMPTY = Marking()


class PowerCircuit:
    """Immutable graph ``node -> successor marking``.

    Node ids are non-negative ints.  ``next_id`` is always larger than every id
    ever handed out, so ids of removed nodes are never reused.
    """

    __slots__ = ("_succ", "_next_id")

    def __init__(self, succ: Optional[Mapping[int, Mapping[int, int]]] = None,
                 next_id: int = 0):
        table = {}
        for p, m in (succ or {}).items():
            table[int(p)] = m if isinstance(m, Marking) else Marking(m)
        for p, m in table.items():
            if p < 0:
                raise ValueError("node ids must be non-negative")
            for q in m:
                if q not in table:
                    raise UnknownNode("edge %d -> %d leaves the circuit" % (p, q))
        self._succ = table
        self._next_id = max(next_id, max(table) + 1 if table else 0)

    @classmethod
    def _trusted(cls, succ: Dict[int, Marking], next_id: int) -> "PowerCircuit":
        pc = cls.__new__(cls)
        pc._succ = succ
        pc._next_id = next_id
        return pc

    @property
    def nodes(self) -> Tuple[int, ...]:
        return tuple(sorted(self._succ))

    @property
    def next_id(self) -> int:
        return self._next_id

    def successors(self, node: int) -> Marking:
        try:
            return self._succ[node]
        except KeyError:
            raise UnknownNode(node) from None

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        for p in sorted(self._succ):
            m = self._succ[p]
            for q in sorted(m):
                yield p, q, m[q]

    def __len__(self):
        return len(self._succ)

    def __contains__(self, node):
        return node in self._succ

    def __iter__(self):
        return iter(sorted(self._succ))

    def __eq__(self, other):
        if not isinstance(other, PowerCircuit):
            return NotImplemented
        return self._succ == other._succ

    def __repr__(self):
        return "PowerCircuit(%d nodes, %d edges)" % (len(self), sum(len(m) for m in self._succ.values()))

    def check_marking(self, m: Mapping[int, int]) -> Marking:
        m = m if isinstance(m, Marking) else Marking(m)
        for q in m:
            if q not in self._succ:
                raise UnknownNode("marked node %r is not in the circuit" % q)
        return m

    def with_nodes(self, new: Mapping[int, Mapping[int, int]]) -> "PowerCircuit":
        """Return a circuit with extra nodes.  New ids must be fresh."""
        succ = dict(self._succ)
        for p, m in new.items():
            if p in succ or p < self._next_id:
                raise ValueError("node id %d is not fresh" % p)
            succ[p] = m if isinstance(m, Marking) else Marking(m)
        return PowerCircuit(succ, self._next_id)

    def reachable(self, roots: Iterable[int]) -> set:
        seen = set()
        stack = list(roots)
        while stack:
            p = stack.pop()
            if p in seen:
                continue
            seen.add(p)
            stack.extend(self.successors(p))
        return seen

    def restrict(self, keep: Iterable[int]) -> "PowerCircuit":
        """Sub-circuit on ``keep`` together with everything reachable from it."""
        keep = self.reachable(keep)
        return PowerCircuit._trusted({p: self._succ[p] for p in keep}, self._next_id)

    def topological_order(self) -> List[int]:
        """Nodes with every successor before its predecessors (leaves first)."""
        state = {}
        order = []
        for root in sorted(self._succ):
            if root in state:
                continue
            stack = [(root, iter(self._succ[root]))]
            state[root] = 1
            while stack:
                p, it = stack[-1]
                for q in it:
                    st = state.get(q)
                    if st is None:
                        state[q] = 1
                        stack.append((q, iter(self._succ[q])))
                        break
                    if st == 1:
                        path = [n for n, _ in stack]
                        raise CycleDetected(path[path.index(q):])
                else:
                    stack.pop()
                    state[p] = 2
                    order.append(p)
        return order

    def heights(self) -> Dict[int, int]:
        """Length of the longest path from each node down to a leaf."""
        h = {}
        for p in self.topological_order():
            m = self._succ[p]
            h[p] = 1 + max(h[q] for q in m) if m else 0
        return h


def pc_validate(pc: PowerCircuit) -> None:
    """Raise unless ``pc`` is acyclic with labels in {-1, +1}."""
    for p, q, s in pc.edges():
        if s not in (-1, 1):
            raise BadLabel("edge %d -> %d has label %r" % (p, q, s))
    pc.topological_order()


def pc_depth(pc: PowerCircuit) -> int:
    """Length of the longest path; 0 for a circuit without edges."""
    h = pc.heights()
    return max(h.values()) if h else 0


def pc_tower_chain(n: int) -> Tuple[PowerCircuit, List[int]]:
    """Nodes ``0..n`` with edges ``i -> i-1``; node ``i`` has value tau(i)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    succ = {0: EMPTY}
    for i in range(1, n + 1):
        succ[i] = Marking._trusted({i - 1: 1})
    return PowerCircuit._trusted(succ, n + 1), list(range(n + 1))


def tower(n: int) -> int:
    """tau(0) = 1, tau(n+1) = 2 ** tau(n)."""
    v = 1
    for _ in range(n):
        v = 1 << v
    return v


def pc_node_exponents(pc: PowerCircuit, roots: Iterable[int],
                      budget_bits: int = DEFAULT_BUDGET_BITS) -> Dict[int, int]:
    """Exact ``value(Lambda_P)`` for every node reachable from ``roots``."""
    sub = pc.restrict(roots)
    exps = {}
    for p in sub.topological_order():
        e = 0
        for q, s in pc.successors(p).items():
            e += s << exps[q]
        if e < 0:
            raise NotAPowerCircuit(p)
        if e > budget_bits:
            raise EvalBudgetExceeded("node %d needs 2**%d, budget is %d bits" % (p, e, budget_bits))
        exps[p] = e
    return exps


def pc_eval_exact(pc: PowerCircuit, m: Mapping[int, int],
                  budget_bits: int = DEFAULT_BUDGET_BITS) -> int:
    """Exact integer value of a marking, refusing exponents above ``budget_bits``."""
    m = pc.check_marking(m)
    exps = pc_node_exponents(pc, m, budget_bits)
    return sum(s << exps[p] for p, s in m.items())


def pc_clone_marking(pc: PowerCircuit, m: Mapping[int, int]) -> Tuple[PowerCircuit, Marking]:
    """Copy every marked node (same successors, no predecessors)."""
    m = pc.check_marking(m)
    nid = pc.next_id
    new = {}
    clone = {}
    for p in sorted(m):
        new[nid] = pc.successors(p)
        clone[nid] = m[p]
        nid += 1
    succ = dict(pc._succ)
    succ.update(new)
    out = PowerCircuit._trusted(succ, nid)
    assert len(out) == len(pc) + len(m)
    return out, Marking._trusted(clone)


def pc_marking_add(pc: PowerCircuit, k: Mapping[int, int],
                   l: Mapping[int, int]) -> Tuple[PowerCircuit, Marking]:
    """Marking with value ``value(k) + value(l)``."""
    l = pc.check_marking(l)
    out, ck = pc_clone_marking(pc, k)
    signs = dict(ck)
    signs.update(l)
    return out, Marking._trusted(signs)


def pc_marking_negate(pc: PowerCircuit, k: Mapping[int, int]) -> Tuple[PowerCircuit, Marking]:
    return pc, -pc.check_marking(k)


def pc_marking_mul_pow2(pc: PowerCircuit, k: Mapping[int, int], l: Mapping[int, int],
                        assume_nonnegative: bool = False) -> Tuple[PowerCircuit, Marking]:
    """Marking with value ``value(k) * 2 ** value(l)``.

    ``value(l) < 0`` is rejected with NegativeExponent since the result would
    not be an integer; pass ``assume_nonnegative`` to skip the check.
    """
    k = pc.check_marking(k)
    l = pc.check_marking(l)
    if not assume_nonnegative and l:
        from .reduce import pc_compare
        from .sdr import Ordering
        if pc_compare(pc, l, EMPTY) is Ordering.LT:
            raise NegativeExponent("the exponent marking is negative")
    pc1, ck = pc_clone_marking(pc, k)
    pc2, cl = pc_clone_marking(pc1, l)
    succ = dict(pc2._succ)
    for p in ck:
        signs = dict(succ[p])
        signs.update(cl)
        succ[p] = Marking._trusted(signs)
    out = PowerCircuit._trusted(succ, pc2.next_id)
    assert len(out) <= 3 * len(pc) or len(out) <= len(pc) + len(k) + len(l)
    return out, ck


def pc_disjoint_union(a: PowerCircuit, b: PowerCircuit) -> Tuple[PowerCircuit, Dict[int, int]]:
    """Union of two circuits; returns the new ids of ``b``'s nodes."""
    shift = a.next_id
    relabel = {p: p + shift for p in b._succ}
    succ = dict(a._succ)
    for p, m in b._succ.items():
        succ[relabel[p]] = m.relabel(relabel)
    return PowerCircuit._trusted(succ, shift + b.next_id), relabel
