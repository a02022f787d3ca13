"""A reduced power circuit that grows on demand.

Every node is created at most once per value, so nodes are identified by their
compact successor marking, and every marking handed out is compact.  Equal
values therefore have equal markings, and comparison is a scan for the top-most
node on which two markings differ.  Nodes are only ever added, so a marking
stays valid for the lifetime of the arena.

Arithmetic works like the non-adjacent form with carries: a carry out of node
``P`` goes to the node of value ``2 * value(P)``, which is created when missing.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .core import EMPTY, DEFAULT_BUDGET_BITS, Marking, PowerCircuit
from .errors import EvalBudgetExceeded, NotAPowerCircuit


class Arena:
    def __init__(self):
        self.succ: Dict[int, Marking] = {}
        self.order: List[int] = []
        self.rank: Dict[int, int] = {}
        self._index: Dict[Marking, int] = {}
        self._up: Dict[int, int] = {}
        self._ints: Dict[int, Marking] = {}
        self.one = 0
        self.succ[0] = EMPTY
        self.order.append(0)
        self.rank[0] = 0
        self._index[EMPTY] = 0
        self.ONE = Marking._trusted({self.one: 1})

    def __len__(self):
        return len(self.order)

    def __repr__(self):
        return "Arena(%d nodes)" % len(self.order)

    # -- nodes ---------------------------------------------------------------

    def node(self, exponent: Marking) -> int:
        """The node of value ``2 ** value(exponent)``; ``exponent`` must be compact."""
        p = self._index.get(exponent)
        if p is not None:
            return p
        if exponent and self.sign(exponent) < 0:
            raise NotAPowerCircuit(None, "cannot create a node with a negative exponent")
        p = len(self.succ)
        order = self.order
        lo, hi = 0, len(order)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.compare(self.succ[order[mid]], exponent) < 0:
                lo = mid + 1
            else:
                hi = mid
        order.insert(lo, p)
        self.succ[p] = exponent
        self._index[exponent] = p
        rank = self.rank
        for i in range(lo, len(order)):
            rank[order[i]] = i
        if exponent:
            below = self._index.get(self.combine(_coeffs(exponent, self.one, -1)))
            if below is not None:
                self._up[below] = p
        above = self._index.get(self.combine(_coeffs(exponent, self.one, 1)))
        if above is not None:
            self._up[p] = above
        return p

    def find(self, exponent: Marking) -> Optional[int]:
        return self._index.get(exponent)

    def up(self, p: int) -> int:
        """Node of twice the value of ``p``, created if needed."""
        q = self._up.get(p)
        if q is None:
            q = self.node(self.combine(_coeffs(self.succ[p], self.one, 1)))
        return q

    # -- markings ------------------------------------------------------------

    def compare(self, a: Mapping[int, int], b: Mapping[int, int]) -> int:
        if a is b:
            return 0
        rank = self.rank
        top = -1
        res = 0
        for q, s in a.items():
            t = b.get(q, 0)
            if s != t and rank[q] > top:
                top = rank[q]
                res = 1 if s > t else -1
        for q, t in b.items():
            if q not in a and rank[q] > top:
                top = rank[q]
                res = -t
        return res

    def sign(self, m: Mapping[int, int]) -> int:
        if not m:
            return 0
        rank = self.rank
        return m[max(m, key=rank.__getitem__)]

    def combine(self, coeffs: Mapping[int, int]) -> Marking:
        """Compact marking of ``sum(c * value(P))`` for integer coefficients."""
        pending = {q: c for q, c in coeffs.items() if c}
        out = {}
        rank = self.rank
        while pending:
            p = min(pending, key=rank.__getitem__)
            c = pending.pop(p)
            up = self._up.get(p)
            if c & 1:
                nxt = pending.get(up, 0) if up is not None else 0
                d = 1 if (c + 2 * nxt) % 4 == 1 else -1
                out[p] = d
                c -= d
            carry = c // 2
            if carry:
                if up is None:
                    up = self.up(p)
                c2 = pending.get(up, 0) + carry
                if c2:
                    pending[up] = c2
                else:
                    pending.pop(up, None)
        return Marking._trusted(out)

    def integer(self, k: int) -> Marking:
        m = self._ints.get(k)
        if m is None:
            m = self.combine({self.one: k}) if k else EMPTY
            if abs(k) < 1 << 16:
                self._ints[k] = m
        return m

    def add(self, a: Mapping[int, int], b: Mapping[int, int]) -> Marking:
        if not b:
            return a if isinstance(a, Marking) else Marking(a)
        if not a:
            return b if isinstance(b, Marking) else Marking(b)
        c = dict(a)
        for q, s in b.items():
            c[q] = c.get(q, 0) + s
        return self.combine(c)

    def sub(self, a: Mapping[int, int], b: Mapping[int, int]) -> Marking:
        return self.add(a, -b if isinstance(b, Marking) else Marking(b).__neg__())

    def mul_pow2(self, m: Mapping[int, int], e: Mapping[int, int]) -> Marking:
        """Marking of ``value(m) * 2 ** value(e)``; must be an integer."""
        if not e or not m:
            return m if isinstance(m, Marking) else Marking(m)
        out = {}
        for p, s in m.items():
            out[self.node(self.add(self.succ[p], e))] = s
        return Marking._trusted(out)

    def lowest(self, m: Mapping[int, int]) -> int:
        return min(m, key=self.rank.__getitem__)

    def valuation(self, m: Mapping[int, int]) -> Marking:
        """Exponent of the largest power of two dividing ``value(m) != 0``."""
        return self.succ[self.lowest(m)]

    def is_compact(self, m: Mapping[int, int]) -> bool:
        return all(self._up.get(p) not in m for p in m)

    # -- import / export -----------------------------------------------------

    def absorb(self, pc: PowerCircuit, markings: Optional[Mapping[str, Mapping[int, int]]] = None,
               ) -> Tuple[Dict[int, int], Dict[str, Marking]]:
        """Copy ``pc`` into the arena, one node at a time in topological order.

        Returns the map from ``pc`` nodes to arena nodes of equal value and the
        compact images of ``markings``.
        """
        img: Dict[int, int] = {}
        for p in pc.topological_order():
            c: Dict[int, int] = {}
            for q, s in pc.successors(p).items():
                t = img[q]
                c[t] = c.get(t, 0) + s
            exp = self.combine(c)
            if self.sign(exp) < 0:
                raise NotAPowerCircuit(p)
            img[p] = self.node(exp)
        out = {}
        for name, m in (markings or {}).items():
            c = {}
            for q, s in pc.check_marking(m).items():
                t = img[q]
                c[t] = c.get(t, 0) + s
            out[name] = self.combine(c)
        return img, out

    def import_marking(self, other: "Arena", m: Mapping[int, int], memo: Optional[Dict[int, int]] = None) -> Marking:
        """Copy a compact marking of ``other`` into this arena."""
        if other is self:
            return m if isinstance(m, Marking) else Marking(m)
        if memo is None:
            memo = {}

        def conv(p):
            q = memo.get(p)
            if q is None:
                q = self.node(self.import_marking(other, other.succ[p], memo))
                memo[p] = q
            return q

        return Marking._trusted({conv(p): s for p, s in m.items()})

    def to_circuit(self) -> PowerCircuit:
        return PowerCircuit._trusted(dict(self.succ), len(self.succ))

    def to_reduced(self):
        from .reduce import ReducedPC
        return ReducedPC(self.to_circuit(), self.order)

    # -- inspection ----------------------------------------------------------

    def depth(self) -> int:
        h: Dict[int, int] = {}
        for p in self.order:
            m = self.succ[p]
            h[p] = 1 + max(h[q] for q in m) if m else 0
        return max(h.values()) if h else 0

    def exponents(self, roots: Iterable[int], budget_bits: int = DEFAULT_BUDGET_BITS) -> Dict[int, int]:
        need = set()
        stack = list(roots)
        while stack:
            p = stack.pop()
            if p not in need:
                need.add(p)
                stack.extend(self.succ[p])
        exps = {}
        for p in self.order:
            if p in need:
                e = sum(s << exps[q] for q, s in self.succ[p].items())
                if e > budget_bits:
                    raise EvalBudgetExceeded("node %d needs 2**%d" % (p, e))
                exps[p] = e
        return exps

    def evaluate(self, m: Mapping[int, int], budget_bits: int = DEFAULT_BUDGET_BITS) -> int:
        exps = self.exponents(m, budget_bits)
        return sum(s << exps[p] for p, s in m.items())


def _coeffs(m: Mapping[int, int], node: int, c: int) -> Dict[int, int]:
    d = dict(m)
    d[node] = d.get(node, 0) + c
    return d


def pc_reduce_sequential(pc: PowerCircuit, markings: Optional[Mapping[str, Mapping[int, int]]] = None):
    """Reduce by inserting the nodes one at a time into a fresh arena.

    Same contract as ``pc_reduce``; used as an independent cross-check and as
    the fast path for comparisons.
    """
    from .core import pc_validate
    from .reduce import ReducedPC, ReductionResult

    pc_validate(pc)
    arena = Arena()
    img, marks = arena.absorb(pc, markings)
    renum = {p: i for i, p in enumerate(arena.order)}
    succ = {renum[p]: arena.succ[p].relabel(renum) for p in arena.order}
    reduced = ReducedPC(PowerCircuit._trusted(succ, len(succ)), range(len(succ)))
    return ReductionResult(
        reduced=reduced,
        markings={k: m.relabel(renum) for k, m in marks.items()},
        node_map={p: renum[q] for p, q in img.items()},
    )
