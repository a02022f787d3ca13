"""Reduced power circuits and the layered reduction.

A power circuit is reduced when its nodes, listed by increasing value, have
pairwise distinct values and every successor marking is compact.  In a reduced
circuit two compact markings are compared by the top-most node on which they
differ, and every value has at most one compact marking.

``pc_reduce`` processes the input one height layer at a time.  Each round
inserts the new layer into the reduced part (UpdateNodes), adds nodes so that
the chains of the reduced part are long enough (ExtendChains) and rewrites
every pending marking as a compact one (UpdateMarkings).
"""
from __future__ import annotations

import functools
from bisect import bisect_left
from dataclasses import dataclass, field
from math import ceil, log2
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .core import EMPTY, Marking, PowerCircuit, pc_marking_add, pc_validate
from .errors import (
    ChainOverflow,
    DuplicateValue,
    MuTooLarge,
    NonCompactSuccessor,
    NotAPowerCircuit,
    OffsetTooLarge,
    PreconditionViolated,
)
from .sdr import Ordering, cr


def _clog2(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


class _Gamma:
    """Mutable working copy of a reduced circuit."""

    def __init__(self, order: Sequence[int], succ: Mapping[int, Marking]):
        self.order = list(order)
        self.succ = dict(succ)
        self.by_succ = {m: p for p, m in self.succ.items()}
        self.reindex()

    def reindex(self):
        self.rank = {p: i for i, p in enumerate(self.order)}

    def compare(self, a: Mapping[int, int], b: Mapping[int, int]) -> int:
        rank = self.rank
        top = -1
        res = 0
        for q in set(a).union(b):
            sa = a.get(q, 0)
            sb = b.get(q, 0)
            if sa != sb and rank[q] > top:
                top = rank[q]
                res = 1 if sa > sb else -1
        return res

    def sign(self, m: Mapping[int, int]) -> int:
        if not m:
            return 0
        top = max(m, key=self.rank.__getitem__)
        return m[top]

    def c0_length(self) -> int:
        """Length of the chain through the value-1 node (prefix scan)."""
        rank = self.rank
        for i, p in enumerate(self.order):
            lam = self.succ[p]
            v = 0
            used = []
            for q, s in lam.items():
                r = rank[q]
                if r >= i:
                    return i
                used.append(r)
                v += s << r
            if v != i:
                return i
            used.sort()
            if any(b - a == 1 for a, b in zip(used, used[1:])):
                return i
        return len(self.order)

    def gaps(self, c0: Optional[int] = None) -> List[Optional[int]]:
        """``gaps[i]`` is the successor-value step from node ``i`` to ``i+1``.

        The step is exact when both successor markings agree outside the first
        chain; otherwise it exceeds ``floor(2**(c0+1)/3)`` and is reported as
        ``None``.  The last entry is always ``None``.
        """
        if c0 is None:
            c0 = self.c0_length()
        rank = self.rank
        prof = []
        for p in self.order:
            low = 0
            high = []
            for q, s in self.succ[p].items():
                r = rank[q]
                if r < c0:
                    low += s << r
                else:
                    high.append((q, s))
            prof.append((low, frozenset(high)))
        out = []
        for i in range(len(prof) - 1):
            (a, ha), (b, hb) = prof[i], prof[i + 1]
            out.append(b - a if ha == hb else None)
        out.append(None)
        return out

    def chains(self, gaps: Optional[List[Optional[int]]] = None) -> List[List[int]]:
        if gaps is None:
            gaps = self.gaps()
        res = []
        cur = []
        for i, p in enumerate(self.order):
            cur.append(p)
            if gaps[i] != 1:
                res.append(cur)
                cur = []
        return res

    def insert_sorted(self, new: Mapping[int, Marking]) -> None:
        """Insert nodes whose successor markings only use existing nodes."""
        if not new:
            return
        items = sorted(new.items(), key=functools.cmp_to_key(lambda x, y: self.compare(x[1], y[1])))
        for (p, a), (q, b) in zip(items, items[1:]):
            if a == b:
                raise DuplicateValue("nodes %d and %d have equal value" % (p, q))
        keys = [self.succ[p] for p in self.order]
        slots: Dict[int, List[int]] = {}
        lo = 0
        for p, m in items:
            hi = len(keys)
            while lo < hi:
                mid = (lo + hi) // 2
                if self.compare(keys[mid], m) < 0:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < len(keys) and keys[lo] == m:
                raise DuplicateValue("node %d duplicates node %d" % (p, self.order[lo]))
            slots.setdefault(lo, []).append(p)
        order = []
        for i, p in enumerate(self.order):
            order.extend(slots.get(i, ()))
            order.append(p)
        order.extend(slots.get(len(self.order), ()))
        for p, m in items:
            self.succ[p] = m
            self.by_succ[m] = p
        self.order = order
        self.reindex()

    def insert_after(self, after: Mapping[int, List[Tuple[int, Marking]]]) -> None:
        """Insert nodes at known positions: ``after[p]`` follows node ``p``."""
        order = []
        for p in self.order:
            order.append(p)
            for q, m in after.get(p, ()):
                order.append(q)
                self.succ[q] = m
                self.by_succ[m] = q
        self.order = order
        self.reindex()

    def is_compact(self, m: Mapping[int, int], gaps=None) -> bool:
        if len(m) < 2:
            return True
        rs = sorted(self.rank[q] for q in m)
        adj = [r for r, r2 in zip(rs, rs[1:]) if r2 == r + 1]
        if not adj:
            return True
        if gaps is None:
            gaps = self.gaps()
        return all(gaps[r] != 1 for r in adj)


class _Ids:
    def __init__(self, start: int):
        self.next = start

    def __call__(self) -> int:
        n = self.next
        self.next += 1
        return n


def _chain_marking(chain: Sequence[int], value: int) -> Dict[int, int]:
    digits = cr(value).stripped()
    if len(digits) > len(chain):
        raise ChainOverflow("value %d needs %d digits, chain has %d nodes" % (value, len(digits), len(chain)))
    return {chain[j]: d for j, d in enumerate(digits) if d}


def _initial_gamma(length: int, ids: _Ids) -> _Gamma:
    chain = [ids() for _ in range(length)]
    succ = {p: Marking._trusted(_chain_marking(chain, i)) for i, p in enumerate(chain)}
    return _Gamma(chain, succ)


def _extend_chains(g: _Gamma, mu: int, ids: _Ids) -> None:
    c0 = g.c0_length()
    if c0 == 0:
        raise PreconditionViolated("the reduced part has no node of value 1")
    bound = (1 << (c0 + 1)) // 3
    if mu > bound:
        raise MuTooLarge("mu=%d exceeds %d for a first chain of length %d" % (mu, bound, c0))
    if c0 == 1:
        # only possible when the first chain is the single node 1: add value 2
        one = g.order[0]
        g.insert_after({one: [(ids(), Marking._trusted({one: 1}))]})
        if len(g.order) == 2:
            return
        c0 = g.c0_length()

    # Step 1: close the gaps of size 2 near the bottom and put one node on top
    # of the first chain.
    gaps = g.gaps(c0)
    i0 = next(i for i, d in enumerate(gaps) if d is None or d > 2)
    exps = [0]
    for i in range(i0):
        exps.append(exps[-1] + gaps[i])
    at_exp = {e: g.order[i] for i, e in enumerate(exps)}
    fresh = []
    for i in range(i0 + 1):
        if gaps[i] is None or gaps[i] >= 2:
            q = ids()
            at_exp[exps[i] + 1] = q
            fresh.append((i, q))
    first_chain = [at_exp[e] for e in range(exps[i0] + 2)]
    after = {}
    for i, q in fresh:
        after[g.order[i]] = [(q, Marking._trusted(_chain_marking(first_chain, exps[i] + 1)))]
    g.insert_after(after)

    # Step 2: put up to mu nodes above every node, fewer when the next node
    # is already close.
    c0 = len(first_chain)
    assert g.c0_length() == c0
    gaps = g.gaps(c0)
    rank = g.rank
    after = {}
    for i, p in enumerate(g.order):
        cap = mu - 1 if i == c0 - 1 else mu
        d = cap if gaps[i] is None else min(gaps[i] - 1, cap)
        if d <= 0:
            continue
        low = 0
        high = {}
        for q, s in g.succ[p].items():
            if rank[q] < c0:
                low += s << rank[q]
            else:
                high[q] = s
        made = []
        for h in range(1, d + 1):
            signs = dict(high)
            signs.update(_chain_marking(first_chain, low + h))
            made.append((ids(), Marking._trusted(signs)))
        after[p] = made
    g.insert_after(after)


def _update_nodes(g: _Gamma, pending: Mapping[int, Marking], minimal: Iterable[int],
                  classes: Dict[int, int], ids: _Ids) -> None:
    fresh = {}
    for p in sorted(minimal):
        lam = pending[p]
        if g.sign(lam) < 0:
            raise NotAPowerCircuit(p)
        q = g.by_succ.get(lam)
        if q is None:
            q = fresh.get(lam)
            if q is None:
                q = ids()
                fresh[lam] = q
        classes[p] = q
    g.insert_sorted({q: m for m, q in fresh.items()})


def _update_markings(g: _Gamma, markings: Iterable[Mapping[int, int]],
                     classes: Mapping[int, int]) -> List[Marking]:
    chains = g.chains()
    where = {}
    for ci, ch in enumerate(chains):
        for off, p in enumerate(ch):
            where[p] = (ci, off)
    out = []
    for m in markings:
        z: Dict[int, int] = {}
        rest = {}
        for node, s in m.items():
            loc = where.get(node)
            if loc is None:
                mapped = classes.get(node)
                if mapped is None:
                    rest[node] = s
                    continue
                loc = where[mapped]
            ci, off = loc
            z[ci] = z.get(ci, 0) + (s << off)
        for ci, val in z.items():
            if val:
                rest.update(_chain_marking(chains[ci], val))
        out.append(Marking._trusted(rest))
    return out


# ---------------------------------------------------------------------------
# public types


class ReducedPC:
    """A reduced power circuit: ``order`` lists the nodes by increasing value."""

    __slots__ = ("circuit", "order", "_rank")

    def __init__(self, circuit: PowerCircuit, order: Sequence[int]):
        order = tuple(order)
        if sorted(order) != list(circuit.nodes):
            raise ValueError("order must list every node exactly once")
        self.circuit = circuit
        self.order = order
        self._rank = None

    @property
    def rank(self) -> Dict[int, int]:
        if self._rank is None:
            self._rank = {p: i for i, p in enumerate(self.order)}
        return self._rank

    def successors(self, p: int) -> Marking:
        return self.circuit.successors(p)

    def __len__(self):
        return len(self.order)

    def _gamma(self) -> _Gamma:
        return _Gamma(self.order, {p: self.circuit.successors(p) for p in self.order})

    @classmethod
    def _from_gamma(cls, g: _Gamma, next_id: int = 0) -> "ReducedPC":
        pc = PowerCircuit._trusted(dict(g.succ), max([next_id] + [p + 1 for p in g.order]))
        r = cls.__new__(cls)
        r.circuit = pc
        r.order = tuple(g.order)
        r._rank = None
        return r

    def compare(self, a: Mapping[int, int], b: Mapping[int, int]) -> Ordering:
        """Order of two compact markings."""
        return Ordering(self._gamma_view().compare(a, b))

    def is_compact(self, m: Mapping[int, int]) -> bool:
        return self._gamma_view().is_compact(m)

    def _gamma_view(self) -> _Gamma:
        g = _Gamma.__new__(_Gamma)
        g.order = list(self.order)
        g.succ = {p: self.circuit.successors(p) for p in self.order}
        g.rank = self.rank
        return g

    def check(self) -> None:
        """Raise AssertionError unless the circuit really is reduced."""
        g = self._gamma()
        gaps = g.gaps()
        for i, p in enumerate(self.order):
            lam = g.succ[p]
            for q in lam:
                assert g.rank[q] < i, "order is not topological at node %d" % p
            assert g.is_compact(lam, gaps), "successor marking of %d is not compact" % p
            if i:
                assert g.compare(g.succ[self.order[i - 1]], lam) < 0, "order not strictly increasing at %d" % p
        if self.order:
            assert not g.succ[self.order[0]], "lowest node must have value 1"

    def __repr__(self):
        return "ReducedPC(%d nodes)" % len(self.order)


@dataclass(frozen=True)
class Chain:
    """Maximal run of nodes whose values double from one node to the next."""

    nodes: Tuple[int, ...]

    @property
    def start(self) -> int:
        return self.nodes[0]

    def __len__(self):
        return len(self.nodes)


@dataclass
class ReductionResult:
    reduced: ReducedPC
    markings: Dict[str, Marking]
    node_map: Dict[int, int]
    iterations: int = 0
    history: List[Tuple[int, int]] = field(default_factory=list)


@dataclass
class ReductionState:
    """Partly reduced circuit: the reduced part plus the pending nodes.

    ``pending`` holds the successor markings of the nodes not yet inserted;
    they may use reduced nodes and pending nodes.  ``classes`` maps inserted
    input nodes to the reduced node of equal value.
    """

    gamma: ReducedPC
    pending: Dict[int, Marking]
    markings: Dict[str, Marking] = field(default_factory=dict)
    classes: Dict[int, int] = field(default_factory=dict)
    minimal: Tuple[int, ...] = ()


# ---------------------------------------------------------------------------
# public operations


def rpc_initial_chain(g: ReducedPC) -> Chain:
    """The maximal chain through the value-1 node."""
    c0 = g._gamma_view().c0_length()
    return Chain(tuple(g.order[:c0]))


def rpc_maximal_chains(g: ReducedPC) -> List[Chain]:
    return [Chain(tuple(c)) for c in g._gamma_view().chains()]


def rpc_compare_compact(g: ReducedPC, l: Mapping[int, int], m: Mapping[int, int], k: int = 0) -> Ordering:
    """Compare ``value(l)`` with ``value(m) + k`` for compact markings.

    ``k`` may be at most ``floor(2**(c+1)/3)`` where ``c`` is the length of the
    first chain.
    """
    view = g._gamma_view()
    c0 = view.c0_length()
    if k < 0 or k > (1 << (c0 + 1)) // 3:
        raise OffsetTooLarge("offset %d not in [0, %d]" % (k, (1 << (c0 + 1)) // 3))
    base = view.compare(l, m)
    if base <= 0:
        return Ordering.LT if (base < 0 or k > 0) else Ordering.EQ
    rank = view.rank
    high_l = {q: s for q, s in l.items() if rank[q] >= c0}
    high_m = {q: s for q, s in m.items() if rank[q] >= c0}
    if high_l != high_m:
        return Ordering.GT
    low_l = sum(s << rank[q] for q, s in l.items() if rank[q] < c0)
    low_m = sum(s << rank[q] for q, s in m.items() if rank[q] < c0)
    return Ordering.of(low_l, low_m + k)


def rpc_insert_nodes(g: ReducedPC, new: Mapping[int, Mapping[int, int]]) -> ReducedPC:
    """Insert nodes with compact successor markings over ``g``."""
    work = g._gamma()
    gaps = work.gaps()
    clean = {}
    for p, m in new.items():
        m = m if isinstance(m, Marking) else Marking(m)
        if p in work.succ:
            raise ValueError("node id %d already used" % p)
        for q in m:
            if q not in work.rank:
                raise NonCompactSuccessor("node %d points outside the reduced circuit" % p)
        if not work.is_compact(m, gaps):
            raise NonCompactSuccessor("successor marking of %d is not compact" % p)
        if work.sign(m) < 0:
            raise NotAPowerCircuit(p)
        clean[p] = m
    work.insert_sorted(clean)
    return ReducedPC._from_gamma(work, g.circuit.next_id)


def rpc_extend_chains(g: ReducedPC, mu: int) -> ReducedPC:
    """Extend chains so every node has ``mu`` successor values above it."""
    work = g._gamma()
    _extend_chains(work, mu, _Ids(g.circuit.next_id))
    return ReducedPC._from_gamma(work, g.circuit.next_id)


def _minimal(state: ReductionState) -> List[int]:
    rank = state.gamma.rank
    return [p for p, m in state.pending.items() if all(q in rank for q in m)]


def rpc_update_nodes(state: ReductionState) -> ReductionState:
    """Insert one node per value class of the minimal pending nodes."""
    view = state.gamma._gamma_view()
    c0 = view.c0_length()
    need = _clog2(len(state.pending)) + 1
    if c0 < need:
        raise PreconditionViolated("first chain has %d nodes, %d pending nodes need %d" % (c0, len(state.pending), need))
    minimal = _minimal(state)
    gaps = view.gaps(c0)
    for p in minimal:
        if not view.is_compact(state.pending[p], gaps):
            raise PreconditionViolated("successor marking of pending node %d is not compact" % p)
    work = state.gamma._gamma()
    classes = dict(state.classes)
    ids = _Ids(max([state.gamma.circuit.next_id] + [p + 1 for p in state.pending]))
    _update_nodes(work, state.pending, minimal, classes, ids)
    return ReductionState(ReducedPC._from_gamma(work, ids.next), dict(state.pending),
                          dict(state.markings), classes, tuple(sorted(minimal)))


def rpc_update_markings(state: ReductionState) -> ReductionState:
    """Rewrite every pending marking as compact markings on the chains."""
    work = state.gamma._gamma()
    keep = [p for p in state.pending if p not in set(state.minimal)]
    names = list(state.markings)
    todo = [state.markings[n] for n in names] + [state.pending[p] for p in keep]
    done = _update_markings(work, todo, state.classes)
    markings = dict(zip(names, done[:len(names)]))
    pending = dict(zip(keep, done[len(names):]))
    return ReductionState(state.gamma, pending, markings, dict(state.classes), ())


def pc_reduce(pc: PowerCircuit, markings: Optional[Mapping[str, Mapping[int, int]]] = None) -> ReductionResult:
    """Reduce ``pc`` and rewrite ``markings`` as compact markings on the result.

    The output nodes are numbered ``0..n-1`` by increasing value.  ``node_map``
    sends every input node to the output node of equal value.
    """
    pc_validate(pc)
    markings = {name: pc.check_marking(m) for name, m in (markings or {}).items()}
    heights = pc.heights()
    layers: Dict[int, List[int]] = {}
    for p, h in heights.items():
        layers.setdefault(h, []).append(p)
    n = len(pc)
    ids = _Ids(pc.next_id)
    g = _initial_gamma(_clog2(n) + 1, ids)
    pending = {p: pc.successors(p) for p in pc.nodes}
    names = list(markings)
    current = [markings[k] for k in names]
    classes: Dict[int, int] = {}
    limit_size = (n + 1) ** 2 * (log2(n) + 2) if n else 1
    history = []
    rounds = len(layers)
    for it in range(rounds):
        minimal = layers[it]
        _update_nodes(g, pending, minimal, classes, ids)
        _extend_chains(g, _clog2(len(minimal)) + 1, ids)
        for p in minimal:
            del pending[p]
        keep = list(pending)
        done = _update_markings(g, current + [pending[p] for p in keep], classes)
        current = done[:len(names)]
        pending = dict(zip(keep, done[len(names):]))
        nchains = len(g.chains())
        history.append((len(g.order), nchains))
        assert nchains <= n + 1, "too many chains"
        assert len(g.order) <= limit_size, "reduced part too large"
    assert not pending

    renum = {p: i for i, p in enumerate(g.order)}
    succ = {renum[p]: g.succ[p].relabel(renum) for p in g.order}
    reduced = ReducedPC.__new__(ReducedPC)
    reduced.circuit = PowerCircuit._trusted(succ, len(renum))
    reduced.order = tuple(range(len(renum)))
    reduced._rank = None
    return ReductionResult(
        reduced=reduced,
        markings={name: m.relabel(renum) for name, m in zip(names, current)},
        node_map={p: renum[q] for p, q in classes.items()},
        iterations=rounds,
        history=history,
    )


def rpc_trim(g: ReducedPC, markings: Mapping[str, Mapping[int, int]]) -> Tuple[ReducedPC, Dict[str, Marking]]:
    """Keep only the nodes the markings reach, renumbered ``0..k-1`` by value.

    Compactness only depends on node values, so the result is again reduced.
    Reducing a trimmed circuit and trimming again gives the same circuit.
    """
    keep = g.circuit.reachable(q for m in markings.values() for q in m)
    order = [p for p in g.order if p in keep]
    renum = {p: i for i, p in enumerate(order)}
    succ = {renum[p]: g.circuit.successors(p).relabel(renum) for p in order}
    out = ReducedPC(PowerCircuit._trusted(succ, len(order)), range(len(order)))
    return out, {name: Marking(m).relabel(renum) for name, m in markings.items()}


def pc_compare(pc: PowerCircuit, l: Mapping[int, int], m: Mapping[int, int],
               method: str = "sequential") -> Ordering:
    """Order of ``value(l)`` and ``value(m)`` without evaluating them.

    The difference marking is reduced on the part of the circuit it reaches
    and its compact form is compared with zero.  ``method`` picks the reducer:
    ``"layered"`` runs ``pc_reduce``, ``"sequential"`` inserts nodes one at a
    time (much faster on deep circuits, same answer).
    """
    l = pc.check_marking(l)
    m = pc.check_marking(m)
    if l == m:
        return Ordering.EQ
    pc2, diff = pc_marking_add(pc, l, -m)
    sub = pc2.restrict(diff)
    if method == "layered":
        res = pc_reduce(sub, {"diff": diff})
        d = res.markings["diff"]
        if not d:
            return Ordering.EQ
        top = max(d, key=res.reduced.rank.__getitem__)
        return Ordering(d[top])
    if method != "sequential":
        raise ValueError("unknown method %r" % method)
    from .arena import Arena
    pc_validate(sub)
    arena = Arena()
    _, marks = arena.absorb(sub, {"diff": diff})
    return Ordering(arena.sign(marks["diff"]))


def pc_sign(pc: PowerCircuit, m: Mapping[int, int], method: str = "sequential") -> Ordering:
    return pc_compare(pc, m, EMPTY, method)
