"""Shared JSON formats.

A circuit is ``{"nodes": [ids], "edges": [{"src", "dst", "sign"}], "markings":
{name: {id: sign}}}``; a reduced circuit adds ``"order"`` (nodes by increasing
value).  ``dumps`` is canonical: nodes and edges are sorted and keys are
sorted, so ``dumps(loads(s)) == s`` for any ``s`` produced by ``dumps``.
"""
from __future__ import annotations

import json
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .arena import Arena
from .core import Marking, PowerCircuit, pc_validate
from .errors import BadLabel, MalformedCircuit, UnknownNode

SEPARATORS = (",", ":")


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, separators=SEPARATORS)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedCircuit("invalid JSON: %s" % e) from None


def read_json(path: str):
    with open(path, encoding="utf-8") as f:
        return loads(f.read())


def write_json(path: str, data) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data))
        f.write("\n")


def _int(x, what: str) -> int:
    # bool is an int subclass; reject it along with floats and strings
    if isinstance(x, bool) or not isinstance(x, int):
        if isinstance(x, str) and x.lstrip("-").isdigit():
            return int(x)
        raise MalformedCircuit("%s must be an integer, got %r" % (what, x))
    return x


def _sign(x) -> int:
    if isinstance(x, bool) or x not in (-1, 1):
        raise BadLabel("sign must be -1 or +1, got %r" % (x,))
    return int(x)


def marking_to_json(m: Mapping[int, int]) -> Dict[str, int]:
    return {str(p): int(s) for p, s in sorted(m.items()) if s}


def marking_from_json(data) -> Marking:
    if not isinstance(data, Mapping):
        raise MalformedCircuit("a marking must be an object, got %r" % (data,))
    return Marking._trusted({_int(k, "node id"): _sign(s) for k, s in data.items()})


def circuit_to_json(pc: PowerCircuit, markings: Optional[Mapping[str, Mapping[int, int]]] = None,
                    order: Optional[Sequence[int]] = None) -> dict:
    out = {
        "nodes": list(pc.nodes),
        "edges": [{"src": p, "dst": q, "sign": s} for p, q, s in pc.edges()],
        "markings": {name: marking_to_json(m) for name, m in (markings or {}).items()},
    }
    if order is not None:
        out["order"] = list(order)
    return out


def circuit_from_json(data) -> Tuple[PowerCircuit, Dict[str, Marking], Optional[List[int]]]:
    """Parse and validate; returns the circuit, its markings and the order if present."""
    if not isinstance(data, Mapping):
        raise MalformedCircuit("a circuit must be a JSON object")
    try:
        nodes = [_int(p, "node id") for p in data["nodes"]]
        edges = data.get("edges", [])
        marks = data.get("markings", {})
    except (KeyError, TypeError) as e:
        raise MalformedCircuit("bad circuit: %s" % e) from None
    if len(set(nodes)) != len(nodes):
        raise MalformedCircuit("duplicate node ids")
    if any(p < 0 for p in nodes):
        raise MalformedCircuit("node ids must be non-negative")
    succ: Dict[int, Dict[int, int]] = {p: {} for p in nodes}
    for e in edges:
        try:
            p, q, s = _int(e["src"], "src"), _int(e["dst"], "dst"), _sign(e["sign"])
        except (KeyError, TypeError):
            raise MalformedCircuit("edge needs src, dst and sign: %r" % (e,)) from None
        if p not in succ or q not in succ:
            raise UnknownNode("edge %d -> %d uses an unknown node" % (p, q))
        if q in succ[p]:
            raise MalformedCircuit("parallel edges %d -> %d" % (p, q))
        succ[p][q] = s
    pc = PowerCircuit({p: Marking._trusted(m) for p, m in succ.items()})
    pc_validate(pc)
    markings = {str(name): pc.check_marking(marking_from_json(m)) for name, m in marks.items()}
    order = None
    if "order" in data:
        order = [_int(p, "node id") for p in data["order"]]
        if sorted(order) != sorted(nodes):
            raise MalformedCircuit("order must list every node exactly once")
    return pc, markings, order


def reduced_to_json(reduced, markings: Optional[Mapping[str, Mapping[int, int]]] = None) -> dict:
    return circuit_to_json(reduced.circuit, markings, reduced.order)


def reduced_from_json(data):
    from .reduce import ReducedPC
    pc, markings, order = circuit_from_json(data)
    if order is None:
        raise MalformedCircuit("a reduced circuit needs an order")
    return ReducedPC(pc, order), markings


def arena_to_json(arena: Arena, markings: Optional[Mapping[str, Mapping[int, int]]] = None) -> dict:
    return circuit_to_json(arena.to_circuit(), markings, arena.order)


def arena_from_json(data, arena: Optional[Arena] = None) -> Tuple[Arena, Dict[int, int], Dict[str, Marking]]:
    """Load a circuit into an arena; returns the arena, the node map and the markings."""
    pc, markings, _ = circuit_from_json(data)
    if arena is None:
        arena = Arena()
    img, marks = arena.absorb(pc, markings)
    return arena, img, marks


def word_to_json(w) -> dict:
    """A Britton word as its shared circuit plus the entry list."""
    from .dyadic import dy_to_json
    entries = []
    for j, p in enumerate(w.pairs):
        entries.append({"r": dy_to_json(p.r), "m": marking_to_json(p.m)})
        if j < len(w.betas):
            entries.append({"beta": str(w.betas[j])})
    return {"circuit": arena_to_json(w.circuit), "word": entries}


def word_from_json(data):
    from .baumslag import Beta, BrittonWord, BsPair, is_britton_reduced
    from .dyadic import dy_from_json
    try:
        arena, img, _ = arena_from_json(data["circuit"])
        entries = data["word"]
    except (KeyError, TypeError) as e:
        raise MalformedCircuit("bad word: %s" % e) from None

    def move(m):
        return marking_from_json(m).relabel(img)

    pairs: List = []
    betas: List = []
    expect_pair = True
    for e in entries:
        if expect_pair:
            if "r" not in e or "m" not in e:
                raise MalformedCircuit("expected an {r, m} entry, got %r" % (e,))
            r = dy_from_json(arena, {"U": move(e["r"]["U"]), "E": move(e["r"]["E"])})
            pairs.append(BsPair(r, arena.combine(move(e["m"]))))
        else:
            if e.get("beta") not in ("b", "B"):
                raise MalformedCircuit("expected a beta entry, got %r" % (e,))
            betas.append(Beta[e["beta"]])
        expect_pair = not expect_pair
    if expect_pair:
        raise MalformedCircuit("a word must end with an {r, m} entry")
    w = BrittonWord(arena, tuple(pairs), tuple(betas))
    return BrittonWord(arena, w.pairs, w.betas, is_britton_reduced(w))
