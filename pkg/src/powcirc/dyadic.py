"""Dyadic rationals ``u * 2**e`` stored as pairs of compact markings.

The mantissa ``U`` is zero or odd and the exponent ``E`` is any integer, so every
value has exactly one representation inside a given arena and equality of
values is equality of fields.  Zero is ``U = E = {}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .arena import Arena
from .core import DEFAULT_BUDGET_BITS, EMPTY, Marking, PowerCircuit
from .errors import ArenaMismatch, EvalBudgetExceeded, NotAPowerCircuit, NotInteger, NotPowerOfTwoRatio
from .sdr import Ordering


@dataclass(frozen=True)
class PcDyadic:
    circuit: Arena = field(compare=False, repr=False)
    U: Marking
    E: Marking

    @property
    def is_zero(self) -> bool:
        return not self.U

    def __neg__(self):
        return dy_negate(self)

    def __add__(self, other):
        return dy_add(self, other)

    def __sub__(self, other):
        return dy_add(self, dy_negate(other))


def _normalize(arena: Arena, m: Marking, shift: Marking = EMPTY) -> PcDyadic:
    """``value(m) * 2**value(shift)`` for an integer marking ``m``."""
    if not m:
        return PcDyadic(arena, EMPTY, EMPTY)
    low = arena.valuation(m)
    if not low:
        return PcDyadic(arena, m, shift)
    u = arena.mul_pow2(m, -low)
    return PcDyadic(arena, u, arena.add(low, shift))


def dy_from_marking(pc: Union[PowerCircuit, Arena], m: Mapping[int, int],
                    arena: Arena = None) -> PcDyadic:
    """Dyadic form of an integer marking.

    A plain power circuit is reduced first (layered reduction) and the result
    is loaded into ``arena`` (a fresh one by default).
    """
    if isinstance(pc, Arena):
        return _normalize(pc, m if isinstance(m, Marking) else Marking(m))
    from .reduce import pc_reduce
    res = pc_reduce(pc, {"m": m})
    if arena is None:
        arena = Arena()
    _, marks = arena.absorb(res.reduced.circuit, {"m": res.markings["m"]})
    return _normalize(arena, marks["m"])


def dy_from_int(arena: Arena, k: int) -> PcDyadic:
    return _normalize(arena, arena.integer(k))


def dy_from_fraction(arena: Arena, x: Fraction) -> PcDyadic:
    x = Fraction(x)
    den = x.denominator
    if den & (den - 1):
        raise ValueError("%s is not dyadic" % x)
    return _normalize(arena, arena.integer(x.numerator), arena.integer(-(den.bit_length() - 1)))


def _same(a: PcDyadic, b: PcDyadic) -> Arena:
    if a.circuit is not b.circuit:
        raise ArenaMismatch("operands live in different arenas")
    return a.circuit


def dy_shift(x: PcDyadic, m: Mapping[int, int]) -> PcDyadic:
    """``x * 2**value(m)``."""
    if not x.U or not m:
        return x
    return PcDyadic(x.circuit, x.U, x.circuit.add(x.E, m))


def dy_negate(x: PcDyadic) -> PcDyadic:
    if not x.U:
        return x
    return PcDyadic(x.circuit, -x.U, x.E)


def dy_log2_quotient(r: PcDyadic, s: PcDyadic) -> Marking:
    """``log2(r / s)`` when ``r / s`` is a power of two."""
    arena = _same(r, s)
    if not r.U or r.U != s.U:
        raise NotPowerOfTwoRatio("quotient is not a power of two")
    return arena.sub(r.E, s.E)


def dy_add(r: PcDyadic, s: PcDyadic) -> PcDyadic:
    arena = _same(r, s)
    if not r.U:
        return s
    if not s.U:
        return r
    c = arena.compare(r.E, s.E)
    if c > 0:
        r, s = s, r
    # r + s = 2**e * (u + v * 2**(f - e)) with e <= f
    if c == 0:
        k = arena.add(r.U, s.U)
    else:
        k = arena.add(r.U, arena.mul_pow2(s.U, arena.sub(s.E, r.E)))
    return _normalize(arena, k, r.E)


def dy_sign(x: PcDyadic) -> Ordering:
    return Ordering(x.circuit.sign(x.U))


def dy_compare(r: PcDyadic, s: PcDyadic) -> Ordering:
    return dy_sign(dy_add(r, dy_negate(s)))


def dy_is_integer(x: PcDyadic) -> bool:
    return not x.U or x.circuit.sign(x.E) >= 0


def dy_to_integer_marking(x: PcDyadic) -> Marking:
    if not x.U:
        return EMPTY
    if x.circuit.sign(x.E) < 0:
        raise NotInteger("value is not an integer")
    return x.circuit.mul_pow2(x.U, x.E)


def dy_value(x: PcDyadic, budget_bits: int = DEFAULT_BUDGET_BITS) -> Fraction:
    """Exact value as a Fraction (for tests and small inputs)."""
    if not x.U:
        return Fraction(0)
    arena = x.circuit
    u = arena.evaluate(x.U, budget_bits)
    e = arena.evaluate(x.E, budget_bits)
    if abs(e) > budget_bits:
        raise EvalBudgetExceeded("exponent %d exceeds the budget" % e)
    return Fraction(u) * 2 ** e if e >= 0 else Fraction(u, 1 << -e)


def dy_to_json(x: PcDyadic) -> dict:
    return {"U": {str(k): v for k, v in sorted(x.U.items())},
            "E": {str(k): v for k, v in sorted(x.E.items())}}


def dy_from_json(arena: Arena, data: Mapping) -> PcDyadic:
    u = Marking({int(k): v for k, v in data["U"].items()})
    e = Marking({int(k): v for k, v in data["E"].items()})
    for m in (u, e):
        for p in m:
            if p not in arena.succ:
                raise NotAPowerCircuit(p, "node is not in the arena")
    return _normalize(arena, u, e) if u else PcDyadic(arena, EMPTY, EMPTY)
