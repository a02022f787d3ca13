"""Word problem of the Baumslag group.

The group ``<a, t, b | t a t^-1 = a^2, b a b^-1 = t>`` is an HNN extension of
``BS(1,2) = Z[1/2] x| Z`` where ``a = (1, 0)`` and ``t = (0, 1)``.  A word is
stored as BS(1,2) elements separated by the letters ``b`` and ``B = b^-1``.
Britton's lemma says it is trivial exactly when repeatedly pinching
``b (q,0) B -> (0,q)`` (q an integer) and ``B (0,k) b -> (k,0)`` leaves a single
identity element.

``britton_reduce`` cuts the word into letters and merges neighbours pairwise
in a balanced tree.  All numbers live in one arena shared by the word.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .arena import Arena
from .core import EMPTY, Marking
from .dyadic import (
    PcDyadic,
    dy_add,
    dy_from_int,
    dy_is_integer,
    dy_log2_quotient,
    dy_negate,
    dy_shift,
    dy_to_integer_marking,
    _normalize,
)
from .errors import ArenaMismatch, BadLetter, BudgetExceeded, NotBrittonReduced, TooLarge

ALPHABET = "aAbBtT1"
TOWER_MAX = 24


class Beta(enum.IntEnum):
    b = 1
    B = -1

    @property
    def inverse(self) -> "Beta":
        return Beta(-self.value)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class BsPair:
    """The BS(1,2) element ``(r, m)``: r dyadic, m an integer marking."""

    r: PcDyadic
    m: Marking

    @property
    def circuit(self) -> Arena:
        return self.r.circuit

    @property
    def key(self):
        return (self.r.U, self.r.E, self.m)

    @property
    def is_identity(self) -> bool:
        return not self.r.U and not self.m


def bs_identity(arena: Arena) -> BsPair:
    return BsPair(PcDyadic(arena, EMPTY, EMPTY), EMPTY)


def bs_letter(arena: Arena, ch: str) -> BsPair:
    if ch == "a":
        return BsPair(dy_from_int(arena, 1), EMPTY)
    if ch == "A":
        return BsPair(dy_from_int(arena, -1), EMPTY)
    if ch == "t":
        return BsPair(PcDyadic(arena, EMPTY, EMPTY), arena.ONE)
    if ch == "T":
        return BsPair(PcDyadic(arena, EMPTY, EMPTY), -arena.ONE)
    if ch == "1":
        return bs_identity(arena)
    raise BadLetter("letter %r is not a BS(1,2) letter" % ch)


def bs_mul(x: BsPair, y: BsPair) -> BsPair:
    """``(r, m)(s, n) = (r + 2**m s, m + n)``."""
    if y.is_identity:
        return x
    if x.is_identity:
        return y
    arena = x.circuit
    if y.circuit is not arena:
        raise ArenaMismatch("operands live in different arenas")
    return BsPair(dy_add(x.r, dy_shift(y.r, x.m)), arena.add(x.m, y.m))


def bs_inv(x: BsPair) -> BsPair:
    """``(r, m)^-1 = (-r 2**-m, -m)``."""
    return BsPair(dy_shift(dy_negate(x.r), -x.m), -x.m)


def _int_pair(arena: Arena, r: Marking = EMPTY, m: Marking = EMPTY) -> BsPair:
    return BsPair(_normalize(arena, r), m)


@dataclass(frozen=True)
class BrittonWord:
    """``pairs[0] betas[0] pairs[1] ... betas[k-1] pairs[k]``."""

    circuit: Arena = field(compare=False, repr=False)
    pairs: Tuple[BsPair, ...]
    betas: Tuple[Beta, ...]
    reduced: bool = field(default=False, compare=False)

    def __post_init__(self):
        if len(self.pairs) != len(self.betas) + 1:
            raise ValueError("a word alternates pairs and betas, starting and ending with a pair")

    @cached_property
    def key(self):
        return (tuple(p.key for p in self.pairs), tuple(self.betas))

    @property
    def is_identity(self) -> bool:
        return not self.betas and self.pairs[0].is_identity

    def __len__(self):
        return len(self.betas)


# Index helpers: in u, beta_1 is the right-most beta and pair_0 the right-most
# pair; in v, beta_1 is the left-most beta and pair_0 the left-most pair.

def _ub(u: BrittonWord, i: int) -> Optional[Beta]:
    return u.betas[-i] if 1 <= i <= len(u.betas) else None


def _vb(v: BrittonWord, i: int) -> Optional[Beta]:
    return v.betas[i - 1] if 1 <= i <= len(v.betas) else None


def _up(u: BrittonWord, i: int) -> BsPair:
    return u.pairs[-1 - i]


def _vp(v: BrittonWord, i: int) -> BsPair:
    return v.pairs[i]


def _inner(u: BrittonWord, v: BrittonWord, i: int) -> BsPair:
    """The BS(1,2) value of the middle part ``uv[i,i]``, assumed to pinch.

    Uses the letters at the seam and, only for the (b, B) case, the value one
    level further in; that value never needs to recurse again.
    """
    arena = u.circuit
    if i == 0:
        return bs_identity(arena)
    b1 = _ub(u, i)
    x = _up(u, i - 1)
    y = _vp(v, i - 1)
    b2 = _ub(u, i - 1)
    if b2 is None:
        prod = bs_mul(x, y)
        if b1 is Beta.b:
            return _int_pair(arena, m=dy_to_integer_marking(prod.r))
        return _int_pair(arena, r=prod.m)
    r, m, s, n = x.r, x.m, y.r, y.m
    if b1 is Beta.b and b2 is Beta.b:
        return _int_pair(arena, m=dy_to_integer_marking(dy_add(r, dy_shift(s, -n))))
    if b1 is Beta.b:
        q = _inner(u, v, i - 1).r
        return _int_pair(arena, m=dy_to_integer_marking(dy_add(r, dy_shift(dy_add(q, s), m))))
    if b2 is Beta.b:
        if not r.U or not s.U:
            raise AssertionError("zero mantissa between B and b: input was not Britton-reduced")
        return _int_pair(arena, r=arena.add(n, dy_log2_quotient(dy_negate(r), s)))
    return _int_pair(arena, r=arena.add(m, n))


def britton_pinch_qk(i: int, u: BrittonWord, v: BrittonWord) -> BsPair:
    """``(q, k)``: the value of ``uv[i-1, i-1]``."""
    return _inner(u, v, i - 1)


def britton_pinch_test(i: int, u: BrittonWord, v: BrittonWord) -> bool:
    """Is ``uv[i,i]`` an element of BS(1,2)?  Assumes ``uv[i-1,i-1]`` is."""
    b1 = _ub(u, i)
    if b1 is None or _vb(v, i) is not b1.inverse:
        return False
    arena = u.circuit
    x = _up(u, i - 1)
    y = _vp(v, i - 1)
    r, m, s, n = x.r, x.m, y.r, y.m
    b2 = _ub(u, i - 1)
    if b2 is Beta.b:
        k = britton_pinch_qk(i, u, v).m
        val = dy_add(r, dy_shift(s, arena.add(m, k)))
        if b1 is Beta.b:
            return dy_is_integer(val) and not arena.add(arena.add(m, n), k)
        return not val.U
    q = britton_pinch_qk(i, u, v).r if b2 is Beta.B else PcDyadic(arena, EMPTY, EMPTY)
    val = dy_add(r, dy_shift(dy_add(q, s), m))
    if b1 is Beta.b:
        return dy_is_integer(val) and not arena.add(m, n)
    return not val.U


def _adopt(u: BrittonWord, arena: Arena) -> BrittonWord:
    if u.circuit is arena:
        return u
    memo: Dict[int, int] = {}

    def conv(m):
        return arena.import_marking(u.circuit, m, memo)

    pairs = tuple(BsPair(_normalize(arena, conv(p.r.U), conv(p.r.E)) if p.r.U else PcDyadic(arena, EMPTY, EMPTY),
                         conv(p.m)) for p in u.pairs)
    return BrittonWord(arena, pairs, u.betas, u.reduced)


def britton_merge(u: BrittonWord, v: BrittonWord, cache: Optional[dict] = None) -> BrittonWord:
    """Britton-reduced form of ``uv`` for Britton-reduced ``u`` and ``v``."""
    if not u.reduced or not v.reduced:
        raise NotBrittonReduced("both operands must be Britton-reduced")
    if v.circuit is not u.circuit:
        v = _adopt(v, u.circuit)
    if cache is not None:
        key = (u.key, v.key)
        hit = cache.get(key)
        if hit is not None:
            return hit
    h, l = len(u.betas), len(v.betas)
    i = 0
    while i < min(h, l) and britton_pinch_test(i + 1, u, v):
        i += 1
    mid = bs_mul(bs_mul(_up(u, i), _inner(u, v, i)), _vp(v, i))
    out = BrittonWord(u.circuit, u.pairs[:h - i] + (mid,) + v.pairs[i + 1:],
                      u.betas[:h - i] + v.betas[i:], True)
    if cache is not None:
        cache[key] = out
    return out


def _pinches(w: BrittonWord) -> List[int]:
    """Indices ``j`` where ``betas[j-1] pairs[j] betas[j]`` can be pinched."""
    out = []
    for j in range(1, len(w.betas)):
        x, y = w.betas[j - 1], w.betas[j]
        p = w.pairs[j]
        if x is Beta.b and y is Beta.B and not p.m and dy_is_integer(p.r):
            out.append(j)
        elif x is Beta.B and y is Beta.b and not p.r.U:
            out.append(j)
    return out


def is_britton_reduced(w: BrittonWord) -> bool:
    return not _pinches(w)


def _check_letters(word: str) -> None:
    for pos, ch in enumerate(word):
        if ch not in ALPHABET:
            raise BadLetter("letter %r at position %d is not in %s" % (ch, pos, ALPHABET))


def bg_parse(word: str, arena: Optional[Arena] = None) -> BrittonWord:
    """Parse a word over ``aAbBtT1``; neighbouring BS(1,2) letters are multiplied."""
    _check_letters(word)
    if arena is None:
        arena = Arena()
    pairs: List[BsPair] = [bs_identity(arena)]
    betas: List[Beta] = []
    for ch in word:
        if ch == "1":
            continue
        if ch in "bB":
            betas.append(Beta.b if ch == "b" else Beta.B)
            pairs.append(bs_identity(arena))
        else:
            pairs[-1] = bs_mul(pairs[-1], bs_letter(arena, ch))
    w = BrittonWord(arena, tuple(pairs), tuple(betas))
    return BrittonWord(arena, w.pairs, w.betas, is_britton_reduced(w))


def _leaves(w: Union[str, BrittonWord], arena: Arena) -> List[BrittonWord]:
    one = bs_identity(arena)
    if isinstance(w, str):
        _check_letters(w)
        made: Dict[str, BrittonWord] = {}
        out = []
        for ch in w:
            leaf = made.get(ch)
            if leaf is None:
                if ch in "bB":
                    leaf = BrittonWord(arena, (one, one), (Beta.b if ch == "b" else Beta.B,), True)
                else:
                    leaf = BrittonWord(arena, (bs_letter(arena, ch),), (), True)
                made[ch] = leaf
            out.append(leaf)
        return out
    out = []
    for j, p in enumerate(w.pairs):
        out.append(BrittonWord(arena, (p,), (), True))
        if j < len(w.betas):
            out.append(BrittonWord(arena, (one, one), (w.betas[j],), True))
    return out


def britton_reduce(w: Union[str, BrittonWord], arena: Optional[Arena] = None,
                   cache: Optional[dict] = None) -> BrittonWord:
    """Britton-reduced form of ``w`` by balanced pairwise merging.

    Leaves are padded with identity words up to a power of two.  Merges with
    identical operands are computed once (``cache``), which matters for the
    highly repetitive tower words.
    """
    if isinstance(w, BrittonWord):
        arena = w.circuit
    elif arena is None:
        arena = Arena()
    if cache is None:
        cache = {}
    level = _leaves(w, arena)
    if not level:
        return BrittonWord(arena, (bs_identity(arena),), (), True)
    size = 1
    while size < len(level):
        size *= 2
    ident = BrittonWord(arena, (bs_identity(arena),), (), True)
    level.extend([ident] * (size - len(level)))
    while len(level) > 1:
        level = [britton_merge(level[k], level[k + 1], cache) for k in range(0, len(level), 2)]
    return level[0]


def bg_word_problem(w: Union[str, BrittonWord]) -> bool:
    """True when ``w`` represents the identity."""
    return britton_reduce(w).is_identity


def word_inverse(word: str) -> str:
    return word[::-1].swapcase()


def bg_tower_word(n: int) -> str:
    """``w_0 = t``, ``w_{k+1} = b w_k a w_k^-1 B``; ``w_n`` equals ``t**tau(n)``."""
    if n > TOWER_MAX:
        raise TooLarge("n=%d exceeds %d" % (n, TOWER_MAX))
    if n < 0:
        raise ValueError("n must be non-negative")
    w = "t"
    for _ in range(n):
        w = "b" + w + "a" + word_inverse(w) + "B"
    return w


def bg_naive_oracle(word: str, budget_bits: int = 1 << 16) -> bool:
    """Decide triviality by left-to-right pinching with exact rationals."""
    _check_letters(word)
    stack: list = []

    def check(m):
        if abs(m) > budget_bits:
            raise BudgetExceeded("exponent %d exceeds %d bits" % (m, budget_bits))

    def push_pair(r, m):
        if stack and stack[-1][0] == "p":
            _, r0, m0 = stack.pop()
            check(m0)
            r = r0 + (r * 2 ** m0 if m0 >= 0 else r / 2 ** -m0)
            m = m0 + m
        check(m)
        stack.append(("p", r, m))

    def push_beta(beta):
        if stack and stack[-1] == ("b", -beta):
            stack.pop()
            push_pair(Fraction(0), 0)
            return
        if len(stack) >= 2 and stack[-1][0] == "p" and stack[-2] == ("b", -beta):
            _, r, m = stack[-1]
            if beta == -1 and m == 0 and r.denominator == 1:
                del stack[-2:]
                check(int(r))
                push_pair(Fraction(0), int(r))
                return
            if beta == 1 and r == 0:
                del stack[-2:]
                push_pair(Fraction(m), 0)
                return
        stack.append(("b", beta))

    for ch in word:
        if ch == "a":
            push_pair(Fraction(1), 0)
        elif ch == "A":
            push_pair(Fraction(-1), 0)
        elif ch == "t":
            push_pair(Fraction(0), 1)
        elif ch == "T":
            push_pair(Fraction(0), -1)
        elif ch == "b":
            push_beta(1)
        elif ch == "B":
            push_beta(-1)
    return all(x[0] == "p" and x[1] == 0 and x[2] == 0 for x in stack)
