"""Signed-digit representations over {-1, 0, 1}.

A representation ``(a_0, ..., a_{n-1})`` has value ``sum(a_i * 2**i)``.  It is
compact when no two adjacent digits are both non-zero; every integer has exactly
one compact representation (the non-adjacent form).
"""
from __future__ import annotations

import enum
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from .errors import EnumerationTooLarge

ORACLE_MAX_LENGTH = 24


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1

    @classmethod
    def of(cls, a, b) -> "Ordering":
        return cls((a > b) - (a < b))


class SignedDigitRep:
    """Immutable digit tuple, least significant digit first.

    Trailing zeros carry no meaning, so equality and hashing ignore them.
    """

    __slots__ = ("digits",)

    def __init__(self, digits: Iterable[int] = ()):
        digits = tuple(int(d) for d in digits)
        for d in digits:
            if d not in (-1, 0, 1):
                raise ValueError("digit %r not in {-1, 0, 1}" % d)
        object.__setattr__(self, "digits", digits)

    def __setattr__(self, name, value):
        raise AttributeError("SignedDigitRep is immutable")

    def stripped(self) -> Tuple[int, ...]:
        d = self.digits
        n = len(d)
        while n and d[n - 1] == 0:
            n -= 1
        return d[:n]

    @property
    def length(self) -> int:
        """Digit-length: one past the highest non-zero digit."""
        return len(self.stripped())

    @property
    def value(self) -> int:
        return sdr_value(self)

    @classmethod
    def from_int(cls, k: int) -> "SignedDigitRep":
        """Plain binary of ``|k|``, with every digit negated when ``k < 0``."""
        s = -1 if k < 0 else 1
        k = abs(k)
        return cls(s * ((k >> i) & 1) for i in range(k.bit_length()))

    def __iter__(self):
        return iter(self.digits)

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __eq__(self, other):
        if isinstance(other, SignedDigitRep):
            return self.stripped() == other.stripped()
        if isinstance(other, (tuple, list)):
            return self.stripped() == SignedDigitRep(other).stripped()
        return NotImplemented

    def __hash__(self):
        return hash(self.stripped())

    def __repr__(self):
        return "SignedDigitRep(%r)" % (self.digits,)


SDRLike = Union[SignedDigitRep, Sequence[int]]


def _digits(a: SDRLike) -> Tuple[int, ...]:
    if isinstance(a, SignedDigitRep):
        return a.digits
    return SignedDigitRep(a).digits


def sdr_value(a: SDRLike) -> int:
    v = 0
    for d in reversed(_digits(a)):
        v = 2 * v + d
    return v


def sdr_is_compact(a: SDRLike) -> bool:
    d = _digits(a)
    return all(not (d[i] and d[i + 1]) for i in range(len(d) - 1))


def _compact_bits(bits: Sequence[int]) -> List[int]:
    """Compact form of a binary string via the carry recurrence.

    c_0 = 0, c_i = a_i a_{i-1} or c_{i-1} (a_i or a_{i-1}),
    b_i = (a_i xor c_i) * (-1)**a_{i+1}, with b_m = c_m.
    """
    m = len(bits)
    out = []
    carry = 0
    prev = 0
    for i in range(m + 1):
        cur = bits[i] if i < m else 0
        nxt = bits[i + 1] if i + 1 < m else 0
        if i:
            carry = (cur & prev) | (carry & (cur | prev))
        b = cur ^ carry
        out.append(-b if nxt else b)
        prev = cur
    return out


def _greater_equal(x: Sequence[int], y: Sequence[int]) -> bool:
    n = max(len(x), len(y))
    for i in range(n - 1, -1, -1):
        a = x[i] if i < len(x) else 0
        b = y[i] if i < len(y) else 0
        if a != b:
            return a > b
    return True


def _bits_sub(x: Sequence[int], y: Sequence[int]) -> List[int]:
    """Schoolbook ``x - y`` on binary digit lists, assuming ``x >= y``."""
    out = []
    borrow = 0
    for i in range(len(x)):
        d = x[i] - (y[i] if i < len(y) else 0) - borrow
        borrow = 1 if d < 0 else 0
        out.append(d + 2 * borrow)
    return out


def _bits_add(x: Sequence[int], y: Sequence[int]) -> List[int]:
    out = []
    carry = 0
    for i in range(max(len(x), len(y))):
        d = (x[i] if i < len(x) else 0) + (y[i] if i < len(y) else 0) + carry
        out.append(d & 1)
        carry = d >> 1
    if carry:
        out.append(1)
    return out


def _split(d: Sequence[int]):
    pos = [1 if x == 1 else 0 for x in d]
    neg = [1 if x == -1 else 0 for x in d]
    return pos, neg


def _compact_difference(pos: List[int], neg: List[int]) -> SignedDigitRep:
    if not any(neg):
        return SignedDigitRep(_compact_bits(pos))
    if _greater_equal(pos, neg):
        return SignedDigitRep(_compact_bits(_bits_sub(pos, neg)))
    return SignedDigitRep(-b for b in _compact_bits(_bits_sub(neg, pos)))


def sdr_compact(a: SDRLike) -> SignedDigitRep:
    """The unique compact representation with the same value."""
    d = _digits(a)
    if all(x >= 0 for x in d):
        return SignedDigitRep(_compact_bits(d))
    pos, neg = _split(d)
    return _compact_difference(pos, neg)


def cr(k: int) -> SignedDigitRep:
    """Compact representation of the integer ``k``."""
    return sdr_compact(SignedDigitRep.from_int(k))


def sdr_add(a: SDRLike, b: SDRLike) -> SignedDigitRep:
    pa, na = _split(_digits(a))
    pb, nb = _split(_digits(b))
    return _compact_difference(_bits_add(pa, pb), _bits_add(na, nb))


def sdr_compare(a: SDRLike, b: SDRLike) -> Ordering:
    """Compare by the highest position where the compact forms differ."""
    x = sdr_compact(a).digits
    y = sdr_compact(b).digits
    for i in range(max(len(x), len(y)) - 1, -1, -1):
        p = x[i] if i < len(x) else 0
        q = y[i] if i < len(y) else 0
        if p != q:
            return Ordering.LT if p < q else Ordering.GT
    return Ordering.EQ


def sdr_max_compact(n: int) -> int:
    """Largest value of a compact representation of digit-length ``n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (1 << (n + 1)) // 3


def _compact_words(n: int):
    """Yield every compact digit tuple of exactly ``n`` positions."""
    if n == 0:
        yield ()
        return
    if n == 1:
        yield (0,)
        yield (1,)
        yield (-1,)
        return
    for rest in _compact_words(n - 1):
        yield (0,) + rest
    for rest in _compact_words(n - 2):
        yield (1, 0) + rest
        yield (-1, 0) + rest


def sdr_oracle_unique(n: int) -> Dict[int, SignedDigitRep]:
    """Enumerate compact representations with at most ``n`` digits.

    Returns value -> representation and fails loudly if two different compact
    representations share a value.
    """
    if n > ORACLE_MAX_LENGTH:
        raise EnumerationTooLarge("n=%d exceeds %d" % (n, ORACLE_MAX_LENGTH))
    if n < 0:
        raise ValueError("n must be non-negative")
    table: Dict[int, SignedDigitRep] = {}
    for w in _compact_words(n):
        v = 0
        for d in reversed(w):
            v = 2 * v + d
        rep = SignedDigitRep(w)
        old = table.get(v)
        if old is not None and old != rep:
            raise AssertionError("two compact representations of %d: %r %r" % (v, old, rep))
        table[v] = rep
    return table
