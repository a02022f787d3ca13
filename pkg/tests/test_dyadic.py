import random
from fractions import Fraction

import pytest

from powcirc import (
    Arena,
    ArenaMismatch,
    NotInteger,
    NotPowerOfTwoRatio,
    Ordering,
    dy_add,
    dy_compare,
    dy_from_fraction,
    dy_from_int,
    dy_from_json,
    dy_from_marking,
    dy_is_integer,
    dy_log2_quotient,
    dy_negate,
    dy_shift,
    dy_sign,
    dy_to_integer_marking,
    dy_to_json,
    dy_value,
    pc_tower_chain,
)
from support import binary_basis_circuit


def pair(x):
    """(mantissa, exponent) as plain integers."""
    a = x.circuit
    return a.evaluate(x.U), a.evaluate(x.E)


def d(arena, u, e):
    return dy_from_fraction(arena, Fraction(u) * Fraction(2) ** e)


def test_arena_integers_round_trip():
    a = Arena()
    for k in range(-300, 301):
        m = a.integer(k)
        assert a.is_compact(m)
        assert a.evaluate(m) == k
        assert a.sign(m) == (k > 0) - (k < 0)


def test_arena_values_are_canonical():
    a = Arena()
    assert a.integer(12) == a.add(a.integer(5), a.integer(7))
    assert a.integer(0) == a.sub(a.integer(9), a.integer(9))


def test_arena_to_reduced_is_reduced():
    a = Arena()
    for k in (5, 77, 1000, -3):
        a.integer(k)
    a.to_reduced().check()


def test_from_marking():
    pc, _ = binary_basis_circuit()
    assert pair(dy_from_marking(pc, {2: 1, 3: 1})) == (3, 2)
    zero = dy_from_marking(pc, {})
    assert zero.is_zero and not zero.E
    assert pair(dy_from_marking(pc, {1: -1, 2: -1})) == (-3, 1)


def test_shift():
    a = Arena()
    x = d(a, 3, 2)
    assert pair(dy_shift(x, a.integer(-2))) == (3, 0)
    assert dy_shift(dy_from_int(a, 0), a.integer(5)).is_zero
    assert pair(dy_shift(x, a.integer(16))) == (3, 18)


def test_shift_by_tower_node():
    pc, ids = pc_tower_chain(3)
    a = Arena()
    _, marks = a.absorb(pc, {"t": {ids[3]: 1}})
    assert pair(dy_shift(d(a, 3, 2), marks["t"])) == (3, 18)


def test_negate():
    a = Arena()
    assert pair(dy_negate(d(a, 3, 2))) == (-3, 2)
    assert dy_negate(dy_from_int(a, 0)).is_zero
    rng = random.Random(2)
    for _ in range(1000):
        x = d(a, rng.randint(-100, 100), rng.randint(-20, 20))
        assert dy_negate(dy_negate(x)) == x


def test_log2_quotient():
    a = Arena()
    assert a.evaluate(dy_log2_quotient(d(a, 3, 5), d(a, 3, 2))) == 3
    with pytest.raises(NotPowerOfTwoRatio):
        dy_log2_quotient(d(a, 3, 2), d(a, 5, 2))
    x = d(a, 7, -4)
    assert not dy_log2_quotient(x, x)
    with pytest.raises(NotPowerOfTwoRatio):
        dy_log2_quotient(dy_from_int(a, 0), dy_from_int(a, 0))


def test_add():
    a = Arena()
    assert pair(dy_add(d(a, 3, 2), d(a, 1, 0))) == (13, 0)
    assert pair(dy_add(d(a, 1, -1), d(a, 1, -1))) == (1, 0)
    x = d(a, 5, 7)
    assert dy_add(x, dy_negate(x)).is_zero


def test_add_random():
    a = Arena()
    rng = random.Random(4)
    for _ in range(2000):
        p = Fraction(rng.randint(-200, 200), 2 ** rng.randint(0, 12))
        q = Fraction(rng.randint(-200, 200), 2 ** rng.randint(0, 12))
        x, y = dy_from_fraction(a, p), dy_from_fraction(a, q)
        s = dy_add(x, y)
        assert dy_value(s) == p + q
        assert s == dy_from_fraction(a, p + q)
        assert dy_compare(x, y) == Ordering.of(p, q)


def test_sign():
    a = Arena()
    assert dy_sign(d(a, -3, 2)) is Ordering.LT
    assert dy_sign(dy_from_int(a, 0)) is Ordering.EQ
    assert dy_sign(d(a, 3, -100)) is Ordering.GT


def test_integer_marking():
    a = Arena()
    assert a.evaluate(dy_to_integer_marking(d(a, 3, 2))) == 12
    with pytest.raises(NotInteger):
        dy_to_integer_marking(d(a, 3, -1))
    assert not dy_to_integer_marking(dy_from_int(a, 0))
    assert dy_is_integer(d(a, 3, 2)) and not dy_is_integer(d(a, 3, -1))


def test_mixing_arenas_fails():
    with pytest.raises(ArenaMismatch):
        dy_add(dy_from_int(Arena(), 1), dy_from_int(Arena(), 1))


def test_json_round_trip():
    a = Arena()
    x = d(a, -13, -9)
    assert dy_from_json(a, dy_to_json(x)) == x
