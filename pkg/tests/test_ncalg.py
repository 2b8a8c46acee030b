from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legdga.errors import RingMismatchError
from legdga.ncalg import (MIXED, Derivation, Homomorphism, NcPoly, Ring, evaluate, grade, length_part, linear_part,
                          mul)

GENS = ["a", "b", "c"]
DEG = {"a": 1, "b": 0, "c": -1}

terms = st.lists(st.tuples(st.lists(st.sampled_from(GENS), max_size=3).map(tuple),
                           st.integers(-2, 2), st.integers(-3, 3)), max_size=5)


def build(ts, ring=Ring.Z):
    p = NcPoly.zero(ring)
    for w, tp, c in ts:
        p = p + NcPoly.word(w, ring, coeff=c, t_power=tp)
    return p


def test_parse_and_print():
    p = NcPoly.parse("1 + b1 b2 b3 + t b1")
    assert p.coeff(("b1", "b2", "b3")) == 1
    assert p.coeff(("b1",), 1) == 1
    assert NcPoly.parse(str(p)) == p


def test_z2_cancels():
    p = NcPoly.parse("a b + a b")
    assert not p


def test_noncommutative():
    a, b = NcPoly.gen("a"), NcPoly.gen("b")
    assert a * b != b * a
    assert mul(a, b) == NcPoly.word(("a", "b"))


def test_t_is_central_and_invertible():
    a = NcPoly.gen("a", Ring.Z)
    t = NcPoly.t(1, Ring.Z)
    assert t * a == a * t
    assert (t * NcPoly.t(-1, Ring.Z)) == NcPoly.one(Ring.Z)


def test_length_parts():
    p = NcPoly.parse("1 + a + a b + b a c")
    assert linear_part(p) == NcPoly.gen("a")
    assert length_part(p, 2) == NcPoly.word(("a", "b"))
    assert p.constant_part() == NcPoly.one()
    assert p.max_length() == 3


def test_specialize_t():
    p = NcPoly.parse("1 + t a", Ring.Z)
    assert p.specialize_t(-1) == NcPoly.parse("1 - a", Ring.Z)


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        NcPoly.gen("a", Ring.Z) + NcPoly.gen("a", Ring.Z2)


def test_json_roundtrip():
    p = NcPoly.parse("2 a b - 3 t^-1 c", Ring.Z)
    assert NcPoly.from_json(p.to_json(), Ring.Z) == p


def test_grade():
    assert grade(NcPoly.parse("a b c"), DEG) == 0
    assert grade(NcPoly.parse("a + b"), DEG) == MIXED


def test_derivation_koszul_sign():
    d = Derivation({"a": NcPoly.parse("b", Ring.Z), "b": NcPoly.zero(Ring.Z), "c": NcPoly.zero(Ring.Z)},
                   DEG, Ring.Z)
    # ∂(a a) = ∂a a - a ∂a
    assert d(NcPoly.parse("a a", Ring.Z)) == NcPoly.parse("b a - a b", Ring.Z)


def test_evaluate():
    assert evaluate(NcPoly.parse("1 + b1 b2"), {"b1": 1, "b2": 1}) == 0
    assert evaluate(NcPoly.parse("1 + t", Ring.Z), {}, -1, Ring.Z) == 0


@given(terms, terms, terms)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(x, y, z):
    p, q, r = build(x), build(y), build(z)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) - q == p


@given(terms, terms)
@settings(max_examples=60, deadline=None)
def test_derivation_leibniz(x, y):
    imgs = {"a": NcPoly.parse("b c b", Ring.Z), "b": NcPoly.parse("c", Ring.Z), "c": NcPoly.zero(Ring.Z)}
    deg = {"a": 1, "b": 0, "c": -1}
    d = Derivation(imgs, deg, Ring.Z)
    for w, tp, c in x:
        u = NcPoly.word(w, Ring.Z, coeff=1)
        for w2, _, _ in y:
            v = NcPoly.word(w2, Ring.Z)
            sign = -1 if grade(u, deg) % 2 else 1
            assert d(u * v) == d(u) * v + (u * d(v)).scale(sign)


@given(terms)
@settings(max_examples=60, deadline=None)
def test_homomorphism_multiplicative(x):
    h = Homomorphism({"a": NcPoly.parse("b + 1", Ring.Z), "b": NcPoly.parse("a c", Ring.Z),
                      "c": NcPoly.parse("c", Ring.Z)}, Ring.Z)
    p = build(x)
    assert h(p * p) == h(p) * h(p)
