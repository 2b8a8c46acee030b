from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from legdga import gf2

cols = st.lists(st.integers(0, 2**6 - 1), max_size=7)


def dense_rank(vectors, nbits=6):
    # plain row reduction on lists of bits
    rows = [[(v >> i) & 1 for i in range(nbits)] for v in vectors]
    r = 0
    for c in range(nbits):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def test_pack_bits():
    assert gf2.pack([0, 2]) == 0b101
    assert gf2.bits(0b101) == [0, 2]


@given(cols)
@settings(max_examples=100, deadline=None)
def test_rank_matches_dense(vs):
    assert gf2.rank(vs) == dense_rank(vs)


@given(cols)
@settings(max_examples=100, deadline=None)
def test_rank_nullity(vs):
    ker = gf2.kernel(vs)
    assert gf2.rank(vs) + len(ker) == len(vs)
    for k in ker:
        assert gf2.apply(vs, k) == 0


@given(cols, cols)
@settings(max_examples=60, deadline=None)
def test_quotient_basis_completes(sub, amb):
    q = gf2.quotient_basis(sub, sub + amb)
    assert gf2.rank(sub) + len(q) == gf2.rank(sub + amb)
