from __future__ import annotations

import itertools

import pytest

from legdga.augment import (Augmentation, augmented_differential, enumerate_augmentations, lch, lch_multiset,
                            leibniz_residual, linearize, make_augmentation)
from legdga.cedga import build_dga, load_dga
from legdga.diagram.lkd import load
from legdga.errors import AxiomError, NotAFieldError
from legdga.ncalg import NcPoly

from conftest import FIXTURES, KNOTS

AUG_COUNTS = {"unknot": 1, "trefoil": 5, "chekanov_a": 6, "chekanov_b": 1}
LCH = {"unknot": ["z"], "trefoil": ["2 + z"] * 5, "chekanov_a": ["2 + z"] * 6,
       "chekanov_b": ["z^-2 + z + z^2"]}


def trefoil_oracle():
    # brute force straight from the two degree-1 differentials
    out = []
    for b1, b2, b3 in itertools.product((0, 1), repeat=3):
        if (1 + b1 + b3 + b1 * b2 * b3) % 2 == 0 and (1 + b1 + b3 + b3 * b2 * b1) % 2 == 0:
            out.append({"b1": b1, "b2": b2, "b3": b3})
    return out


def rank2(rows):
    rows = [r[:] for r in rows]
    rank = 0
    for c in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % 2), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % 2:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def betti_oracle(c):
    ranks = {k: rank2(c.matrix(k)) for k in range(min(c.grades()) - 1, max(c.grades()) + 3)}
    return {k: len(c.basis(k)) - ranks[k] - ranks[k + 1] for k in c.grades()}


def test_trefoil_count_matches_brute_force(dgas):
    found = [{x: e.value(x) for x in ("b1", "b2", "b3")} for e in enumerate_augmentations(dgas["trefoil"])]
    assert len(trefoil_oracle()) == 5
    assert sorted(map(sorted, (d.items() for d in found))) == sorted(map(sorted, (d.items() for d in trefoil_oracle())))


@pytest.mark.parametrize("name", KNOTS)
def test_counts(dgas, name):
    assert len(enumerate_augmentations(dgas[name])) == AUG_COUNTS[name]


def test_unknot_laurent_single_augmentation():
    g = load_dga(FIXTURES / "unknot_laurent.dga.json")
    augs = enumerate_augmentations(g, t_image=1)
    assert len(augs) == 1 and augs[0].t_image == 1


@pytest.mark.parametrize("name", KNOTS)
def test_augmented_differential_is_constant_free(dgas, name):
    g = dgas[name]
    for e in enumerate_augmentations(g):
        ga = augmented_differential(g, e)
        assert all(not p.constant_part() for p in ga.differential.values())
        c = linearize(ga)
        assert not c.square_residuals()


@pytest.mark.parametrize("name", KNOTS)
def test_lch_against_dense_oracle(dgas, name):
    g = dgas[name]
    got = []
    for e in enumerate_augmentations(g):
        c = linearize(augmented_differential(g, e))
        p = lch(c)
        assert dict(p.ranks) == {k: v for k, v in betti_oracle(c).items() if v}
        got.append(str(p))
    assert sorted(got) == sorted(LCH[name])


def test_chekanov_pair_distinguished(dgas):
    assert lch_multiset(dgas["chekanov_a"]) != lch_multiset(dgas["chekanov_b"])


def test_euler_characteristic_matches_rotation(dgas):
    # χ of the linearized homology equals χ of the complex
    for name in KNOTS:
        g = dgas[name]
        for p in lch_multiset(g):
            assert p.euler_characteristic() == sum((-1) ** (k % 2) for k in g.degrees.values())


def test_leibniz_small_words(dgas):
    g = dgas["trefoil"]
    e = enumerate_augmentations(g)[0]
    for w in itertools.product(g.generators, repeat=2):
        assert not leibniz_residual(g, e, w)


def test_rii_encoding_doubles_count():
    g = build_dga(load(FIXTURES / "trefoil_rii.lkd"))
    augs = enumerate_augmentations(g)
    assert len(augs) == 10
    # the extra pair (b1, b2) with ∂b2 = b1 frees one degree-0 generator
    assert sorted(set(str(p) for p in lch_multiset(g))) == ["2 + z"]


def test_non_augmentation_rejected(dgas):
    with pytest.raises(AxiomError):
        make_augmentation(dgas["trefoil"], {"b2": 1})
    with pytest.raises(AxiomError):
        augmented_differential(dgas["trefoil"], Augmentation({}))


def test_z_search_refused():
    g = load_dga(FIXTURES / "z_sign.dga.json")
    with pytest.raises(NotAFieldError):
        enumerate_augmentations(g)
    e = make_augmentation(g, {"b": 1, "c": -1}, t_image=-1)
    ga = augmented_differential(g, e)
    assert not ga.differential["a"].constant_part()
    assert ga.differential["a"] == NcPoly.parse("c - b + b c", g.ring)
