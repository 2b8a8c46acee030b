from __future__ import annotations

import pytest

from legdga.ainf import (build_ainf, build_mk, build_morphism_components, check_ainf_morphism,
                         check_length_filtration, check_stasheff, products_on_cohomology)
from legdga.augment import augmented_differential, enumerate_augmentations, linearize
from legdga.cedga import load_dga
from legdga.cobord import augment_morphism, identity_morphism, load_morphism
from legdga.errors import NotAFieldError, OrderBoundError

from conftest import FIXTURES, KNOTS

COHOMOLOGY = {"unknot": {1: 1}, "trefoil": {0: 2, 1: 1}, "chekanov_a": {0: 2, 1: 1},
              "chekanov_b": {-2: 1, 1: 1, 2: 1}}


def structures(g, order=4):
    for e in enumerate_augmentations(g):
        yield e, build_ainf(augmented_differential(g, e), order)


@pytest.mark.parametrize("name", KNOTS)
def test_m1_is_dual_of_linearized_differential(dgas, name):
    g = dgas[name]
    for e, A in structures(g):
        c = linearize(augmented_differential(g, e))
        for k in c.grades():
            rows, cols = c.basis(k - 1), c.basis(k)
            mat = c.matrix(k)
            for i, y in enumerate(rows):
                got = set(A.names(A.m(1, (y,)))) & set(cols)
                assert got == {x for j, x in enumerate(cols) if mat[i][j] % 2}


@pytest.mark.parametrize("name", KNOTS)
def test_stasheff(dgas, name):
    for _, A in structures(dgas[name]):
        assert not A.degree_violations()
        for l in range(1, 5):
            assert check_stasheff(A, l).ok


@pytest.mark.parametrize("name", KNOTS)
def test_cohomology_dims_match_lch(dgas, name):
    for _, A in structures(dgas[name]):
        assert products_on_cohomology(A).dims == COHOMOLOGY[name]


def test_broken_m2_fails_stasheff(dgas):
    g = dgas["chekanov_b"]
    (e,) = enumerate_augmentations(g)
    A = build_ainf(augmented_differential(g, e), 4)
    # drop one product: the quadratic part of ∂b5 no longer matches ∂² = 0
    t = dict(A.tables[2])
    key = next(iter(sorted(t)))
    del t[key]
    B = A.with_table(2, t)
    assert not all(check_stasheff(B, l).ok for l in range(1, 5))


@pytest.mark.parametrize("name", KNOTS)
def test_identity_ainf_morphism(dgas, name):
    g = dgas[name]
    f = identity_morphism(g)
    for e in enumerate_augmentations(g):
        fa = augment_morphism(f, e)
        A = build_ainf(fa.target, 4)
        phi = build_morphism_components(fa, 4)
        for n in range(1, 5):
            assert check_ainf_morphism(phi, A, A, n).ok
        for rep in check_length_filtration(fa, 4).values():
            assert rep.ok


@pytest.mark.parametrize("path", ["trefoil_symmetry.json", "trefoil_to_unknot.json"])
def test_nontrivial_ainf_morphisms(path):
    f = load_morphism(FIXTURES / path)
    for e1 in enumerate_augmentations(f.target):
        fa = augment_morphism(f, e1)
        A1, A2 = build_ainf(fa.target, 4), build_ainf(fa.source, 4)
        phi = build_morphism_components(fa, 4)
        for n in range(1, 5):
            assert check_ainf_morphism(phi, A1, A2, n).ok
        for rep in check_length_filtration(fa, 4).values():
            assert rep.ok
        assert products_on_cohomology(A1, phi, A2).product_compatible


def test_perturbed_map_ainf():
    from legdga.cobord import morphism, perturb_by_homotopy
    g = load_dga(FIXTURES / "trefoil.dga.json")
    f1 = perturb_by_homotopy(identity_morphism(g), morphism(g, g, {"b2": "a1"}, kind="k"))
    for e1 in enumerate_augmentations(g):
        fa = augment_morphism(f1, e1)
        A1, A2 = build_ainf(fa.target, 4), build_ainf(fa.source, 4)
        phi = build_morphism_components(fa, 4)
        assert phi.order >= 4
        for n in range(1, 5):
            assert check_ainf_morphism(phi, A1, A2, n).ok


def test_order_bound(dgas):
    g = dgas["trefoil"]
    e = enumerate_augmentations(g)[0]
    ga = augmented_differential(g, e)
    A = build_ainf(ga, 2)
    with pytest.raises(OrderBoundError):
        A.m(3, ("b1", "b2", "b3"))
    with pytest.raises(OrderBoundError):
        build_mk(ga, 5, 4)


def test_needs_augmentation_and_z2(dgas):
    with pytest.raises(ValueError):
        build_ainf(dgas["trefoil"])
    g = load_dga(FIXTURES / "z_sign.dga.json")
    with pytest.raises(NotAFieldError):
        build_ainf(g)
