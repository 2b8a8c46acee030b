"""A-infinity structures dual to augmented DGAs, over Z2.

Conventions.  The dual basis element c* has degree |c|.  The operation m_k
sends (c₁*, …, c_k*) to the sum of those c* for which the word c₁⋯c_k occurs
in ∂_ε(c), read in the same order; m_k therefore has degree +1.  For an
augmented morphism Φ^{ε₁}: A₂ → A₁ the component φ_k sends (c₁*, …, c_k*),
c_i generators of A₁, to the sum of the generators c of A₂ with c₁⋯c_k in
Φ^{ε₁}(c).  The A-infinity morphism identity then reads

    Σ φ_{i+n+1}(1^i ⊗ m_p ⊗ 1^n) = Σ m_j(φ_{k₁} ⊗ ⋯ ⊗ φ_{k_j})

with m on the left from A₁ and on the right from A₂.

Tables map a tuple of generator names to a Z2 vector, packed into an int over
the output generators in their DGA order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from . import gf2
from .cedga import DGA, Report
from .cobord import DgaMorphism
from .errors import NotAFieldError, OrderBoundError
from .ncalg import NcPoly, Ring


def _require_z2(ring) -> None:
    if Ring(ring) is not Ring.Z2:
        raise NotAFieldError("A-infinity structures are built over Z2 only")


def default_order(*dgas: DGA) -> int:
    return max((g.max_word_length() for g in dgas), default=0) + 1


def _tables_from(polys: Mapping[str, NcPoly], outputs: list[str], upto: int) -> dict[int, dict]:
    pos = {x: i for i, x in enumerate(outputs)}
    tables: dict[int, dict] = {k: {} for k in range(1, upto + 1)}
    for c, p in polys.items():
        bit = 1 << pos[c]
        for w, _, coeff in p:
            if coeff % 2 and 1 <= len(w) <= upto:
                t = tables[len(w)]
                t[w] = t.get(w, 0) ^ bit
                if not t[w]:
                    del t[w]
    return tables


@dataclass(frozen=True)
class AInfinityStructure:
    generators: tuple
    degrees: Mapping[str, int]
    tables: Mapping[int, Mapping[tuple, int]]
    order: int
    name: str = ""

    def m(self, k: int, args: tuple) -> int:
        if k > self.order:
            raise OrderBoundError(f"m_{k} requested but the structure was built to order {self.order}")
        return self.tables.get(k, {}).get(tuple(args), 0)

    def names(self, v: int) -> list[str]:
        return [self.generators[i] for i in gf2.bits(v)]

    def with_table(self, k: int, table: Mapping[tuple, int]) -> "AInfinityStructure":
        tables = dict(self.tables)
        tables[k] = dict(table)
        return AInfinityStructure(self.generators, self.degrees, tables, self.order, self.name)

    def degree_violations(self) -> list:
        out = []
        for k, t in self.tables.items():
            for w, v in t.items():
                want = sum(self.degrees[x] for x in w) + 1
                for y in self.names(v):
                    if self.degrees[y] != want:
                        out.append((k, w, y))
        return out

    def to_json(self) -> dict:
        return {
            "generators": [{"id": x, "degree": self.degrees[x]} for x in self.generators],
            "order": self.order,
            "m": {str(k): [{"inputs": list(w), "output": self.names(v)} for w, v in sorted(t.items())]
                  for k, t in sorted(self.tables.items())},
        }


def build_ainf(ga: DGA, order: int | None = None) -> AInfinityStructure:
    """Dual A-infinity structure of a constant-free augmented DGA, through m_order."""
    _require_z2(ga.ring)
    consts = [x for x, p in ga.differential.items() if p.constant_part()]
    if consts:
        raise ValueError(f"differential has constant terms at {consts}; augment first")
    order = default_order(ga) if order is None else order
    gens = list(ga.generators)
    return AInfinityStructure(tuple(gens), dict(ga.degrees), _tables_from(ga.differential, gens, order),
                              order, ga.name)


def build_mk(ga: DGA, k: int, order: int | None = None) -> dict:
    order = default_order(ga) if order is None else order
    if k > order:
        raise OrderBoundError(f"k = {k} exceeds the order bound {order}")
    return dict(build_ainf(ga, order).tables.get(k, {}))


def check_stasheff(A: AInfinityStructure, l: int) -> Report:
    """Residual of Σ m_{i+1+k}(1^i ⊗ m_j ⊗ 1^k) on every basis tuple of length l."""
    if l > A.order:
        raise OrderBoundError(f"relation {l} needs m up to order {l}, structure has {A.order}")
    res = {}
    for x in product(A.generators, repeat=l):
        total = 0
        for j in range(1, l + 1):
            for i in range(0, l - j + 1):
                inner = A.m(j, x[i:i + j])
                if not inner:
                    continue
                k = l - i - j
                for y in A.names(inner):
                    total ^= A.m(i + 1 + k, x[:i] + (y,) + x[i + j:])
        if total:
            res[x] = A.names(total)
    return Report(f"stasheff_{l}", res)


# morphisms ----------------------------------------------------------------------
@dataclass(frozen=True)
class AInfinityMorphism:
    inputs: tuple  # generators of the target DGA A₁
    outputs: tuple  # generators of the source DGA A₂
    tables: Mapping[int, Mapping[tuple, int]]
    order: int

    def phi(self, k: int, args: tuple) -> int:
        if k > self.order:
            raise OrderBoundError(f"φ_{k} requested but the morphism was built to order {self.order}")
        return self.tables.get(k, {}).get(tuple(args), 0)

    def names(self, v: int) -> list[str]:
        return [self.outputs[i] for i in gf2.bits(v)]

    def to_json(self) -> dict:
        return {"order": self.order,
                "phi": {str(k): [{"inputs": list(w), "output": self.names(v)} for w, v in sorted(t.items())]
                        for k, t in sorted(self.tables.items())}}


def build_morphism_components(fa: DgaMorphism, order: int | None = None) -> AInfinityMorphism:
    _require_z2(fa.ring)
    consts = [x for x, p in fa.images.items() if p.constant_part()]
    if consts:
        raise ValueError(f"morphism has constant terms at {consts}; augment first")
    order = default_order(fa.source, fa.target) if order is None else order
    order = max(order, max((p.max_length() for p in fa.images.values()), default=0))
    outs = list(fa.source.generators)
    return AInfinityMorphism(tuple(fa.target.generators), tuple(outs), _tables_from(fa.images, outs, order), order)


def _compositions(k: int):
    """Ordered tuples of positive integers summing to k."""
    if k == 0:
        yield ()
        return
    for first in range(1, k + 1):
        for rest in _compositions(k - first):
            yield (first,) + rest


def check_ainf_morphism(phi: AInfinityMorphism, A1: AInfinityStructure, A2: AInfinityStructure, n: int) -> Report:
    """Residual of the morphism identity on every basis tuple of length n (inputs from A₁)."""
    if n > min(phi.order, A1.order, A2.order):
        raise OrderBoundError(f"identity {n} needs every table through order {n}")
    res = {}
    for x in product(A1.generators, repeat=n):
        lhs = 0
        for p in range(1, n + 1):
            for i in range(0, n - p + 1):
                inner = A1.m(p, x[i:i + p])
                if not inner:
                    continue
                for y in A1.names(inner):
                    lhs ^= phi.phi(n - p + 1, x[:i] + (y,) + x[i + p:])
        rhs = 0
        for comp in _compositions(n):
            pieces, at = [], 0
            for kr in comp:
                v = phi.phi(kr, x[at:at + kr])
                at += kr
                if not v:
                    break
                pieces.append(phi.names(v))
            else:
                for ys in product(*pieces):
                    rhs ^= A2.m(len(comp), ys)
        if lhs ^ rhs:
            res[x] = phi.names(lhs ^ rhs)
    return Report(f"ainf_morphism_{n}", res)


# length filtration -----------------------------------------------------------------
def _lp(p: NcPoly, k: int) -> NcPoly:
    return p.length_part(k)


def _apply_to_letter(p: NcPoly, letter_map, length: int) -> NcPoly:
    """Σ over words w of p and positions i: w[:i] · (letter_map(w[i]) length part) · w[i+1:]."""
    out = NcPoly.zero(p.ring)
    for w, tp, c in p:
        for i, x in enumerate(w):
            mid = letter_map(x).length_part(length)
            if mid:
                out = out + NcPoly.word(w[:i], p.ring, c, tp) * mid * NcPoly.word(w[i + 1:], p.ring)
    return out


def check_length_filtration(fa: DgaMorphism, kmax: int = 4) -> dict[str, Report]:
    """Both length-filtration identities, for every source generator and 1 ≤ j < k ≤ kmax."""
    d1 = fa.target.d
    first, second = {}, {}
    for c in fa.source.generators:
        img = fa.images[c]
        dc = fa.source.differential[c]
        for k in range(2, kmax + 1):
            for j in range(1, k):
                # (∂₁ ∘ Φ^j)^k = Σ (1 ⊗ ∂₁^{k-j+1} ⊗ 1) ∘ Φ^j
                lhs = _lp(d1(_lp(img, j)), k)
                rhs = _apply_to_letter(_lp(img, j), lambda x: fa.target.differential[x], k - j + 1)
                if lhs != rhs:
                    first[(c, j, k)] = lhs - rhs
                # (Φ ∘ ∂₂^j)^k = Σ (Φ^{k₁} ⊗ ⋯ ⊗ Φ^{k_j}) ∘ ∂₂^j
                lhs = _lp(fa(_lp(dc, j)), k)
                rhs = NcPoly.zero(fa.ring)
                for w, tp, coeff in _lp(dc, j):
                    for comp in _compositions(k):
                        if len(comp) != j:
                            continue
                        term = NcPoly.const(coeff, fa.ring, tp)
                        for x, kr in zip(w, comp):
                            term = term * _lp(fa.images[x], kr)
                            if not term:
                                break
                        rhs = rhs + term
                if lhs != rhs:
                    second[(c, j, k)] = lhs - rhs
    return {"differential_after_morphism": Report("filtration_1", first),
            "morphism_after_differential": Report("filtration_2", second)}


# cohomology --------------------------------------------------------------------------
@dataclass
class CohomologyReport:
    dims: dict
    representatives: dict  # degree -> list of cocycles (lists of generator names)
    m2: dict  # (class, class) -> class coordinates, classes named "deg:index"
    higher: dict = field(default_factory=dict)
    caveat: str = ("products m_k for k >= 3 are evaluated on the chosen cocycle representatives; "
                   "they are only well defined on quotients of cohomology")
    induced: dict | None = None
    product_compatible: bool | None = None

    def to_json(self) -> dict:
        out = {
            "dims": {str(k): v for k, v in sorted(self.dims.items())},
            "representatives": {str(k): v for k, v in sorted(self.representatives.items())},
            "m2": {f"{a}*{b}": v for (a, b), v in sorted(self.m2.items())},
        }
        if self.higher:
            out["higher"] = {str(k): v for k, v in sorted(self.higher.items())}
            out["caveat"] = self.caveat
        if self.induced is not None:
            out["induced"] = self.induced
            out["product_compatible"] = self.product_compatible
        return out


class _Cohomology:
    """Cohomology of (span of c*, m₁) in each degree, with coordinates of cocycles."""

    def __init__(self, A: AInfinityStructure):
        self.A = A
        n = len(A.generators)
        idx = {x: i for i, x in enumerate(A.generators)}
        # m1 as columns over the whole basis
        m1 = [A.m(1, (x,)) for x in A.generators]
        self.by_deg: dict[int, list[int]] = {}
        for x in A.generators:
            self.by_deg.setdefault(A.degrees[x], []).append(1 << idx[x])
        self.reps: dict[int, list[int]] = {}
        self.coords: dict[int, gf2.QuotientCoords] = {}
        for deg, basis in sorted(self.by_deg.items()):
            cols = [gf2.apply(m1, b) for b in basis]
            ker = [gf2.apply(basis, v) for v in gf2.kernel(cols)]
            below = self.by_deg.get(deg - 1, [])
            im = [gf2.apply(m1, b) for b in below]
            im = [v for v in im if v]
            reps = gf2.quotient_basis(im, ker)
            self.reps[deg] = reps
            self.coords[deg] = gf2.QuotientCoords(im, reps)
        self.m1 = m1
        self.n = n

    def is_cocycle(self, v: int) -> bool:
        return gf2.apply(self.m1, v) == 0

    def classes(self):
        for deg, reps in sorted(self.reps.items()):
            for i, v in enumerate(reps):
                yield f"{deg}:{i}", deg, v


def _multi(A: AInfinityStructure, k: int, vecs: list[int]) -> int:
    out = 0
    for combo in product(*(gf2.bits(v) for v in vecs)):
        out ^= A.m(k, tuple(A.generators[i] for i in combo))
    return out


def _push(phi: AInfinityMorphism, v: int) -> int:
    """φ₁ applied to a vector over the inputs, as a vector over the outputs."""
    out = 0
    for i in gf2.bits(v):
        out ^= phi.phi(1, (phi.inputs[i],))
    return out


def products_on_cohomology(A: AInfinityStructure, phi: AInfinityMorphism | None = None,
                           A2: AInfinityStructure | None = None, higher: int = 0) -> CohomologyReport:
    H = _Cohomology(A)
    dims = {d: len(r) for d, r in H.reps.items() if r}
    reps = {d: [A.names(v) for v in r] for d, r in H.reps.items() if r}
    classes = list(H.classes())
    m2 = {}
    for (na, da, va), (nb, db, vb) in product(classes, repeat=2):
        if 2 > A.order:
            break
        prod = _multi(A, 2, [va, vb])
        if prod:
            deg = da + db + 1
            m2[(na, nb)] = [f"{deg}:{i}" for i in gf2.bits(H.coords[deg](prod))]
    hi = {}
    for k in range(3, min(higher, A.order) + 1):
        for combo in product(classes, repeat=k):
            out = _multi(A, k, [v for _, _, v in combo])
            if out:
                hi[" * ".join(n for n, _, _ in combo)] = A.names(out)
    rep = CohomologyReport(dims, reps, m2, hi)
    if phi is not None and A2 is not None:
        H2 = _Cohomology(A2)
        induced = {}
        compatible = True
        image = {}
        for name, deg, v in classes:
            w = _push(phi, v)
            if not H2.is_cocycle(w):
                raise ValueError("φ₁ does not map cocycles to cocycles")
            image[name] = w
            induced[name] = [f"{deg}:{i}" for i in gf2.bits(H2.coords[deg](w))]
        for (na, da, va), (nb, db, vb) in product(classes, repeat=2):
            lhs = _push(phi, _multi(A, 2, [va, vb]))
            rhs = _multi(A2, 2, [image[na], image[nb]])
            deg = da + db + 1
            if deg in H2.coords and H2.coords[deg](lhs ^ rhs):
                compatible = False
            elif deg not in H2.coords and (lhs ^ rhs):
                compatible = False
        rep.induced = induced
        rep.product_compatible = compatible
    return rep


def induced_on_cohomology(phi: AInfinityMorphism, A1: AInfinityStructure, A2: AInfinityStructure) -> dict:
    return products_on_cohomology(A1, phi, A2).induced
