"""DGA morphisms between the ends of a cobordism, their augmented and linearized
versions, chain homotopies and the classical constraints on cobordisms.

A morphism goes from the DGA of the upper end (``source``) to the DGA of the
lower end (``target``).  ``kind == "k"`` marks degree +1 maps used as chain
homotopies.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from . import gf2
from ._par import pmap
from .augment import (Augmentation, LinearComplex, augmented_differential, check_augmentation, linearize,
                      packed_columns, specialize, tame_iso)
from .cedga import DGA, Report, check_schema, load_dga
from .errors import AxiomError, SchemaError, UnknownGeneratorError
from .ncalg import Homomorphism, NcPoly, TMode, apply_linear, check_degrees


def same_dga(a: DGA, b: DGA) -> bool:
    return (a.ring is b.ring and a.t_mode is b.t_mode and a.degrees == b.degrees
            and a.differential == b.differential)


@dataclass(frozen=True)
class DgaMorphism:
    source: DGA
    target: DGA
    images: Mapping[str, NcPoly]
    kind: str = "phi"
    name: str = ""
    e1: Augmentation | None = field(default=None, compare=False)  # set on augmented morphisms
    e2: Augmentation | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("phi", "k"):
            raise ValueError("kind must be 'phi' or 'k'")
        if self.source.ring is not self.target.ring:
            raise ValueError("source and target DGAs are over different rings")
        imgs = {}
        for g in self.source.generators:
            if g not in self.images:
                if self.kind == "k":
                    imgs[g] = NcPoly.zero(self.target.ring)
                    continue
                raise UnknownGeneratorError(f"no image given for generator {g!r}")
            p = self.images[g]
            if p.ring is not self.target.ring:
                p = p.change_ring(self.target.ring)
            if self.target.t_mode is not TMode.LAURENT:
                p = p.specialize_t(-1 if self.target.t_mode is TMode.SIGN else 1)
            for w, _, _ in p:
                for letter in w:
                    if letter not in self.target.degrees:
                        raise UnknownGeneratorError(f"image of {g} uses {letter!r}, not a generator of the target")
            imgs[g] = p
        for g in self.images:
            if g not in self.source.degrees:
                raise UnknownGeneratorError(f"image given for {g!r}, not a generator of the source")
        object.__setattr__(self, "images", imgs)

    @property
    def ring(self):
        return self.target.ring

    @property
    def shift(self) -> int:
        return 1 if self.kind == "k" else 0

    @property
    def hom(self) -> Homomorphism:
        if self.kind != "phi":
            raise TypeError("degree +1 maps are not algebra maps")
        cached = self.__dict__.get("_hom")
        if cached is None:
            cached = Homomorphism(self.images, self.ring)
            object.__setattr__(self, "_hom", cached)
        return cached

    def __call__(self, p: NcPoly) -> NcPoly:
        return self.hom(p)

    def image(self, g: str) -> NcPoly:
        return self.images[g]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "source_dga": self.source.to_json(),
            "target_dga": self.target.to_json(),
            "images": {g: self.images[g].to_json() for g in self.source.generators},
        }


def morphism(source: DGA, target: DGA, images: Mapping[str, NcPoly | str], kind: str = "phi",
             name: str = "") -> DgaMorphism:
    imgs = {g: NcPoly.parse(p, target.ring) if isinstance(p, str) else p for g, p in images.items()}
    return DgaMorphism(source, target, imgs, kind, name)


def identity_morphism(g: DGA) -> DgaMorphism:
    return DgaMorphism(g, g, {x: NcPoly.gen(x, g.ring) for x in g.generators}, name="id")


def compose(f: DgaMorphism, g: DgaMorphism) -> DgaMorphism:
    """f ∘ g, where g: A₂ → A₁ and f: A₁ → A₀."""
    if not same_dga(f.source, g.target):
        raise ValueError("cannot compose: the source of the outer map is not the target of the inner map")
    return DgaMorphism(g.source, f.target, {x: f(p) for x, p in g.images.items()},
                       name=f"{f.name}∘{g.name}" if f.name or g.name else "")


# checks ---------------------------------------------------------------------
def check_morphism_degrees(f: DgaMorphism) -> Report:
    res = {}
    for x, p in f.images.items():
        bad = check_degrees(p, f.target.degrees, f.source.degrees[x] + f.shift)
        if bad:
            res[x] = [{"word": list(w), "t_power": tp, "coeff": c, "degree": k} for w, tp, c, k in bad]
    return Report("degrees", res)


def check_chain_map(f: DgaMorphism) -> Report:
    """Residuals Φ(∂₂c) − ∂₁(Φc) per source generator."""
    def one(x):
        return x, f(f.source.differential[x]) - f.target.d(f.images[x])

    return Report("chain_map", {x: r for x, r in pmap(one, f.source.generators) if r})


def pullback_augmentation(f: DgaMorphism, e1: Augmentation, check: bool = True) -> Augmentation:
    """ε₂ = ε₁ ∘ Φ."""
    if check:
        bad = check_augmentation(f.target, e1)
        if bad:
            raise AxiomError(f"not an augmentation of the target: {bad}", bad)
    values = {x: e1(p) for x, p in f.images.items()}
    e2 = Augmentation(values, e1.t_image, f.ring, f.source.name)
    if check:
        bad = check_augmentation(f.source, e2)
        if bad:
            raise AxiomError(f"pulled-back map is not an augmentation of the source: {bad}", bad)
    return e2


def conjugate(f: DgaMorphism, e1: Augmentation, e2: Augmentation) -> dict:
    """Images of φ^{ε₁} ∘ f ∘ φ^{-ε₂} on generators (for K-type maps, φ^{ε₁} ∘ K)."""
    plus = tame_iso(e1, 1)
    out = {}
    for x, p in f.images.items():
        p = p.specialize_t(e1.t_image) if f.target.t_mode is TMode.LAURENT else p
        if f.kind == "phi":
            # f(φ^{-ε₂}(x)) = f(x) - ε₂(x)
            p = p - NcPoly.const(e2.value(x), f.ring)
        out[x] = plus(p)
    return out


def augment_morphism(f: DgaMorphism, e1: Augmentation, e2: Augmentation | None = None,
                     check: bool = True) -> DgaMorphism:
    """Φ^{ε₁} = φ^{ε₁} ∘ Φ ∘ φ^{-ε₂} between the augmented DGAs, with ε₂ = ε₁ ∘ Φ by default."""
    if e2 is None:
        e2 = pullback_augmentation(f, e1, check=check)
    src = augmented_differential(f.source, e2, check=check)
    tgt = augmented_differential(f.target, e1, check=check)
    fa = DgaMorphism(src, tgt, conjugate(f, e1, e2), f.kind, name=f"{f.name}^ε" if f.name else "", e1=e1, e2=e2)
    if check and f.kind == "phi":
        for rep in (check_no_constants(fa), check_chain_map(fa)):
            if not rep.ok:
                raise AxiomError(f"augmented morphism fails the {rep.check} check on {sorted(rep.residuals)}",
                                 rep.to_json()["residuals"])
    return fa


def check_no_constants(fa: DgaMorphism) -> Report:
    return Report("no_constants", {x: p.constant_part() for x, p in fa.images.items() if p.constant_part()})


def augmented_reports(f: DgaMorphism, e1: Augmentation) -> list[Report]:
    """Constant-freeness and commutation with augmented differentials, without raising."""
    fa = augment_morphism(f, e1, check=False)
    return [check_no_constants(fa), check_chain_map(fa)]


# linearization ----------------------------------------------------------------
@dataclass(frozen=True)
class LinearMap:
    source: LinearComplex
    target: LinearComplex
    columns: Mapping[str, NcPoly]  # source generator -> linear combination of target generators
    shift: int = 0

    def apply(self, v: NcPoly) -> NcPoly:
        out = NcPoly.zero(self.target.ring)
        for w, _, c in v:
            out = out + self.columns[w[0]].scale(c)
        return out

    def matrix(self, k: int) -> list[list[int]]:
        rows, cols = self.target.basis(k + self.shift), self.source.basis(k)
        return [[self.columns[c].coeff((r,)) for c in cols] for r in rows]

    def is_identity(self) -> bool:
        return (self.shift == 0 and list(self.source.degrees) == list(self.target.degrees)
                and all(self.columns[x] == NcPoly.gen(x, self.target.ring) for x in self.source.generators))

    def chain_residuals(self) -> dict:
        """(Φ^ℓ ∘ ∂₂^ℓ − ∂₁^ℓ ∘ Φ^ℓ)(c) per generator."""
        out = {}
        for x in self.source.generators:
            r = self.apply(self.source.columns[x]) - self.target.apply(self.columns[x])
            if r:
                out[x] = r
        return out

    def to_json(self) -> dict:
        grades = sorted(set(self.source.degrees.values()))
        return {
            "columns": {x: self.columns[x].to_json() for x in self.source.generators},
            "matrices": {str(k): self.matrix(k) for k in grades},
        }


def linear_part_map(fa: DgaMorphism, src: LinearComplex, tgt: LinearComplex) -> LinearMap:
    return LinearMap(src, tgt, {x: p.linear_part() for x, p in fa.images.items()}, fa.shift)


def linearize_morphism(fa: DgaMorphism, check: bool = True) -> LinearMap:
    """(Φ^{ε₁})^ℓ; checks that it is a chain map of the linearized complexes."""
    rep = check_no_constants(fa)
    if not rep.ok and fa.kind == "phi":
        raise AxiomError("cannot linearize a morphism with constant terms", rep.to_json()["residuals"])
    m = linear_part_map(fa, linearize(fa.source), linearize(fa.target))
    if check:
        res = m.chain_residuals()
        if res:
            raise AxiomError(f"linearized morphism is not a chain map at {sorted(res)}",
                             {x: p.to_json() for x, p in res.items()})
    return m


def linear_chain_report(m: LinearMap) -> Report:
    return Report("linear_chain_map", m.chain_residuals())


def homology_basis(c: LinearComplex, k: int):
    """(cycle representatives, boundaries) in degree k as packed vectors over ``c.basis(k)``."""
    _, _, d_k = packed_columns(c, k)
    _, _, d_up = packed_columns(c, k + 1)
    cycles = gf2.kernel(d_k)
    boundaries = [v for v in d_up if v]
    reps = gf2.quotient_basis(boundaries, cycles)
    return reps, boundaries


def induced_on_homology(m: LinearMap) -> dict:
    """Matrix of the induced map on Z2 homology per degree, in chosen homology bases."""
    if m.shift:
        raise ValueError("homology maps are defined for degree-preserving maps")
    out = {}
    for k in sorted(set(m.source.degrees.values())):
        src_reps, _ = homology_basis(m.source, k)
        tgt_reps, tgt_bd = homology_basis(m.target, k)
        sbasis, tbasis = m.source.basis(k), m.target.basis(k)
        tpos = {x: i for i, x in enumerate(tbasis)}
        coords = gf2.QuotientCoords(tgt_bd, tgt_reps)
        cols = []
        for v in src_reps:
            img = 0
            for i in gf2.bits(v):
                for w, _, c in m.columns[sbasis[i]]:
                    if c % 2:
                        img ^= 1 << tpos[w[0]]
            cols.append(coords(img))
        matrix = [[(col >> r) & 1 for col in cols] for r in range(len(tgt_reps))]
        out[k] = {"source_rank": len(src_reps), "target_rank": len(tgt_reps), "matrix": matrix,
                  "rank": gf2.rank(cols)}
    return out


# chain homotopies -----------------------------------------------------------
class Omega:
    """Ω(c₁⋯c_m) = Σ_j ± Φ₁(c₁⋯c_{j-1}) K(c_j) Φ₂(c_{j+1}⋯c_m), extended linearly.

    Over Z the j-th term carries the Koszul sign (-1)^{|c₁⋯c_{j-1}|}; over Z2
    signs are irrelevant.
    """

    def __init__(self, phi1: Callable, K: Mapping[str, NcPoly], phi2: Callable, degrees: Mapping[str, int], ring):
        self.phi1, self.phi2, self.K, self.degrees, self.ring = phi1, phi2, dict(K), degrees, ring
        self._memo: dict = {}

    def word(self, w: tuple) -> NcPoly:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        out = NcPoly.zero(self.ring)
        deg = 0
        for j, x in enumerate(w):
            k = self.K.get(x)
            if k:
                term = self.phi1(NcPoly.word(w[:j], self.ring)) * k * self.phi2(NcPoly.word(w[j + 1:], self.ring))
                out = out + (term.scale(-1) if deg % 2 and self.ring.value == "z" else term)
            deg += self.degrees[x]
        self._memo[w] = out
        return out

    def __call__(self, p: NcPoly) -> NcPoly:
        return apply_linear(lambda q: self.word(next(iter(q))[0]), p)


def _check_pair(f1: DgaMorphism, f2: DgaMorphism, K: DgaMorphism) -> None:
    if not (same_dga(f1.source, f2.source) and same_dga(f1.target, f2.target)
            and same_dga(K.source, f1.source) and same_dga(K.target, f1.target)):
        raise ValueError("f1, f2 and K must share source and target DGAs")
    if K.kind != "k":
        raise ValueError("K must be a degree +1 map (kind 'k')")
    rep = check_morphism_degrees(K)
    if not rep.ok:
        raise AxiomError(f"K is not of degree +1 on {sorted(rep.residuals)}", rep.residuals)


def build_omega(f1: DgaMorphism, f2: DgaMorphism, K: DgaMorphism) -> Omega:
    _check_pair(f1, f2, K)
    return Omega(f1, K.images, f2, f1.source.degrees, f1.ring)


def augment_omega(f1: DgaMorphism, f2: DgaMorphism, K: DgaMorphism, e1: Augmentation,
                  e2: Augmentation | None = None) -> Omega:
    """Ω^{ε₁} by the direct formula with Φᵢ^{ε₁} and K^{ε₁} = φ^{ε₁} ∘ K ∘ φ^{-ε₂}."""
    _check_pair(f1, f2, K)
    e2 = pullback_augmentation(f1, e1, check=False) if e2 is None else e2
    g1 = Homomorphism(conjugate(f1, e1, e2), f1.ring)
    g2 = Homomorphism(conjugate(f2, e1, e2), f1.ring)
    return Omega(g1, conjugate(K, e1, e2), g2, f1.source.degrees, f1.ring)


def omega_by_conjugation(f1: DgaMorphism, f2: DgaMorphism, K: DgaMorphism, e1: Augmentation,
                         e2: Augmentation | None = None) -> Callable[[NcPoly], NcPoly]:
    """φ^{ε₁} ∘ Ω ∘ φ^{-ε₂}, the second route to Ω^{ε₁}."""
    e2 = pullback_augmentation(f1, e1, check=False) if e2 is None else e2
    om = build_omega(f1, f2, K)
    plus, minus = tame_iso(e1, 1), tame_iso(e2, -1)

    def run(p: NcPoly) -> NcPoly:
        q = om(minus(p))
        if f1.target.t_mode is TMode.LAURENT:
            q = q.specialize_t(e1.t_image)
        return plus(q)

    return run


def omega_route_residual(f1, f2, K, e1, word, e2=None) -> NcPoly:
    w = NcPoly.word(tuple(word), f1.ring)
    return augment_omega(f1, f2, K, e1, e2)(w) - omega_by_conjugation(f1, f2, K, e1, e2)(w)


def homotopy_residuals(f1: DgaMorphism, f2: DgaMorphism, K: DgaMorphism) -> Report:
    """Φ₁ − Φ₂ − (Ω∂₂ + ∂₁Ω) on generators."""
    om = build_omega(f1, f2, K)
    res = {}
    for x in f1.source.generators:
        r = f1.images[x] - f2.images[x] - om(f1.source.differential[x]) - f1.target.d(K.images[x])
        if r:
            res[x] = r
    return Report("homotopy", res)


@dataclass
class HomotopyReport:
    unaugmented: Report
    hypotheses: dict = field(default_factory=dict)  # name -> {"ok": bool, "detail": ...}
    linearized: Report | None = None
    skipped: str = ""

    @property
    def hypotheses_ok(self) -> bool:
        return all(h["ok"] for h in self.hypotheses.values())

    @property
    def ok(self) -> bool:
        if not self.unaugmented.ok:
            return False
        if self.hypotheses and not self.hypotheses_ok:
            return False
        return self.linearized is None or self.linearized.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok, "unaugmented": self.unaugmented.to_json()}
        if self.hypotheses:
            out["hypotheses"] = self.hypotheses
        if self.linearized is not None:
            out["linearized"] = self.linearized.to_json()
        if self.skipped:
            out["skipped"] = self.skipped
        return out


def degree_minus_one_quadratics(ga: DGA) -> dict:
    """Length-2 words of the differential that contain a generator of degree -1."""
    out = {}
    for x, p in ga.differential.items():
        bad = [" ".join(w) for w, _, _ in p if len(w) == 2 and any(ga.degrees[y] == -1 for y in w)]
        if bad:
            out[x] = bad
    return out


def check_homotopy(f1: DgaMorphism, f2: DgaMorphism, K: DgaMorphism, e1: Augmentation | None = None) -> HomotopyReport:
    rep = HomotopyReport(homotopy_residuals(f1, f2, K))
    if e1 is None:
        return rep
    e2a = pullback_augmentation(f1, e1, check=False)
    e2b = pullback_augmentation(f2, e1, check=False)
    agree = e2a.values == e2b.values
    rep.hypotheses["pullbacks_agree"] = {
        "ok": agree,
        "detail": {"e1_after_f1": e2a.to_json()["values"], "e1_after_f2": e2b.to_json()["values"]},
    }
    bad = {}
    if agree:
        bad = degree_minus_one_quadratics(augmented_differential(f1.source, e2a, check=False))
    rep.hypotheses["no_degree_minus_one_quadratics"] = {"ok": agree and not bad, "detail": bad}
    if not rep.hypotheses_ok:
        failed = [k for k, h in rep.hypotheses.items() if not h["ok"]]
        rep.skipped = "linearized check skipped: hypothesis failed: " + ", ".join(failed)
        return rep
    rep.linearized = linearized_homotopy_residuals(f1, f2, K, e1, e2a)
    return rep


def linearized_homotopy_residuals(f1, f2, K, e1, e2=None) -> Report:
    """(Φ₁^{ε₁})^ℓ − (Φ₂^{ε₁})^ℓ − ((Ω^{ε₁})^ℓ ∂_{ε₂}^ℓ + ∂_{ε₁}^ℓ (Ω^{ε₁})^ℓ) on generators."""
    e2 = pullback_augmentation(f1, e1, check=False) if e2 is None else e2
    src = linearize(augmented_differential(f1.source, e2, check=False))
    tgt = linearize(augmented_differential(f1.target, e1, check=False))
    p1 = linear_part_map(augment_morphism(f1, e1, e2, check=False), src, tgt)
    p2 = linear_part_map(augment_morphism(f2, e1, e2, check=False), src, tgt)
    kl = LinearMap(src, tgt, {x: p.linear_part() for x, p in conjugate(K, e1, e2).items()}, 1)
    res = {}
    for x in src.generators:
        r = p1.columns[x] - p2.columns[x] - kl.apply(src.columns[x]) - tgt.apply(kl.columns[x])
        if r:
            res[x] = r
    return Report("linearized_homotopy", res)


def perturb_by_homotopy(f2: DgaMorphism, K: DgaMorphism | Mapping[str, NcPoly | str]) -> DgaMorphism:
    """The map f₁ with f₁ − f₂ = Ω∂ + ∂Ω on generators, for a given K.

    Ω involves f₁ on the letters of ∂c, so generators are processed in an order
    where every letter of ∂c comes first; a cyclic dependency is an error.
    """
    src, tgt = f2.source, f2.target
    if not isinstance(K, DgaMorphism):
        K = morphism(src, tgt, K, kind="k")
    order = _dependency_order(src)
    images: dict[str, NcPoly] = {}
    for x in order:
        om = Omega(Homomorphism(dict(images), f2.ring), K.images, f2, src.degrees, f2.ring)
        images[x] = f2.images[x] + om(src.differential[x]) + tgt.d(K.images[x])
    return DgaMorphism(src, tgt, images, name=f"{f2.name}+dK" if f2.name else "")


def _dependency_order(g: DGA) -> list[str]:
    deps = {x: set(p.generators()) for x, p in g.differential.items()}
    order, done, busy = [], set(), set()

    def visit(x):
        if x in done:
            return
        if x in busy:
            raise ValueError("the differential has a cyclic dependency; no triangular order exists")
        busy.add(x)
        for y in sorted(deps[x]):
            visit(y)
        busy.discard(x)
        done.add(x)
        order.append(x)

    for x in g.generators:
        visit(x)
    return order


# constraints ------------------------------------------------------------------
@dataclass(frozen=True)
class CobordismConstraints:
    tb1: int
    tb2: int
    r1: int
    r2: int
    euler_characteristic: int


def check_constraints(c: CobordismConstraints) -> Report:
    res = {}
    if c.tb2 - c.tb1 != -c.euler_characteristic:
        res["tb"] = (f"tb2 - tb1 = {c.tb2} - ({c.tb1}) = {c.tb2 - c.tb1}, "
                     f"but -chi = {-c.euler_characteristic}")
    if c.r1 != c.r2:
        res["r"] = f"r1 = {c.r1} differs from r2 = {c.r2}"
    notes = [f"tb2 - tb1 = {c.tb2 - c.tb1}, -chi = {-c.euler_characteristic}", f"r1 = {c.r1}, r2 = {c.r2}"]
    if c.euler_characteristic == 0:
        notes.append("concordance: the ends must have equal tb")
    return Report("constraints", res, notes)


# serialisation ----------------------------------------------------------------
def load_morphism(source, checked: bool = True, base: Path | None = None) -> DgaMorphism:
    """Load a morphism document; ``source_dga``/``target_dga`` are inline DGAs or paths."""
    if isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        base = base or path.parent
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    check_schema(doc, "morphism.schema.json")
    base = base or Path(".")

    def dga(ref):
        if isinstance(ref, str):
            return load_dga(base / ref, checked)
        return load_dga(ref, checked)

    src, tgt = dga(doc["source_dga"]), dga(doc["target_dga"])
    try:
        imgs = {g: NcPoly.from_json(p, tgt.ring) for g, p in doc["images"].items()}
        return DgaMorphism(src, tgt, imgs, doc.get("kind", "phi"), doc.get("name", ""))
    except UnknownGeneratorError as exc:
        raise SchemaError(str(exc)) from None
