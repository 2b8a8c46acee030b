"""Augmentations, augmented differentials and linearized contact homology."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from . import gf2
from .cedga import DGA
from .errors import AxiomError, NotAFieldError, UnknownGeneratorError
from .ncalg import Derivation, Homomorphism, NcPoly, Ring, TMode, evaluate


@dataclass(frozen=True)
class Augmentation:
    values: Mapping[str, int]  # generators not listed map to 0
    t_image: int = 1
    ring: Ring = Ring.Z2
    dga: str = ""
    index: int | None = None

    def __post_init__(self):
        ring = Ring(self.ring)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "values", {g: ring.reduce(v) for g, v in self.values.items() if ring.reduce(v)})
        if self.t_image not in (1, -1):
            raise ValueError("the image of t must be 1 or -1")

    def __call__(self, p: NcPoly) -> int:
        return evaluate(p, self.values, self.t_image, self.ring)

    def value(self, g: str) -> int:
        return self.values.get(g, 0)

    def support(self) -> list[str]:
        return sorted(self.values)

    def to_json(self) -> dict:
        out = {"values": dict(sorted(self.values.items())), "t_image": self.t_image}
        if self.index is not None:
            out = {"index": self.index, **out}
        return out


def zero_augmentation(g: DGA, t_image: int = 1) -> Augmentation:
    return Augmentation({}, t_image, g.ring, g.name)


def default_t_image(g: DGA) -> int:
    # over Z2 the choice is immaterial; over Z the sign mode fixes t = -1
    return -1 if g.ring is Ring.Z and g.t_mode is not TMode.COLLAPSED else 1


def check_augmentation(g: DGA, e: Augmentation) -> dict:
    """Problems with ``e`` as an augmentation of ``g``: {generator: reason}."""
    bad = {}
    for x, v in e.values.items():
        if x not in g.degrees:
            raise UnknownGeneratorError(f"augmentation assigns a value to unknown generator {x!r}")
        if v and g.degrees[x] != 0:
            bad[x] = f"nonzero value on a generator of degree {g.degrees[x]}"
    for x, p in g.differential.items():
        if e(p):
            bad.setdefault(x, f"ε(∂{x}) = {e(p)}")
    return bad


def is_augmentation(g: DGA, e: Augmentation) -> bool:
    return not check_augmentation(g, e)


def make_augmentation(g: DGA, values: Mapping[str, int], t_image: int | None = None) -> Augmentation:
    e = Augmentation(values, default_t_image(g) if t_image is None else t_image, g.ring, g.name)
    bad = check_augmentation(g, e)
    if bad:
        raise AxiomError(f"not an augmentation: {bad}", bad)
    return e


def enumerate_augmentations(g: DGA, t_image: int | None = None) -> list[Augmentation]:
    """All Z2-valued augmentations, by brute force over degree-0 generators.

    Assignment order: the degree-0 generators in generator order read as the
    binary digits of the index, most significant first.
    """
    if not g.ring.is_field:
        raise NotAFieldError("exhaustive augmentation search needs a finite field; "
                             "supply Z-valued augmentations explicitly")
    t_image = 1 if t_image is None else t_image
    zero_deg = [x for x, k in g.degrees.items() if k == 0]
    constraints = [p for p in g.differential.values() if p]
    out = []
    for bits in product((0, 1), repeat=len(zero_deg)):
        values = {x: b for x, b in zip(zero_deg, bits) if b}
        if all(evaluate(p, values, t_image, g.ring) == 0 for p in constraints):
            out.append(Augmentation(values, t_image, g.ring, g.name, index=len(out)))
    return out


def specialize(g: DGA, t_image: int) -> DGA:
    """Set t to ±1; the result is in collapsed or sign mode."""
    if g.t_mode is TMode.LAURENT:
        mode = TMode.COLLAPSED if t_image == 1 else TMode.SIGN
        return DGA(g.ring, mode, g.degrees, {x: p.specialize_t(t_image) for x, p in g.differential.items()},
                   name=g.name, provenance=g.provenance)
    return g


def tame_iso(e: Augmentation, sign: int = 1, generators=None) -> Homomorphism:
    """φ^{±ε}: c ↦ c ± ε(c), fixing constants."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    gens = e.values if generators is None else generators
    images = {x: NcPoly.gen(x, e.ring) + NcPoly.const(sign * e.value(x), e.ring) for x in gens}
    return Homomorphism(images, e.ring)


def augmented_differential(g: DGA, e: Augmentation, check: bool = True) -> DGA:
    """∂_ε = φ^ε ∘ ∂ ∘ φ^{-ε}, after specialising t to ε(t)."""
    if check:
        bad = check_augmentation(g, e)
        if bad:
            raise AxiomError(f"not an augmentation of {g.name or 'the DGA'}: {bad}", bad)
    h = specialize(g, e.t_image)
    plus, minus = tame_iso(e, 1), tame_iso(e, -1)
    diff = {x: plus(h.d(minus(NcPoly.gen(x, g.ring)))) for x in g.degrees}
    return h.with_differential(diff, name=f"{g.name}^ε" if g.name else "")


def leibniz_residual(g: DGA, e: Augmentation, word) -> NcPoly:
    """∂_ε(c₁⋯c_m) computed by conjugation minus its signed Leibniz expansion."""
    return leibniz_residuals(g, e, [word]).get(tuple(word), NcPoly.zero(g.ring))


def leibniz_residuals(g: DGA, e: Augmentation, words) -> dict:
    """Nonzero Leibniz residuals over many words, sharing one ∂_ε."""
    ga = augmented_differential(g, e, check=False)
    h = specialize(g, e.t_image)
    plus, minus = tame_iso(e, 1), tame_iso(e, -1)
    dl = Derivation(ga.differential, ga.degrees, ga.ring)
    out = {}
    for word in words:
        w = NcPoly.word(tuple(word), g.ring)
        r = plus(h.d(minus(w))) - dl(w)
        if r:
            out[tuple(word)] = r
    return out


# linearization ------------------------------------------------------------
@dataclass(frozen=True)
class LinearComplex:
    """Free graded module on the generators with the linear part of a constant-free differential."""
    ring: Ring
    degrees: Mapping[str, int]
    columns: Mapping[str, NcPoly]  # generator -> linear combination of generators
    name: str = ""

    @property
    def generators(self) -> list[str]:
        return list(self.degrees)

    def basis(self, k: int) -> list[str]:
        return [x for x, d in self.degrees.items() if d == k]

    def grades(self) -> list[int]:
        return sorted(set(self.degrees.values()))

    def matrix(self, k: int) -> list[list[int]]:
        """Matrix of the differential from degree k to degree k - 1 (rows: targets)."""
        rows, cols = self.basis(k - 1), self.basis(k)
        return [[self.columns[c].coeff((r,)) for c in cols] for r in rows]

    def apply(self, v: NcPoly) -> NcPoly:
        out = NcPoly.zero(self.ring)
        for w, _, c in v:
            out = out + self.columns[w[0]].scale(c)
        return out

    def square_residuals(self) -> dict:
        return {x: r for x in self.generators if (r := self.apply(self.columns[x]))}

    def euler_characteristic(self) -> int:
        return sum((-1) ** (d % 2) for d in self.degrees.values())

    def to_json(self) -> dict:
        return {
            "generators": [{"id": x, "degree": d} for x, d in self.degrees.items()],
            "differential": {x: self.columns[x].to_json() for x in self.generators},
        }


def linearize(ga: DGA) -> LinearComplex:
    consts = {x: p.constant_part() for x, p in ga.differential.items() if p.constant_part()}
    if consts:
        raise AxiomError(f"cannot linearize: constant terms in the differential of {sorted(consts)}", consts)
    cols = {x: p.specialize_t(1).linear_part() if ga.t_mode is TMode.LAURENT else p.linear_part()
            for x, p in ga.differential.items()}
    return LinearComplex(ga.ring, dict(ga.degrees), cols, ga.name)


def packed_columns(c: LinearComplex, k: int) -> tuple[list[str], list[str], list[int]]:
    """Z2 matrix from degree k to k - 1 as packed columns."""
    src, dst = c.basis(k), c.basis(k - 1)
    pos = {x: i for i, x in enumerate(dst)}
    cols = [gf2.pack(pos[w[0]] for w, _, _ in c.columns[x]) for x in src]
    return src, dst, cols


@dataclass(frozen=True)
class Poincare:
    ranks: Mapping[int, int] = field(default_factory=dict)  # degree -> rank, zero ranks omitted

    def __post_init__(self):
        object.__setattr__(self, "ranks", {k: v for k, v in sorted(self.ranks.items()) if v})

    def __str__(self) -> str:
        if not self.ranks:
            return "0"
        parts = []
        for k, v in self.ranks.items():
            mono = "1" if k == 0 else ("z" if k == 1 else f"z^{k}")
            parts.append(mono if v == 1 else (str(v) if k == 0 else f"{v} {mono}"))
        return " + ".join(parts)

    def __hash__(self):
        return hash(tuple(self.ranks.items()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * v for k, v in self.ranks.items())

    def to_json(self) -> dict:
        return {str(k): v for k, v in self.ranks.items()}


def homology_ranks(c: LinearComplex) -> dict[int, int]:
    if not c.ring.is_field:
        raise NotAFieldError("homology ranks are computed over Z2 only")
    rank = {}
    for k in set(c.degrees.values()) | {d + 1 for d in c.degrees.values()}:
        _, _, cols = packed_columns(c, k)
        rank[k] = gf2.rank(cols)
    return {k: len(c.basis(k)) - rank.get(k, 0) - rank.get(k + 1, 0) for k in c.grades()}


def lch(c: LinearComplex) -> Poincare:
    return Poincare(homology_ranks(c))


def lch_of(g: DGA, e: Augmentation) -> Poincare:
    return lch(linearize(augmented_differential(g, e)))


def lch_multiset(g: DGA) -> list[Poincare]:
    return sorted((lch_of(g, e) for e in enumerate_augmentations(g)), key=lambda p: sorted(p.ranks.items()))
