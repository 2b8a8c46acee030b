"""The Chekanov–Eliashberg DGA of a diagram, and DGAs supplied as data."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Mapping

from ._par import pmap
from .diagram.disks import Disk, enumerate_disks
from .diagram.front import FrontDiagram
from .diagram.lagrangian import LagrangianDiagram
from .errors import AxiomError, SchemaError, UnknownGeneratorError
from .ncalg import MIXED, Derivation, NcPoly, Ring, TMode, check_degrees, grade


@dataclass(frozen=True)
class DGA:
    ring: Ring
    t_mode: TMode
    degrees: Mapping[str, int]  # generator -> degree, in generator order
    differential: Mapping[str, NcPoly]
    name: str = ""
    provenance: str = "user-supplied"

    def __post_init__(self):
        ring, mode = Ring(self.ring), TMode(self.t_mode)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "t_mode", mode)
        object.__setattr__(self, "degrees", dict(self.degrees))
        diff = {}
        for g in self.degrees:
            p = self.differential.get(g, NcPoly.zero(ring))
            if p.ring is not ring:
                p = p.change_ring(ring)
            if mode is TMode.COLLAPSED:
                p = p.specialize_t(1)
            elif mode is TMode.SIGN:
                p = p.specialize_t(-1)
            diff[g] = p
        for g, p in self.differential.items():
            if g not in self.degrees:
                raise UnknownGeneratorError(f"differential given for unknown generator {g!r}")
            for w, _, _ in p:
                for letter in w:
                    if letter not in self.degrees:
                        raise UnknownGeneratorError(f"∂{g} uses unknown generator {letter!r}")
        object.__setattr__(self, "differential", diff)

    @property
    def generators(self) -> list[str]:
        return list(self.degrees)

    @cached_property
    def d(self) -> Derivation:
        return Derivation(self.differential, self.degrees, self.ring)

    def __call__(self, p: NcPoly) -> NcPoly:
        return self.d(p)

    def poly(self, text: str) -> NcPoly:
        return NcPoly.parse(text, self.ring)

    def gen(self, g: str) -> NcPoly:
        if g not in self.degrees:
            raise UnknownGeneratorError(f"unknown generator {g!r}")
        return NcPoly.gen(g, self.ring)

    def max_word_length(self) -> int:
        return max((p.max_length() for p in self.differential.values()), default=0)

    def degree_of(self, p: NcPoly):
        return grade(p, self.degrees)

    def with_differential(self, differential: Mapping[str, NcPoly], name: str | None = None) -> "DGA":
        return DGA(self.ring, self.t_mode, self.degrees, differential,
                   name=self.name if name is None else name, provenance=self.provenance)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "provenance": self.provenance,
            "ring": self.ring.value,
            "t_mode": self.t_mode.value,
            "generators": [{"id": g, "degree": k} for g, k in self.degrees.items()],
            "differential": {g: self.differential[g].to_json() for g in self.degrees},
        }


# construction from diagrams ---------------------------------------------
def differential_from_disks(disks: list[Disk], generators, ring: Ring, t_mode: TMode) -> dict:
    diff = {g: NcPoly.zero(ring) for g in generators}
    for k in disks:
        tp = k.t_power if t_mode is TMode.LAURENT else 0
        diff[k.positive] = diff[k.positive] + NcPoly.word(k.word, ring, t_power=tp)
    return diff


def build_dga(d: LagrangianDiagram | FrontDiagram, ring: Ring | str = Ring.Z2,
              t_mode: TMode | str = TMode.COLLAPSED, disks: list[Disk] | None = None) -> DGA:
    """Generators are the crossings, graded by rotation; ∂ counts disks with each positive corner."""
    ring, t_mode = Ring(ring), TMode(t_mode)
    if ring is not Ring.Z2:
        raise ValueError("diagram DGAs are built over z2 only; signs over Z are not computed from diagrams")
    if t_mode is TMode.SIGN:
        raise ValueError("over z2 the sign mode coincides with 'collapsed'; use collapsed or laurent")
    if isinstance(d, FrontDiagram):
        d = d.resolve()
    degrees = d.chord_gradings()
    disks = enumerate_disks(d) if disks is None else disks
    diff = differential_from_disks(disks, degrees, ring, t_mode)
    return DGA(ring, t_mode, degrees, diff, name=d.name, provenance=f"diagram:{d.name or 'unnamed'}")


# axiom checks ------------------------------------------------------------
@dataclass
class Report:
    """Residuals keyed by generator (or other label); empty means the check passed."""
    check: str
    residuals: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.residuals

    def to_json(self) -> dict:
        res = {}
        for k, v in self.residuals.items():
            res[str(k)] = v.to_json() if isinstance(v, NcPoly) else v
        out = {"check": self.check, "ok": self.ok, "residuals": res}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def check_d_squared(g: DGA) -> Report:
    def one(x):
        return x, g.d(g.differential[x])

    res = {x: r for x, r in pmap(one, g.generators) if r}
    return Report("d_squared", res)


def check_grading(g: DGA) -> Report:
    """Every term of ∂c must have degree |c| - 1 (t has degree 0)."""
    res = {}
    for x, p in g.differential.items():
        bad = check_degrees(p, g.degrees, g.degrees[x] - 1)
        if bad:
            res[x] = [{"word": list(w), "t_power": tp, "coeff": c, "degree": k} for w, tp, c, k in bad]
    return Report("grading", res)


def validate(g: DGA) -> DGA:
    for rep in (check_grading(g), check_d_squared(g)):
        if not rep.ok:
            raise AxiomError(f"DGA {g.name or ''} fails the {rep.check} check on {sorted(rep.residuals)}",
                             rep.to_json()["residuals"])
    return g


# serialisation ------------------------------------------------------------
def schema(name: str) -> dict:
    return json.loads(resources.files("legdga.schemas").joinpath(name).read_text())


def check_schema(doc, name: str) -> None:
    import jsonschema

    try:
        jsonschema.validate(doc, schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{name}: {where}: {exc.message}") from None


def dga_from_json(doc: dict, checked: bool = True) -> DGA:
    check_schema(doc, "dga.schema.json")
    ring = Ring(doc["ring"])
    ids = [x["id"] for x in doc["generators"]]
    if len(set(ids)) != len(ids):
        raise SchemaError("duplicate generator ids")
    degrees = {x["id"]: x["degree"] for x in doc["generators"]}
    try:
        diff = {g: NcPoly.from_json(p, ring) for g, p in doc["differential"].items()}
        g = DGA(ring, TMode(doc["t_mode"]), degrees, diff, name=doc.get("name", ""),
                provenance=doc.get("provenance", "user-supplied"))
    except UnknownGeneratorError as exc:
        raise SchemaError(str(exc)) from None
    return validate(g) if checked else g


def load_dga(source, checked: bool = True) -> DGA:
    """Load from a path, a JSON string or an already-parsed document."""
    if isinstance(source, DGA):
        return validate(source) if checked else source
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text() if _is_path(source) else str(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    return dga_from_json(doc, checked)


def save_dga(g: DGA, path=None) -> str:
    text = json.dumps(g.to_json(), indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def _is_path(source) -> bool:
    if isinstance(source, Path):
        return True
    s = str(source)
    return not s.lstrip().startswith("{") and Path(s).exists()


__all__ = ["DGA", "Report", "build_dga", "check_d_squared", "check_grading", "validate",
           "load_dga", "save_dga", "dga_from_json", "MIXED"]
