"""Combinatorial Lagrangian projections.

A diagram is a 4-valent planar graph given by a rotation system: each crossing
lists its four incident edges counterclockwise, and one of the two strands
through it is marked as the overstrand (larger z).  Each edge id occurs in
exactly two crossing slots.

Darts are ``(edge, k)``: the edge traversed towards its ``k``-th end, where the
ends of an edge are the two ``(crossing, slot)`` pairs in file order.

Rotation is tracked in quarter turns with every crossing treated as a right
angle; turning along individual edges is not determined by the combinatorics,
but turning along closed walks is, and every quantity we report is of that
kind.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from ..errors import DiagramError, GradingError

Slot = tuple  # (crossing id, slot index)
Dart = tuple  # (edge id, end index)


@dataclass(frozen=True)
class Crossing:
    id: str
    edges: tuple  # four edge ids, counterclockwise
    over: int  # slots over and over + 2 carry the overstrand

    def is_over(self, slot: int) -> bool:
        return slot % 2 == self.over % 2


@dataclass(frozen=True)
class LagrangianDiagram:
    crossings: tuple  # tuple[Crossing, ...]
    basepoint: str
    orient: Dart  # one dart pointing along the knot orientation
    outer: Dart  # the unbounded face lies to the left of this dart
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        self._validate()

    # structure ----------------------------------------------------------
    @cached_property
    def by_id(self) -> dict:
        return {c.id: c for c in self.crossings}

    @cached_property
    def ends(self) -> dict:
        out: dict[str, list] = {}
        for c in self.crossings:
            for i, e in enumerate(c.edges):
                out.setdefault(e, []).append((c.id, i))
        return out

    @property
    def edges(self) -> list[str]:
        return list(self.ends)

    def _validate(self) -> None:
        if not self.crossings:
            raise DiagramError("diagram has no crossings")
        seen = set()
        for c in self.crossings:
            if c.id in seen:
                raise DiagramError(f"duplicate crossing id {c.id!r}")
            seen.add(c.id)
            if len(c.edges) != 4:
                raise DiagramError(f"crossing {c.id} is not 4-valent ({len(c.edges)} edges)")
        for e, ends in self.ends.items():
            if len(ends) == 1:
                raise DiagramError(f"dangling edge {e!r}: it occurs in only one crossing slot")
            if len(ends) > 2:
                raise DiagramError(f"edge {e!r} occurs in {len(ends)} crossing slots")
        if self.basepoint not in self.ends:
            raise DiagramError(f"basepoint edge {self.basepoint!r} does not exist")
        for label, dart in (("orientation", self.orient), ("outer face", self.outer)):
            if dart[0] not in self.ends:
                raise DiagramError(f"{label} refers to unknown edge {dart[0]!r}")
        if not self._connected():
            raise DiagramError("diagram is not connected")
        v, e, f = len(self.crossings), len(self.ends), len(self.faces)
        if v - e + f != 2:
            raise DiagramError(f"rotation system is not planar: V - E + F = {v - e + f}")
        if len(self.knot_cycle) != e:
            raise DiagramError("diagram has more than one component; only knots are supported")

    def _connected(self) -> bool:
        adj: dict[str, set] = {c.id: set() for c in self.crossings}
        for (a, _), (b, _) in self.ends.values():
            adj[a].add(b)
            adj[b].add(a)
        start = self.crossings[0].id
        stack, seen = [start], {start}
        while stack:
            for n in adj[stack.pop()]:
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        return len(seen) == len(adj)

    # darts --------------------------------------------------------------
    def head(self, d: Dart) -> Slot:
        return self.ends[d[0]][d[1]]

    def tail(self, d: Dart) -> Slot:
        return self.ends[d[0]][1 - d[1]]

    @staticmethod
    def reverse(d: Dart) -> Dart:
        return (d[0], 1 - d[1])

    def leave(self, crossing: str, slot: int) -> Dart:
        """Dart leaving ``crossing`` through ``slot``."""
        e = self.by_id[crossing].edges[slot % 4]
        m = self.ends[e].index((crossing, slot % 4))
        return (e, 1 - m)

    def straight(self, d: Dart) -> Dart:
        x, i = self.head(d)
        return self.leave(x, i + 2)

    def turn_left(self, d: Dart) -> Dart:
        x, i = self.head(d)
        return self.leave(x, i - 1)

    @cached_property
    def faces(self) -> list[tuple]:
        """Faces as cyclic dart sequences with the face on the left."""
        done: set = set()
        out = []
        for e in self.ends:
            for k in (0, 1):
                d = (e, k)
                if d in done:
                    continue
                cyc = []
                while d not in done:
                    done.add(d)
                    cyc.append(d)
                    d = self.turn_left(d)
                out.append(tuple(cyc))
        return out

    @cached_property
    def left_face(self) -> dict:
        return {d: i for i, f in enumerate(self.faces) for d in f}

    @property
    def outer_face(self) -> int:
        return self.left_face[self.outer]

    def quadrant_face(self, crossing: str, q: int) -> int:
        """Face occupying quadrant ``q`` (between slots q and q+1) of ``crossing``."""
        return self.left_face[self.reverse(self.leave(crossing, q + 1))]

    def quadrant_positive(self, crossing: str, q: int) -> bool:
        # positive (Reeb sign) quadrants sit counterclockwise after an overstrand slot
        return self.by_id[crossing].is_over(q)

    # orientation -------------------------------------------------------
    @cached_property
    def knot_cycle(self) -> list:
        """Darts of the knot in orientation order, starting at ``orient``."""
        cyc = [self.orient]
        d = self.straight(self.orient)
        while d != self.orient:
            if len(cyc) > 2 * len(self.ends):
                break
            cyc.append(d)
            d = self.straight(d)
        return cyc

    @cached_property
    def oriented(self) -> set:
        return set(self.knot_cycle)

    def reversed_orientation(self) -> "LagrangianDiagram":
        return LagrangianDiagram(self.crossings, self.basepoint, self.reverse(self.orient), self.outer,
                                 name=self.name, meta=dict(self.meta))

    def crossing_signs(self) -> dict:
        entering: dict[str, dict] = {c.id: {} for c in self.crossings}
        for d in self.knot_cycle:
            x, i = self.head(d)
            over = self.by_id[x].is_over(i)
            entering[x]["over" if over else "under"] = i
        out = {}
        for c in self.crossings:
            o, u = entering[c.id]["over"], entering[c.id]["under"]
            out[c.id] = 1 if u == (o + 1) % 4 else -1
        return out

    def writhe(self) -> int:
        return sum(self.crossing_signs().values())

    # quarter-turn bookkeeping -----------------------------------------
    @cached_property
    def edge_turning(self) -> dict:
        """A solution of the face turning equations, per dart ``(e, 1)``, in quarter turns."""
        import sympy

        edges = list(self.ends)
        col = {e: j for j, e in enumerate(edges)}
        rows, rhs = [], []
        outer = self.outer_face
        for fi, f in enumerate(self.faces):
            row = [0] * len(edges)
            for e, k in f:
                row[col[e]] += 1 if k == 1 else -1
            rows.append(row)
            rhs.append((-4 if fi == outer else 4) - len(f))
        A = sympy.Matrix(rows)
        b = sympy.Matrix(rhs)
        try:
            sol, params = A.gauss_jordan_solve(b)
        except ValueError:
            raise DiagramError("face turning equations are inconsistent; is the outer face correct?") from None
        if params.shape[0]:
            sol = sol.subs({p: 0 for p in params})
        return {e: Fraction(int(sympy.fraction(sol[col[e]])[0]), int(sympy.fraction(sol[col[e]])[1]))
                for e in edges}

    def turning(self, d: Dart) -> Fraction:
        t = self.edge_turning[d[0]]
        return t if d[1] == 1 else -t

    def rotation_number(self) -> int:
        total = sum(self.turning(d) for d in self.knot_cycle)
        r = total / 4
        if r.denominator != 1:
            raise DiagramError(f"non-integral rotation number {r}")
        return int(r)

    def tb(self) -> int:
        return self.writhe()

    # gradings ----------------------------------------------------------
    def capping_rotation(self, crossing: str) -> Fraction:
        """Quarter turns along the knot from the overcrossing to the undercrossing, avoiding the basepoint."""
        cyc = self.knot_cycle
        n = len(cyc)
        over_at = under_at = None
        for k, d in enumerate(cyc):
            x, i = self.head(d)
            if x == crossing:
                if self.by_id[x].is_over(i):
                    over_at = k
                else:
                    under_at = k
        forward = [cyc[(over_at + 1 + j) % n] for j in range((under_at - over_at) % n)]
        if all(d[0] != self.basepoint for d in forward):
            return sum((self.turning(d) for d in forward), Fraction(0))
        backward = [cyc[(under_at + 1 + j) % n] for j in range((over_at - under_at) % n)]
        return -sum((self.turning(d) for d in backward), Fraction(0))

    def chord_gradings(self) -> dict:
        r = self.rotation_number()
        if r != 0:
            raise GradingError(f"integer gradings need rotation number 0, got r = {r}")
        out = {}
        for c in self.crossings:
            rot = self.capping_rotation(c.id)
            deg = (rot - 1) / 2  # 2 * (rot / 4) - 1/2
            if deg.denominator != 1:
                raise DiagramError(f"capping path of {c.id} has non-integral grading {deg}")
            out[c.id] = int(deg)
        return out

    # serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        signs = self.crossing_signs()
        out = {
            "kind": "lagrangian",
            "name": self.name,
            "crossings": [
                {"id": c.id, "edges": list(c.edges), "over": [c.over % 2, c.over % 2 + 2], "sign": signs[c.id]}
                for c in self.crossings
            ],
            "basepoint": self.basepoint,
            "orient": _dart_json(self, self.orient),
            "outer": _dart_json(self, self.outer),
            "faces": len(self.faces),
            "tb": self.tb(),
            "r": self.rotation_number(),
        }
        if out["r"] == 0:
            out["gradings"] = self.chord_gradings()
        return out


def _dart_json(d: LagrangianDiagram, dart: Dart) -> dict:
    return {"edge": dart[0], "toward": list(d.head(dart))}
