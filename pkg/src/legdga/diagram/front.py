"""Front diagrams as left-to-right sweeps, and their resolution.

A front is a list of events.  Strand positions count from the bottom, starting
at 0, and refer to the state just before the event:

* ``L p``  left cusp; two new strands appear at positions p, p+1
* ``X p``  crossing of the strands at positions p and p+1
* ``R p``  right cusp joining the strands at positions p and p+1

Resolving keeps every front crossing and replaces every right cusp by a small
loop with one crossing; the strand of more negative slope is the overstrand.
Resolved crossings list their slots as SW, SE, NE, NW.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..errors import DiagramError, GradingError
from .lagrangian import Crossing, LagrangianDiagram


@dataclass(frozen=True)
class Event:
    kind: str  # "L", "X" or "R"
    pos: int
    label: str | None = None


@dataclass(frozen=True)
class FrontDiagram:
    events: tuple
    basepoint: tuple | None = None  # (event index, position after that event)
    orient: tuple | None = None  # (event index, position after it, +1 rightward / -1 leftward)
    name: str = ""

    def __post_init__(self):
        self._check()

    def _check(self) -> None:
        if not self.events:
            raise DiagramError("front has no events")
        n = 0
        for k, ev in enumerate(self.events):
            if ev.kind not in ("L", "X", "R"):
                raise DiagramError(f"event {k}: unknown kind {ev.kind!r}")
            if ev.kind == "L":
                if not 0 <= ev.pos <= n:
                    raise DiagramError(f"event {k}: left cusp position {ev.pos} outside 0..{n}")
                n += 2
            else:
                if not 0 <= ev.pos <= n - 2:
                    raise DiagramError(f"event {k}: position {ev.pos} needs strands {ev.pos} and {ev.pos + 1}, "
                                       f"but only {n} are present")
                if ev.kind == "R":
                    n -= 2
            if n == 0 and k != len(self.events) - 1:
                raise DiagramError(f"event {k}: front closes up before the last event")
        if n:
            raise DiagramError(f"front ends with {n} open strands")
        labels = [x for x in self.labels if x]
        if len(set(labels)) != len(labels):
            raise DiagramError("duplicate crossing labels")
        for what, spec in (("basepoint", self.basepoint), ("orientation", self.orient)):
            if spec is not None:
                k, pos = spec[0], spec[1]
                if not 0 <= k < len(self.events) or not 0 <= pos < len(self._sweep[1][k]):
                    raise DiagramError(f"{what}: no strand at position {pos} after event {k}")

    @property
    def labels(self) -> list:
        out, nx, nr = [], 0, 0
        for ev in self.events:
            if ev.kind == "X":
                nx += 1
                out.append(ev.label or f"b{nx}")
            elif ev.kind == "R":
                nr += 1
                out.append(ev.label or f"a{nr}")
            else:
                out.append(None)
        return out

    @cached_property
    def _sweep(self):
        """Strand ids before and after each event, and cusp relations (lower id, upper id)."""
        cur: list[int] = []
        before, after, cusps = [], [], []
        nid = 0
        for ev in self.events:
            before.append(list(cur))
            p = ev.pos
            if ev.kind == "L":
                cur[p:p] = [nid, nid + 1]
                cusps.append((nid, nid + 1))
                nid += 2
            elif ev.kind == "X":
                cur[p], cur[p + 1] = cur[p + 1], cur[p]
            else:
                cusps.append((cur[p], cur[p + 1]))
                del cur[p:p + 2]
            after.append(list(cur))
        return before, after, cusps

    # resolution -------------------------------------------------------
    @cached_property
    def resolution(self) -> LagrangianDiagram:
        return _resolve(self)

    def resolve(self) -> LagrangianDiagram:
        return self.resolution

    def directions(self) -> dict:
        """+1 / -1 for strands travelled rightward / leftward, keyed by strand id."""
        d = self.resolution
        return {s: (1 if dart in d.oriented else -1) for s, dart in d.meta["strand_darts"].items()}

    # classical invariants from front formulas ---------------------------
    def crossing_signs(self) -> dict:
        before = self._sweep[0]
        dirs = self.directions()
        out = {}
        for k, (ev, lab) in enumerate(zip(self.events, self.labels)):
            if ev.kind == "X":
                lo, hi = before[k][ev.pos], before[k][ev.pos + 1]
                out[lab] = 1 if dirs[lo] == dirs[hi] else -1
        return out

    def writhe(self) -> int:
        return sum(self.crossing_signs().values())

    def tb(self) -> int:
        return self.writhe() - sum(ev.kind == "R" for ev in self.events)

    def rotation_number(self) -> int:
        before, after, _ = self._sweep
        dirs = self.directions()
        down = up = 0
        for k, ev in enumerate(self.events):
            if ev.kind == "L":
                descending = dirs[after[k][ev.pos]] == 1  # lower branch leaves rightward
            elif ev.kind == "R":
                descending = dirs[before[k][ev.pos + 1]] == 1  # upper branch arrives rightward
            else:
                continue
            if descending:
                down += 1
            else:
                up += 1
        return (down - up) // 2

    def maslov_potential(self) -> dict:
        """Maslov potential per strand id; upper cusp branch = lower branch + 1."""
        cusps = self._sweep[2]
        adj: dict[int, list] = {}
        for lo, hi in cusps:
            adj.setdefault(lo, []).append((hi, 1))
            adj.setdefault(hi, []).append((lo, -1))
        mu = {0: 0}
        stack = [0]
        while stack:
            s = stack.pop()
            for t, delta in adj[s]:
                if t not in mu:
                    mu[t] = mu[s] + delta
                    stack.append(t)
                elif mu[t] != mu[s] + delta:
                    raise GradingError("no Maslov potential exists; rotation number is nonzero")
        return mu

    def chord_gradings(self) -> dict:
        """Crossings: potential of the falling (over) strand minus the rising one; right cusps: 1."""
        mu = self.maslov_potential()
        before = self._sweep[0]
        out = {}
        for k, (ev, lab) in enumerate(zip(self.events, self.labels)):
            if ev.kind == "X":
                out[lab] = mu[before[k][ev.pos + 1]] - mu[before[k][ev.pos]]
            elif ev.kind == "R":
                out[lab] = 1
        return out

    def to_text(self) -> str:
        lines = ["front"]
        for ev in self.events:
            lines.append(f"{ev.kind} {ev.pos}" + (f" {ev.label}" if ev.label else ""))
        if self.basepoint is not None:
            lines.append(f"basepoint {self.basepoint[0]} {self.basepoint[1]}")
        if self.orient is not None:
            lines.append(f"orient {self.orient[0]} {self.orient[1]} {'+' if self.orient[2] > 0 else '-'}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "kind": "front",
            "name": self.name,
            "events": [{"kind": ev.kind, "pos": ev.pos, "label": lab} for ev, lab in zip(self.events, self.labels)],
            "tb": self.tb(),
            "r": self.rotation_number(),
        }


def _resolve(front: FrontDiagram) -> LagrangianDiagram:
    labels = front.labels
    crossings: list[tuple[str, list[str]]] = []
    consumer: dict = {}  # open-end key -> (crossing, slot) where it ends on the right
    cur: list[tuple[int, tuple]] = []  # (strand id, open-end key) per position
    first_key: dict = {}  # strand id -> key of its first edge
    after_keys = []
    nid = 0
    ne = 0

    def edge():
        nonlocal ne
        ne += 1
        return f"e{ne}"

    for k, ev in enumerate(front.events):
        p = ev.pos
        if ev.kind == "L":
            e = edge()
            cur[p:p] = [(nid, (e, "lo")), (nid + 1, (e, "hi"))]
            first_key[nid], first_key[nid + 1] = (e, "lo"), (e, "hi")
            nid += 2
        else:
            cid = labels[k]
            (s_lo, k_lo), (s_hi, k_hi) = cur[p], cur[p + 1]
            consumer[k_lo] = (cid, 0)
            consumer[k_hi] = (cid, 3)
            if ev.kind == "X":
                se, nee = edge(), edge()
                crossings.append((cid, [k_lo[0], se, nee, k_hi[0]]))
                # the falling strand continues to SE, the rising one to NE
                cur[p], cur[p + 1] = (s_hi, (se, "x")), (s_lo, (nee, "x"))
            else:
                loop = edge()
                crossings.append((cid, [k_lo[0], loop, loop, k_hi[0]]))
                del cur[p:p + 2]
        after_keys.append([key for _, key in cur])

    ends: dict[str, list] = {}
    for cid, es in crossings:
        for i, e in enumerate(es):
            ends.setdefault(e, []).append((cid, i))

    def rightward(key) -> tuple:
        return (key[0], ends[key[0]].index(consumer[key]))

    first_cusp_edge = first_key[0][0]
    up_dart = rightward(first_key[1])  # rightward along the upper branch of the first left cusp
    orient = up_dart
    if front.orient is not None:
        k, pos, sgn = front.orient
        d = rightward(after_keys[k][pos])
        orient = d if sgn > 0 else LagrangianDiagram.reverse(d)
    basepoint = first_cusp_edge
    if front.basepoint is not None:
        k, pos = front.basepoint
        basepoint = after_keys[k][pos][0]

    meta = {"source": "front", "strand_darts": {s: rightward(key) for s, key in first_key.items()}}
    xs = tuple(Crossing(cid, tuple(es), 1) for cid, es in crossings)
    return LagrangianDiagram(xs, basepoint, orient, up_dart, name=front.name, meta=meta)


def resolve_front(front: FrontDiagram) -> LagrangianDiagram:
    return front.resolution
