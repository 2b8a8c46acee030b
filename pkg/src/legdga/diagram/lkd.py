"""Reader and writer for the ``.lkd`` text format.

Lagrangian diagrams::

    lagrangian
    name trefoil            # optional
    X a1 : (e1* e2 e3* e4)   # counterclockwise edges; '*' marks the overstrand
    ...
    basepoint e1
    orient e1 +              # '+': from the edge's first occurrence to its second
    outer e1 left            # the unbounded face, seen while walking as for '+'

Fronts are a left-to-right sweep::

    front
    L 0                      # also: left / cross / right
    X 1 b1                   # optional label
    R 0
    basepoint 0 1            # strand at position 1 just after event 0
    orient 0 1 +             # '+': rightward there

``#`` starts a comment.
"""
from __future__ import annotations

import re
from pathlib import Path

from ..errors import DiagramError
from .front import Event, FrontDiagram
from .lagrangian import Crossing, LagrangianDiagram

_KINDS = {"l": "L", "left": "L", "x": "X", "cross": "X", "r": "R", "right": "R"}
_CROSSING = re.compile(r"^X\s+(\S+)\s*:\s*\((.*)\)\s*$")


def _tokens(text: str):
    """Yield (line number, [(column, token), ...]) for non-blank lines."""
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
        if toks:
            yield n, line, toks


def parse(text: str, name: str = ""):
    """Parse ``.lkd`` text into a LagrangianDiagram or a FrontDiagram."""
    lines = list(_tokens(text))
    if not lines:
        raise DiagramError("empty input", line=1)
    n, _, toks = lines[0]
    head = toks[0][1].lower()
    if head == "lagrangian":
        return _parse_lagrangian(lines[1:], name)
    if head == "front":
        return _parse_front(lines[1:], name)
    raise DiagramError(f"expected header 'lagrangian' or 'front', got {toks[0][1]!r}", n, toks[0][0])


def parse_lagrangian(text: str, name: str = "") -> LagrangianDiagram:
    d = parse(text, name)
    if not isinstance(d, LagrangianDiagram):
        raise DiagramError("expected a 'lagrangian' diagram", line=1)
    return d


def parse_front(text: str, name: str = "") -> FrontDiagram:
    d = parse(text, name)
    if not isinstance(d, FrontDiagram):
        raise DiagramError("expected a 'front' diagram", line=1)
    return d


def load(path) -> LagrangianDiagram | FrontDiagram:
    p = Path(path)
    return parse(p.read_text(), name=p.stem)


def _parse_lagrangian(lines, name: str) -> LagrangianDiagram:
    crossings = []
    where: dict = {}
    basepoint = orient = outer = None
    at: dict = {}  # directive -> (line, column of its edge argument)
    for n, line, toks in lines:
        key = toks[0][1]
        if len(toks) > 1 and key in ("basepoint", "orient", "outer"):
            at[key] = (n, toks[1][0])
        if key == "X":
            m = _CROSSING.match(line.strip())
            if not m:
                raise DiagramError("expected 'X id : (e1 e2 e3 e4)'", n, toks[0][0])
            cid = m.group(1)
            edges = m.group(2).split()
            if len(edges) != 4:
                raise DiagramError(f"crossing {cid} is not 4-valent: {len(edges)} edges", n, line.index("(") + 1)
            marked = [i for i, e in enumerate(edges) if e.endswith("*")]
            if len(marked) != 2 or (marked[1] - marked[0]) != 2:
                raise DiagramError(f"crossing {cid}: mark exactly two opposite edges with '*' as the overstrand",
                                   n, line.index("(") + 1)
            crossings.append(Crossing(cid, tuple(e.rstrip("*") for e in edges), marked[0]))
            where[cid] = n
        elif key == "name" and len(toks) == 2:
            name = toks[1][1]
        elif key == "basepoint":
            _arity(toks, 2, n)
            basepoint = toks[1][1]
        elif key == "orient":
            _arity(toks, 3, n)
            if toks[2][1] not in "+-":
                raise DiagramError("orientation must be '+' or '-'", n, toks[2][0])
            orient = (toks[1][1], 1 if toks[2][1] == "+" else 0)
        elif key == "outer":
            _arity(toks, 3, n)
            if toks[2][1] not in ("left", "right"):
                raise DiagramError("outer face side must be 'left' or 'right'", n, toks[2][0])
            outer = (toks[1][1], 1 if toks[2][1] == "left" else 0)
        else:
            raise DiagramError(f"unknown directive {key!r}", n, toks[0][0])
    if basepoint is None:
        raise DiagramError("missing basepoint")
    if orient is None:
        raise DiagramError("missing orientation ('orient e +')")
    if outer is None:
        raise DiagramError("missing outer face ('outer e left|right')")
    known = {e for c in crossings for e in c.edges}
    for key, e in (("basepoint", basepoint), ("orient", orient[0]), ("outer", outer[0])):
        if e not in known:
            raise DiagramError(f"{key} refers to unknown edge {e!r}", *at[key])
    return LagrangianDiagram(tuple(crossings), basepoint, orient, outer, name=name, meta={"source": "lkd"})


def _parse_front(lines, name: str) -> FrontDiagram:
    events = []
    event_lines = []
    basepoint = orient = None
    for n, _, toks in lines:
        key = toks[0][1].lower()
        if key in _KINDS:
            event_lines.append(n)
            if len(toks) not in (2, 3):
                raise DiagramError(f"expected '{key} position [label]'", n, toks[0][0])
            events.append(Event(_KINDS[key], _int(toks[1], n), toks[2][1] if len(toks) == 3 else None))
        elif key == "name" and len(toks) == 2:
            name = toks[1][1]
        elif key == "basepoint":
            _arity(toks, 3, n)
            basepoint = (_int(toks[1], n), _int(toks[2], n))
        elif key == "orient":
            _arity(toks, 4, n)
            if toks[3][1] not in "+-":
                raise DiagramError("orientation must be '+' or '-'", n, toks[3][0])
            orient = (_int(toks[1], n), _int(toks[2], n), 1 if toks[3][1] == "+" else -1)
        else:
            raise DiagramError(f"unknown directive {toks[0][1]!r}", n, toks[0][0])
    if not events:
        raise DiagramError("front has no events")
    try:
        return FrontDiagram(tuple(events), basepoint, orient, name=name)
    except DiagramError as exc:
        m = re.match(r"event (\d+)", exc.message)
        if m and exc.line is None:
            raise DiagramError(exc.message, event_lines[int(m.group(1))]) from None
        raise


def _arity(toks, k: int, n: int) -> None:
    if len(toks) != k:
        raise DiagramError(f"{toks[0][1]} takes {k - 1} argument(s)", n, toks[0][0])


def _int(tok, n: int) -> int:
    try:
        return int(tok[1])
    except ValueError:
        raise DiagramError(f"expected an integer, got {tok[1]!r}", n, tok[0]) from None


def dump(d: LagrangianDiagram | FrontDiagram) -> str:
    if isinstance(d, FrontDiagram):
        return d.to_text()
    lines = ["lagrangian"]
    if d.name:
        lines.append(f"name {d.name}")
    for c in d.crossings:
        edges = [e + ("*" if c.is_over(i) else "") for i, e in enumerate(c.edges)]
        lines.append(f"X {c.id} : ({' '.join(edges)})")
    lines.append(f"basepoint {d.basepoint}")
    lines.append(f"orient {d.orient[0]} {'+' if d.orient[1] == 1 else '-'}")
    lines.append(f"outer {d.outer[0]} {'left' if d.outer[1] == 1 else 'right'}")
    return "\n".join(lines) + "\n"
