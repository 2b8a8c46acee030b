from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legdga.cedga import build_dga, differential_from_disks
from legdga.diagram import FrontDiagram, LagrangianDiagram
from legdga.diagram.disks import enumerate_disks, walk_disks
from legdga.diagram.lkd import dump, parse
from legdga.errors import DiagramError
from legdga.ncalg import Ring, TMode

from conftest import FIXTURES, KNOTS

# frozen from the rotation-count oracle (front Maslov potential)
GRADINGS = {
    "unknot": {"a1": 1},
    "trefoil": {"b1": 0, "b2": 0, "b3": 0, "a1": 1, "a2": 1},
    "chekanov_a": {"b1": 0, "b2": 0, "b3": 1, "b4": -1, "b5": 0, "b6": 0, "b7": 0, "a1": 1, "a2": 1},
    "chekanov_b": {"b1": 0, "b2": 0, "b3": 1, "b4": 1, "b5": 2, "b6": -2, "b7": 2, "a1": 1, "a2": 1},
}
TB = {"unknot": -1, "trefoil": 1, "chekanov_a": 1, "chekanov_b": 1}


def test_fronts_parse(diagrams):
    for n in KNOTS:
        assert isinstance(diagrams[n], FrontDiagram)
        assert diagrams[n].rotation_number() == 0


@pytest.mark.parametrize("name", KNOTS)
def test_front_and_resolution_agree(diagrams, name):
    f = diagrams[name]
    lag = f.resolve()
    assert f.tb() == lag.tb() == TB[name]
    assert f.rotation_number() == lag.rotation_number()
    assert f.chord_gradings() == lag.chord_gradings() == GRADINGS[name]


def test_lagrangian_fixtures():
    unknot = parse((FIXTURES / "unknot_lagrangian.lkd").read_text())
    assert isinstance(unknot, LagrangianDiagram)
    assert (unknot.tb(), unknot.rotation_number(), unknot.chord_gradings()) == (-1, 0, {"a1": 1})
    tref = parse((FIXTURES / "trefoil_lagrangian.lkd").read_text())
    assert tref.tb() == 1
    assert sorted(tref.chord_gradings().values()) == [0, 0, 0, 1, 1]


def test_dump_roundtrip(diagrams):
    for n in KNOTS:
        lag = diagrams[n].resolve()
        again = parse(dump(lag))
        assert again.chord_gradings() == lag.chord_gradings()
        assert again.tb() == lag.tb()
        front = parse(dump(diagrams[n]))
        assert front.tb() == diagrams[n].tb()


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("knot\n", 1),
    ("lagrangian\nX a1 : (e1 e2* e2)\n", 2),
    ("lagrangian\nX a1 : (e1 e2* e2 e1*)\nbasepoint e9\norient e1 +\nouter e1 left\n", 3),
    ("front\nL 0\nR 5\n", 3),
    ("front\nL 0\nQ 1\n", 3),
])
def test_parse_errors_carry_position(text, line):
    with pytest.raises(DiagramError) as exc:
        parse(text)
    assert exc.value.line == line


def _first(rows, edge):
    return min((i, j) for i, (_, es) in enumerate(rows) for j, e in enumerate(es) if e.strip("*") == edge)


def _relabel(text: str, seed: int) -> str:
    """Rename crossings and edges, shuffle crossing lines and rotate edge cycles.

    'orient' and 'outer' refer to an edge's first occurrence, so their signs
    flip whenever the relabelling swaps which end of the edge comes first.
    """
    rng = random.Random(seed)
    lines = text.strip().splitlines()
    rows = [(l.split()[1], l.split("(")[1].rstrip(")").split()) for l in lines if l.startswith("X ")]
    rest = [l.split() for l in lines[1:] if l.split()[0] in ("basepoint", "orient", "outer")]
    edges = sorted({e.strip("*") for _, es in rows for e in es})
    new = [f"s{i}" for i in range(len(edges))]
    rng.shuffle(new)
    emap = dict(zip(edges, new))
    # tag each slot with its original position so first occurrences can be compared
    tagged = [[(e, (i, j)) for j, e in enumerate(es)] for i, (_, es) in enumerate(rows)]
    for t in tagged:
        k = rng.randrange(4)
        t[:] = t[k:] + t[:k]
    rng.shuffle(tagged)
    out = [f"X c{i} : ({' '.join(emap[e.strip('*')] + ('*' if e.endswith('*') else '') for e, _ in t)})"
           for i, t in enumerate(tagged)]
    tail = []
    for toks in rest:
        e = toks[1]
        new_order = [orig for t in tagged for f, orig in t if f.strip("*") == e]
        flipped = new_order[0] != _first(rows, e)
        if flipped and toks[0] == "orient":
            toks[2] = "-" if toks[2] == "+" else "+"
        if flipped and toks[0] == "outer":
            toks[2] = "right" if toks[2] == "left" else "left"
        tail.append(" ".join([toks[0], emap[e], *toks[2:]]))
    return "\n".join(["lagrangian", *out, *tail]) + "\n"


@given(st.integers(0, 10_000), st.sampled_from(KNOTS))
@settings(max_examples=20, deadline=None)
def test_invariants_under_relabelling(seed, name):
    from legdga.diagram.lkd import load
    lag = load(FIXTURES / f"{name}.lkd").resolve()
    other = parse(_relabel(dump(lag), seed))
    assert other.tb() == lag.tb()
    assert abs(other.rotation_number()) == abs(lag.rotation_number())
    assert sorted(other.chord_gradings().values()) == sorted(lag.chord_gradings().values())
    assert len(enumerate_disks(other)) == len(enumerate_disks(lag))


@pytest.mark.parametrize("name", ["unknot", "trefoil"])
def test_walk_oracle_agrees(diagrams, name):
    lag = diagrams[name].resolve()
    fast = sorted((k.positive, k.word, k.t_power) for k in enumerate_disks(lag))
    slow = sorted((k.positive, k.word, k.t_power) for k in walk_disks(lag))
    assert fast == slow
    g = build_dga(lag, Ring.Z2, TMode.LAURENT)
    oracle = differential_from_disks(walk_disks(lag), g.generators, Ring.Z2, TMode.LAURENT)
    assert oracle == dict(g.differential)


@pytest.mark.parametrize("name", KNOTS)
def test_every_disk_lowers_degree_by_one(diagrams, name):
    lag = diagrams[name].resolve()
    gr = lag.chord_gradings()
    disks = enumerate_disks(lag)
    assert disks
    for k in disks:
        assert gr[k.positive] - sum(gr[x] for x in k.word) == 1, k


def test_trefoil_disk_count(diagrams):
    # two disks per right cusp with a single negative corner plus the constants
    disks = enumerate_disks(diagrams["trefoil"].resolve())
    by_pos = {}
    for k in disks:
        by_pos.setdefault(k.positive, []).append(k.word)
    assert sorted(by_pos) == ["a1", "a2"]
    assert sorted(by_pos["a1"]) == [(), ("b1",), ("b1", "b2", "b3"), ("b3",)]
