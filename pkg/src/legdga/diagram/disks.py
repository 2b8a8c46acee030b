"""Immersed polygons with convex corners and one positive corner.

Two independent enumerators live here:

* :func:`enumerate_disks` assembles disks from faces.  Chord heights are
  chosen by a linear program so that every bounded face has positive area;
  a disk with positive corner ``a`` then has total area at most ``h(a)``,
  which bounds the face multiplicities.  Candidate multiplicity vectors are
  pruned locally at each crossing and the boundary is read off from the
  multiplicity jumps across edges.
* :func:`walk_disks` follows the boundary from the positive corner, deciding
  at every crossing whether to go straight or turn, and keeps closed walks
  whose winding numbers are non-negative.  It is exponential and meant for
  small diagrams, as a cross-check.

Disks whose boundary runs along an edge in both directions are not produced
by the face method.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..errors import DiagramError
from .lagrangian import LagrangianDiagram

TOL = 1e-7


@dataclass(frozen=True)
class Disk:
    positive: str  # crossing id at the positive corner
    quadrant: int
    word: tuple  # negative corners, counterclockwise from the positive one
    t_power: int
    multiplicity: tuple = field(default=(), compare=False)  # per face index

    @property
    def key(self) -> tuple:
        return (self.positive, self.word, self.t_power)


def corner_sign(d: LagrangianDiagram, crossing: str, q: int) -> int:
    return 1 if d.quadrant_positive(crossing, q) else -1


def face_corners(d: LagrangianDiagram, face: tuple) -> list[tuple]:
    """(crossing, quadrant) of each corner of a face."""
    out = []
    for dart in face:
        x, i = d.head(dart)
        out.append((x, (i - 1) % 4))
    return out


def heights(d: LagrangianDiagram) -> dict:
    """Chord heights >= 1 giving every bounded face area >= 1, minimising their sum."""
    import numpy as np
    from scipy.optimize import linprog

    ids = [c.id for c in d.crossings]
    col = {x: j for j, x in enumerate(ids)}
    rows = []
    for fi, f in enumerate(d.faces):
        if fi == d.outer_face:
            continue
        row = np.zeros(len(ids))
        for x, q in face_corners(d, f):
            row[col[x]] += corner_sign(d, x, q)
        rows.append(-row)  # area >= 1  <=>  -area <= -1
    res = linprog(np.ones(len(ids)), A_ub=np.array(rows), b_ub=-np.ones(len(rows)),
                  bounds=[(1, None)] * len(ids), method="highs")
    if res.status != 0:
        raise DiagramError("no chord heights give all bounded faces positive area; "
                           "the diagram is not the Lagrangian projection of a Legendrian knot")
    return {x: float(res.x[col[x]]) for x in ids}


def face_areas(d: LagrangianDiagram, h: dict) -> list[float]:
    return [sum(corner_sign(d, x, q) * h[x] for x, q in face_corners(d, f)) for f in d.faces]


# local structure at a crossing ------------------------------------------------
def _local_pairings(m: tuple, positive_ok: tuple, need_positive: int | None):
    """Ways to route the boundary through a crossing with quadrant multiplicities ``m``.

    Returns a list of tuples ``t`` where ``t[k]`` is the number of boundary passes
    arriving via slot k that turn into slot k-1 (corner in quadrant k-1); the rest
    go straight.  ``need_positive`` is the quadrant of the required positive corner.
    """
    inc = [max(m[(k - 1) % 4] - m[k], 0) for k in range(4)]
    out = [max(m[k] - m[(k - 1) % 4], 0) for k in range(4)]
    sols = []
    for t in product(*(range(inc[k] + 1) for k in range(4))):
        ok = True
        for k in range(4):
            q = (k - 1) % 4
            if positive_ok[q]:
                want = 1 if need_positive == q else 0
                if t[k] != want:
                    ok = False
                    break
        if not ok:
            continue
        # outgoing via slot j: straight from j+2 plus corners from j+1
        if all(out[j] == (inc[(j + 2) % 4] - t[(j + 2) % 4]) + t[(j + 1) % 4] for j in range(4)):
            sols.append(t)
    return sols


def _quadrant_faces(d: LagrangianDiagram) -> dict:
    return {c.id: tuple(d.quadrant_face(c.id, q) for q in range(4)) for c in d.crossings}


def _positive_quadrants(d: LagrangianDiagram) -> dict:
    return {c.id: tuple(d.quadrant_positive(c.id, q) for q in range(4)) for c in d.crossings}


def enumerate_disks(d: LagrangianDiagram, h: dict | None = None, positive: str | None = None) -> list[Disk]:
    """All disks, sorted by (positive corner, word, t-power)."""
    h = h or heights(d)
    areas = face_areas(d, h)
    qf = _quadrant_faces(d)
    pos = _positive_quadrants(d)
    out = []
    for c in d.crossings:
        if positive is not None and c.id != positive:
            continue
        for q in range(4):
            if pos[c.id][q]:
                out.extend(_disks_at(d, c.id, q, h, areas, qf, pos))
    out.sort(key=lambda k: (k.positive, len(k.word), k.word, k.t_power, k.quadrant))
    return out


def _disks_at(d, a, q0, h, areas, qf, pos) -> list[Disk]:
    nf = len(d.faces)
    outer = d.outer_face
    f0 = qf[a][q0]
    if f0 == outer:
        return []
    budget = h[a] + TOL
    # order faces breadth-first from f0 through shared crossings
    adj: dict[int, set] = {i: set() for i in range(nf)}
    for faces in qf.values():
        for u in faces:
            adj[u].update(faces)
    order, seen = [f0], {f0, outer}
    for u in order:
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                order.append(v)
    order += [i for i in range(nf) if i not in seen]
    rank = {f: i for i, f in enumerate(order)}
    rank[outer] = -1
    # crossings become checkable once all four quadrant faces are assigned
    ready: dict[int, list] = {}
    for x, faces in qf.items():
        ready.setdefault(max(rank[f] for f in faces), []).append(x)

    m = [0] * nf
    results = []

    def local(x):
        mm = tuple(m[f] for f in qf[x])
        return _local_pairings(mm, pos[x], q0 if x == a else None)

    def dfs(i: int, used: float):
        if i == len(order):
            sols = {}
            for x in qf:
                s = local(x)
                if not s:
                    return
                sols[x] = s
            if all(m[f] == 0 for f in range(nf)):
                return
            xs = list(sols)
            for choice in product(*(sols[x] for x in xs)):
                disk = _trace(d, a, q0, dict(zip(xs, choice)), m)
                if disk is not None:
                    results.append(disk)
            return
        f = order[i]
        lo = 1 if f == f0 else 0
        top = int((budget - used) / areas[f]) if areas[f] > 0 else 0
        for val in range(lo, top + 1):
            m[f] = val
            if all(local(x) for x in ready.get(i, ())):
                dfs(i + 1, used + val * areas[f])
        m[f] = 0

    dfs(0, 0.0)
    return results


def _trace(d: LagrangianDiagram, a: str, q0: int, turns: dict, m: list) -> Disk | None:
    """Follow the boundary determined by multiplicities and local routing choices."""
    qf_left = d.left_face
    # boundary darts with multiplicity (net traversal count)
    darts: dict = {}
    for e in d.ends:
        jump = m[qf_left[(e, 1)]] - m[qf_left[(e, 0)]]
        if jump > 0:
            darts[(e, 1)] = jump
        elif jump < 0:
            darts[(e, 0)] = -jump
    # at each crossing, build the routing of incoming passes
    routes: dict = {}  # (crossing, incoming slot) -> list of outgoing slots (one per pass)
    for x, t in turns.items():
        for k in range(4):
            dart_in = d.reverse(d.leave(x, k))
            n_in = darts.get(dart_in, 0)
            routes[(x, k)] = [(k - 1) % 4] * t[k] + [(k + 2) % 4] * (n_in - t[k])
    total = sum(darts.values())
    start = d.leave(a, q0)
    remaining = dict(darts)
    if remaining.get(start, 0) < 1:
        return None
    # the pass arriving at a via slot q0+1 must turn at the positive corner
    pending = {k: list(v) for k, v in routes.items()}
    lst = pending[(a, (q0 + 1) % 4)]
    lst.remove(q0 % 4)
    word, tp, turning, steps = [], 0, 1, 0
    dart = start
    while True:
        if remaining.get(dart, 0) < 1:
            return None
        remaining[dart] -= 1
        steps += 1
        turning += d.turning(dart)
        if dart[0] == d.basepoint:
            tp += -1 if dart in d.oriented else 1
        x, k = d.head(dart)
        if (x, k) == (a, (q0 + 1) % 4) and steps == total:
            break
        opts = pending.get((x, k))
        if not opts:
            return None
        nxt = opts.pop()
        if nxt == (k - 1) % 4:
            word.append(x)
            turning += 1
        dart = d.leave(x, nxt)
    if any(remaining.values()) or turning != 4:
        return None
    # routing with several passes through one slot is ambiguous; keep one canonical trace
    return Disk(a, q0, tuple(word), tp, tuple(m))


# oracle ------------------------------------------------------------------------
def walk_disks(d: LagrangianDiagram, max_use: int = 1, max_len: int | None = None) -> list[Disk]:
    """Brute-force boundary walks; independent of :func:`enumerate_disks`."""
    max_len = max_len or 2 * len(d.ends) * max_use
    pos = _positive_quadrants(d)
    out = []
    for c in d.crossings:
        for q in range(4):
            if not pos[c.id][q]:
                continue
            start = d.leave(c.id, q)
            goal = (c.id, (q + 1) % 4)
            use: dict = {}
            path: list = []
            corners: list = []

            def step(dart):
                if use.get(dart, 0) >= max_use or len(path) >= max_len:
                    return
                use[dart] = use.get(dart, 0) + 1
                path.append(dart)
                x, k = d.head(dart)
                if (x, k) == goal:
                    disk = _close(d, c.id, q, path, corners)
                    if disk is not None:
                        out.append(disk)
                step(d.leave(x, k + 2))
                if not pos[x][(k - 1) % 4]:
                    corners.append((len(path), x))
                    step(d.leave(x, k - 1))
                    corners.pop()
                path.pop()
                use[dart] -= 1

            step(start)
    out.sort(key=lambda k: (k.positive, len(k.word), k.word, k.t_power, k.quadrant))
    return out


def _close(d: LagrangianDiagram, a: str, q: int, path: list, corners: list) -> Disk | None:
    net: dict = {}
    for dart in path:
        net[dart[0]] = net.get(dart[0], 0) + (1 if dart[1] == 1 else -1)
    # winding numbers: walk the dual graph from the outer face
    nf = len(d.faces)
    w: list = [None] * nf
    w[d.outer_face] = 0
    stack = [d.outer_face]
    while stack:
        f = stack.pop()
        for dart in d.faces[f]:
            # crossing dart from its right face (the other side) to its left face f
            other = d.left_face[d.reverse(dart)]
            jump = net.get(dart[0], 0) * (1 if dart[1] == 1 else -1)
            val = w[f] - jump
            if w[other] is None:
                w[other] = val
                stack.append(other)
            elif w[other] != val:
                return None
    if min(w) < 0:
        return None
    turning = 1 + len(corners) + sum(d.turning(x) for x in path)
    if turning != 4:
        return None
    tp = sum((-1 if x in d.oriented else 1) for x in path if x[0] == d.basepoint)
    return Disk(a, q, tuple(x for _, x in corners), tp, tuple(w))
