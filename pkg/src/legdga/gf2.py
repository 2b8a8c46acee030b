"""Linear algebra over Z/2 with vectors packed into Python ints."""
from __future__ import annotations

from typing import Iterable, Sequence


def bits(v: int) -> list[int]:
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out


def pack(indices: Iterable[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << i
    return v


class Echelon:
    """Incrementally row-reduced span; each row remembers which inputs built it."""

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, combination of inputs)
        self.count = 0

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            p = v.bit_length() - 1
            hit = self.rows.get(p)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    def add(self, v: int) -> bool:
        """Insert ``v`` (input number ``self.count``); return False if dependent."""
        tag = 1 << self.count
        self.count += 1
        r, combo = self.reduce(v)
        if not r:
            return False
        self.rows[r.bit_length() - 1] = (r, combo ^ tag)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(vectors: Iterable[int]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def kernel(columns: Sequence[int]) -> list[int]:
    """Basis of {x : sum_i x_i columns[i] = 0}, as packed vectors over the columns."""
    e = Echelon()
    out = []
    for v in columns:
        r, combo = e.reduce(v)
        tag = 1 << e.count
        e.count += 1
        if r:
            e.rows[r.bit_length() - 1] = (r, combo ^ tag)
        else:
            out.append(combo ^ tag)
    return out


def apply(columns: Sequence[int], x: int) -> int:
    """Matrix (given by its columns) times packed vector ``x``."""
    out = 0
    for i in bits(x):
        out ^= columns[i]
    return out


def transpose(columns: Sequence[int], nrows: int) -> list[int]:
    out = [0] * nrows
    for j, col in enumerate(columns):
        for i in bits(col):
            out[i] |= 1 << j
    return out


def compose(left: Sequence[int], right: Sequence[int]) -> list[int]:
    """Columns of left @ right."""
    return [apply(left, c) for c in right]


def quotient_basis(sub: Iterable[int], ambient: Iterable[int]) -> list[int]:
    """Vectors of ``ambient`` extending a basis of ``sub`` to a basis of span(sub + ambient)."""
    e = Echelon()
    for v in sub:
        e.add(v)
    out = []
    for v in ambient:
        if e.add(v):
            out.append(v)
    return out


class QuotientCoords:
    """Coordinates of vectors in span(sub + reps) / span(sub) against ``reps``."""

    def __init__(self, sub: Iterable[int], reps: Sequence[int]):
        self.e = Echelon()
        nsub = 0
        for v in sub:
            self.e.add(v)
            nsub += 1
        self.offset = self.e.count
        self.reps = list(reps)
        for v in self.reps:
            if not self.e.add(v):
                raise ValueError("representatives are dependent modulo the subspace")

    def __call__(self, v: int) -> int:
        r, combo = self.e.reduce(v)
        if r:
            raise ValueError("vector is outside span(sub + reps)")
        return combo >> self.offset
