"""Exact arithmetic in free unital associative algebras.

Elements are finite sums ``coeff * t**k * w`` where ``w`` is a word in graded
generators.  Coefficients live in Z/2 or Z (arbitrary precision); the
variable ``t`` is central and tracked by its exponent.  Whether ``t`` is kept,
set to 1 or set to -1 is a property of the DGA using the polynomial (see
``TMode``), so polynomials themselves just carry exponents.
"""
from __future__ import annotations

from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping

from .errors import GradingError, RingMismatchError, UnknownGeneratorError

Word = tuple  # tuple[str, ...]
Key = tuple  # (word, t_power)

MIXED = "mixed"


class Ring(str, Enum):
    Z2 = "z2"
    Z = "z"

    @property
    def is_field(self) -> bool:
        return self is Ring.Z2

    def reduce(self, c: int) -> int:
        return c & 1 if self is Ring.Z2 else c


class TMode(str, Enum):
    COLLAPSED = "collapsed"  # t = 1
    SIGN = "sign"  # t = -1
    LAURENT = "laurent"  # t kept as a Laurent variable


def _coerce_ring(ring) -> Ring:
    return ring if isinstance(ring, Ring) else Ring(str(ring).lower())


class NcPoly:
    """Immutable element of R<generators>[t, t^-1], R in {Z/2, Z}."""

    __slots__ = ("_terms", "ring", "_hash")

    def __init__(self, terms: Mapping[Key, int] | Iterable[tuple[Key, int]] = (), ring: Ring | str = Ring.Z2):
        ring = _coerce_ring(ring)
        acc: dict[Key, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (word, tp), c in items:
            key = (tuple(word), int(tp))
            acc[key] = acc.get(key, 0) + int(c)
        self._terms = {k: ring.reduce(c) for k, c in acc.items() if ring.reduce(c)}
        self.ring = ring
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Key, int], ring: Ring) -> "NcPoly":
        # terms already reduced and zero-free
        p = cls.__new__(cls)
        p._terms = terms
        p.ring = ring
        p._hash = None
        return p

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, ring=Ring.Z2) -> "NcPoly":
        return cls._raw({}, _coerce_ring(ring))

    @classmethod
    def const(cls, c: int, ring=Ring.Z2, t_power: int = 0) -> "NcPoly":
        return cls({((), t_power): c}, ring)

    @classmethod
    def one(cls, ring=Ring.Z2) -> "NcPoly":
        return cls.const(1, ring)

    @classmethod
    def gen(cls, name: str, ring=Ring.Z2) -> "NcPoly":
        return cls({((name,), 0): 1}, ring)

    @classmethod
    def word(cls, letters: Iterable[str], ring=Ring.Z2, coeff: int = 1, t_power: int = 0) -> "NcPoly":
        return cls({(tuple(letters), t_power): coeff}, ring)

    @classmethod
    def t(cls, power: int = 1, ring=Ring.Z2) -> "NcPoly":
        return cls.const(1, ring, t_power=power)

    @classmethod
    def parse(cls, text: str, ring=Ring.Z2) -> "NcPoly":
        """Parse ``"1 + b1 + 2 t^-1 a1 b2 - b3 b2 b1"``.

        Letters in a term are separated by whitespace or ``*``; ``t^k`` and ``t``
        are reserved for the Laurent variable.
        """
        ring = _coerce_ring(ring)
        text = text.strip()
        if text in ("", "0"):
            return cls.zero(ring)
        terms: dict[Key, int] = {}
        chunks: list[tuple[int, str]] = []
        sign, buf = 1, ""
        for ch in text:
            if ch in "+-" and buf.strip() and not buf.rstrip().endswith("^"):
                chunks.append((sign, buf))
                sign, buf = (1 if ch == "+" else -1), ""
            elif ch in "+-" and not buf.strip():
                sign *= 1 if ch == "+" else -1
            else:
                buf += ch
        chunks.append((sign, buf))
        for sign, chunk in chunks:
            coeff, tp, letters = sign, 0, []
            for tok in chunk.replace("*", " ").split():
                if tok.lstrip("-").isdigit():
                    coeff *= int(tok)
                elif tok == "t":
                    tp += 1
                elif tok.startswith("t^"):
                    tp += int(tok[2:])
                else:
                    letters.append(tok)
            key = (tuple(letters), tp)
            terms[key] = terms.get(key, 0) + coeff
        return cls(terms, ring)

    # basic protocol ---------------------------------------------------
    def __iter__(self) -> Iterator[tuple[Word, int, int]]:
        for (w, tp), c in sorted(self._terms.items(), key=_term_key):
            yield w, tp, c

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = NcPoly.const(other, self.ring)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.ring is other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def coeff(self, word: Iterable[str], t_power: int = 0) -> int:
        return self._terms.get((tuple(word), t_power), 0)

    def _check(self, other: "NcPoly") -> None:
        if self.ring is not other.ring:
            raise RingMismatchError(f"cannot combine polynomials over {self.ring.value} and {other.ring.value}")

    def _lift(self, other) -> "NcPoly":
        if isinstance(other, int):
            return NcPoly.const(other, self.ring)
        if not isinstance(other, NcPoly):
            raise TypeError(f"cannot combine NcPoly with {type(other).__name__}")
        self._check(other)
        return other

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "NcPoly":
        other = self._lift(other)
        ring = self.ring
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = ring.reduce(out.get(k, 0) + c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return NcPoly._raw(out, ring)

    __radd__ = __add__

    def __neg__(self) -> "NcPoly":
        if self.ring is Ring.Z2:
            return self
        return NcPoly._raw({k: -c for k, c in self._terms.items()}, self.ring)

    def __sub__(self, other) -> "NcPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "NcPoly":
        return self._lift(other) - self

    def scale(self, c: int) -> "NcPoly":
        return NcPoly({k: v * c for k, v in self._terms.items()}, self.ring)

    def __mul__(self, other) -> "NcPoly":
        if isinstance(other, int):
            return self.scale(other)
        other = self._lift(other)
        ring = self.ring
        out: dict[Key, int] = {}
        for (w1, t1), c1 in self._terms.items():
            for (w2, t2), c2 in other._terms.items():
                k = (w1 + w2, t1 + t2)
                out[k] = out.get(k, 0) + c1 * c2
        return NcPoly._raw({k: ring.reduce(c) for k, c in out.items() if ring.reduce(c)}, ring)

    def __rmul__(self, other) -> "NcPoly":
        if isinstance(other, int):
            return self.scale(other)
        return self._lift(other) * self

    def __pow__(self, n: int) -> "NcPoly":
        out = NcPoly.one(self.ring)
        for _ in range(n):
            out = out * self
        return out

    # filters ----------------------------------------------------------
    def length_part(self, k: int) -> "NcPoly":
        if k < 0:
            raise ValueError("length must be non-negative")
        return NcPoly._raw({key: c for key, c in self._terms.items() if len(key[0]) == k}, self.ring)

    def linear_part(self) -> "NcPoly":
        return self.length_part(1)

    def constant_part(self) -> "NcPoly":
        return self.length_part(0)

    def max_length(self) -> int:
        return max((len(w) for w, _ in self._terms), default=0)

    def lengths(self) -> set[int]:
        return {len(w) for w, _ in self._terms}

    def generators(self) -> set[str]:
        return {g for w, _ in self._terms for g in w}

    def t_powers(self) -> set[int]:
        return {tp for _, tp in self._terms}

    def specialize_t(self, value: int) -> "NcPoly":
        """Substitute t = value (value in {1, -1})."""
        if value not in (1, -1):
            raise ValueError("t may only be specialised to a unit, 1 or -1")
        out: dict[Key, int] = {}
        for (w, tp), c in self._terms.items():
            k = (w, 0)
            out[k] = out.get(k, 0) + c * (value ** (tp % 2))
        return NcPoly(out, self.ring)

    def change_ring(self, ring) -> "NcPoly":
        return NcPoly(self._terms, ring)

    # display / serialisation -----------------------------------------
    def __repr__(self) -> str:
        return f"NcPoly({str(self)!r}, ring={self.ring.value!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, tp, c in self:
            body = []
            if tp:
                body.append("t" if tp == 1 else f"t^{tp}")
            body.extend(w)
            mag = abs(c)
            s = " ".join(body)
            if not s:
                s = str(mag)
            elif mag != 1:
                s = f"{mag} {s}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def to_json(self) -> list[dict]:
        return [{"coeff": c, "t_power": tp, "word": list(w)} for w, tp, c in self]

    @classmethod
    def from_json(cls, data, ring=Ring.Z2) -> "NcPoly":
        if isinstance(data, str):
            return cls.parse(data, ring)
        return cls({(tuple(d["word"]), int(d.get("t_power", 0))): int(d["coeff"]) for d in _merge(data)}, ring)


def _merge(data):
    # repeated words in a document are summed, not overwritten
    acc: dict = {}
    for d in data:
        key = (tuple(d["word"]), int(d.get("t_power", 0)))
        acc[key] = acc.get(key, 0) + int(d["coeff"])
    return [{"word": list(k[0]), "t_power": k[1], "coeff": c} for k, c in acc.items()]


def _term_key(item):
    (w, tp), _ = item
    return (len(w), w, tp)


def mul(p: NcPoly, q: NcPoly) -> NcPoly:
    return p * q


def linear_part(p: NcPoly) -> NcPoly:
    return p.linear_part()


def length_part(p: NcPoly, k: int) -> NcPoly:
    return p.length_part(k)


# grading ---------------------------------------------------------------

def word_degree(word: Iterable[str], degrees: Mapping[str, int], t_power: int = 0, t_degree: int = 0) -> int:
    total = t_power * t_degree
    for g in word:
        try:
            total += degrees[g]
        except KeyError:
            raise UnknownGeneratorError(f"unknown generator {g!r}") from None
    return total


def grade(p, degrees: Mapping[str, int], t_degree: int = 0):
    """Degree of a word (``tuple``) or polynomial.

    For polynomials returns the common degree, ``MIXED`` when terms disagree,
    and ``None`` for the zero polynomial.
    """
    if isinstance(p, tuple):
        return word_degree(p, degrees)
    found = {word_degree(w, degrees, tp, t_degree) for (w, tp) in p._terms}
    if not found:
        return None
    if len(found) > 1:
        return MIXED
    return found.pop()


# maps ------------------------------------------------------------------

class Derivation:
    """Signed derivation D(ww') = D(w)w' + (-1)^|w| w D(w'), killing scalars and t."""

    def __init__(self, images: Mapping[str, NcPoly], degrees: Mapping[str, int], ring=Ring.Z2):
        self.images = dict(images)
        self.degrees = dict(degrees)
        self.ring = _coerce_ring(ring)
        for g, img in self.images.items():
            if img.ring is not self.ring:
                raise RingMismatchError(f"image of {g} is over {img.ring.value}, expected {self.ring.value}")
        self._memo: dict[Word, dict[Key, int]] = {}

    def _word(self, w: Word) -> dict[Key, int]:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        out: dict[Key, int] = {}
        signed = self.ring is Ring.Z
        prefix_deg = 0
        for i, g in enumerate(w):
            img = self.images.get(g)
            if img is None:
                if g not in self.degrees:
                    raise UnknownGeneratorError(f"unknown generator {g!r}")
                img = None
            if img:
                sign = -1 if signed and prefix_deg % 2 else 1
                left, right = w[:i], w[i + 1:]
                for (iw, itp), c in img._terms.items():
                    k = (left + iw + right, itp)
                    out[k] = out.get(k, 0) + sign * c
            if signed:
                try:
                    prefix_deg += self.degrees[g]
                except KeyError:
                    raise UnknownGeneratorError(f"unknown generator {g!r}") from None
        self._memo[w] = out
        return out

    def __call__(self, p: NcPoly) -> NcPoly:
        if p.ring is not self.ring:
            raise RingMismatchError("derivation applied to polynomial over a different ring")
        out: dict[Key, int] = {}
        for (w, tp), c in p._terms.items():
            for (w2, tp2), c2 in self._word(w).items():
                k = (w2, tp + tp2)
                out[k] = out.get(k, 0) + c * c2
        return NcPoly(out, self.ring)


def extend_derivation(images: Mapping[str, NcPoly], degrees: Mapping[str, int], ring=Ring.Z2) -> Derivation:
    return Derivation(images, degrees, ring)


class Homomorphism:
    """Unital algebra map determined by generator images and the image of t.

    Generators without an image are fixed.  ``t_image`` must be a unit
    (``±t^k``); by default t is sent to t.
    """

    def __init__(self, images: Mapping[str, NcPoly], ring=Ring.Z2, t_image: NcPoly | None = None):
        self.images = dict(images)
        self.ring = _coerce_ring(ring)
        for g, img in self.images.items():
            if img.ring is not self.ring:
                raise RingMismatchError(f"image of {g} is over {img.ring.value}, expected {self.ring.value}")
        if t_image is None:
            t_image = NcPoly.t(1, self.ring)
        if len(t_image) != 1:
            raise ValueError("t must map to a unit ±t^k")
        ((tw, ttp), tc), = t_image._terms.items()
        if tw or abs(tc) != 1:
            raise ValueError("t must map to a unit ±t^k")
        self._t = (ttp, tc)
        self.t_image = t_image
        self._memo: dict[Word, NcPoly] = {}

    def image(self, g: str) -> NcPoly:
        img = self.images.get(g)
        return img if img is not None else NcPoly.gen(g, self.ring)

    def _word(self, w: Word) -> NcPoly:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if not w:
            out = NcPoly.one(self.ring)
        elif len(w) == 1:
            out = self.image(w[0])
        else:
            mid = len(w) // 2
            out = self._word(w[:mid]) * self._word(w[mid:])
        self._memo[w] = out
        return out

    def __call__(self, p: NcPoly) -> NcPoly:
        if p.ring is not self.ring:
            raise RingMismatchError("homomorphism applied to polynomial over a different ring")
        ttp, tc = self._t
        out: dict[Key, int] = {}
        for (w, tp), c in p._terms.items():
            scale = c * (tc ** (tp % 2))
            shift = ttp * tp
            for (w2, tp2), c2 in self._word(w)._terms.items():
                k = (w2, tp2 + shift)
                out[k] = out.get(k, 0) + scale * c2
        return NcPoly(out, self.ring)

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """Composite ``other ∘ self``."""
        gens = set(self.images) | set(other.images)
        return Homomorphism({g: other(self.image(g)) for g in gens}, self.ring, other(self.t_image))


def extend_homomorphism(images: Mapping[str, NcPoly], t_image: NcPoly | None = None, ring=Ring.Z2) -> Homomorphism:
    return Homomorphism(images, ring, t_image)


def evaluate(p: NcPoly, values: Mapping[str, int], t_value: int = 1, ring=None) -> int:
    """Image of ``p`` under the ring map generator -> value, t -> t_value."""
    ring = p.ring if ring is None else _coerce_ring(ring)
    total = 0
    for (w, tp), c in p._terms.items():
        term = c * (t_value ** tp if tp >= 0 else t_value ** (-tp))  # t_value is ±1
        for g in w:
            v = values.get(g, 0)
            if not v:
                term = 0
                break
            term *= v
        total += term
    return ring.reduce(total)


def apply_linear(op: Callable[[NcPoly], NcPoly], p: NcPoly) -> NcPoly:
    """Apply a word-wise operator linearly (scalars and t factor out)."""
    out = NcPoly.zero(p.ring)
    for w, tp, c in p:
        img = op(NcPoly.word(w, p.ring))
        if tp:
            img = img * NcPoly.t(tp, p.ring)
        out = out + img.scale(c)
    return out


def check_degrees(p: NcPoly, degrees: Mapping[str, int], expected: int, t_degree: int = 0) -> list[tuple]:
    """Terms of ``p`` whose degree differs from ``expected``."""
    bad = []
    for w, tp, c in p:
        d = word_degree(w, degrees, tp, t_degree)
        if d != expected:
            bad.append((w, tp, c, d))
    return bad


def require_integral_grading(rotation: int) -> None:
    if rotation != 0:
        raise GradingError(f"integer gradings need rotation number 0, got r = {rotation}")
