"""Indices, canonical mixed words and F_p-linear combinations of words."""
from __future__ import annotations

import re
from typing import Iterable, NamedTuple


class Index(tuple):
    """A composition (a_1, ..., a_m) of positive integers; may be empty."""

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(int(a) for a in entries)
        if any(a < 1 for a in entries):
            raise ValueError(f"index entries must be positive: {entries}")
        return super().__new__(cls, entries)

    @property
    def wt(self) -> int:
        return sum(self)

    @property
    def dep(self) -> int:
        return len(self)

    def __repr__(self):
        return format_index(self)


def weight(a: tuple) -> int:
    return sum(a)


def cut_tail(a: tuple, i: int) -> tuple:
    """a^(i): delete the first i entries."""
    if i < 0:
        raise ValueError("cut position must be >= 0")
    if a and i > len(a):
        raise ValueError(f"cannot cut {i} entries from an index of depth {len(a)}")
    return tuple(a[i:])


def cut_head(a: tuple, i: int) -> tuple:
    """a_(i): keep the first i entries."""
    if i < 0:
        raise ValueError("cut position must be >= 0")
    if a and i > len(a):
        raise ValueError(f"cannot keep {i} entries of an index of depth {len(a)}")
    return tuple(a[:i])


class MixedWord(NamedTuple):
    """Canonical word y_Y x_X of the commutative-cross monoid (y-block first)."""

    y: tuple = ()
    x: tuple = ()

    @property
    def weight(self) -> int:
        return sum(self.y) + sum(self.x)

    @property
    def is_pure_x(self) -> bool:
        return not self.y

    def __str__(self):
        return format_word(self)


EMPTY = MixedWord((), ())


def xword(*a: int) -> MixedWord:
    return MixedWord((), tuple(a))


def yword(*a: int) -> MixedWord:
    return MixedWord(tuple(a), ())


def canonicalize(letters: Iterable[tuple[str, int]]) -> MixedWord:
    """Stable partition of tagged letters ('x'|'y', k) into y-block then x-block."""
    ys, xs = [], []
    for tag, k in letters:
        k = int(k)
        if k < 1:
            raise ValueError("letter subscripts must be positive")
        tag = tag.lower()
        if tag == "x":
            xs.append(k)
        elif tag == "y":
            ys.append(k)
        else:
            raise ValueError(f"unknown letter kind {tag!r}")
    return MixedWord(tuple(ys), tuple(xs))


def letters(w: MixedWord) -> list[tuple[str, int]]:
    return [("y", k) for k in w.y] + [("x", k) for k in w.x]


class Combo:
    """Finite F_p-linear combination of MixedWords with no zero coefficients."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms=None):
        self.p = p
        t = {}
        if terms:
            for w, c in dict(terms).items():
                c %= p
                if c:
                    t[MixedWord(*w)] = c
        self.terms = t

    @classmethod
    def word(cls, p: int, w, c: int = 1) -> "Combo":
        return cls(p, {MixedWord(*w): c})

    @classmethod
    def one(cls, p: int) -> "Combo":
        return cls(p, {EMPTY: 1})

    def _check(self, other):
        if not isinstance(other, Combo):
            raise TypeError(f"cannot combine Combo with {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"combos over different characteristics {self.p} and {other.p}")
        return other

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = (t.get(w, 0) + c) % self.p
        return Combo(self.p, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._check(other))

    def scale(self, c: int) -> "Combo":
        return Combo(self.p, {w: v * c for w, v in self.terms.items()})

    def graded_component(self, w: int) -> "Combo":
        return Combo(self.p, {u: c for u, c in self.terms.items() if u.weight == w})

    def is_zero(self) -> bool:
        return not self.terms

    def is_pure_x(self) -> bool:
        return all(not w.y for w in self.terms)

    def weights(self) -> set[int]:
        return {w.weight for w in self.terms}

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: word_sort_key(kv[0]))

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Combo):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Combo(p={self.p}, {format_combo(self)})"

    def __str__(self):
        return format_combo(self)


def word_sort_key(w: MixedWord):
    return (w.weight, len(w.y) + len(w.x), w.y, w.x)


def compositions(n: int):
    """All compositions of n (n >= 0), in lexicographic order."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def all_words(w: int, *, pure_x: bool = False) -> list[MixedWord]:
    """All canonical words of weight exactly w, deterministic order."""
    out = []
    if pure_x:
        return [MixedWord((), c) for c in compositions(w)]
    for k in range(w + 1):
        for ys in compositions(k):
            for xs in compositions(w - k):
                out.append(MixedWord(ys, xs))
    return out


# --- text syntax -------------------------------------------------------------

_LETTER = re.compile(r"([xXyY])(\d+)$")


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def parse_word(text: str) -> MixedWord:
    """Parse "x3 x1 y2" (case-insensitive); "1" or "" is the empty word."""
    s = text.strip()
    if s in ("", "1"):
        return EMPTY
    out = []
    pos = 0
    for tok in text.split():
        pos = text.index(tok, pos)
        m = _LETTER.match(tok)
        if not m:
            raise ParseError(f"bad letter {tok!r}", pos)
        k = int(m.group(2))
        if k < 1:
            raise ParseError(f"subscript must be positive in {tok!r}", pos)
        out.append((m.group(1), k))
        pos += len(tok)
    return canonicalize(out)


def format_word(w: MixedWord) -> str:
    if not w.y and not w.x:
        return "1"
    return " ".join([f"y{k}" for k in w.y] + [f"x{k}" for k in w.x])


def parse_index(text: str) -> Index:
    """Parse "(3,1,2)"; "()" is the empty index."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("index must be enclosed in parentheses", 0)
    inner = s[1:-1]
    if not inner.strip():
        return Index(())
    entries = []
    offset = text.index("(") + 1
    for part in inner.split(","):
        tok = part.strip()
        if not tok.isdigit() or int(tok) < 1:
            raise ParseError(f"bad index entry {tok!r}", offset)
        entries.append(int(tok))
        offset += len(part) + 1
    return Index(entries)


def format_index(a: tuple) -> str:
    return "(" + ",".join(str(x) for x in a) + ")"


def format_combo(c: Combo) -> str:
    if c.is_zero():
        return "0"
    parts = []
    for w, v in c.items():
        parts.append(format_word(w) if v == 1 else f"{v}*{format_word(w)}")
    return " + ".join(parts)


def parse_combo(text: str, p: int) -> Combo:
    """Inverse of format_combo."""
    if text.strip() == "0":
        return Combo(p)
    terms = {}
    start = 0
    for part in text.split("+"):
        w, c, off = part, 1, start
        if "*" in part:
            cs, w = part.split("*", 1)
            if not cs.strip().isdigit():
                raise ParseError(f"bad coefficient {cs.strip()!r}", start)
            c, off = int(cs), start + len(cs) + 1
        if not w.strip():
            raise ParseError("empty term", off)
        try:
            word = parse_word(w)
        except ParseError as exc:
            raise ParseError(str(exc).rsplit(" at position", 1)[0], off + exc.pos) from None
        terms[word] = (terms.get(word, 0) + c) % p
        start += len(part) + 1
    return Combo(p, terms)
