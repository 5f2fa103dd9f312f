"""Reduced words in the free group of rank k and length functions on them.

A word is stored in syllable form: a tuple of ``(generator, exponent)`` pairs
with generators numbered from 1, non-zero exponents and no two adjacent
syllables on the same generator.  The empty tuple is the identity.

Text form is ``"a^3 b^-2"`` (letters ``a..z`` for rank <= 26, ``x1, x2, ...``
above that); ``"1"`` denotes the identity.  The JSON form ``[[1, 3], [2, -2]]``
is accepted wherever a word is expected.
"""
from __future__ import annotations

import math
import re
import string
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .config import max_basis_size
from .errors import BudgetExceededError, RankMismatchError, WordParseError

Syllable = tuple[int, int]

_LETTERS = string.ascii_lowercase


def _check_rank(rank):
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")


def _cancel_concat(left: tuple, right: tuple) -> tuple:
    # only the junction can cancel when both halves are already reduced
    out = list(left)
    i = 0
    while out and i < len(right):
        gen, exp = out[-1]
        gen2, exp2 = right[i]
        if gen != gen2:
            break
        i += 1
        if exp + exp2:
            out[-1] = (gen, exp + exp2)
            break
        out.pop()
    out.extend(right[i:])
    return tuple(out)


class Word:
    """Immutable reduced element of the free group F_rank."""

    __slots__ = ("rank", "syllables", "_hash")

    def __init__(self, rank: int, syllables: Iterable[Sequence[int]] = ()):
        _check_rank(rank)
        syl = tuple((int(g), int(e)) for g, e in syllables)
        for pos, (g, e) in enumerate(syl):
            if not 1 <= g <= rank:
                raise ValueError(f"generator index {g} out of range 1..{rank}")
            if e == 0:
                raise ValueError(f"zero exponent in syllable {pos}; use reduce()")
            if pos and syl[pos - 1][0] == g:
                raise ValueError(f"adjacent syllables on generator {g}; use reduce()")
        self.rank = rank
        self.syllables = syl
        self._hash = None

    @classmethod
    def _trusted(cls, rank, syllables):
        w = object.__new__(cls)
        w.rank = rank
        w.syllables = syllables
        w._hash = None
        return w

    @classmethod
    def identity(cls, rank):
        _check_rank(rank)
        return cls._trusted(rank, ())

    @classmethod
    def generator(cls, rank, index, exponent=1):
        return reduce(rank, [(index, exponent)])

    @classmethod
    def parse(cls, text, rank):
        return parse_word(text, rank)

    # group structure

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        if other.rank != self.rank:
            raise RankMismatchError(f"cannot multiply words of rank {self.rank} and {other.rank}")
        if not self.syllables:
            return other
        if not other.syllables:
            return self
        return Word._trusted(self.rank, _cancel_concat(self.syllables, other.syllables))

    def inverse(self):
        return Word._trusted(self.rank, tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = Word.identity(self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self):
        return not self.syllables

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def net_exponents(self):
        """Exponent sum of each generator (the image in Z^rank)."""
        out = [0] * self.rank
        for g, e in self.syllables:
            out[g - 1] += e
        return tuple(out)

    def letters(self):
        """Expanded form as a tuple of signed generator indices."""
        out = []
        for g, e in self.syllables:
            out.extend([g if e > 0 else -g] * abs(e))
        return tuple(out)

    def sort_key(self):
        return (len(self), self.syllables)

    # value semantics

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.rank == other.rank and self.syllables == other.syllables

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, self.syllables))
        return self._hash

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r}, rank={self.rank})"

    def to_json(self):
        return [[g, e] for g, e in self.syllables]


def reduce(rank: int, syllables: Iterable[Sequence[int]]) -> Word:
    """Free reduction of an arbitrary syllable list (zero exponents allowed)."""
    _check_rank(rank)
    stack: list[Syllable] = []
    for g, e in syllables:
        g, e = int(g), int(e)
        if not 1 <= g <= rank:
            raise ValueError(f"generator index {g} out of range 1..{rank}")
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            total = stack[-1][1] + e
            if total:
                stack[-1] = (g, total)
            else:
                stack.pop()
        else:
            stack.append((g, e))
    return Word._trusted(rank, tuple(stack))


def multiply(g: Word, h: Word) -> Word:
    return g * h


def inverse(g: Word) -> Word:
    return g.inverse()


def generator_name(rank, index):
    if rank <= len(_LETTERS):
        return _LETTERS[index - 1]
    return f"x{index}"


def format_word(g: Word) -> str:
    if not g.syllables:
        return "1"
    parts = []
    for gen, exp in g.syllables:
        name = generator_name(g.rank, gen)
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(x\d+)|([a-z]))\s*(?:\^\s*([+-]?\d+))?")


def parse_word(text, rank: int) -> Word:
    """Parse text (``"a^2 b^-1"``, ``"ab a^-1"``) or JSON syllables into a reduced word."""
    _check_rank(rank)
    if isinstance(text, Word):
        if text.rank != rank:
            raise RankMismatchError(f"word has rank {text.rank}, expected {rank}")
        return text
    if isinstance(text, (list, tuple)):
        syl = []
        for pos, item in enumerate(text):
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise WordParseError("syllable must be a [generator, exponent] pair", pos)
            g, e = item
            if not isinstance(g, int) or not isinstance(e, int) or isinstance(g, bool):
                raise WordParseError("syllable entries must be integers", pos)
            if not 1 <= g <= rank:
                raise WordParseError(f"generator index {g} out of range 1..{rank}", pos)
            syl.append((g, e))
        return reduce(rank, syl)
    if not isinstance(text, str):
        raise WordParseError(f"cannot parse {type(text).__name__} as a word")
    stripped = text.strip()
    if stripped in ("", "1") or (stripped == "e" and rank < 5):
        return Word.identity(rank)
    syl = []
    pos = 0
    use_x = rank > len(_LETTERS)
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        xname, letter, exp = m.groups()
        start = m.start(1) if xname else m.start(2)
        if xname is not None:
            if not use_x:
                # for small ranks "x" is an ordinary letter followed by digits
                raise WordParseError(f"generator {xname!r} not valid for rank {rank}", start)
            index = int(xname[1:])
        else:
            if use_x:
                raise WordParseError(f"use x1..x{rank} generator names for rank {rank}", start)
            index = _LETTERS.index(letter) + 1
        if not 1 <= index <= rank:
            raise WordParseError(f"generator index {index} out of range 1..{rank}", start)
        syl.append((index, int(exp) if exp is not None else 1))
        pos = m.end()
    return reduce(rank, syl)


# ---------------------------------------------------------------------------
# length functions


class LengthFunction:
    """A named function psi: Word -> [0, inf).

    Built-in kinds return exact integers where possible (word length,
    q-length for q in {1, 2}, psi_z, pullbacks of those) and floats otherwise.
    """

    def __init__(self, kind: str, fn: Callable[[Word], object], params=None):
        self.kind = kind
        self.params = dict(params or {})
        self._fn = fn

    def __call__(self, g: Word):
        return self._fn(g)

    def __repr__(self):
        if self.params:
            args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
            return f"LengthFunction({self.kind}, {args})"
        return f"LengthFunction({self.kind})"

    @property
    def name(self):
        if self.kind == "q_length":
            return f"q:{self.params['q']}"
        return self.kind

    @classmethod
    def word_length(cls):
        return cls("word_length", len)

    @classmethod
    def q_length(cls, q):
        q = Fraction(q) if isinstance(q, str) else q
        if not 0 < q <= 2:
            raise ValueError(f"q-length needs 0 < q <= 2, got {q}")
        if q == 1:
            fn = len
        elif q == 2:
            def fn(g):
                return sum(e * e for _, e in g.syllables)
        else:
            qf = float(q)

            def fn(g):
                return math.fsum(abs(e) ** qf for _, e in g.syllables)
        return cls("q_length", fn, {"q": q})

    @classmethod
    def psi_z(cls):
        def fn(g):
            return sum(n * n for n in g.net_exponents())
        return cls("psi_z", fn)

    @classmethod
    def pullback(cls, exponents: Sequence[int], base: "LengthFunction | None" = None):
        """psi(h) = base(pi(h)) for the endomorphism pi: x_i -> x_i^{exponents[i]}."""
        exps = tuple(int(m) for m in exponents)
        if any(m == 0 for m in exps):
            raise ValueError("pullback exponents must be non-zero")
        base = base or cls.word_length()

        def fn(g):
            if len(exps) < g.rank:
                raise ValueError(f"pullback needs {g.rank} exponents, got {len(exps)}")
            image = Word._trusted(g.rank, tuple((s, e * exps[s - 1]) for s, e in g.syllables))
            return base(image)
        return cls("pullback", fn, {"exponents": exps, "base": base.name})

    @classmethod
    def table(cls, values: dict, default=0):
        """Explicit finite table; words absent from it get ``default`` (identity gets 0)."""
        lookup = dict(values)

        def fn(g):
            if g.is_identity():
                return lookup.get(g, 0)
            return lookup.get(g, default)
        return cls("table", fn, {"size": len(lookup), "default": default})

    @classmethod
    def custom(cls, fn, name="custom"):
        return cls(name, fn)

    @classmethod
    def from_spec(cls, spec: str):
        """Parse ``word``, ``q:<q>``, ``psiz`` or ``pullback:<m1>,<m2>,...``."""
        spec = spec.strip()
        if spec in ("word", "word_length"):
            return cls.word_length()
        if spec in ("psiz", "psi_z"):
            return cls.psi_z()
        if spec.startswith("q:"):
            raw = spec[2:]
            try:
                q = int(raw)
            except ValueError:
                q = float(raw)
            return cls.q_length(q)
        if spec.startswith("pullback:"):
            return cls.pullback([int(m) for m in spec.split(":", 1)[1].split(",")])
        raise ValueError(f"unknown length function {spec!r}")


def evaluate_length(psi: LengthFunction, g: Word):
    return psi(g)


def word_length(g: Word) -> int:
    return len(g)


# ---------------------------------------------------------------------------
# balls


def ball_size(rank: int, radius: int) -> int:
    """1 + sum_{r=1..R} 2k(2k-1)^(r-1)."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    k = rank
    return 1 + sum(2 * k * (2 * k - 1) ** (r - 1) for r in range(1, radius + 1))


def ball(rank: int, radius: int, cap: int | None = None) -> list[Word]:
    """All reduced words of length <= radius, sorted by (length, syllables)."""
    _check_rank(rank)
    size = ball_size(rank, radius)
    cap = max_basis_size() if cap is None else cap
    if size > cap:
        raise BudgetExceededError(f"ball({rank}, {radius}) has {size} words, cap is {cap}")
    layer = [()]
    words = [Word._trusted(rank, ())]
    for _ in range(radius):
        nxt = []
        for syl in layer:
            last_gen, last_exp = syl[-1] if syl else (0, 0)
            for gen in range(1, rank + 1):
                for sign in (-1, 1):
                    if gen == last_gen:
                        if (last_exp > 0) != (sign > 0):
                            continue
                        nxt.append(syl[:-1] + ((gen, last_exp + sign),))
                    else:
                        nxt.append(syl + ((gen, sign),))
        layer = nxt
        words.extend(Word._trusted(rank, s) for s in layer)
    words.sort(key=Word.sort_key)
    return words
