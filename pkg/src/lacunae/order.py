"""Bi-invariant total order on F_k from dictionary comparison of Magnus series.

Monomials are listed degree by degree; inside a degree lexicographically with
A_1 first (so A before B, i.e. 0 <= B <= A).  Two words compare by the
integer coefficients at the first monomial where their series differ.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable

from .errors import RankMismatchError, UndecidedOrderError
from .fourier import FourierElement
from .magnus import Monomial, format_monomial, magnus_embed, monomial_key
from .words import Word

DEFAULT_MIN_DEPTH = 8

LESS, EQUAL, GREATER, UNDECIDED = "less", "equal", "greater", "undecided"


@dataclass(frozen=True)
class OrderVerdict:
    relation: str
    deciding_monomial: Monomial | None = None
    deciding_degree: int | None = None
    depth: int | None = None

    @property
    def decided(self):
        return self.relation != UNDECIDED

    @property
    def sign(self) -> int:
        if self.relation == UNDECIDED:
            raise UndecidedOrderError("?", "?", self.depth)
        return {LESS: -1, EQUAL: 0, GREATER: 1}[self.relation]

    def to_json(self, rank=2):
        return {
            "relation": self.relation,
            "deciding_monomial": None if self.deciding_monomial is None
            else format_monomial(self.deciding_monomial, rank),
            "deciding_degree": self.deciding_degree,
            "depth": self.depth,
        }


def default_max_degree(g: Word, h: Word) -> int:
    return max(len(g.inverse() * h), DEFAULT_MIN_DEPTH)


def order_compare(g: Word, h: Word, max_degree: int | None = None) -> OrderVerdict:
    """Compare g and h; never guesses, returns ``undecided`` past ``max_degree``."""
    if g.rank != h.rank:
        raise RankMismatchError(f"cannot compare words of rank {g.rank} and {h.rank}")
    if g == h:
        return OrderVerdict(EQUAL)
    depth = default_max_degree(g, h) if max_degree is None else max_degree
    if depth < 1:
        raise ValueError("max_degree must be >= 1")
    for d in range(1, depth + 1):
        # lower degrees already agree, so only the top homogeneous part matters
        pg = magnus_embed(g, d).homogeneous(d)
        ph = magnus_embed(h, d).homogeneous(d)
        if pg == ph:
            continue
        for mono in sorted(set(pg) | set(ph), key=monomial_key):
            cg, ch = pg.get(mono, 0), ph.get(mono, 0)
            if cg != ch:
                return OrderVerdict(LESS if cg < ch else GREATER, mono, d)
    return OrderVerdict(UNDECIDED, depth=depth)


def compare(g: Word, h: Word, max_degree: int | None = None) -> int:
    """-1 / 0 / 1, raising UndecidedOrderError instead of guessing."""
    v = order_compare(g, h, max_degree)
    if not v.decided:
        raise UndecidedOrderError(g, h, v.depth)
    return v.sign


def leq(g: Word, h: Word, max_degree: int | None = None) -> bool:
    return compare(g, h, max_degree) <= 0


def is_positive(g: Word, max_degree: int | None = None) -> bool:
    """g in G_+ = {g >= e}."""
    return compare(g, Word.identity(g.rank), max_degree) >= 0


def positive_cone_filter(words: Iterable[Word], max_degree: int | None = None) -> list[Word]:
    return [g for g in words if is_positive(g, max_degree)]


def sort_words(words: Iterable[Word], max_degree: int | None = None) -> list[Word]:
    return sorted(words, key=functools.cmp_to_key(lambda g, h: compare(g, h, max_degree)))


def positive_part_split(x: FourierElement, max_degree: int | None = None):
    """(x_+, x_-) with x_+ supported on {g >= e} and x_- on {g < e}."""
    pos = {g for g in x.support() if is_positive(g, max_degree)}
    return x.restrict(lambda g: g in pos), x.restrict(lambda g: g not in pos)
