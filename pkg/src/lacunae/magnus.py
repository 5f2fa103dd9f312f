"""Truncated Magnus embedding of F_k into Z<<A_1, ..., A_k>>.

mu(x_i) = 1 + A_i and mu(x_i^-1) = 1 - A_i + A_i^2 - ...; everything is
computed with Python integers and truncated at a fixed total degree.
Monomials are tuples of letter indices (1 = A, 2 = B, ...); iteration is
always in the standard order: degree first, then lexicographic with A first.
"""
from __future__ import annotations

import re
import string
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping

from .errors import RankMismatchError
from .words import Word

Monomial = tuple[int, ...]

_UPPER = string.ascii_uppercase


def monomial_key(mono: Monomial):
    return (len(mono), mono)


def format_monomial(mono: Monomial, rank: int) -> str:
    if not mono:
        return "1"
    if rank <= len(_UPPER):
        return "".join(_UPPER[i - 1] for i in mono)
    return " ".join(f"A{i}" for i in mono)


_MONO_TOKEN = re.compile(r"A(\d+)|([A-Z])")


def parse_monomial(text, rank: int) -> Monomial:
    """``"AB"``, ``"B A B"``, ``"A1 A2"`` or a sequence of letter indices."""
    if isinstance(text, (tuple, list)):
        mono = tuple(int(i) for i in text)
    else:
        s = text.replace(" ", "").replace("*", "")
        if s in ("", "1"):
            return ()
        out = []
        pos = 0
        while pos < len(s):
            m = _MONO_TOKEN.match(s, pos)
            if not m:
                raise ValueError(f"bad monomial {text!r} at position {pos}")
            if m.group(1) is not None and rank > len(_UPPER):
                out.append(int(m.group(1)))
            elif m.group(2) is not None and rank <= len(_UPPER):
                out.append(_UPPER.index(m.group(2)) + 1)
            else:
                raise ValueError(f"bad letter in monomial {text!r} for rank {rank}")
            pos = m.end()
        mono = tuple(out)
    for i in mono:
        if not 1 <= i <= rank:
            raise ValueError(f"letter index {i} out of range 1..{rank}")
    return mono


class NCPolynomial:
    """Integer polynomial in ``rank`` non-commuting letters, truncated at ``degree``."""

    __slots__ = ("rank", "degree", "_terms")

    def __init__(self, rank: int, degree: int, terms: Mapping[Monomial, int] | None = None):
        if rank < 1:
            raise ValueError("rank must be positive")
        if degree < 0:
            raise ValueError("truncation degree must be non-negative")
        self.rank = rank
        self.degree = degree
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) > degree or c == 0:
                continue
            if any(not 1 <= i <= rank for i in mono):
                raise ValueError(f"monomial {mono} uses letters outside 1..{rank}")
            clean[mono] = clean.get(mono, 0) + int(c)
        self._terms = {m: clean[m] for m in sorted(clean, key=monomial_key) if clean[m]}

    @classmethod
    def one(cls, rank, degree):
        return cls(rank, degree, {(): 1})

    @classmethod
    def letter(cls, rank, degree, index):
        return cls(rank, degree, {(): 0, (index,): 1})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mono) -> int:
        return self._terms.get(tuple(mono), 0)

    def homogeneous(self, d):
        return {m: c for m, c in self._terms.items() if len(m) == d}

    def truncate(self, degree):
        return NCPolynomial(self.rank, degree, {m: c for m, c in self._terms.items() if len(m) <= degree})

    def _check(self, other):
        if not isinstance(other, NCPolynomial):
            raise TypeError(f"expected NCPolynomial, got {type(other).__name__}")
        if other.rank != self.rank or other.degree != self.degree:
            raise RankMismatchError(
                f"rank/degree mismatch: ({self.rank}, {self.degree}) vs ({other.rank}, {other.degree})"
            )

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return NCPolynomial(self.rank, self.degree, out)

    def __neg__(self):
        return NCPolynomial(self.rank, self.degree, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return NCPolynomial(self.rank, self.degree, {m: c * other for m, c in self._terms.items()})
        return nc_multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return (self.rank, self.degree, self._terms) == (other.rank, other.degree, other._terms)

    def __hash__(self):
        return hash((self.rank, self.degree, tuple(self._terms.items())))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self._terms.items():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            else:
                body = format_monomial(mono, self.rank) if a == 1 else f"{a}*{format_monomial(mono, self.rank)}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"NCPolynomial({str(self)!r}, rank={self.rank}, degree={self.degree})"

    def to_json(self):
        return {format_monomial(m, self.rank): c for m, c in self._terms.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int], rank: int, degree: int):
        return cls(rank, degree, {parse_monomial(k, rank): int(v) for k, v in data.items()})


def nc_multiply(p: NCPolynomial, q: NCPolynomial) -> NCPolynomial:
    """Product truncated at the common degree."""
    p._check(q)
    d = p.degree
    by_degree: dict[int, list] = {}
    for m, c in q._terms.items():
        by_degree.setdefault(len(m), []).append((m, c))
    out: dict[Monomial, int] = {}
    for m1, c1 in p._terms.items():
        room = d - len(m1)
        for dq, bucket in by_degree.items():
            if dq > room:
                continue
            for m2, c2 in bucket:
                key = m1 + m2
                out[key] = out.get(key, 0) + c1 * c2
    return NCPolynomial(p.rank, d, out)


def _power_series(exponent: int, degree: int) -> list[int]:
    # coefficients of (1 + X)^exponent up to X^degree
    if exponent >= 0:
        return [comb(exponent, j) for j in range(degree + 1)]
    m = -exponent
    return [(-1) ** j * comb(m + j - 1, j) for j in range(degree + 1)]


def default_degree(g: Word) -> int:
    return max(len(g), 2)


def magnus_embed(g: Word, degree: int | None = None) -> NCPolynomial:
    """mu(g) truncated at ``degree`` (default max(|g|, 2))."""
    d = default_degree(g) if degree is None else degree
    if d < 0:
        raise ValueError("degree must be non-negative")
    cur: dict[Monomial, int] = {(): 1}
    for gen, exp in g.syllables:
        series = _power_series(exp, d)
        nxt: dict[Monomial, int] = {}
        for mono, c in cur.items():
            for j in range(d - len(mono) + 1):
                s = series[j]
                if s:
                    key = mono + (gen,) * j
                    nxt[key] = nxt.get(key, 0) + c * s
        cur = {m: c for m, c in nxt.items() if c}
    return NCPolynomial(g.rank, d, cur)


def j_coefficient(g: Word, monomial) -> int:
    """Coefficient J_X(g) of the monomial X in mu(g)."""
    mono = parse_monomial(monomial, g.rank)
    if not mono:
        return 1
    return magnus_embed(g, len(mono)).coefficient(mono)


@dataclass(frozen=True)
class JProfile:
    """Magnus coefficients of g up to degree 2.

    ``linear[i-1]`` is J_{A_i}; ``quadratic[(i, j)]`` is J_{A_i A_j}.
    """

    rank: int
    linear: tuple[int, ...]
    quadratic: tuple[tuple[tuple[int, int], int], ...]

    def j(self, mono) -> int:
        mono = tuple(mono)
        if len(mono) == 0:
            return 1
        if len(mono) == 1:
            return self.linear[mono[0] - 1]
        if len(mono) == 2:
            return dict(self.quadratic).get(mono, 0)
        raise ValueError("JProfile stores monomials of degree <= 2 only")

    @property
    def J_A(self):
        return self.linear[0]

    @property
    def J_B(self):
        return self.linear[1]

    @property
    def J_AB(self):
        return self.j((1, 2))

    @property
    def J_BA(self):
        return self.j((2, 1))

    def to_json(self):
        out = {format_monomial((i + 1,), self.rank): v for i, v in enumerate(self.linear)}
        out.update({format_monomial(m, self.rank): v for m, v in self.quadratic})
        return out


def _pairs(rank):
    return [(i, j) for i in range(1, rank + 1) for j in range(1, rank + 1)]


def j_profile(g: Word) -> JProfile:
    """Degree <= 2 coefficients read off the truncated series."""
    mu = magnus_embed(g, 2)
    linear = tuple(mu.coefficient((i,)) for i in range(1, g.rank + 1))
    quad = tuple((p, mu.coefficient(p)) for p in _pairs(g.rank))
    return JProfile(g.rank, linear, quad)


def j_profile_closed_form(g: Word) -> JProfile:
    """Degree <= 2 coefficients from the syllable sums.

    J_i = sum of exponents of x_i; for i != j, J_{ij} sums e_s * e_t over
    syllable pairs s before t on generators i and j; J_{ii} = J_i (J_i - 1) / 2.
    """
    k = g.rank
    linear = [0] * k
    cross = {}
    for gen, exp in g.syllables:
        for other in range(1, k + 1):
            if other != gen and linear[other - 1]:
                key = (other, gen)
                cross[key] = cross.get(key, 0) + linear[other - 1] * exp
        linear[gen - 1] += exp
    quad = []
    for i, j in _pairs(k):
        if i == j:
            n = linear[i - 1]
            quad.append(((i, j), n * (n - 1) // 2))
        else:
            quad.append(((i, j), cross.get((i, j), 0)))
    return JProfile(k, tuple(linear), tuple(quad))


@dataclass(frozen=True)
class Membership:
    in_F0: bool
    in_F00: bool


def _require_rank2(g: Word):
    if g.rank != 2:
        raise ValueError(f"operation defined on F_2 only, got rank {g.rank}")


def subgroup_membership(g: Word) -> Membership:
    """Membership in ker(psi_z) = {J_A = J_B = 0} and in its subgroup {J_AB = 0}."""
    _require_rank2(g)
    prof = j_profile(g)
    in_f0 = prof.J_A == 0 and prof.J_B == 0
    return Membership(in_f0, in_f0 and prof.J_AB == 0)


def transference_sides(g: Word) -> tuple[int, int]:
    """(sum_i J_{A_i}(g)^2, psi_z(g)) computed independently."""
    linear = j_profile(g).linear
    lhs = sum(v * v for v in linear)
    rhs = sum(n * n for n in g.net_exponents())
    return lhs, rhs


def transference_check(g: Word) -> bool:
    """Torus Laplacian eigenvalue of z^{J(g)} equals the psi_z multiplier of g."""
    _require_rank2(g)
    lhs, rhs = transference_sides(g)
    return lhs == rhs


def separating_degree(g: Word, h: Word, max_degree: int) -> int | None:
    """Smallest degree at which mu(g) and mu(h) differ, or None if they agree through max_degree."""
    if g == h:
        return None
    for d in range(1, max_degree + 1):
        if magnus_embed(g, d).homogeneous(d) != magnus_embed(h, d).homogeneous(d):
            return d
    return None


def embed_many(words: Iterable[Word], degree: int) -> list[NCPolynomial]:
    return [magnus_embed(w, degree) for w in words]
