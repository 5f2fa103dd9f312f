"""Lacunarity certificates: psi-lacunary sequences, integer lacunarity,
Rudin window counts under the Magnus order, and the J-coefficient criteria
for lacunary subsets of F_2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .magnus import j_profile
from .order import compare, is_positive
from .words import LengthFunction, Word, ball


@dataclass
class LacunarityCertificate:
    """Outcome of one lacunarity test.

    ``delta`` is the best feasible constant (psi / integer / prop51 kinds) or
    the window-count lower bound N^(E) (rudin kind).  ``witnesses`` holds the
    index pair or word that attains it.
    """

    kind: str
    passed: bool
    delta: object
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "kind": self.kind,
            "passed": self.passed,
            "delta": self.delta,
            "witnesses": [str(w) if isinstance(w, Word) else w for w in self.witnesses],
            "details": self.details,
        }


def _exact(v):
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _ratio(num, den):
    if _exact(num) and _exact(den):
        return Fraction(num, 1) / den
    return float(num) / float(den)


def psi_lacunary_delta(psi: LengthFunction, sequence: Sequence[Word]) -> LacunarityCertificate:
    """Largest delta with psi(h_{k+1}) >= (1+delta) psi(h_k) and
    psi(h_k^-1 h_k') >= delta max(psi(h_k), psi(h_k')) for all k != k'.

    A sequence with fewer than two terms is lacunary for every delta (delta = inf).
    """
    seq = list(sequence)
    vals = [psi(h) for h in seq]
    for k, v in enumerate(vals):
        if v == 0:
            raise ValueError(f"psi(h_{k}) = 0; sequence terms must have positive length")
    growth, growth_at = math.inf, None
    for k in range(len(seq) - 1):
        r = _ratio(vals[k + 1], vals[k]) - 1
        if growth_at is None or r < growth:
            growth, growth_at = r, [k, k + 1]
    separation, separation_at = math.inf, None
    for k in range(len(seq)):
        hk_inv = seq[k].inverse()
        for kk in range(len(seq)):
            if kk == k:
                continue
            r = _ratio(psi(hk_inv * seq[kk]), max(vals[k], vals[kk]))
            if separation_at is None or r < separation:
                separation, separation_at = r, [k, kk]
    if growth_at is None and separation_at is None:
        delta, witness = math.inf, []
    elif separation_at is None or (growth_at is not None and growth <= separation):
        delta, witness = growth, growth_at
    else:
        delta, witness = separation, separation_at
    return LacunarityCertificate(
        "psi", delta > 0, delta, witness,
        {"growth_delta": growth, "growth_witness": growth_at,
         "separation_delta": separation, "separation_witness": separation_at,
         "length": psi.name, "values": vals},
    )


def integer_lacunary(sequence: Sequence[int]) -> LacunarityCertificate:
    """delta = min l_{n+1} / l_n over a finite sequence of non-zero integers; passes iff delta > 1."""
    seq = [int(v) for v in sequence]
    if any(v == 0 for v in seq):
        raise ValueError("integer lacunarity needs non-zero entries")
    delta, at = math.inf, []
    for n in range(len(seq) - 1):
        r = Fraction(seq[n + 1], seq[n])
        if not at or r < delta:
            delta, at = r, [n, n + 1]
    return LacunarityCertificate("integer", delta > 1, delta, at, {"sequence": seq})


def rudin_count(E: Iterable[Word], g: Word, max_degree: int | None = None) -> int:
    """#{h in E : g <= h <= g^2} under the Magnus order; g must be >= e."""
    if not is_positive(g, max_degree):
        raise ValueError(f"{g} is not in the positive cone")
    g2 = g * g
    count = 0
    for h in E:
        if compare(g, h, max_degree) <= 0 and compare(h, g2, max_degree) <= 0:
            count += 1
    return count


def default_candidates(E: Sequence[Word], rank: int, length_cap: int = 2,
                       max_degree: int | None = None) -> list[Word]:
    """E, the positive representatives of h^-1 h' for pairs in E, and short positive words."""
    seen = {}
    for h in E:
        if is_positive(h, max_degree):
            seen.setdefault(h, None)
    for h in E:
        h_inv = h.inverse()
        for h2 in E:
            if h2 == h:
                continue
            d = h_inv * h2
            seen.setdefault(d if is_positive(d, max_degree) else d.inverse(), None)
    for w in ball(rank, length_cap):
        if is_positive(w, max_degree):
            seen.setdefault(w, None)
    return list(seen)


def rudin_lacunarity_estimate(E: Sequence[Word], candidates: Sequence[Word] | None = None,
                              rank: int | None = None, length_cap: int = 2,
                              max_degree: int | None = None) -> LacunarityCertificate:
    """N^(E) = max over candidate g of N(E, g), a lower bound for sup over all of G_+."""
    E = list(E)
    if rank is None:
        if E:
            rank = E[0].rank
        elif candidates:
            rank = candidates[0].rank
        else:
            rank = 1
    if candidates is None:
        candidates = default_candidates(E, rank, length_cap, max_degree)
    best, best_g = 0, None
    for g in candidates:
        n = rudin_count(E, g, max_degree)
        if n > best or best_g is None:
            best, best_g = n, g
    details = {"lower_bound": True, "candidates": len(candidates)}
    if best_g is not None:
        details["window"] = [str(best_g), str(best_g * best_g)]
    return LacunarityCertificate("rudin", True, best, [best_g] if best_g is not None else [], details)


def prop51_check(sequence: Sequence[Word]) -> LacunarityCertificate:
    """Sufficient J-coefficient criteria for a lacunary subset of F_2, tried in order:
    (1) J_A lacunary; (2) J_A = 0 and J_B lacunary; (3) J_A = J_B = 0 and J_AB lacunary.
    """
    seq = list(sequence)
    for g in seq:
        if g.rank != 2:
            raise ValueError("prop51_check works in F_2")
    profiles = [j_profile(g) for g in seq]
    ja = [p.J_A for p in profiles]
    jb = [p.J_B for p in profiles]
    jab = [p.J_AB for p in profiles]
    details = {"J_A": ja, "J_B": jb, "J_AB": jab, "criterion": None}

    def attempt(values):
        if any(v == 0 for v in values):
            return None
        cert = integer_lacunary(values)
        return cert if cert.passed else None

    criteria = [
        (1, True, ja),
        (2, all(v == 0 for v in ja), jb),
        (3, all(v == 0 for v in ja) and all(v == 0 for v in jb), jab),
    ]
    for index, applicable, values in criteria:
        if not applicable:
            continue
        cert = attempt(values)
        if cert is not None:
            details["criterion"] = index
            return LacunarityCertificate("prop51", True, cert.delta, cert.witnesses, details)
    return LacunarityCertificate("prop51", False, None, [], details)
