"""Brute-force reference implementations used only by the tests.

Everything here works letter by letter on signed generator lists so that it
shares no code path with the syllable-based library.
"""
from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

import numpy as np


def letters(word):
    """Word -> tuple of signed generator indices (a^2 b^-1 -> (1, 1, -2))."""
    out = []
    for gen, exp in word.syllables:
        out.extend([gen if exp > 0 else -gen] * abs(exp))
    return tuple(out)


def free_reduce(seq):
    stack = []
    for s in seq:
        if stack and stack[-1] == -s:
            stack.pop()
        else:
            stack.append(s)
    return tuple(stack)


def letter_inverse(seq):
    return tuple(-s for s in reversed(seq))


def letter_ball(rank, radius):
    """All reduced letter sequences of length <= radius, by BFS."""
    gens = [g for i in range(1, rank + 1) for g in (i, -i)]
    layer, out = [()], [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for s in gens:
                if w and w[-1] == -s:
                    continue
                nxt.append(w + (s,))
        out.extend(nxt)
        layer = nxt
    return out


def magnus_letters(seq, degree):
    """Magnus series as {monomial: int}, multiplying one letter at a time."""
    cur = {(): 1}
    for s in seq:
        gen = abs(s)
        if s > 0:
            factor = {(): 1, (gen,): 1}
        else:
            factor = {(gen,) * j: (-1) ** j for j in range(degree + 1)}
        nxt = Counter()
        for m1, c1 in cur.items():
            for m2, c2 in factor.items():
                if len(m1) + len(m2) <= degree:
                    nxt[m1 + m2] += c1 * c2
        cur = {m: c for m, c in nxt.items() if c}
    return cur


def dictionary_compare(p, q, degree):
    """Sign of p - q in the degree-then-lex order on monomials."""
    monos = sorted(set(p) | set(q), key=lambda m: (len(m), m))
    for m in monos:
        if len(m) > degree:
            break
        d = p.get(m, 0) - q.get(m, 0)
        if d:
            return 1 if d > 0 else -1
    return 0


def moment_by_paths(terms, m):
    """tau((x* x)^m) for scalar x = sum c_g lambda_g by summing over all 2m-fold products.

    ``terms`` maps letter tuples to coefficients.
    """
    items = list(terms.items())
    adj = [(letter_inverse(w), np.conj(c)) for w, c in items]
    total = 0
    for choice in itertools.product(range(len(items)), repeat=2 * m):
        seq, coeff = (), 1
        for pos, k in enumerate(choice):
            w, c = adj[k] if pos % 2 == 0 else items[k]
            seq = free_reduce(seq + w)
            coeff = coeff * c
        if not seq:
            total += coeff
    return total


def dense_compression(terms, rank, radius):
    """Matrix of left multiplication by sum c_g lambda_g on span{delta_w : |w| <= R}."""
    basis = letter_ball(rank, radius)
    index = {w: i for i, w in enumerate(basis)}
    m = np.zeros((len(basis), len(basis)), dtype=complex)
    for w, i in index.items():
        for g, c in terms.items():
            j = index.get(free_reduce(g + w))
            if j is not None:
                m[j, i] += c
    return m


def h1_coefficient(pk, pj):
    return Fraction(pk * pj, (pk + pj) ** 2)
