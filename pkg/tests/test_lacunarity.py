import math
from fractions import Fraction
from itertools import permutations

import pytest

from lacunae.lacunarity import (default_candidates, integer_lacunary, prop51_check,
                                psi_lacunary_delta, rudin_count, rudin_lacunarity_estimate)
from lacunae.words import LengthFunction, Word, parse_word

WL = LengthFunction.word_length()


def A(n):
    return parse_word(f"a^{n}", 1)


def brute_delta(psi, seq):
    # oracle: largest delta satisfying both inequalities, checked pair by pair
    cands = [Fraction(psi(seq[k + 1]), psi(seq[k])) - 1 for k in range(len(seq) - 1)]
    for h, g in permutations(seq, 2):
        cands.append(Fraction(psi(h.inverse() * g), max(psi(h), psi(g))))
    return min(cands)


def test_powers_of_two():
    seq = [A(2 ** k) for k in range(1, 7)]
    cert = psi_lacunary_delta(WL, seq)
    assert cert.passed
    assert cert.delta == Fraction(1, 2) == brute_delta(WL, seq)
    assert isinstance(cert.delta, Fraction)
    k, kk = cert.witnesses
    assert cert.delta == Fraction(len(seq[k].inverse() * seq[kk]), max(len(seq[k]), len(seq[kk]))) \
        or cert.delta == Fraction(len(seq[kk]), len(seq[k])) - 1


def test_pullback_generators():
    rank = 3
    psi = LengthFunction.pullback([2 ** i for i in range(1, rank + 1)])
    seq = [Word.generator(rank, i) for i in range(1, rank + 1)]
    cert = psi_lacunary_delta(psi, seq)
    assert cert.delta == 1 and cert.passed


def test_constant_sequence_fails():
    cert = psi_lacunary_delta(WL, [A(3), A(3)])
    assert not cert.passed and cert.delta <= 0 and cert.witnesses


def test_short_sequences():
    assert psi_lacunary_delta(WL, [A(5)]).delta == math.inf
    assert psi_lacunary_delta(WL, []).passed
    with pytest.raises(ValueError):
        psi_lacunary_delta(WL, [Word.identity(1)])


def test_random_sequences_agree_with_brute_force():
    import random
    rng = random.Random(1)
    for _ in range(30):
        seq = sorted({rng.randint(1, 200) for _ in range(5)})
        words = [A(n) for n in seq]
        if len(words) > 1:
            assert psi_lacunary_delta(WL, words).delta == brute_delta(WL, words)


@pytest.mark.parametrize("seq,delta,ok", [((2, 4, 8, 16), 2, True), ((3, 9, 81), 3, True),
                                          ((1, 2, 3), Fraction(3, 2), True), ((1, 2, 2), 1, False)])
def test_integer_lacunary(seq, delta, ok):
    cert = integer_lacunary(seq)
    assert cert.delta == delta and cert.passed == ok


def test_rudin_count_rank1():
    E = [A(2 ** j) for j in range(9)]
    for k in range(8):
        assert rudin_count(E, A(2 ** k)) == 2
    assert rudin_count([A(100)], A(3)) == 0
    with pytest.raises(ValueError):
        rudin_count(E, A(-1))


def test_rudin_count_rank2_by_direct_order():
    from lacunae.order import compare
    E = [parse_word(f"a^{2 ** i} b^{i}", 2) for i in range(5)]
    g = parse_word("a^2", 2)
    expected = sum(1 for h in E if compare(g, h) <= 0 and compare(h, g * g) <= 0)
    # only a^2 b lies in [a^2, a^4]
    assert rudin_count(E, g) == expected == 1


def test_rudin_estimates():
    assert rudin_lacunarity_estimate([A(2 ** j) for j in range(9)]).delta == 2
    assert rudin_lacunarity_estimate([A(n) for n in range(1, 5)]).delta == 3
    assert rudin_lacunarity_estimate([], rank=1).delta == 0


def test_default_candidates_positive():
    E = [A(1), A(4)]
    cands = default_candidates(E, 1)
    assert A(3) in cands and all(g.syllables[0][1] > 0 for g in cands if not g.is_identity())


def test_j_criteria_criteria():
    seq1 = [parse_word(f"a^{2 ** i} b^{i + 3}", 2) for i in range(5)]
    assert prop51_check(seq1).details["criterion"] == 1

    c = parse_word("a b a^-1 b^-1", 2)
    cert = prop51_check([c ** (2 ** k) for k in range(5)])
    assert cert.details["criterion"] == 3 and cert.details["J_AB"] == [2 ** k for k in range(5)]

    seq = [parse_word(f"a^{2 ** k} b^{2 ** k} a^{-2 ** k} b^{-2 ** k}", 2) for k in range(5)]
    cert = prop51_check(seq)
    assert cert.passed and cert.details["criterion"] == 3
    assert cert.details["J_AB"] == [4 ** k for k in range(5)]


def test_j_criteria_criterion_two_and_failure():
    seq = [parse_word(f"b^{3 ** k} a b a^-1 b^-1", 2) for k in range(4)]
    assert prop51_check(seq).details["criterion"] == 2
    assert not prop51_check([parse_word("a", 2), parse_word("a", 2)]).passed
