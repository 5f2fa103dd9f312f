import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import syllables, words
from lacunae.errors import BudgetExceededError, RankMismatchError, WordParseError
from lacunae.words import (LengthFunction, Word, ball, ball_size, evaluate_length, format_word,
                           inverse, multiply, parse_word, reduce, word_length)
from oracles import free_reduce, letter_ball, letters


def W(text, rank=2):
    return parse_word(text, rank)


def test_reduce_cancels_inside():
    assert reduce(2, [(1, 1), (2, 1), (2, -1)]) == W("a")


def test_middle_cancellation():
    g = reduce(2, [(1, 2), (2, 3)])
    h = reduce(2, [(2, -3), (1, 1)])
    assert g * h == W("a^3")


def test_multiply_and_inverse_examples():
    assert multiply(W("a"), W("a^-1")).is_identity()
    assert inverse(W("a^2 b^-1")) == W("b a^-2")
    assert multiply(W("a b"), W("b^-1 a")) == W("a^2")


@given(syllables(3, 8))
def test_reduce_matches_letter_cancellation(syl):
    g = reduce(3, syl)
    raw = []
    for gen, e in syl:
        raw.extend([gen if e > 0 else -gen] * abs(e))
    assert letters(g) == free_reduce(raw)
    assert reduce(3, g.syllables) == g


@given(words(3), words(3), words(3))
def test_group_axioms(g, h, k):
    assert (g * h) * k == g * (h * k)
    assert (g * g.inverse()).is_identity()
    assert g * Word.identity(3) == g
    assert (g * h).inverse() == h.inverse() * g.inverse()


@given(words(2))
def test_normal_form_invariant(g):
    gens = [s for s, _ in g.syllables]
    assert all(a != b for a, b in zip(gens, gens[1:]))
    assert all(e != 0 for _, e in g.syllables)


@given(words(2), st.integers(-4, 4))
def test_power(g, n):
    expected = Word.identity(2)
    for _ in range(abs(n)):
        expected = expected * (g if n > 0 else g.inverse())
    assert g ** n == expected


def test_lengths():
    g = W("a^2 b^-3")
    assert word_length(g) == 5
    assert LengthFunction.q_length(2)(g) == 13
    assert LengthFunction.psi_z()(W("a b a^-1 b^-1")) == 0
    assert evaluate_length(LengthFunction.q_length(1), g) == 5


def test_q_length_fractional():
    psi = LengthFunction.q_length(0.5)
    assert psi(W("a^4 b")) == pytest.approx(3.0)


@pytest.mark.parametrize("q", [0, -1, 2.5])
def test_q_length_range(q):
    with pytest.raises(ValueError):
        LengthFunction.q_length(q)


@given(words(2))
def test_lengths_symmetric_and_vanish_at_e(g):
    for psi in (LengthFunction.word_length(), LengthFunction.q_length(0.5),
                LengthFunction.q_length(2), LengthFunction.psi_z(),
                LengthFunction.pullback([2, 4])):
        assert psi(g) == psi(g.inverse())
        assert psi(Word.identity(2)) == 0
    assert word_length(g) == LengthFunction.q_length(1)(g) == len(letters(g))


def test_pullback():
    psi = LengthFunction.pullback([2, 4])
    assert psi(W("a")) == 2
    assert psi(W("a^-1 b")) == 6


def test_from_spec():
    assert LengthFunction.from_spec("word")(W("a b")) == 2
    assert LengthFunction.from_spec("q:2")(W("a^3")) == 9
    assert LengthFunction.from_spec("psiz")(W("a b a")) == 5
    assert LengthFunction.from_spec("pullback:1,3")(W("b")) == 3
    with pytest.raises(ValueError):
        LengthFunction.from_spec("nope")


def test_table_length():
    psi = LengthFunction.table({W("a"): 7}, default=1)
    assert psi(W("a")) == 7
    assert psi(W("b")) == 1
    assert psi(Word.identity(2)) == 0


@pytest.mark.parametrize("rank,radius,size", [(2, 0, 1), (2, 1, 5), (1, 3, 7), (2, 2, 17), (3, 2, 37)])
def test_ball_sizes(rank, radius, size):
    b = ball(rank, radius)
    assert len(b) == size == ball_size(rank, radius)
    assert len(set(b)) == size
    assert sorted(letters(w) for w in b) == sorted(letter_ball(rank, radius))


def test_ball_order_and_cap():
    b = ball(2, 3)
    assert b[0].is_identity()
    assert [len(w) for w in b] == sorted(len(w) for w in b)
    with pytest.raises(BudgetExceededError):
        ball(2, 6, cap=100)


def test_parse_and_format_roundtrip():
    g = W("a^2 b^-1 a")
    assert format_word(g) == "a^2 b^-1 a"
    assert W(str(g)) == g
    assert W("ab a^-1") == W("a b a^-1")
    assert W("1").is_identity() and W("").is_identity() and W("e").is_identity()
    assert str(Word.identity(2)) == "1"
    assert parse_word([[1, 3], [2, -2]], 2) == W("a^3 b^-2")
    assert parse_word("x1 x27^-2", 30).syllables == ((1, 1), (27, -2))


@pytest.mark.parametrize("text", ["a^", "c", "a^2 #", "a^b"])
def test_parse_errors(text):
    with pytest.raises(WordParseError) as info:
        parse_word(text, 2)
    assert info.value.position is not None


def test_parse_error_position():
    with pytest.raises(WordParseError) as info:
        parse_word("a b c", 2)
    assert info.value.position == 4


def test_rank_mismatch():
    with pytest.raises(RankMismatchError):
        W("a", 1) * W("a", 2)


def test_ball_growth_formula():
    for k in (1, 2, 3):
        for r in range(5):
            expected = 1 + sum(2 * k * (2 * k - 1) ** (j - 1) for j in range(1, r + 1))
            assert ball_size(k, r) == expected
    assert math.isfinite(ball_size(2, 8))
