import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weyltasep.bracket import (RateParams, all_words, bracket_eval, build_two_class_chain,
                               check_confluence, format_word, normalized_weights, parse_word,
                               two_class_moves, two_class_states, verify_bracket_theorem,
                               verify_corollary, verify_factorization)
from weyltasep.typec import build_transition_matrix

H = Fraction(1, 2)
DEFAULT = RateParams.default()
positive = st.fractions(min_value=Fraction(1, 9), max_value=9, max_denominator=9)


def test_zero_words():
    assert bracket_eval(parse_word("000")) == 1
    assert bracket_eval(()) == 1


def test_generic_b1():
    p = RateParams(2, 3, 5, 7, 11)
    assert bracket_eval(parse_word("b1"), p) == (Fraction(1, 7) + Fraction(1, 11)) / 3


@pytest.mark.parametrize("w,v", [("01", 1), ("10", 2), ("b0", 1), ("0b", 2)])
def test_default_values(w, v):
    assert bracket_eval(parse_word(w), DEFAULT) == v


def test_words_roundtrip_and_errors():
    assert format_word(parse_word("b01")) == "b01"
    with pytest.raises(ValueError):
        parse_word("b2")
    with pytest.raises(ValueError):
        RateParams(1, 0, 1, 1, 1)


def test_confluence_short():
    assert check_confluence(4, 3, seed=1) is None


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from((-1, 0, 1)), max_size=7), st.integers(0, 10 ** 6))
def test_random_strategies_agree(w, seed):
    rng = random.Random(seed)
    p = RateParams.random(rng)
    assert bracket_eval(w, p, rng) == bracket_eval(w, p)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from((-1, 0, 1)), max_size=6), positive, positive, positive, positive,
       positive)
def test_positive_for_positive_params(w, a, b, c, d, e):
    assert bracket_eval(w, RateParams(a, b, c, d, e)) > 0


def test_two_class_matches_typec():
    ch = build_two_class_chain(2, 1)
    tc = build_transition_matrix(2, {2})
    assert set(ch.states) == set(tc.states)
    for s in ch.states:
        for t in ch.states:
            if s != t:
                assert 2 * ch.matrix[ch.index(t), ch.index(s)] == tc.matrix[tc.index(t), tc.index(s)]


@pytest.mark.parametrize("n,t", [(2, 1), (4, 2), (5, 3), (3, 3)])
def test_state_count(n, t):
    from math import comb
    assert len(two_class_states(n, t)) == comb(n, t) * 2 ** t


def test_generic_column_sums_vary():
    ch = build_two_class_chain(3, 1, RateParams(1, 2, 3, 4, 5))
    assert len(set(ch.matrix.column_sums())) > 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_theorem_default(n):
    for t in range(1, n + 1):
        assert verify_bracket_theorem(n, t) is None


def test_theorem_random_params():
    rng = random.Random(3)
    for _ in range(3):
        assert verify_bracket_theorem(4, 2, RateParams.random(rng)) is None


def test_altered_rule_detected():
    def moves(w, p):
        for v, r in two_class_moves(w, p):
            yield v, (r * 2 if r is p.c else r)
    assert verify_bracket_theorem(3, 2, RateParams(1, 1, 3, H, H), moves) is not None


def test_factorization_all_short_words():
    rng = random.Random(5)
    for length in range(2, 7):
        for w in all_words(length):
            if w.count(0) >= 2:
                assert verify_factorization(w, RateParams.random(rng)) is None


def test_factorization_explicit_split():
    assert verify_factorization(parse_word("b0101b"), split_at=[1, 3]) is None
    with pytest.raises(ValueError):
        verify_factorization(parse_word("b1"), split_at=[0])


def test_corollary_n2():
    w = normalized_weights(2, 1)
    assert {format_word(k): v for k, v in w.items()} == {"b0": 1, "01": 1, "10": 2, "0b": 2}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_corollary_parts_that_hold(n):
    # integrality, the "if" half of the minimum statement, the maximum
    # statement and the product rule hold for 1 <= t < n
    cache = {}
    for t in range(1, n):
        r = verify_corollary(n, t, cache)
        assert r.passed_weak, r.line()


def test_corollary_minimum_converse_fails():
    r = verify_corollary(3, 1)
    assert not r.min_characterization and r.witness[0] == "min"
    w = normalized_weights(3, 1)
    assert w[parse_word("010")] == 1 == w[parse_word("0b0")]


def test_corollary_product_rule_n6_instance():
    ws = normalized_weights(6, 3)
    u, v, x = parse_word("1"), parse_word("b"), parse_word("1")
    word = u + (0,) + v + (0,) + x + (0,)
    lhs = ws[word]
    rhs = normalized_weights(2, 1)[u + (0,)] * normalized_weights(3, 1)[(0,) + v + (0,)] \
        * normalized_weights(3, 1)[(0,) + x + (0,)]
    assert lhs == rhs
