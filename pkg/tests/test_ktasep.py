import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from weyltasep.ktasep import (arrangements, build_Ak, elementary_symmetric, format_word,
                              lam_type_a_match, merge_letters, monotone_merge, parse_rates,
                              parse_word, random_rates, rate_of_update, ring_sigma,
                              ring_sigma_set, unit_rates, update_order, verify_commutation,
                              verify_equal_stationary, verify_merge_intertwining)


def test_ring_sigma_examples():
    assert ring_sigma((2, 1, 3), 2) == (1, 2, 3)
    assert ring_sigma((1, 2, 3), 2) == (1, 2, 3)
    assert ring_sigma((2, 1), 1) == (2, 1)
    assert ring_sigma((2, 1), 2) == (1, 2)
    with pytest.raises(ValueError):
        ring_sigma((1, 2), 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=2, max_size=7), st.data())
def test_ring_sigma_idempotent_and_conserving(u, data):
    u = tuple(u)
    i = data.draw(st.integers(1, len(u)))
    v = ring_sigma(u, i)
    assert ring_sigma(v, i) == v
    assert sorted(v) == sorted(u)
    assert v[(i - 2) % len(u)] <= v[i - 1]


def test_paper_order_example():
    S = {1, 2, 4, 5, 7}
    assert update_order(S, 7) == [4, 5, 7, 1, 2]
    for u in random.Random(0).sample(list(permutations(range(1, 8))), 200):
        v = u
        for j in (4, 5, 7, 1, 2):
            v = ring_sigma(v, j)
        assert ring_sigma_set(u, S) == v


def test_singleton_and_errors():
    assert ring_sigma_set((3, 1, 2), {2}) == ring_sigma((3, 1, 2), 2)
    for bad in (set(), {1, 2, 3}, {4}):
        with pytest.raises(ValueError):
            ring_sigma_set((3, 1, 2), bad)
    with pytest.raises(ValueError):
        update_order({1, 2}, 3, gap=2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_gap_independence(n):
    for u in set(permutations([1, 1, 2, 3, 4][:n])) | set(permutations(range(1, n + 1))):
        for k in range(1, n):
            for S in combinations(range(1, n + 1), k):
                outs = {ring_sigma_set(u, S, g) for g in range(1, n + 1) if g not in S}
                assert len(outs) == 1


def test_rates():
    x = {1: Fraction(2), 2: Fraction(3), 3: Fraction(5)}
    assert rate_of_update((2, 1, 3), {1, 2}, x) == 6
    assert rate_of_update((2, 1, 3), {1, 2}, unit_rates((1, 2, 3))) == 1
    with pytest.raises(KeyError):
        rate_of_update((2, 1, 4), {3}, x)
    assert parse_rates("1,1/2,3") == {1: 1, 2: Fraction(1, 2), 3: 3}


def test_word_text():
    assert format_word(parse_word("3,1,2")) == "3,1,2"
    for bad in ("1", "0,1"):
        with pytest.raises(ValueError):
            parse_word(bad)


def test_column_sums_are_elementary_symmetric():
    rng = random.Random(11)
    ms = (1, 1, 2, 3)
    x = random_rates(ms, rng)
    for k in (1, 2, 3):
        sums = set(build_Ak(ms, k, x).matrix.column_sums())
        assert sums == {elementary_symmetric([x[a] for a in ms], k)}
    assert set(build_Ak((1, 2, 3), 2).matrix.column_sums()) == {3}
    with pytest.raises(ValueError):
        build_Ak((1, 2, 3), 3)


def test_k1_is_ring_tasep():
    ch = build_Ak((1, 2, 3), 1)
    assert len(ch) == 6 and ch.states == tuple(arrangements((1, 2, 3)))


def test_commutation():
    rng = random.Random(2)
    ms = (1, 1, 2, 3)
    x = random_rates(ms, rng)
    for k in range(1, 4):
        for l in range(1, 4):
            assert verify_commutation(ms, x, k, l) is None
    for k in range(1, 5):
        for l in range(k, 5):
            assert verify_commutation((1, 2, 3, 4, 5), None, k, l) is None


def test_equal_stationary():
    assert verify_equal_stationary((1, 2, 2, 4)) is None
    assert verify_equal_stationary((1, 2, 3, 4), random_rates((1, 2, 3, 4), random.Random(4))) is None
    assert verify_equal_stationary((1, 2)) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lam_type_a(n):
    assert lam_type_a_match(n) is None


def test_monotone_merge():
    assert monotone_merge((1, 2, 3), {1}) == {1: 1, 2: 1, 3: 2}
    assert monotone_merge((1, 2, 3), set()) == {1: 1, 2: 2, 3: 3}
    assert merge_letters((3, 1, 2), {1: 1, 2: 1, 3: 2}) == (2, 1, 1)


@pytest.mark.parametrize("ms", [(1, 2, 3), (1, 2, 3, 4), (1, 1, 2, 3)])
def test_merge_intertwining_exhaustive(ms):
    letters = sorted(set(ms))
    for m in range(len(letters)):
        for cuts in combinations(letters[:-1], m):
            f = monotone_merge(letters, set(cuts))
            for k in range(1, len(ms)):
                assert verify_merge_intertwining(ms, f, k) is None


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_merge_intertwining_random_rates(seed):
    rng = random.Random(seed)
    f = {1: 1, 2: 2, 3: 2, 4: 3}
    r = random_rates((1, 2, 4), rng)
    x = {1: r[1], 2: r[2], 3: r[2], 4: r[4]}
    assert verify_merge_intertwining((1, 2, 3, 4), f, rng.randint(1, 3), x) is None
