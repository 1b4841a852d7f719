from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weyltasep.chain import Chain
from weyltasep.rootsys import (CalibrationError, CartanSpec, ConfigurationError, Group,
                               build_lam_chain, build_root_system, calibrate_typeC_correspondence,
                               classical_order, classical_positive_count, coset_decompose,
                               enumerate_group, identity, lam_sigma, length, reflection,
                               verify_coset_invariance)
from weyltasep.typec import all_subsets, build_transition_matrix


def rs(fam, rank):
    return build_root_system(CartanSpec(fam, rank))


@pytest.mark.parametrize("fam,rank,rates", [("C", 2, (1, 2, 1)), ("A", 3, (1, 1, 1, 1)),
                                            ("B", 3, (1, 1, 2, 2)), ("C", 4, (1, 2, 2, 2, 1))])
def test_rates(fam, rank, rates):
    assert rs(fam, rank).rates == rates


@pytest.mark.parametrize("fam,rank", [("A", 1), ("A", 4), ("B", 2), ("B", 4), ("C", 3), ("D", 4),
                                      ("D", 5)])
def test_root_invariants(fam, rank):
    r = rs(fam, rank)
    assert len(r.positive_roots) == classical_positive_count(r.spec)
    combo = [sum((m * a[k] for m, a in zip(r.marks, r.simple_roots)), Fraction(0))
             for k in range(r.dim)]
    assert tuple(combo) == r.highest_root


def test_b3_positive_roots():
    r = rs("B", 3)
    assert r.marks == (1, 2, 2) and len(r.positive_roots) == 9


@pytest.mark.parametrize("fam,rank", [("E", 6), ("B", 1), ("D", 3), ("A", 0)])
def test_bad_specs(fam, rank):
    with pytest.raises(ConfigurationError):
        CartanSpec(fam, rank)


def test_reflections():
    r = rs("A", 2)
    for i in range(3):
        t = reflection(r, i)
        assert t @ t == identity(r)
        if i:
            assert length(t, r) == 1
    t0 = reflection(r, 0)
    # exchanges coordinates 1 and 3
    assert t0.apply((1, 2, 3)) == (3, 2, 1)
    with pytest.raises(IndexError):
        reflection(r, 3)


def test_lengths():
    c2 = rs("C", 2)
    longest = max(enumerate_group(c2), key=lambda w: length(w, c2))
    assert length(longest, c2) == 4
    a2 = rs("A", 2)
    assert length(identity(a2), a2) == 0
    assert length(reflection(a2, 1) @ reflection(a2, 2), a2) == 2


@pytest.mark.parametrize("fam,rank,order", [("B", 3, 48), ("A", 3, 24), ("C", 4, 384),
                                            ("D", 4, 192)])
def test_group_order(fam, rank, order):
    r = rs(fam, rank)
    assert len(enumerate_group(r)) == order == classical_order(r.spec)


def test_group_order_deterministic():
    r = rs("C", 2)
    a, b = enumerate_group(r), enumerate_group(r)
    assert a == b
    lens = [length(w, r) for w in a]
    assert lens == sorted(lens)


def test_lam_sigma_basics():
    r = rs("C", 2)
    e = identity(r)
    for i in (1, 2):
        assert lam_sigma(e, i, r) == e
    assert lam_sigma(e, 0, r) == reflection(r, 0)


@pytest.mark.parametrize("fam,rank", [("C", 2), ("B", 3), ("A", 3)])
def test_lam_sigma_idempotent_and_length_step(fam, rank):
    g = Group(rs(fam, rank))
    for k in range(len(g)):
        for i in range(rank + 1):
            s = g.sigma(k, i)
            assert g.sigma(s, i) == s
            if i:
                assert abs(g.lengths[g.right[i][k]] - g.lengths[k]) == 1


def test_cosets_c4():
    g = Group(rs("C", 4))
    assert coset_decompose(g, {3, 4}).num_cosets == 48
    assert coset_decompose(g, {2, 3, 4}).num_cosets == 8
    assert coset_decompose(g, ()).num_cosets == 384
    with pytest.raises(ValueError):
        coset_decompose(g, {0})


def test_coset_min_rep_unique():
    g = Group(rs("B", 3))
    t = coset_decompose(g, {1, 3})
    for cid, k in enumerate(t.min_rep):
        members = [x for x in range(len(g)) if t.class_of[x] == cid]
        assert min(g.lengths[x] for x in members) == g.lengths[k]
        assert sum(g.lengths[x] == g.lengths[k] for x in members) == 1


@pytest.mark.parametrize("fam", ["B", "C"])
def test_coset_invariance_rank3(fam):
    g = Group(rs(fam, 3))
    for J in all_subsets(3):
        assert verify_coset_invariance(g, J) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lam_chain_column_sums(n):
    g = Group(rs("C", n))
    ch = build_lam_chain(g)
    assert set(ch.matrix.column_sums()) == {2 * n}
    # only sigma_0 moves the identity
    assert ch.matrix[0, 0] == 2 * n - 1


def test_lam_chain_a2_and_override():
    g = Group(rs("A", 2))
    ch = build_lam_chain(g)
    assert len(ch) == 6 and set(ch.matrix.column_sums()) == {3}
    ch = build_lam_chain(g, rate_override=(1, 2, 3))
    assert set(ch.matrix.column_sums()) == {6}
    with pytest.raises(ValueError):
        build_lam_chain(g, rate_override=(1, 1))


def test_calibration_consistent_across_ranks():
    assert calibrate_typeC_correspondence(2) == calibrate_typeC_correspondence(3)


def test_calibration_rejects_perturbed_rates():
    ch = build_transition_matrix(2, ())
    m = ch.matrix.entries
    key = next(k for k in sorted(m) if k[0] != k[1])
    m[key] += 1
    from weyltasep.rational import SparseRationalMatrix
    bad = Chain(ch.states, SparseRationalMatrix(8, 8, m))
    with pytest.raises(CalibrationError):
        calibrate_typeC_correspondence(2, bad)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 47), st.integers(0, 47))
def test_length_subadditive_b3(a, b):
    g = _B3()
    w = g.elements[a] @ g.elements[b]
    assert g.lengths[g.index[w]] <= g.lengths[a] + g.lengths[b]


_cache = {}


def _B3():
    if "b3" not in _cache:
        _cache["b3"] = Group(rs("B", 3))
    return _cache["b3"]
