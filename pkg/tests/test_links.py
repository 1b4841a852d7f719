import pytest

from weyltasep.links import (PACKAGED_J, PACKAGED_JP, all_typec_links, all_weyl_links,
                             coset_count_mismatches, packaged_matrix, typec_integrality,
                             verify_packaged_matrix, weyl_integrality)
from weyltasep.typec import enumerate_states


@pytest.mark.parametrize("n", [2, 3])
def test_typec_links(n):
    res = all_typec_links(n)
    assert res and all(r.passed for r in res), [r.line() for r in res if not r.passed]


@pytest.mark.parametrize("family,rank", [("A", 2), ("B", 2), ("C", 3)])
def test_weyl_links(family, rank):
    assert all(r.passed for r in all_weyl_links(family, rank))


@pytest.mark.parametrize("n", [2, 3])
def test_coset_counts(n):
    assert coset_count_mismatches(n) == []


def test_packaged_matrix():
    m = packaged_matrix()
    assert m.shape == (len(enumerate_states(4, PACKAGED_JP)), len(enumerate_states(4, PACKAGED_J)))
    assert m.shape == (8, 48)
    assert verify_packaged_matrix() is None


def test_packaged_matrix_perturbed_fails():
    m = packaged_matrix()
    (r, c), v = next(iter(m.items()))
    entries = dict(m.items())
    entries[(r, c)] = v + 1
    bad = type(m)(m.nrows, m.ncols, entries)
    assert verify_packaged_matrix(bad) is not None


def test_integrality_reports():
    reps = typec_integrality(2)
    assert len(reps) == 4
    assert all(r.line() for r in reps)
    assert weyl_integrality("B", 2).line()
