"""Checks that tie the chains together: projections along links, the packaged
conjugation matrix, coset counts and integrality reports."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .markov import (Counterexample, InvariantViolation, integrality_report, project_distribution,
                     projection_matrix, stationary, verify_conjugation, verify_intertwine)
from .rational import SparseRationalMatrix
from .rootsys import CartanSpec, Group, build_lam_chain, build_root_system, coset_decompose
from .typec import all_subsets, build_transition_matrix, enumerate_states, links, project

PACKAGED_N = 4
PACKAGED_J = frozenset({3, 4})
PACKAGED_JP = frozenset({2, 3, 4})


@dataclass
class LinkResult:
    n: int
    i: int
    J: frozenset
    intertwine: Counterexample | None
    ratio: Fraction | None       # D pi_J = ratio * pi_J', None if not proportional

    @property
    def passed(self) -> bool:
        return self.intertwine is None and self.ratio is not None

    def line(self) -> str:
        head = "link i=%d J=%s" % (self.i, sorted(self.J))
        if self.passed:
            return "%s ok ratio=%s" % (head, self.ratio)
        if self.intertwine is not None:
            return "%s D M_J != M_J' D at %s" % (head, self.intertwine)
        return "%s D pi_J not proportional to pi_J'" % head


def typec_link(n: int, i: int, J, cache: dict | None = None) -> LinkResult:
    """Intertwining D M_J = M_J' D and D pi_J ~ pi_J' for the type-C link (i, J)."""
    J = frozenset(J)
    cache = {} if cache is None else cache

    def chain_and_pi(K):
        if K not in cache:
            ch = build_transition_matrix(n, K)
            cache[K] = (ch, stationary(ch.matrix, ch.states, expected_total_rate=2 * n))
        return cache[K]

    big, pi = chain_and_pi(J)
    small, pip = chain_and_pi(J | {i})
    d = projection_matrix(lambda u: project(u, i, J), big.states, small.states)
    cx = verify_intertwine(d, big.matrix, small.matrix)
    try:
        _, ratio = project_distribution(d, pi, pip)
    except InvariantViolation:
        ratio = None
    return LinkResult(n, i, J, cx, ratio)


def all_typec_links(n: int) -> list:
    cache = {}
    return [typec_link(n, i, J, cache) for i, J, _ in links(n)]


def weyl_link(group: Group, i: int, J) -> LinkResult:
    """Same checks for Lam's coset chains: D(W_J' w, W_J w) = 1."""
    J = frozenset(J)
    Jp = J | {i}
    small_t = coset_decompose(group, Jp)
    big_t = coset_decompose(group, J)
    big = build_lam_chain(group, J)
    small = build_lam_chain(group, Jp)
    entries = {(small_t.class_of[k], cid): 1 for cid, k in enumerate(big_t.min_rep)}
    d = SparseRationalMatrix(small_t.num_cosets, big_t.num_cosets, entries)
    cx = verify_intertwine(d, big.matrix, small.matrix)
    try:
        _, ratio = project_distribution(d, stationary(big.matrix, big.states),
                                        stationary(small.matrix, small.states))
    except InvariantViolation:
        ratio = None
    return LinkResult(group.rs.rank, i, J, cx, ratio)


def all_weyl_links(family: str, rank: int) -> list:
    group = Group(build_root_system(CartanSpec(family, rank)))
    out = []
    for J in all_subsets(rank):
        for i in range(1, rank + 1):
            if i not in J:
                out.append(weyl_link(group, i, J))
    return out


def coset_count_mismatches(n: int) -> list:
    """[(J, cosets, |Omega_J|)] where the coset count and the state count differ."""
    group = Group(build_root_system(CartanSpec("C", n)))
    bad = []
    for J in all_subsets(n):
        a = coset_decompose(group, J).num_cosets
        b = len(enumerate_states(n, J))
        if a != b:
            bad.append((sorted(J), a, b))
    return bad


# -- the packaged 8 x 48 matrix ---------------------------------------------------

def packaged_text() -> str:
    return resources.files("weyltasep").joinpath("data/conjugation_n4.txt").read_text()


def packaged_matrix() -> SparseRationalMatrix:
    """The packaged 8 x 48 integer matrix (rows: Omega_J', columns: Omega_J)."""
    return SparseRationalMatrix.from_text(packaged_text())


def verify_packaged_matrix(given: SparseRationalMatrix | None = None):
    """None if M_J U = U M_J' with U the transpose of the given 8 x 48 matrix."""
    if given is None:
        given = packaged_matrix()
    mj = build_transition_matrix(PACKAGED_N, PACKAGED_J)
    mjp = build_transition_matrix(PACKAGED_N, PACKAGED_JP)
    u = given.transpose()
    if u.shape != (len(mj), len(mjp)):
        raise ValueError("expected a %dx%d matrix, got %s" % (len(mjp), len(mj), given.shape))
    return verify_conjugation(mj.matrix, u, mjp.matrix)


# -- integrality -----------------------------------------------------------------------

def typec_integrality(n: int) -> list:
    out = []
    for J in all_subsets(n):
        ch = build_transition_matrix(n, J)
        out.append(integrality_report(stationary(ch.matrix, ch.states), ch.label))
    return out


def weyl_integrality(family: str, rank: int, J=()) -> object:
    group = Group(build_root_system(CartanSpec(family, rank)))
    ch = build_lam_chain(group, J)
    return integrality_report(stationary(ch.matrix, ch.states), ch.label)
