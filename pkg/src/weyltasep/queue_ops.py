"""Queue-style conjugation for links that add the largest class.

``tau(u, theta)`` places the particles of ``u`` into the sites designated by
``theta`` (column j upper iff ``theta[j] == '+'``) and fills what is left
with a new largest class. The count matrix U(v, u) = #{theta : v = tau(u,
theta)} conjugates M_{J u {n}} into M_J.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Callable

from .chain import Chain
from .markov import Distribution, stationary
from .rational import SparseRationalMatrix
from .typec import build_transition_matrix, enumerate_states, type_of

UPPER, LOWER = 1, -1


def parse_theta(text: str) -> tuple:
    bad = set(text) - set("+-")
    if bad:
        raise ValueError("theta must be a string over {+,-}, got %r" % text)
    return tuple(text)


def format_theta(theta) -> str:
    return "".join(theta)


def all_thetas(n: int):
    return list(product("+-", repeat=n))


def cycle_position(row: int, col: int, n: int) -> int:
    """Index of a site along the clockwise tour: upper 1..n, then lower n..1."""
    return col - 1 if row == UPPER else 2 * n - col


def site_at(pos: int, n: int) -> tuple:
    pos %= 2 * n
    if pos < n:
        return UPPER, pos + 1
    return LOWER, 2 * n - pos


def clockwise_successor(row: int, col: int, n: int) -> tuple:
    return site_at(cycle_position(row, col, n) + 1, n)


def default_order(u: tuple) -> list:
    """Particle columns (1-based) by class, then by clockwise site order."""
    n = len(u)
    parts = [(abs(x), cycle_position(UPPER if x > 0 else LOWER, j + 1, n), j + 1)
             for j, x in enumerate(u) if x]
    return [col for _, _, col in sorted(parts)]


def tau(u: tuple, theta, order: list | None = None) -> tuple:
    """Apply tau_theta to ``u``.

    ``order`` lists the particle columns in processing order; it must be
    weakly increasing in class (defaults to ``default_order``).
    """
    n = len(u)
    if len(theta) != n:
        raise ValueError("theta has length %d, state has %d columns" % (len(theta), n))
    k = max((abs(x) for x in u), default=0)
    mult, empties = type_of(u)
    if any(m == 0 for m in mult):
        raise ValueError("state %r skips a class" % (u,))
    if order is None:
        order = default_order(u)
    classes = [abs(u[c - 1]) for c in order]
    if classes != sorted(classes) or sorted(order) != [j + 1 for j, x in enumerate(u) if x]:
        raise ValueError("processing order must list every particle by weakly increasing class")
    designated = [UPPER if s == "+" else LOWER for s in theta]
    free = [True] * n  # column j+1 still Not Yet Occupied
    out = [0] * n
    for col in order:
        x = u[col - 1]
        pos = cycle_position(UPPER if x > 0 else LOWER, col, n)
        for step in range(2 * n):
            row, c = site_at(pos + step, n)
            if free[c - 1] and designated[c - 1] == row:
                free[c - 1] = False
                out[c - 1] = abs(x) * row
                break
        else:  # pragma: no cover - at most n particles for n designated sites
            raise AssertionError("no free designated site")
    for c in range(n):
        if free[c]:
            out[c] = (k + 1) * designated[c]
    return tuple(out)


def build_U(n: int, J, source_states=None, target_states=None,
            tau_fn: Callable = tau) -> SparseRationalMatrix:
    """U(v, u) = #{theta : v = tau(u, theta)}, rows Omega_J, columns Omega_{J u {n}}.

    With ``J`` unchanged on both sides (``source_states`` passed as Omega_J
    itself) this gives the square matrix of the corollary.
    """
    J = frozenset(J)
    if n in J:
        raise ValueError("J must be a subset of [n-1]")
    rows = list(target_states) if target_states is not None else enumerate_states(n, J)
    cols = list(source_states) if source_states is not None else enumerate_states(n, J | {n})
    rindex = {s: i for i, s in enumerate(rows)}
    acc = defaultdict(int)
    thetas = all_thetas(n)
    for j, u in enumerate(cols):
        for th in thetas:
            v = tau_fn(u, th)
            if v not in rindex:
                raise ValueError("tau(%r, %s) = %r has the wrong type" % (u, format_theta(th), v))
            acc[rindex[v], j] += 1
    return SparseRationalMatrix(len(rows), len(cols), acc)


@dataclass
class QueueWitness:
    """Failure report: an entry of U M_J' - M_J U plus a (u, theta, j) triple
    whose two composites disagree."""

    row: int
    col: int
    lhs: object
    rhs: object
    u: tuple
    theta: str
    j: int

    def __str__(self):
        return ("U M_J' != M_J U at (%d, %d): %s vs %s; witness u=%s theta=%s j=%d"
                % (self.row, self.col, self.lhs, self.rhs, ",".join(map(str, self.u)),
                   self.theta, self.j))


def _witness(u, n, tau_fn):
    from .typec import apply_sigma
    for th in all_thetas(n):
        for j in range(n + 1):
            a = apply_sigma(tau_fn(u, th), j)
            if a != tau_fn(apply_sigma(u, j), th):
                return th, j
    return all_thetas(n)[0], 0


def verify_queue_theorem(n: int, J, tau_fn: Callable = tau):
    """None if U M_{J'} == M_J U exactly, else a QueueWitness."""
    J = frozenset(J)
    big = build_transition_matrix(n, J)
    small = build_transition_matrix(n, J | {n})
    u = build_U(n, J, small.states, big.states, tau_fn)
    diff = (u @ small.matrix).first_difference(big.matrix @ u)
    if diff is None:
        return None
    r, c, lhs, rhs = diff
    src = small.states[c]
    th, j = _witness(src, n, tau_fn)
    return QueueWitness(r, c, lhs, rhs, src, format_theta(th), j)


def verify_square_corollary(n: int, J, tau_fn: Callable = tau):
    """None if the square tau matrix commutes with M_J and fixes pi_J's line."""
    J = frozenset(J)
    if n in J:
        raise ValueError("the corollary needs states without empty columns (n not in J)")
    chain = build_transition_matrix(n, J)
    u = build_U(n, J, chain.states, chain.states, tau_fn)
    diff = (chain.matrix @ u).first_difference(u @ chain.matrix)
    if diff is not None:
        r, c, lhs, rhs = diff
        return QueueWitness(r, c, lhs, rhs, chain.states[c], "", -1)
    pi = stationary(chain.matrix, chain.states)
    pushed = Distribution(chain.states, tuple(u.matvec(list(pi.values))))
    if pushed.is_proportional_to(pi) is None:
        return QueueWitness(-1, -1, "U pi", "not proportional to pi", (), "", -1)
    return None


def sample_queue(sampler: Callable[[random.Random], tuple], rng: random.Random,
                 size: int) -> Counter:
    """Draw ``u`` from ``sampler`` and ``theta`` uniformly; tally tau(u, theta)."""
    counts = Counter()
    for _ in range(size):
        u = sampler(rng)
        theta = tuple(rng.choice("+-") for _ in u)
        counts[tau(u, theta)] += 1
    return counts


def exact_sampler(pi: Distribution) -> Callable[[random.Random], tuple]:
    """Sampler drawing states from an exact distribution."""
    states = list(pi.states)
    weights = [float(v) for v in pi.probability().values]

    def draw(rng: random.Random):
        return rng.choices(states, weights)[0]

    return draw
