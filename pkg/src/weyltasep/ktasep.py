"""Multi-type TASEP on a ring with parallel updates.

Words are tuples of positive letters with cyclic positions 1..n
(``u[0]`` is position 1, and position 0 means position n). ``sigma_i``
sorts the letters at positions i-1 and i. For a proper subset S the
parallel update ``sigma_S`` applies its bells with sigma_{j-1} before
sigma_j.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations

from .chain import Chain, assemble
from .markov import ReducibilityError, stationary


def ring_sigma(u: tuple, i: int) -> tuple:
    n = len(u)
    if not 1 <= i <= n:
        raise ValueError("bell index %d outside [1, %d]" % (i, n))
    a, b = (i - 2) % n, i - 1
    if u[a] > u[b]:
        w = list(u)
        w[a], w[b] = w[b], w[a]
        return tuple(w)
    return u


def _check_update_set(S, n):
    S = frozenset(S)
    if not S or len(S) >= n or any(not 1 <= j <= n for j in S):
        raise ValueError("update set must be a proper nonempty subset of [1, %d]" % n)
    return S


def update_order(S, n: int, gap: int | None = None) -> list:
    """Bells of S in application order, read cyclically after a gap g not in S."""
    if gap is None:
        gap = min(j for j in range(1, n + 1) if j not in S)
    if gap in S:
        raise ValueError("gap %d lies in S" % gap)
    return [j for j in ((gap + k - 1) % n + 1 for k in range(1, n + 1)) if j in S]


def ring_sigma_set(u: tuple, S, gap: int | None = None) -> tuple:
    n = len(u)
    S = _check_update_set(S, n)
    for j in update_order(S, n, gap):
        u = ring_sigma(u, j)
    return u


def parse_rates(text: str) -> dict:
    """``"1,1/2,3"`` -> {1: 1, 2: 1/2, 3: 3}."""
    return {k + 1: Fraction(x.strip()) for k, x in enumerate(text.split(","))}


def unit_rates(letters) -> dict:
    return {a: Fraction(1) for a in set(letters)}


def rate_of_update(u: tuple, S, x: dict) -> Fraction:
    r = Fraction(1)
    for i in S:
        letter = u[i - 1]
        if letter not in x:
            raise KeyError("no rate given for letter %d" % letter)
        r *= Fraction(x[letter])
    return r


def arrangements(multiset) -> list:
    return sorted(set(permutations(sorted(multiset))))


def build_Ak(multiset, k: int, x: dict | None = None) -> Chain:
    n = len(multiset)
    if n < 2 or not 0 < k < n:
        raise ValueError("need 0 < k < n")
    if x is None:
        x = unit_rates(multiset)
    subsets = [frozenset(S) for S in combinations(range(1, n + 1), k)]

    def moves(u):
        for S in subsets:
            yield ring_sigma_set(u, S), rate_of_update(u, S, x)

    return assemble(arrangements(multiset), moves, label="ktasep k=%d" % k)


def elementary_symmetric(values, k: int) -> Fraction:
    e = [Fraction(1)] + [Fraction(0)] * k
    for v in values:
        for j in range(k, 0, -1):
            e[j] += e[j - 1] * v
    return e[k]


def verify_commutation(multiset, x: dict | None, k: int, l: int):
    """None if A_k A_l == A_l A_k exactly, else (row, col, lhs, rhs)."""
    a = build_Ak(multiset, k, x).matrix
    b = build_Ak(multiset, l, x).matrix
    return (a @ b).first_difference(b @ a)


def verify_equal_stationary(multiset, x: dict | None = None):
    """None if every A_k has the same stationary law, else (k, state)."""
    n = len(multiset)
    ref = None
    for k in range(1, n):
        chain = build_Ak(multiset, k, x)
        try:
            pi = stationary(chain.matrix, chain.states)
        except ReducibilityError:
            return k, "reducible"
        if ref is None:
            ref = pi
        elif pi != ref:
            bad = next(s for s, a, b in zip(pi.states, pi.values, ref.values) if a != b)
            return k, bad
    return None


def random_rates(letters, rng: random.Random, max_num: int = 9) -> dict:
    return {a: Fraction(rng.randint(1, max_num), rng.randint(1, max_num))
            for a in sorted(set(letters))}


def merge_letters(u: tuple, f: dict) -> tuple:
    return tuple(f[a] for a in u)


def merged_rates(x: dict, f: dict) -> dict:
    """Rates for merged letters; only defined when merged letters share a rate."""
    out = {}
    for a, b in f.items():
        if b in out and out[b] != x[a]:
            raise ValueError("letters merged into %d have different rates" % b)
        out[b] = x[a]
    return out


def parse_word(text: str) -> tuple:
    w = tuple(int(t) for t in text.split(","))
    if len(w) < 2 or any(a < 1 for a in w):
        raise ValueError("ring words are comma separated positive integers, length >= 2")
    return w


def format_word(u) -> str:
    return ",".join(str(a) for a in u)


def monotone_merge(letters, cuts) -> dict:
    """Monotone surjection merging each letter with the next one across ``cuts``.

    ``cuts`` lists letters c whose successor is merged into c's class, e.g.
    letters (1, 2, 3) with cuts {1} gives {1: 1, 2: 1, 3: 2}.
    """
    f, cls = {}, 0
    prev = None
    for a in sorted(set(letters)):
        if prev is None or prev not in cuts:
            cls += 1
        f[a] = cls
        prev = a
    return f


def verify_merge_intertwining(multiset, f: dict, k: int, x: dict | None = None):
    """None if D A_k = A_k' D for the letter-merging projection D, else a witness.

    The merged chain uses ``merged_rates``, so letters sent to the same class
    must carry the same rate.
    """
    from .markov import projection_matrix, verify_intertwine
    if x is None:
        x = unit_rates(multiset)
    big = build_Ak(multiset, k, x)
    small_ms = sorted(f[a] for a in multiset)
    small = build_Ak(small_ms, k, merged_rates({a: x[a] for a in set(multiset)}, f))
    d = projection_matrix(lambda u: merge_letters(u, f), big.states, small.states)
    return verify_intertwine(d, big.matrix, small.matrix)


def lam_type_a_match(n: int):
    """Compare the k = 1 ring chain on distinct letters with Lam's chain for A_{n-1}.

    Each permutation w is read as the word (w(1), ..., w(n)). Returns None
    when the relabeled matrices agree exactly, else a short description.
    """
    from .rootsys import CartanSpec, Group, build_lam_chain, build_root_system
    if n < 2:
        raise ValueError("need n >= 2")
    group = Group(build_root_system(CartanSpec("A", n - 1)))
    lam = build_lam_chain(group)
    ring = build_Ak(tuple(range(1, n + 1)), 1)
    words = [group.elements[k].signed_permutation() for k in range(len(group))]
    if sorted(words) != list(ring.states):
        return "permutation words do not match the ring states"
    perm = [ring.index(w) for w in words]
    diff = lam.matrix.permute(perm, perm).first_difference(ring.matrix)
    if diff is None:
        return None
    r, c, a, b = diff
    return "entry (%s <- %s): lam=%s ring=%s" % (ring.states[r], ring.states[c], a, b)
