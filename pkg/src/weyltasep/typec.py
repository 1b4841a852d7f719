"""Type-C multi-class particles on a two-row cycle.

A state is a tuple ``u`` of length ``n``: ``u[j-1] = +c`` puts a class-``c``
particle in the upper row of column ``j``, ``-c`` in the lower row, and ``0``
leaves column ``j`` empty.

Particles in the upper row travel left, turn down at column 1, travel right
in the lower row and turn up at column ``n``. The bell ``sigma_i`` for
``1 <= i < n`` couples the lower site of column ``i`` with the upper site of
column ``i+1``. Its effect on the pair ``(u_i, u_{i+1})`` is to sort it
ascending in the total order

    +1 < +2 < ... < +K < empty < -K < ... < -2 < -1,

which covers hopping into a free site, overtaking a higher class, being
blocked by a lower class, and the two-particle crossing ``(-c, +d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial

from .chain import Chain, SizeGuardError, assemble

STATE_GUARD = 500_000


@dataclass(frozen=True)
class ClassTypeJ:
    n: int
    J: frozenset
    blocks: tuple            # partition of 1..n into runs
    multiplicities: tuple    # sizes of surviving blocks, in class order
    empties: int             # size of the removed block (0 if n not in J)
    class_of: dict           # original class 1..n -> new class (0 = removed)

    @property
    def num_classes(self) -> int:
        return len(self.multiplicities)

    def count(self) -> int:
        """|Omega_J| = multinomial(n; m, empties) * 2^(particles)."""
        total = factorial(self.n) // factorial(self.empties)
        for m in self.multiplicities:
            total //= factorial(m)
        return total * 2 ** (self.n - self.empties)


def _check_J(n, J):
    J = frozenset(J)
    if n < 1:
        raise ValueError("n must be positive")
    bad = [j for j in J if not 1 <= j <= n]
    if bad:
        raise ValueError("J must be a subset of [1, %d], got extra %s" % (n, sorted(bad)))
    return J


def class_type(n: int, J) -> ClassTypeJ:
    J = _check_J(n, J)
    blocks, cur = [], [1]
    for c in range(2, n + 1):
        if c - 1 in J:
            cur.append(c)
        else:
            blocks.append(tuple(cur))
            cur = [c]
    blocks.append(tuple(cur))
    removed = blocks[-1] if n in J else ()
    class_of, mult = {}, []
    for b in blocks:
        if b == removed:
            for c in b:
                class_of[c] = 0
            continue
        mult.append(len(b))
        for c in b:
            class_of[c] = len(mult)
    return ClassTypeJ(n, J, tuple(blocks), tuple(mult), len(removed), class_of)


def type_of(u) -> tuple:
    """(multiplicities, empties) of a word."""
    k = max((abs(x) for x in u), default=0)
    mult = [0] * k
    for x in u:
        if x:
            mult[abs(x) - 1] += 1
    return tuple(mult), sum(1 for x in u if x == 0)


def display_key(u, k: int | None = None) -> tuple:
    """Lexicographic key: letters compare numerically with empty written K+1."""
    if k is None:
        k = max((abs(x) for x in u), default=0)
    return tuple(x if x else k + 1 for x in u)


def _arrangements(counts: dict):
    """Distinct sequences using each key ``counts[key]`` times."""
    total = sum(counts.values())
    if total == 0:
        yield ()
        return
    for key in sorted(counts):
        if counts[key]:
            counts[key] -= 1
            for rest in _arrangements(counts):
                yield (key,) + rest
            counts[key] += 1


def enumerate_states(n: int, J, guard: int = STATE_GUARD) -> list:
    """All states of type m_J, sorted by ``display_key``."""
    ct = class_type(n, J)
    if ct.count() > guard:
        raise SizeGuardError("|Omega_J| = %d exceeds guard %d" % (ct.count(), guard))
    counts = {c + 1: m for c, m in enumerate(ct.multiplicities)}
    counts[0] = ct.empties
    out = []
    for arr in _arrangements(counts):
        pos = [j for j, x in enumerate(arr) if x]
        for signs in product((-1, 1), repeat=len(pos)):
            w = list(arr)
            for j, s in zip(pos, signs):
                w[j] *= s
            out.append(tuple(w))
    k = ct.num_classes
    out.sort(key=lambda w: display_key(w, k))
    return out


def order_key(x: int) -> tuple:
    """Position of a letter in +1 < ... < +K < empty < -K < ... < -1."""
    if x > 0:
        return (0, x)
    if x == 0:
        return (1, 0)
    return (2, x)


def apply_sigma(u: tuple, i: int) -> tuple:
    n = len(u)
    if not 0 <= i <= n:
        raise ValueError("sigma index %d outside [0, %d]" % (i, n))
    if i == 0:
        return (-u[0],) + u[1:] if u[0] > 0 else u
    if i == n:
        return u[:-1] + (-u[-1],) if u[-1] < 0 else u
    a, b = u[i - 1], u[i]
    if order_key(b) < order_key(a):
        return u[:i - 1] + (b, a) + u[i + 1:]
    return u


def rate_of_sigma(i: int, n: int) -> Fraction:
    if not 0 <= i <= n:
        raise ValueError("sigma index %d outside [0, %d]" % (i, n))
    return Fraction(1) if i in (0, n) else Fraction(2)


def project(u: tuple, i: int, J) -> tuple:
    """phi_i: merge classes across the link (i, J, J u {i})."""
    n = len(u)
    J = _check_J(n, J)
    if i in J:
        raise ValueError("link needs i not in J (i=%d, J=%s)" % (i, sorted(J)))
    src = class_type(n, J)
    dst = class_type(n, J | {i})
    rep = {k: b[0] for b in src.blocks for k in [src.class_of[b[0]]] if k}
    out = []
    for x in u:
        if x == 0:
            out.append(0)
            continue
        k = dst.class_of[rep[abs(x)]]
        out.append(k if x > 0 else -k)
    return tuple(out)


def build_transition_matrix(n: int, J, guard: int = STATE_GUARD) -> Chain:
    states = enumerate_states(n, J, guard)

    def moves(u):
        for i in range(n + 1):
            yield apply_sigma(u, i), rate_of_sigma(i, n)

    return assemble(states, moves, label="typec n=%d J=%s" % (n, sorted(J)))


# -- text encodings ---------------------------------------------------------

def format_state(u) -> str:
    return ",".join(str(x) for x in u)


def parse_state(text: str) -> tuple:
    return tuple(int(tok) for tok in text.split(","))


def pretty(u, k: int | None = None) -> str:
    """Compact display used in printed tables: bars for the lower row, K+1 for empty."""
    if k is None:
        k = max((abs(x) for x in u), default=0)
    out = []
    for x in u:
        if x == 0:
            out.append(str(k + 1))
        elif x > 0:
            out.append(str(x))
        else:
            out.append(str(-x) + "̄")
    return "".join(out)


def links(n: int):
    """All links (i, J, J') with J' = J u {i}, i not in J."""
    for mask in range(1 << n):
        J = frozenset(j + 1 for j in range(n) if mask >> j & 1)
        for i in range(1, n + 1):
            if i not in J:
                yield i, J, J | {i}


def all_subsets(n: int):
    for mask in range(1 << n):
        yield frozenset(j + 1 for j in range(n) if mask >> j & 1)
