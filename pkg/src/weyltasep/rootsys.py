"""Finite root systems of types A-D and Lam's chain on their Weyl groups.

Roots live in the standard orthonormal realizations (A_n in Q^{n+1},
B_n/C_n/D_n in Q^n), so every group element is an exact rational matrix and
group equality is matrix equality.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .chain import Chain, SizeGuardError
from .rational import SparseRationalMatrix

GROUP_GUARD = 100_000

Vector = tuple
Matrix = tuple  # tuple of row tuples


class ConfigurationError(ValueError):
    pass


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class CartanSpec:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        minimum = {"A": 1, "B": 2, "C": 2, "D": 4}
        if fam not in minimum:
            raise ConfigurationError("unsupported family %r (A, B, C, D only)" % self.family)
        if not isinstance(self.rank, int) or self.rank < minimum[fam]:
            raise ConfigurationError("rank %r too small for type %s" % (self.rank, fam))
        if self.rank > 8:
            raise ConfigurationError("rank %d beyond the supported range (<= 8)" % self.rank)


def _e(dim, *pairs) -> Vector:
    v = [Fraction(0)] * dim
    for i, c in pairs:
        v[i] += c
    return tuple(v)


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _neg(a):
    return tuple(-x for x in a)


def _solve(columns: Sequence[Vector], target: Vector):
    """Coordinates of ``target`` in the (independent) ``columns``."""
    m = len(columns)
    rows = [list(col) for col in columns]
    # normal equations G x = b keep this square and exact
    gram = [[_dot(rows[i], rows[j]) for j in range(m)] for i in range(m)]
    rhs = [_dot(rows[i], target) for i in range(m)]
    aug = [gram[i] + [rhs[i]] for i in range(m)]
    for col in range(m):
        piv = next(r for r in range(col, m) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    x = tuple(aug[i][m] for i in range(m))
    recon = [Fraction(0)] * len(target)
    for coef, col in zip(x, columns):
        for k, v in enumerate(col):
            recon[k] += coef * v
    if tuple(recon) != tuple(target):
        raise ValueError("vector not in the span of the simple roots")
    return x


@dataclass(frozen=True)
class RootSystem:
    spec: CartanSpec
    simple_roots: tuple
    positive_roots: tuple
    highest_root: Vector
    marks: tuple                 # a_1..a_n; a_0 = 1 implicitly
    _positive_set: frozenset = field(repr=False, compare=False, default=frozenset())

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def dim(self) -> int:
        return len(self.highest_root)

    @property
    def rates(self) -> tuple:
        """(a_0, a_1, ..., a_n)."""
        return (1,) + self.marks

    def root(self, i: int) -> Vector:
        if not 0 <= i <= self.rank:
            raise IndexError("root index %d outside [0, %d]" % (i, self.rank))
        return self.highest_root if i == 0 else self.simple_roots[i - 1]

    def is_positive(self, v: Vector) -> bool:
        return v in self._positive_set

    def is_root(self, v: Vector) -> bool:
        return v in self._positive_set or _neg(v) in self._positive_set


def build_root_system(spec: CartanSpec) -> RootSystem:
    fam, n = spec.family, spec.rank
    if fam == "A":
        dim = n + 1
        simple = [_e(dim, (i, 1), (i + 1, -1)) for i in range(n)]
    else:
        dim = n
        simple = [_e(dim, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        if fam == "B":
            simple.append(_e(dim, (n - 1, 1)))
        elif fam == "C":
            simple.append(_e(dim, (n - 1, 2)))
        else:
            simple.append(_e(dim, (n - 2, 1), (n - 1, 1)))
    simple = tuple(simple)

    # all roots = orbit of the simple roots under simple reflections
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for a in simple:
                w = _reflect(v, a)
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    coords = {v: _solve(simple, v) for v in roots}
    positive = []
    for v, c in coords.items():
        if all(x >= 0 for x in c):
            positive.append(v)
        elif not all(x <= 0 for x in c):
            raise AssertionError("root %s has mixed-sign coordinates" % (v,))
        for x in c:
            if x.denominator != 1:
                raise AssertionError("non-integral root coordinates")
    positive.sort(key=lambda v: (sum(coords[v]), coords[v]))
    highest = max(positive, key=lambda v: sum(coords[v]))
    marks = tuple(int(x) for x in coords[highest])
    return RootSystem(spec, simple, tuple(positive), highest, marks, frozenset(positive))


def classical_positive_count(spec: CartanSpec) -> int:
    n = spec.rank
    return {"A": n * (n + 1) // 2, "B": n * n, "C": n * n, "D": n * (n - 1)}[spec.family]


def classical_order(spec: CartanSpec) -> int:
    from math import factorial
    n = spec.rank
    return {"A": factorial(n + 1), "B": 2 ** n * factorial(n), "C": 2 ** n * factorial(n),
            "D": 2 ** (n - 1) * factorial(n)}[spec.family]


def _reflect(v: Vector, a: Vector) -> Vector:
    f = 2 * _dot(v, a) / _dot(a, a)
    return tuple(x - f * y for x, y in zip(v, a))


# -- group elements -----------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """Orthogonal rational matrix acting on column vectors."""

    matrix: Matrix

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        a, b = self.matrix, other.matrix
        cols = list(zip(*b))
        return GroupElement(tuple(tuple(_dot(row, col) for col in cols) for row in a))

    def apply(self, v: Vector) -> Vector:
        return tuple(_dot(row, v) for row in self.matrix)

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple(zip(*self.matrix)))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def sort_key(self):
        return tuple(x for row in self.matrix for x in row)

    def signed_permutation(self) -> tuple:
        """One-line notation w(j) = +-k where w e_j = +-e_k (1-based)."""
        out = []
        for j in range(self.dim):
            col = [self.matrix[r][j] for r in range(self.dim)]
            nz = [(r, x) for r, x in enumerate(col) if x != 0]
            if len(nz) != 1 or abs(nz[0][1]) != 1:
                raise ValueError("not a signed permutation matrix")
            r, x = nz[0]
            out.append((r + 1) if x > 0 else -(r + 1))
        return tuple(out)


def identity(rs: RootSystem) -> GroupElement:
    d = rs.dim
    return GroupElement(tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)))


def reflection(rs: RootSystem, i: int) -> GroupElement:
    a = rs.root(i)
    aa = _dot(a, a)
    d = rs.dim
    return GroupElement(tuple(tuple(Fraction(int(r == c)) - 2 * a[r] * a[c] / aa
                                    for c in range(d)) for r in range(d)))


class InvalidElementError(ValueError):
    pass


def length(w: GroupElement, rs: RootSystem) -> int:
    count = 0
    for b in rs.positive_roots:
        img = w.apply(b)
        if rs.is_positive(img):
            continue
        if not rs.is_positive(_neg(img)):
            raise InvalidElementError("element does not permute the roots")
        count += 1
    return count


def lam_sigma(w: GroupElement, i: int, rs: RootSystem, lengths: dict | None = None) -> GroupElement:
    """Lam's sigma_i: right-multiply by t_i when it lowers length (i > 0) or
    raises it (i = 0)."""
    ln = (lambda x: lengths[x]) if lengths is not None else (lambda x: length(x, rs))
    wt = w @ reflection(rs, i)
    if i == 0:
        return wt if ln(wt) > ln(w) else w
    return wt if ln(wt) < ln(w) else w


class Group:
    """Enumerated Weyl group with cached lengths and right-multiplication tables."""

    def __init__(self, rs: RootSystem, guard: int = GROUP_GUARD):
        self.rs = rs
        self.elements = enumerate_group(rs, guard)
        self.index = {w: k for k, w in enumerate(self.elements)}
        self.gens = [reflection(rs, i) for i in range(rs.rank + 1)]
        self.lengths = [length(w, rs) for w in self.elements]
        # right[i][k] = index of elements[k] * t_i
        self.right = [[self.index[w @ t] for w in self.elements] for t in self.gens]
        self.left = [[self.index[t @ w] for w in self.elements] for t in self.gens]

    def __len__(self):
        return len(self.elements)

    def sigma(self, k: int, i: int) -> int:
        j = self.right[i][k]
        if i == 0:
            return j if self.lengths[j] > self.lengths[k] else k
        return j if self.lengths[j] < self.lengths[k] else k


def enumerate_group(rs: RootSystem, guard: int = GROUP_GUARD) -> list:
    """Breadth-first closure under simple reflections.

    Ordered by length, ties broken by the row-major entries of the matrix.
    """
    gens = [reflection(rs, i) for i in range(1, rs.rank + 1)]
    e = identity(rs)
    seen = {e}
    layer = [e]
    out = []
    while layer:
        layer.sort(key=GroupElement.sort_key)
        out.extend(layer)
        nxt = []
        for w in layer:
            for t in gens:
                x = w @ t
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
                    if len(seen) > guard:
                        raise SizeGuardError("group order exceeds guard %d" % guard)
        layer = nxt
    return out


@dataclass(frozen=True)
class CosetTable:
    J: frozenset
    class_of: tuple      # element index -> coset id
    min_rep: tuple       # coset id -> element index

    @property
    def num_cosets(self) -> int:
        return len(self.min_rep)


def coset_decompose(group: Group, J) -> CosetTable:
    """Left cosets W_J w; coset ids ordered by their minimal representative."""
    J = frozenset(J)
    if 0 in J:
        raise ValueError("J may not contain 0")
    if any(not 1 <= j <= group.rs.rank for j in J):
        raise ValueError("J must be a subset of [1, rank]")
    n = len(group)
    class_of = [-1] * n
    reps = []
    # elements are sorted by length, so the first unvisited one is minimal
    for k in range(n):
        if class_of[k] >= 0:
            continue
        cid = len(reps)
        orbit = [k]
        class_of[k] = cid
        q = deque([k])
        while q:
            x = q.popleft()
            for j in J:
                y = group.left[j][x]
                if class_of[y] < 0:
                    class_of[y] = cid
                    orbit.append(y)
                    q.append(y)
        lmin = min(group.lengths[x] for x in orbit)
        minimal = [x for x in orbit if group.lengths[x] == lmin]
        if len(minimal) != 1:
            raise AssertionError("coset without a unique minimal element")
        reps.append(minimal[0])
    return CosetTable(J, tuple(class_of), tuple(reps))


def verify_coset_invariance(group: Group, J):
    """None if sigma_i respects left W_J cosets, else a witness (w, w', i)."""
    table = coset_decompose(group, J)
    image = {}
    for k in range(len(group)):
        cid = table.class_of[k]
        for i in range(group.rs.rank + 1):
            target = table.class_of[group.sigma(k, i)]
            prev = image.setdefault((cid, i), (k, target))
            if prev[1] != target:
                return group.elements[prev[0]], group.elements[k], i
    return None


def build_lam_chain(group: Group, J=(), rate_override: Sequence | None = None) -> Chain:
    """Lam's chain on left cosets W_J w; states are coset ids (minimal reps order)."""
    rs = group.rs
    rates = tuple(Fraction(r) for r in (rate_override if rate_override is not None else rs.rates))
    if len(rates) != rs.rank + 1 or any(r <= 0 for r in rates):
        raise ValueError("rate_override must have %d positive entries" % (rs.rank + 1))
    if verify_coset_invariance(group, J) is not None:
        raise AssertionError("coset action ill defined")
    table = coset_decompose(group, J)
    acc = {}
    for cid, k in enumerate(table.min_rep):
        for i in range(rs.rank + 1):
            tgt = table.class_of[group.sigma(k, i)]
            acc[tgt, cid] = acc.get((tgt, cid), 0) + rates[i]
    m = table.num_cosets
    label = "lam %s%d J=%s" % (rs.spec.family, rs.rank, sorted(J))
    return Chain(tuple(range(m)), SparseRationalMatrix(m, m, acc), label)


# -- type C calibration --------------------------------------------------------

@dataclass(frozen=True)
class Convention:
    """How a signed permutation w becomes a type-C word.

    inverse: read the one-line notation of w^{-1} instead of w (left versus
        right multiplication).
    negate: flip the sign (upper/lower row) of every letter.
    reverse_generators: Lam's sigma_i corresponds to the particle bell
        sigma_{n-i} instead of sigma_i.
    """

    inverse: bool
    negate: bool
    reverse_generators: bool

    def word(self, w: GroupElement) -> tuple:
        x = (w.inverse() if self.inverse else w).signed_permutation()
        if self.negate:
            x = tuple(-v for v in x)
        return x

    def bell(self, i: int, n: int) -> int:
        return n - i if self.reverse_generators else i


def calibrate_typeC_correspondence(n: int, word_chain: Chain | None = None) -> Convention:
    """Find the unique convention identifying Lam's C_n chain with the word chain.

    A convention matches when the induced relabeling carries Lam's matrix onto
    the word-chain matrix and, generator by generator, carries sigma_i onto
    the corresponding particle bell. The second condition is needed because
    the word chain is invariant under the half-turn of the cycle, which
    matrices alone cannot see. ``word_chain`` defaults to the type-C particle
    chain with J = {} and may be replaced (e.g. by a perturbed matrix).
    """
    from .typec import apply_sigma, build_transition_matrix
    if n not in (2, 3):
        raise ValueError("calibration supported for n in {2, 3}")
    if word_chain is None:
        word_chain = build_transition_matrix(n, ())
    group = Group(build_root_system(CartanSpec("C", n)))
    lam = build_lam_chain(group)
    matches = []
    tried = []
    for inv, neg, rev in product((False, True), repeat=3):
        conv = Convention(inv, neg, rev)
        words = [conv.word(w) for w in group.elements]
        if set(words) != set(word_chain.states):
            tried.append((conv, "not a bijection onto the word states"))
            continue
        perm = [word_chain.index(x) for x in words]
        if lam.matrix.permute(perm, perm) != word_chain.matrix:
            tried.append((conv, "matrices differ"))
            continue
        bad = next(((k, i) for k in range(len(group)) for i in range(n + 1)
                    if words[group.sigma(k, i)] != apply_sigma(words[k], conv.bell(i, n))), None)
        if bad is not None:
            tried.append((conv, "sigma_%d differs at %s" % (bad[1], words[bad[0]])))
            continue
        matches.append(conv)
    if len(matches) != 1:
        detail = "; ".join("%s: %s" % (c, why) for c, why in tried)
        raise CalibrationError("%d matching conventions for C%d (%s)" % (len(matches), n, detail))
    return matches[0]
