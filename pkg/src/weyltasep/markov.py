"""Exact Markov-chain algebra on (target, source) oriented rate matrices.

Everything here stays in ``Fraction`` arithmetic: stationary vectors,
projection matrices, intertwining checks, the Sylvester-space solver and
equilibrium residuals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Hashable, Sequence

from .rational import SparseRationalMatrix, _kernel_from_rref, _rref_rows, fstr


class ReducibilityError(ValueError):
    """The generator kernel is not one-dimensional."""


class InvariantViolation(AssertionError):
    """An exact identity that should hold does not."""


@dataclass(frozen=True)
class Distribution:
    """Nonnegative exact vector indexed by an ordered state list."""

    states: tuple
    values: tuple

    def __post_init__(self):
        if len(self.states) != len(self.values):
            raise ValueError("states/values length mismatch")
        vals = tuple(Fraction(v) for v in self.values)
        if not any(vals):
            raise ValueError("distribution is identically zero")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, state):
        return self.values[self.index()[state]]

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def probability(self) -> "Distribution":
        t = self.total()
        return Distribution(self.states, tuple(v / t for v in self.values))

    def integer_form(self) -> "Distribution":
        """Scale so the smallest positive entry is exactly 1."""
        m = min(v for v in self.values if v > 0)
        return Distribution(self.states, tuple(v / m for v in self.values))

    def primitive_integer_form(self) -> "Distribution":
        """Smallest positive integer multiple (gcd of entries 1)."""
        den = 1
        for v in self.values:
            den = lcm(den, v.denominator)
        ints = [v.numerator * (den // v.denominator) for v in self.values]
        g = 0
        for x in ints:
            g = gcd(g, x)
        return Distribution(self.states, tuple(Fraction(x, g) for x in ints))

    def as_dict(self) -> dict:
        return dict(zip(self.states, self.values))

    def is_proportional_to(self, other: "Distribution"):
        """Exact ratio self/other if constant over all states, else None."""
        if self.states != other.states:
            raise ValueError("index spaces differ")
        ratio = None
        for a, b in zip(self.values, other.values):
            if b == 0:
                if a != 0:
                    return None
                continue
            r = a / b
            if ratio is None:
                ratio = r
            elif r != ratio:
                return None
        return ratio


def generator_of(m: SparseRationalMatrix) -> SparseRationalMatrix:
    """Continuous-time generator: off-diagonal rates, diagonal = -outflow."""
    if m.nrows != m.ncols:
        raise ValueError("generator_of needs a square matrix, got %s" % (m.shape,))
    entries = {}
    out = [Fraction(0)] * m.ncols
    for (r, c), v in m.items():
        if r != c:
            entries[r, c] = v
            out[c] += v
    for c, v in enumerate(out):
        if v:
            entries[c, c] = -v
    return SparseRationalMatrix(m.nrows, m.ncols, entries)


def stationary(m: SparseRationalMatrix, states: Sequence | None = None,
               expected_total_rate=None) -> Distribution:
    """Unique stationary distribution of an irreducible chain.

    Raises ``ReducibilityError`` unless the generator kernel is a line. With
    ``expected_total_rate`` the eigen-relation ``m @ pi == rate * pi`` is
    also checked exactly.
    """
    if states is None:
        states = tuple(range(m.nrows))
    q = generator_of(m)
    basis = q.nullspace()
    if len(basis) != 1:
        raise ReducibilityError("kernel dimension %d (expected 1)" % len(basis))
    vec = basis[0]
    if all(v <= 0 for v in vec):
        vec = [-v for v in vec]
    if any(v < 0 for v in vec):
        raise ReducibilityError("kernel vector has mixed signs")
    if expected_total_rate is not None:
        rate = Fraction(expected_total_rate)
        if m.matvec(vec) != [rate * v for v in vec]:
            raise InvariantViolation("M pi != %s pi" % fstr(rate))
    return Distribution(tuple(states), tuple(vec)).probability()


def equilibrium_residual(m: SparseRationalMatrix, d) -> Fraction:
    """max |(Q d)_u| for the generator Q of ``m``; zero iff ``d`` is stationary."""
    vals = d.values if isinstance(d, Distribution) else d
    res = generator_of(m).matvec(list(vals))
    return max((abs(x) for x in res), default=Fraction(0))


def projection_matrix(phi: Callable, source_states: Sequence[Hashable],
                      target_states: Sequence[Hashable]) -> SparseRationalMatrix:
    """0/1 matrix D with D(v, u) = 1 iff v = phi(u)."""
    tindex = {s: i for i, s in enumerate(target_states)}
    entries = {}
    for j, u in enumerate(source_states):
        v = phi(u)
        if v not in tindex:
            raise ValueError("projection of %r = %r is not a target state" % (u, v))
        entries[tindex[v], j] = 1
    return SparseRationalMatrix(len(target_states), len(source_states), entries)


@dataclass(frozen=True)
class Counterexample:
    row: int
    col: int
    lhs: Fraction
    rhs: Fraction

    def __str__(self):
        return "entry (%d, %d): lhs=%s rhs=%s" % (self.row, self.col, fstr(self.lhs), fstr(self.rhs))


def verify_intertwine(d: SparseRationalMatrix, mj: SparseRationalMatrix,
                      mjp: SparseRationalMatrix):
    """Check D @ M_J == M_J' @ D exactly; None on success else a Counterexample."""
    diff = (d @ mj).first_difference(mjp @ d)
    return None if diff is None else Counterexample(*diff)


def verify_conjugation(mj: SparseRationalMatrix, u: SparseRationalMatrix,
                       mjp: SparseRationalMatrix):
    """Check M_J @ U == U @ M_J' exactly; None on success else a Counterexample."""
    diff = (mj @ u).first_difference(u @ mjp)
    return None if diff is None else Counterexample(*diff)


def project_distribution(d: SparseRationalMatrix, pi_j: Distribution,
                         pi_jp: Distribution, target_states=None):
    """Return ``(D pi_J, ratio)`` where ``D pi_J = ratio * pi_J'``.

    Raises ``InvariantViolation`` when the ratio is not constant.
    """
    states = tuple(target_states) if target_states is not None else pi_jp.states
    pushed = Distribution(states, tuple(d.matvec(list(pi_j.values))))
    ratio = pushed.is_proportional_to(pi_jp)
    if ratio is None:
        raise InvariantViolation("D pi_J is not a multiple of pi_J'")
    return pushed, ratio


class SylvesterSpace:
    """Solution space {U : A U = U B} over the rationals.

    Unknown ``U[r, c]`` is flattened to index ``r * q + c`` for U of shape
    ``p x q``.
    """

    def __init__(self, a: SparseRationalMatrix, b: SparseRationalMatrix):
        if a.nrows != a.ncols or b.nrows != b.ncols:
            raise ValueError("A and B must be square")
        self.a, self.b = a, b
        self.p, self.q = a.nrows, b.nrows
        p, q = self.p, self.q
        rows = []
        # equation (r, c): sum_k A[r,k] U[k,c] - sum_k U[r,k] B[k,c] = 0
        acols = {}
        for (r, k), v in a.items():
            acols.setdefault(r, []).append((k, v))
        bcols = {}
        for (k, c), v in b.items():
            bcols.setdefault(c, []).append((k, v))
        for r in range(p):
            for c in range(q):
                eq = {}
                for k, v in acols.get(r, ()):
                    idx = k * q + c
                    eq[idx] = eq.get(idx, 0) + v
                for k, v in bcols.get(c, ()):
                    idx = r * q + k
                    eq[idx] = eq.get(idx, 0) - v
                eq = {i: Fraction(v) for i, v in eq.items() if v}
                if eq:
                    rows.append(eq)
        self._rows, self._pivots = _rref_rows(rows, p * q)

    @property
    def dimension(self) -> int:
        return self.p * self.q - len(self._pivots)

    def contains(self, u: SparseRationalMatrix) -> bool:
        if u.shape != (self.p, self.q):
            return False
        return (self.a @ u) == (u @ self.b)

    def basis(self) -> list:
        out = []
        for vec in _kernel_from_rref(self._rows, self._pivots, self.p * self.q):
            out.append(SparseRationalMatrix(
                self.p, self.q,
                {(i // self.q, i % self.q): v for i, v in enumerate(vec) if v}))
        return out


def solve_sylvester(a: SparseRationalMatrix, b: SparseRationalMatrix) -> SylvesterSpace:
    return SylvesterSpace(a, b)


@dataclass(frozen=True)
class IntegralityReport:
    label: str
    size: int
    integral: bool
    max_entry: Fraction
    values: tuple

    def line(self) -> str:
        verdict = "integral" if self.integral else "NON-INTEGRAL"
        return "%s: %d states, %s, max=%s" % (self.label, self.size, verdict, fstr(self.max_entry))


def integrality_report(pi: Distribution, label: str = "") -> IntegralityReport:
    """Min-normalize and report (never assert) integrality."""
    f = pi.integer_form()
    integral = all(v.denominator == 1 for v in f.values)
    return IntegralityReport(label, len(f), integral, max(f.values), f.values)
