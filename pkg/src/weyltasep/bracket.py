"""Bracket weights of two-class words and the generalized two-class chain.

Words are tuples over {-1, 0, 1}; the text encoding writes ``b`` for -1.
The bracket [u] is defined by five rewriting rules that each delete one
letter:

    (1) [v 0 1 w]  = [v 0 w] / a
    (2) [v b 1 w]  = ([v b w] + [v 1 w]) / b
    (3) [v b 0 w]  = [v 0 w] / c
    (4) [v b]      = [v] / d
    (5) [1 v]      = [v] / e

and [0...0] = 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator

from .chain import Chain, assemble
from .markov import Distribution, equilibrium_residual, generator_of, stationary

MINUS, ZERO, PLUS = -1, 0, 1


@dataclass(frozen=True)
class RateParams:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction

    def __post_init__(self):
        for name in "abcde":
            v = Fraction(getattr(self, name))
            if v == 0:
                raise ValueError("parameter %s must be nonzero" % name)
            object.__setattr__(self, name, v)

    @classmethod
    def default(cls) -> "RateParams":
        h = Fraction(1, 2)
        return cls(1, 1, 1, h, h)

    @classmethod
    def parse(cls, text: str) -> "RateParams":
        vals = [Fraction(x.strip()) for x in text.split(",")]
        if len(vals) != 5:
            raise ValueError("expected five comma separated rationals a,b,c,d,e")
        return cls(*vals)

    @classmethod
    def random(cls, rng: random.Random, max_num: int = 9) -> "RateParams":
        return cls(*(Fraction(rng.randint(1, max_num), rng.randint(1, max_num)) for _ in range(5)))

    def positive(self) -> bool:
        return all(getattr(self, k) > 0 for k in "abcde")

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d, self.e)


def parse_word(text: str) -> tuple:
    table = {"b": MINUS, "0": ZERO, "1": PLUS}
    try:
        return tuple(table[ch] for ch in text.strip())
    except KeyError:
        raise ValueError("bracket words use the letters b, 0, 1: %r" % text) from None


def format_word(w) -> str:
    return "".join({MINUS: "b", ZERO: "0", PLUS: "1"}[x] for x in w)


# A rule application: (rule number, position) -> list of (coefficient, word)

def applicable_rules(w: tuple) -> list:
    """All (rule, index) pairs that apply to ``w``; index is the rule's anchor letter."""
    out = []
    n = len(w)
    if n and w[0] == PLUS:
        out.append((5, 0))
    if n and w[-1] == MINUS:
        out.append((4, n - 1))
    for i in range(n - 1):
        pair = (w[i], w[i + 1])
        if pair == (ZERO, PLUS):
            out.append((1, i))
        elif pair == (MINUS, PLUS):
            out.append((2, i))
        elif pair == (MINUS, ZERO):
            out.append((3, i))
    return out


def expand(w: tuple, rule: int, i: int, p: RateParams) -> list:
    """One rewriting step: returns [(coefficient, shorter word), ...]."""
    if rule == 1:
        return [(1 / p.a, w[:i + 1] + w[i + 2:])]
    if rule == 2:
        return [(1 / p.b, w[:i + 1] + w[i + 2:]), (1 / p.b, w[:i] + w[i + 1:])]
    if rule == 3:
        return [(1 / p.c, w[:i] + w[i + 1:])]
    if rule == 4:
        return [(1 / p.d, w[:-1])]
    if rule == 5:
        return [(1 / p.e, w[1:])]
    raise ValueError("unknown rule %r" % rule)


PRECEDENCE = (5, 4, 1, 2, 3)


def _deterministic_choice(w: tuple):
    rules = applicable_rules(w)
    return min(rules, key=lambda r: (PRECEDENCE.index(r[0]), r[1]))


@lru_cache(maxsize=None)
def _eval_cached(w: tuple, p: RateParams) -> Fraction:
    if all(x == ZERO for x in w):
        return Fraction(1)
    rule, i = _deterministic_choice(w)
    return sum((coef * _eval_cached(x, p) for coef, x in expand(w, rule, i, p)), Fraction(0))


def bracket_eval(w, p: RateParams | None = None, rng: random.Random | None = None) -> Fraction:
    """Exact value of [w].

    With ``rng`` each step picks a uniformly random applicable rule (no
    memoization); otherwise the leftmost rule in precedence (5), (4), (1),
    (2), (3) is used with memoization.
    """
    w = tuple(w)
    if p is None:
        p = RateParams.default()
    if rng is None:
        return _eval_cached(w, p)
    return _eval_random(w, p, rng)


def _eval_random(w, p, rng):
    if all(x == ZERO for x in w):
        return Fraction(1)
    rule, i = rng.choice(applicable_rules(w))
    return sum((coef * _eval_random(x, p, rng) for coef, x in expand(w, rule, i, p)), Fraction(0))


def all_words(length: int) -> Iterator[tuple]:
    return product((MINUS, ZERO, PLUS), repeat=length)


def check_confluence(max_len: int, trials: int, seed: int, guard: int = 10):
    """None if random rule choices always agree, else (word, params, values)."""
    if max_len > guard:
        raise ValueError("max_len %d exceeds guard %d" % (max_len, guard))
    rng = random.Random(seed)
    for length in range(max_len + 1):
        for w in all_words(length):
            p = RateParams.random(rng)
            ref = bracket_eval(w, p)
            vals = [bracket_eval(w, p, rng) for _ in range(trials)]
            if any(v != ref for v in vals):
                return w, p, [ref] + vals
    return None


# -- the two-class chain -------------------------------------------------------

def two_class_states(n: int, t: int) -> list:
    """Words of length n with exactly t nonzero letters, lexicographic."""
    if not 0 <= t <= n:
        raise ValueError("need 0 <= t <= n")
    out = []
    for pos in combinations(range(n), t):
        for signs in product((MINUS, PLUS), repeat=t):
            w = [ZERO] * n
            for j, s in zip(pos, signs):
                w[j] = s
            out.append(tuple(w))
    out.sort()
    return out


def two_class_moves(w: tuple, p: RateParams):
    n = len(w)
    for i in range(n - 1):
        pair = (w[i], w[i + 1])
        if pair == (ZERO, PLUS):
            yield w[:i] + (PLUS, ZERO) + w[i + 2:], p.a
        elif pair == (MINUS, PLUS):
            yield w[:i] + (PLUS, MINUS) + w[i + 2:], p.b
        elif pair == (MINUS, ZERO):
            yield w[:i] + (ZERO, MINUS) + w[i + 2:], p.c
    if w[-1] == MINUS:
        yield w[:-1] + (PLUS,), p.d
    if w[0] == PLUS:
        yield (MINUS,) + w[1:], p.e


def build_two_class_chain(n: int, t: int, p: RateParams | None = None) -> Chain:
    """Rate matrix of the generalized chain (no self-loops; use generator_of)."""
    if n < 2 or not 1 <= t <= n:
        raise ValueError("need n >= 2 and 1 <= t <= n")
    if p is None:
        p = RateParams.default()
    if not p.positive():
        raise ValueError("chain rates must be positive")
    return assemble(two_class_states(n, t), lambda w: two_class_moves(w, p),
                    label="twoclass n=%d t=%d" % (n, t))


def bracket_vector(chain: Chain, p: RateParams) -> Distribution:
    return Distribution(chain.states, tuple(bracket_eval(w, p) for w in chain.states))


def verify_bracket_theorem(n: int, t: int, p: RateParams | None = None, moves=None):
    """None if the bracket vector is stationary, else (state, residual).

    ``moves`` overrides the chain dynamics (negative controls).
    """
    if p is None:
        p = RateParams.default()
    if moves is None:
        chain = build_two_class_chain(n, t, p)
    else:
        chain = assemble(two_class_states(n, t), lambda w: moves(w, p))
    vec = bracket_vector(chain, p)
    res = generator_of(chain.matrix).matvec(list(vec.values))
    for s, r in zip(chain.states, res):
        if r:
            return s, r
    pi = stationary(chain.matrix, chain.states)
    if vec.is_proportional_to(pi) is None:
        return chain.states[0], "bracket vector not proportional to the stationary law"
    return None


def verify_factorization(w, p: RateParams | None = None, split_at=None):
    """Check [v1 0 v2 0 ... 0 vr] = [v1 0][0 v2 0]...[0 vr].

    ``split_at`` lists the positions of the separating zeros (default: every
    zero). Returns None or (word, lhs, rhs).
    """
    if p is None:
        p = RateParams.default()
    w = tuple(w)
    zeros = sorted(split_at) if split_at is not None else [i for i, x in enumerate(w) if x == ZERO]
    if not zeros or any(not 0 <= z < len(w) or w[z] != ZERO for z in zeros):
        raise ValueError("separators must be positions of zeros in the word")
    pieces = []
    start = 0
    for z in zeros:
        pieces.append(w[start:z + 1] if start == 0 else w[start - 1:z + 1])
        start = z + 1
    pieces.append(w[start - 1:])
    rhs = Fraction(1)
    for piece in pieces:
        rhs *= bracket_eval(piece, p)
    lhs = bracket_eval(w, p)
    return None if lhs == rhs else (w, lhs, rhs)


def normalized_weights(n: int, t: int) -> dict:
    """n_u for the (n, t) chain at the default rates: stationary law scaled so min is 1."""
    if t == 0 or n < 2:
        return {w: Fraction(1) for w in two_class_states(n, t)}
    chain = build_two_class_chain(n, t)
    pi = stationary(chain.matrix, chain.states).integer_form()
    return pi.as_dict()


def _is_min_shape(w):
    # bar^i 0^j 1^k
    return list(w) == sorted(w)


def _is_max_shape(w):
    # 1^i 0^j bar^k
    return list(w) == sorted(w, reverse=True)


@dataclass
class CorollaryReport:
    """The four weight properties for one (n, t).

    ``min_characterization`` is the two-sided statement (n_u = 1 exactly on
    words bar^i 0^j 1^k); ``min_sufficiency`` is its "if" half alone.
    """

    n: int
    t: int
    integrality: bool
    min_characterization: bool
    min_sufficiency: bool
    max_characterization: bool
    product_rule: bool
    witness: object = None

    @property
    def passed(self) -> bool:
        return self.integrality and self.min_characterization and \
            self.max_characterization and self.product_rule

    @property
    def passed_weak(self) -> bool:
        """All bullets with the minimum reduced to its "if" direction."""
        return self.integrality and self.min_sufficiency and \
            self.max_characterization and self.product_rule

    def line(self) -> str:
        flags = [("integral", self.integrality), ("min-iff", self.min_characterization),
                 ("min-if", self.min_sufficiency), ("max-iff", self.max_characterization),
                 ("product", self.product_rule)]
        return " ".join("%s=%s" % (k, "ok" if v else "FAIL") for k, v in flags)


def verify_corollary(n: int, t: int, cache: dict | None = None) -> CorollaryReport:
    """Check the weight properties of n_u for the (n, t) chain.

    The witness is the first word breaking a property (min, max or product
    rule, in that order), formatted over b, 0, 1.
    """
    if cache is None:
        cache = {}

    def weights(m, s):
        if (m, s) not in cache:
            cache[m, s] = normalized_weights(m, s)
        return cache[m, s]

    def nu(w):
        w = tuple(w)
        return weights(len(w), sum(1 for x in w if x))[w]

    ws = weights(n, t)
    top = Fraction(2) ** t
    integral = all(v.denominator == 1 and v >= 1 for v in ws.values())
    min_bad = [w for w, v in ws.items() if (v == 1) != _is_min_shape(w)]
    min_if = all(ws[w] == 1 for w in ws if _is_min_shape(w))
    max_bad = [w for w, v in ws.items() if v > top or (v == top) != _is_max_shape(w)]
    witness = None
    if min_bad:
        witness = ("min", format_word(min_bad[0]))
    elif max_bad:
        witness = ("max", format_word(max_bad[0]))
    prod_ok = True
    for w in ws:
        zeros = [i for i, x in enumerate(w) if x == ZERO]
        for i, j in combinations(zeros, 2):
            u, v, x = w[:i], w[i + 1:j], w[j + 1:]
            rhs = nu(u + (ZERO,)) * nu((ZERO,) + v + (ZERO,)) * nu((ZERO,) + x)
            if ws[w] != rhs:
                prod_ok = False
                if witness is None:
                    witness = ("product", format_word(w), i, j)
                break
        if not prod_ok:
            break
    return CorollaryReport(n, t, integral, not min_bad, min_if, not max_bad, prod_ok, witness)
