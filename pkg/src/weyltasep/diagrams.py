"""Two-row colored diagrams recording a pair of parallel updates.

A diagram is a 2 x n cyclic array over {B (black), W (white), . (empty)}.
For a word u with distinct letters and sets S, T, row 1 records the bells of
S applied to u and row 2 the bells of T applied to sigma_S u, in the usual
order (sigma_{j-1} before sigma_j). A colored site is black when its bell
swaps the two letters at the moment it fires and white when it does not.

Particle p is the letter that starts in column p. It passes the upper site
of its starting column p1 and the lower site of the column p2 it occupies
after the first update.

``involution_alpha`` reduces a diagram by the I, II and III moves, rewrites
the U/L/T labels of the reduced core, rebuilds it and undoes the moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .ktasep import ring_sigma, update_order

BLACK, WHITE, EMPTY = "B", "W", "."
TOP, BOTTOM = 1, 2
KINDS = ("I", "IIa", "IIb", "III")
STAGES = (("I",), ("IIa", "IIb"), ("III",))


class DiagramError(ValueError):
    """Raised for arrays that cannot be a diagram or moves that do not apply."""


@dataclass(frozen=True)
class Diagram:
    top: tuple
    bottom: tuple

    def __post_init__(self):
        top, bottom = tuple(self.top), tuple(self.bottom)
        if len(top) != len(bottom):
            raise DiagramError("rows have different lengths")
        if set(top + bottom) - {BLACK, WHITE, EMPTY}:
            raise DiagramError("cells must be B, W or .")
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bottom", bottom)

    @property
    def n(self) -> int:
        return len(self.top)

    def row(self, r: int) -> tuple:
        return self.top if r == TOP else self.bottom

    def cell(self, r: int, col: int) -> str:
        return self.row(r)[(col - 1) % self.n]

    def colored(self, r: int) -> frozenset:
        return frozenset(j + 1 for j, x in enumerate(self.row(r)) if x != EMPTY)

    def counts(self) -> tuple:
        """(colored sites in the top row, colored sites in the bottom row)."""
        return len(self.colored(TOP)), len(self.colored(BOTTOM))

    def to_text(self) -> str:
        return "".join(self.top) + "\n" + "".join(self.bottom) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Diagram":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if len(lines) != 2:
            raise DiagramError("a diagram is two lines over B, W and .")
        return cls(tuple(lines[0]), tuple(lines[1]))

    @classmethod
    def from_sites(cls, n: int, top: dict, bottom: dict) -> "Diagram":
        """Build from {column: color} maps for each row."""
        return cls(tuple(top.get(j, EMPTY) for j in range(1, n + 1)),
                   tuple(bottom.get(j, EMPTY) for j in range(1, n + 1)))

    def rotate(self, k: int) -> "Diagram":
        """Cyclic shift: new column j is old column j + k."""
        k %= self.n
        return Diagram(self.top[k:] + self.top[:k], self.bottom[k:] + self.bottom[:k])

    def __str__(self):
        return self.to_text().rstrip("\n")


def _order(cols, n):
    if len(cols) >= n:
        raise DiagramError("a fully colored row has no update order")
    if not cols:
        return []
    return update_order(frozenset(cols), n)


def run_row(word: tuple, cols) -> tuple:
    """Apply the bells ``cols`` to ``word``; return (new word, {col: color})."""
    colors = {}
    for j in _order(cols, len(word)):
        nxt = ring_sigma(word, j)
        colors[j] = BLACK if nxt != word else WHITE
        word = nxt
    return word, colors


def build_diagram(u, S, T) -> Diagram:
    u = tuple(u)
    n = len(u)
    if len(set(u)) != n:
        raise DiagramError("diagrams are built from words with distinct letters")
    S, T = frozenset(S), frozenset(T)
    if any(not 1 <= j <= n for j in S | T):
        raise DiagramError("update sets must lie in [1, %d]" % n)
    w, top = run_row(u, S)
    _, bottom = run_row(w, T)
    return Diagram.from_sites(n, top, bottom)


def _row_motion(row: tuple, pos: list) -> list:
    """Swap tokens at every black site of ``row`` in update order."""
    n = len(row)
    cols = [j + 1 for j, x in enumerate(row) if x != EMPTY]
    pos = list(pos)
    for j in _order(cols, n):
        if row[j - 1] == BLACK:
            a, b = (j - 2) % n, j - 1
            pos[a], pos[b] = pos[b], pos[a]
    return pos


def trajectories(d: Diagram) -> list:
    """[(p1, p2, p3)] for the particles starting in columns 1..n."""
    n = d.n
    mid = _row_motion(d.top, list(range(1, n + 1)))
    end = _row_motion(d.bottom, mid)
    p2 = {p: j + 1 for j, p in enumerate(mid)}
    p3 = {p: j + 1 for j, p in enumerate(end)}
    return [(p, p2[p], p3[p]) for p in range(1, n + 1)]


def passes(d: Diagram) -> list:
    """Per particle, the colors of the sites it passes: [(top color, bottom color)]."""
    return [(d.cell(TOP, p1), d.cell(BOTTOM, p2)) for p1, p2, _ in trajectories(d)]


def pass_counts(d: Diagram) -> tuple:
    """Per particle (black count, white count)."""
    return tuple((sum(c == BLACK for c in pc), sum(c == WHITE for c in pc)) for pc in passes(d))


def relations(d: Diagram) -> frozenset:
    """Order relations (smaller particle, larger particle) forced by the colors.

    Each colored site compares the two particles adjacent to its bell when it
    fires: black means the right one is smaller, white that it is larger.
    """
    n = d.n
    rel = set()
    pos = list(range(1, n + 1))
    for row in (d.top, d.bottom):
        cols = [j + 1 for j, x in enumerate(row) if x != EMPTY]
        for j in _order(cols, n):
            left, right = pos[(j - 2) % n], pos[j - 1]
            if row[j - 1] == BLACK:
                rel.add((right, left))
                pos[(j - 2) % n], pos[j - 1] = right, left
            else:
                rel.add((left, right))
    return frozenset(rel)


def order_closure(d: Diagram):
    """Transitive closure of ``relations``; None when they are contradictory."""
    n = d.n
    below = {p: set() for p in range(1, n + 1)}
    for a, b in relations(d):
        below[b].add(a)
    changed = True
    while changed:
        changed = False
        for p in below:
            extra = set().union(*(below[q] for q in below[p])) - below[p]
            if extra:
                below[p] |= extra
                changed = True
    if any(p in below[p] for p in below):
        return None
    return frozenset((a, b) for b in below for a in below[b])


def member_of_C(d: Diagram, u) -> bool:
    try:
        return build_diagram(u, d.colored(TOP), d.colored(BOTTOM)) == d
    except DiagramError:
        return False


@lru_cache(maxsize=None)
def order_constraints(d: Diagram) -> frozenset:
    """C(d) restricted to permutations of 1..n (only relative order matters)."""
    if d.n > 8:
        raise DiagramError("order_constraints enumerates n! words; n = %d is too large" % d.n)
    return frozenset(u for u in permutations(range(1, d.n + 1)) if member_of_C(d, u))


def same_order_constraints(d1: Diagram, d2: Diagram) -> bool:
    """C(d1) == C(d2), decided through the closures of the forced relations."""
    return order_closure(d1) == order_closure(d2)


def is_diagram(d: Diagram) -> bool:
    try:
        return bool(order_constraints(d))
    except DiagramError:
        return False


def compatible(d1: Diagram, d2: Diagram) -> bool:
    if d1.n != d2.n:
        return False
    t1, b1 = d1.counts()
    t2, b2 = d2.counts()
    if t1 != b2 or b1 != t2:
        return False
    try:
        if pass_counts(d1) != pass_counts(d2):
            return False
        return same_order_constraints(d1, d2)
    except DiagramError:
        return False


# -- reductions ----------------------------------------------------------------

def _pair(d: Diagram, c: int):
    n = d.n
    a, b = (c - 1) % n, c % n
    return d.top[a], d.top[b], d.bottom[a], d.bottom[b]


def matches(d: Diagram, kind: str, c: int) -> bool:
    if d.n < 2:
        return False
    tc, tc1, bc, bc1 = _pair(d, c)
    if kind == "I":
        return tc1 == BLACK and bc == BLACK
    if kind == "IIa":
        return tc == BLACK and tc1 == BLACK and bc == WHITE
    if kind == "IIb":
        return tc1 == WHITE and bc == BLACK and bc1 == BLACK
    if kind == "III":
        return tc1 == BLACK and bc == WHITE
    raise ValueError("unknown reduction %r" % kind)


def _merged(d: Diagram, kind: str, c: int) -> tuple:
    tc, tc1, bc, bc1 = _pair(d, c)
    if kind == "IIa":
        return BLACK, bc1
    if kind == "IIb":
        return tc, BLACK
    return tc, bc1


def _split(x: str, y: str, kind: str) -> tuple:
    """Inverse of _merged: (top c, top c+1, bottom c, bottom c+1)."""
    if kind == "I":
        return x, BLACK, BLACK, y
    if kind == "IIa":
        if x != BLACK:
            raise DiagramError("IIa needs a black upper site to expand")
        return BLACK, BLACK, WHITE, y
    if kind == "IIb":
        if y != BLACK:
            raise DiagramError("IIb needs a black lower site to expand")
        return x, WHITE, BLACK, BLACK
    if kind == "III":
        return x, BLACK, WHITE, y
    raise ValueError("unknown reduction %r" % kind)


def reduce(d: Diagram, kind: str, c: int) -> Diagram:
    """Replace columns (c, c+1) by one column; for c = n the new column is column 1."""
    n = d.n
    if not 1 <= c <= n:
        raise DiagramError("column %d outside [1, %d]" % (c, n))
    if not matches(d, kind, c):
        raise DiagramError("pattern %s absent at column %d" % (kind, c))
    x, y = _merged(d, kind, c)
    if c < n:
        top = d.top[:c - 1] + (x,) + d.top[c + 1:]
        bottom = d.bottom[:c - 1] + (y,) + d.bottom[c + 1:]
    else:
        top = (x,) + d.top[1:n - 1]
        bottom = (y,) + d.bottom[1:n - 1]
    return Diagram(top, bottom)


def lift_kind(r: Diagram, kind: str, c: int) -> str:
    """The II variant to expand column c of ``r`` with: IIa when its upper
    site is black, IIb when its lower site is black, else ``kind``."""
    if kind not in ("IIa", "IIb"):
        return kind
    col = (c - 1) % r.n if c <= r.n else 0
    x, y = r.top[col], r.bottom[col]
    if x == BLACK and y != BLACK:
        return "IIa"
    if y == BLACK and x != BLACK:
        return "IIb"
    return kind


def inverse_reduce(r: Diagram, kind: str, c: int) -> Diagram:
    """Undo ``reduce(d, kind, c)`` given the reduced diagram ``r``."""
    n = r.n + 1
    if not 1 <= c <= n:
        raise DiagramError("column %d outside [1, %d]" % (c, n))
    if c < n:
        x, y = r.top[c - 1], r.bottom[c - 1]
        tc, tc1, bc, bc1 = _split(x, y, kind)
        top = r.top[:c - 1] + (tc, tc1) + r.top[c:]
        bottom = r.bottom[:c - 1] + (bc, bc1) + r.bottom[c:]
    else:
        x, y = r.top[0], r.bottom[0]
        tc, tc1, bc, bc1 = _split(x, y, kind)
        top = (tc1,) + r.top[1:] + (tc,)
        bottom = (bc1,) + r.bottom[1:] + (bc,)
    return Diagram(top, bottom)


def applicable(d: Diagram, kinds) -> list:
    return [(k, c) for k in kinds for c in range(1, d.n + 1) if matches(d, k, c)]


def stage_of(d: Diagram) -> int:
    """0 if an I move applies, 1 if I-reduced but a II move applies, 2 if
    II-reduced but a III move applies, 3 if III-reduced."""
    for s, kinds in enumerate(STAGES):
        if applicable(d, kinds):
            return s
    return 3


@dataclass
class Reduction:
    core: Diagram
    history: list = field(default_factory=list)   # [(kind, c)] in order applied


def reduce_fully(d: Diagram, min_length: int = 1) -> Reduction:
    """Apply I moves until none apply, then II, then III, restarting at I
    after every move; within a stage the leftmost (kind, column) is used."""
    hist = []
    while d.n > min_length:
        for kinds in STAGES:
            moves = applicable(d, kinds)
            if moves:
                kind, c = min(moves, key=lambda m: (m[1], m[0]))
                d = reduce(d, kind, c)
                hist.append((kind, c))
                break
        else:
            break
    return Reduction(d, hist)


# -- labels --------------------------------------------------------------------

NONE_LABEL = "0"


def label_word(d: Diagram) -> tuple:
    """Cyclic label per starting column: U, L, T, or 0 for no colored site."""
    out = []
    for p, (a, b) in enumerate(passes(d), start=1):
        colored = [(r, x) for r, x in ((TOP, a), (BOTTOM, b)) if x != EMPTY]
        if not colored:
            out.append(NONE_LABEL)
        elif len(colored) == 1:
            out.append("U" if colored[0][0] == TOP else "L")
        elif a == WHITE and b == WHITE:
            out.append("T")
        else:
            raise DiagramError("particle %d passes %s over %s; not a III-reduced diagram"
                               % (p, a, b))
    return tuple(out)


def format_labels(labels, skip_none: bool = True) -> str:
    return " ".join(x for x in labels if not (skip_none and x == NONE_LABEL))


DELIMITER_RULES = ("extended", "adjacent")


def delimiters(labels, rule: str = "extended") -> list:
    """Which positions of the cyclic label word are fixed delimiters.

    ``adjacent``: every T, every 0, and both letters of each cyclically
    adjacent L U pair.

    ``extended`` (default): T and 0 are neutral letters. The word is cut
    at every cyclic occurrence of L x...x U with neutral inner letters x
    (possibly none); the L, the U and the letters between them are
    delimiters. Neutral letters elsewhere are transparent. If there is no
    such occurrence, every neutral letter is a delimiter instead. This is
    the reading that makes the rewritten diagram compatible with the
    original and the map an involution (checked exhaustively on small n).
    """
    if rule not in DELIMITER_RULES:
        raise ValueError("unknown delimiter rule %r" % rule)
    n = len(labels)
    if rule == "adjacent":
        delim = [x in ("T", NONE_LABEL) for x in labels]
        for j in range(n):
            if labels[j] == "L" and labels[(j + 1) % n] == "U":
                delim[j] = delim[(j + 1) % n] = True
        return delim
    neutral = [x in ("T", NONE_LABEL) for x in labels]
    if all(neutral):
        return [True] * n
    delim = [False] * n
    for j in range(n):
        if labels[j] != "L":
            continue
        k = 1
        while neutral[(j + k) % n]:
            k += 1
        if labels[(j + k) % n] == "U":
            for q in range(k + 1):
                delim[(j + q) % n] = True
    if not any(delim):
        return neutral
    return delim


def rewrite_labels(labels, rule: str = "extended") -> tuple:
    """Swap U^r L^s into U^s L^r on each maximal run between delimiters.

    Neutral letters inside a run (allowed by the ``extended`` rule) keep their
    place and are skipped when reading the run. A word without delimiters is
    left unchanged.
    """
    n = len(labels)
    delim = delimiters(labels, rule)
    if not any(delim):
        return tuple(labels)
    out = list(labels)
    start = delim.index(True)
    j = 1
    while j <= n:
        if delim[(start + j) % n]:
            j += 1
            continue
        run = []
        while not delim[(start + j) % n]:
            q = (start + j) % n
            if labels[q] in ("U", "L"):
                run.append(q)
            j += 1
        word = [labels[q] for q in run]
        r = word.count("U")
        if word != ["U"] * r + ["L"] * (len(word) - r):
            raise DiagramError("run %s is not of the form U^r L^s" % "".join(word))
        for q, x in zip(run, ["U"] * (len(word) - r) + ["L"] * r):
            out[q] = x
    return tuple(out)


def rebuild(core: Diagram, new_labels) -> Diagram:
    """Realize ``new_labels`` on ``core``: each particle keeps the color of its
    colored site; U and T particles color their starting upper site, then L
    and T particles color the lower site of their new middle column."""
    n = core.n
    old = passes(core)
    color = [a if a != EMPTY else b for a, b in old]
    top = tuple(
        (color[p] if lab == "U" else WHITE if lab == "T" else EMPTY)
        for p, lab in enumerate(new_labels))
    mid = _row_motion(top, list(range(1, n + 1)))
    bottom = [EMPTY] * n
    for j, p in enumerate(mid):
        lab = new_labels[p - 1]
        if lab == "L":
            bottom[j] = color[p - 1]
        elif lab == "T":
            bottom[j] = WHITE
    return Diagram(top, tuple(bottom))


@dataclass
class AlphaTrace:
    source: Diagram
    reduction: Reduction
    labels: tuple
    new_labels: tuple
    new_core: Diagram
    stages: list          # diagrams after each inverse move, last = image
    image: Diagram


def alpha_trace(d: Diagram, rule: str = "extended") -> AlphaTrace:
    red = reduce_fully(d)
    labels = label_word(red.core)
    new_labels = rewrite_labels(labels, rule)
    core = rebuild(red.core, new_labels)
    stages = []
    cur = core
    for kind, c in reversed(red.history):
        cur = inverse_reduce(cur, lift_kind(cur, kind, c), c)
        stages.append(cur)
    return AlphaTrace(d, red, labels, new_labels, core, stages, cur)


def involution_alpha(d: Diagram, rule: str = "extended") -> Diagram:
    return alpha_trace(d, rule).image


# -- populations -----------------------------------------------------------------

def triples(n: int, proper: bool = True):
    """All (u, S, T) with u a permutation of 1..n; S, T nonempty proper when ``proper``."""
    sets = []
    lo, hi = (1, n - 1) if proper else (0, n - 1)
    for mask in range(1 << n):
        s = frozenset(j + 1 for j in range(n) if mask >> j & 1)
        if lo <= len(s) <= hi:
            sets.append(s)
    for u in permutations(range(1, n + 1)):
        for S in sets:
            for T in sets:
                yield u, S, T


def population(n: int) -> set:
    return {build_diagram(u, S, T) for u, S, T in triples(n)}


# -- exhaustive checks ---------------------------------------------------------

FAMILIES = {"I": "I", "IIa": "II", "IIb": "II", "III": "III"}


def check_inverses(diagrams) -> list:
    """Every applicable (d, kind, c) with inverse_reduce(reduce(d)) != d."""
    bad = []
    for d in diagrams:
        for kind, c in applicable(d, KINDS):
            if inverse_reduce(reduce(d, kind, c), kind, c) != d:
                bad.append((d, kind, c))
    return bad


def _signature(d: Diagram):
    closure = order_closure(d)
    if closure is None:
        return None
    return pass_counts(d), closure


def check_reduced_compatibility(diagrams) -> tuple:
    """Test that compatible reductions lift to compatible diagrams.

    A move family is tested only where it is the one the reduction would
    use: I on all diagrams, II on I-reduced ones, III on II-reduced ones.
    Pairs are formed among diagrams reduced by the same family at the same
    column. Returns (number of pairs tested, list of failing pairs).
    """
    buckets = {}
    for d in diagrams:
        stage = stage_of(d)
        for kind, c in applicable(d, STAGES[stage] if stage < 3 else ()):
            r = reduce(d, kind, c)
            sig = _signature(r)
            if sig is None:
                continue
            key = (FAMILIES[kind], c, sig)
            buckets.setdefault(key, []).append((d, r))
    tested, bad = 0, []
    for group in buckets.values():
        for d1, r1 in group:
            for d2, r2 in group:
                if r1.counts() != r2.counts()[::-1]:
                    continue
                tested += 1
                if not compatible(d1, d2):
                    bad.append((d1, d2))
    return tested, bad


def check_alpha(diagrams, rule: str = "extended") -> dict:
    """Involution and compatibility failures of alpha over ``diagrams``."""
    out = {"checked": 0, "errors": [], "not_involutive": [], "incompatible": []}
    for d in diagrams:
        out["checked"] += 1
        try:
            a = involution_alpha(d, rule)
            back = involution_alpha(a, rule)
        except DiagramError as exc:
            out["errors"].append((d, str(exc)))
            continue
        if back != d:
            out["not_involutive"].append(d)
        if not compatible(d, a):
            out["incompatible"].append(d)
    return out


def check_pairing(n: int, rule: str = "extended") -> tuple:
    """Weight- and endpoint-preserving bijection check behind commuting updates.

    For every triple (u, S, T) the image diagram alpha(D) read with the same
    word u must give update sets S', T' with |S'| = |T| and |T'| = |S|, the
    same final word, and the same multiset of letters charged for the rate.
    Returns (triples checked, failures).
    """
    from .ktasep import ring_sigma_set
    checked, bad = 0, []
    for u, S, T in triples(n):
        d = build_diagram(u, S, T)
        a = involution_alpha(d, rule)
        S2, T2 = a.colored(TOP), a.colored(BOTTOM)
        checked += 1
        if len(S2) != len(T) or len(T2) != len(S) or not member_of_C(a, u):
            bad.append((u, S, T))
            continue
        w1 = ring_sigma_set(u, S)
        w2 = ring_sigma_set(u, S2)
        end1 = ring_sigma_set(w1, T)
        end2 = ring_sigma_set(w2, T2)
        charge1 = sorted([u[i - 1] for i in S] + [w1[i - 1] for i in T])
        charge2 = sorted([u[i - 1] for i in S2] + [w2[i - 1] for i in T2])
        if end1 != end2 or charge1 != charge2:
            bad.append((u, S, T))
    return checked, bad
