"""A finite chain: ordered states plus its (target, source) rate matrix."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .rational import SparseRationalMatrix


class SizeGuardError(ValueError):
    """A state space or group would exceed the configured size guard."""


@dataclass(frozen=True)
class Chain:
    states: tuple
    matrix: SparseRationalMatrix
    label: str = ""
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.matrix.shape != (len(self.states), len(self.states)):
            raise ValueError("matrix shape %s does not match %d states"
                             % (self.matrix.shape, len(self.states)))
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    def __len__(self):
        return len(self.states)

    def index(self, state) -> int:
        return self._index[state]

    def transitions(self, state):
        """``[(target_state, rate), ...]`` out of ``state``, self-loops included."""
        c = self._index[state]
        return [(self.states[r], v) for r, v in sorted(self.matrix.column(c).items())]


def assemble(states: Sequence, moves: Callable[[object], Iterable], label: str = "") -> Chain:
    """Build a chain from ``moves(state) -> iterable of (target, rate)``."""
    states = tuple(states)
    index = {s: i for i, s in enumerate(states)}
    acc = defaultdict(Fraction)
    for j, s in enumerate(states):
        for t, rate in moves(s):
            acc[index[t], j] += Fraction(rate)
    n = len(states)
    return Chain(states, SparseRationalMatrix(n, n, acc), label)
