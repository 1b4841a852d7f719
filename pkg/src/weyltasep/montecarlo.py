"""Seeded simulation of constructed chains by uniformization.

At every step one event is drawn with probability proportional to its rate
among all events leaving the current state (self-loops included), using the
total rate ``lam`` as the uniformization constant. When a state's outflow is
below ``lam`` the remainder is a rejected (no-op) step. Chains built here
have constant outflow, so no step is rejected.

Randomness comes from ``numpy.random.Generator(PCG64(seed))``; the seed fully
determines the trajectory.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .markov import Distribution
from .rational import fstr


@dataclass(frozen=True)
class EventTable:
    """Outgoing events per state: targets, cumulative rates and total rate."""

    states: tuple
    targets: tuple      # per state: tuple of state indices
    cumulative: tuple   # per state: tuple of float cumulative rates
    totals: tuple       # per state: exact total outflow (Fraction)

    @classmethod
    def from_moves(cls, states: Sequence, moves: Callable) -> "EventTable":
        states = tuple(states)
        index = {s: k for k, s in enumerate(states)}
        targets, cumulative, totals = [], [], []
        for s in states:
            tg, cum, acc = [], [], Fraction(0)
            for t, rate in moves(s):
                rate = Fraction(rate)
                if rate <= 0:
                    raise ValueError("event rates must be positive")
                if t not in index:
                    raise ValueError("move from %r leaves the state space" % (s,))
                acc += rate
                tg.append(index[t])
                cum.append(float(acc))
            targets.append(tuple(tg))
            cumulative.append(tuple(cum))
            totals.append(acc)
        return cls(states, tuple(targets), tuple(cumulative), tuple(totals))

    @property
    def max_rate(self) -> Fraction:
        return max(self.totals)

    def constant_rate(self) -> bool:
        return len(set(self.totals)) == 1


@dataclass
class SimSpec:
    table: EventTable
    initial: object
    events: int
    seed: int
    burn_in: float = 0.1          # fraction of events discarded
    lam: Fraction | None = None   # uniformization constant, default max outflow
    label: str = ""

    def __post_init__(self):
        if self.events <= 0:
            raise ValueError("event count must be positive")
        if not 0 <= self.burn_in < 1:
            raise ValueError("burn_in must lie in [0, 1)")
        if self.initial not in self.table.states:
            raise ValueError("initial state %r is not a state of the chain" % (self.initial,))
        if self.lam is None:
            self.lam = self.table.max_rate
        self.lam = Fraction(self.lam)
        if self.lam < self.table.max_rate:
            raise ValueError("uniformization constant below the maximal outflow")


@dataclass
class SimResult:
    spec: SimSpec
    counts: Counter
    rejected: int
    final: object
    trajectory: list | None = None
    burn: int = 0

    @property
    def recorded(self) -> int:
        return sum(self.counts.values())

    def empirical(self) -> Distribution:
        states = self.spec.table.states
        total = self.recorded
        return Distribution(states, tuple(Fraction(self.counts.get(k, 0), total)
                                          for k in range(len(states))))

    def summary(self, exact: Distribution | None = None) -> dict:
        emp = self.empirical()
        out = {
            "events": self.spec.events,
            "seed": self.spec.seed,
            "burn_in": self.burn,
            "empirical": [[_state_text(s), fstr(v)] for s, v in zip(emp.states, emp.values) if v],
        }
        if exact is not None:
            out["tv_to_exact"] = fstr(tv_distance(emp, exact))
        return out

    def to_json(self, exact: Distribution | None = None) -> str:
        return json.dumps(self.summary(exact), indent=1)


def _state_text(s) -> str:
    if isinstance(s, tuple):
        return ",".join(str(x) for x in s)
    return str(s)


def simulate(spec: SimSpec, keep_trajectory: bool = False) -> SimResult:
    """Run ``spec.events`` uniformized steps; states visited after burn-in are tallied."""
    tab = spec.table
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    lam = float(spec.lam)
    k = tab.states.index(spec.initial)
    burn = int(spec.events * spec.burn_in)
    counts = Counter()
    rejected = 0
    traj = [] if keep_trajectory else None
    draws = rng.random(spec.events) * lam
    for step in range(spec.events):
        cum = tab.cumulative[k]
        x = draws[step]
        j = bisect_right(cum, x)
        if j < len(cum):
            k = tab.targets[k][j]
        else:
            rejected += 1
        if step >= burn:
            counts[k] += 1
            if traj is not None:
                traj.append(k)
    return SimResult(spec, counts, rejected, tab.states[k], traj, burn)


def replicas(spec: SimSpec, seeds: Sequence[int], workers: int = 1) -> list:
    """Independent runs with the given seeds, in seed order."""
    specs = [SimSpec(spec.table, spec.initial, spec.events, s, spec.burn_in, spec.lam, spec.label)
             for s in seeds]
    if workers <= 1:
        return [simulate(s) for s in specs]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(simulate, specs))


def derived_seeds(seed: int, count: int) -> list:
    ss = np.random.SeedSequence(seed)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in ss.spawn(count)]


def tv_distance(d1: Distribution, d2: Distribution) -> Fraction:
    """Half the L1 distance; both arguments are normalized first."""
    if set(d1.states) != set(d2.states):
        raise ValueError("distributions live on different state spaces")
    p, q = d1.probability().as_dict(), d2.probability().as_dict()
    return sum((abs(p[s] - q[s]) for s in p), Fraction(0)) / 2


def project_empirical(result: SimResult, phi: Callable, target_states: Sequence) -> Distribution:
    """Push the empirical law through a state map (e.g. a class-merging map)."""
    states = result.spec.table.states
    acc = Counter()
    for k, c in result.counts.items():
        acc[phi(states[k])] += c
    target_states = tuple(target_states)
    extra = set(acc) - set(target_states)
    if extra:
        raise ValueError("projection leaves the target space: %r" % (sorted(extra)[:3],))
    total = sum(acc.values())
    return Distribution(target_states, tuple(Fraction(acc.get(s, 0), total) for s in target_states))


def projected_trajectory_is_valid(result: SimResult, phi: Callable, target_moves: Callable) -> bool:
    """Each consecutive pair of projected states is a self-loop or a move of the target chain."""
    if result.trajectory is None:
        raise ValueError("simulate with keep_trajectory=True first")
    states = result.spec.table.states
    images = [phi(s) for s in states]
    allowed = {}
    prev = None
    for k in result.trajectory:
        cur = images[k]
        if prev is not None and cur != prev:
            if prev not in allowed:
                allowed[prev] = {t for t, _ in target_moves(prev)}
            if cur not in allowed[prev]:
                return False
        prev = cur
    return True
