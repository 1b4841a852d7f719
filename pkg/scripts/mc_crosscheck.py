"""Monte Carlo cross-check of a type-C chain against its exact stationary law.

Simulates the chain for ``events`` uniformized steps, reports the total
variation distance to the exact law, and the same for every projection
phi_i onto J + {i}.
"""

from dataclasses import dataclass

from _config import from_argv
from weyltasep.markov import stationary
from weyltasep.montecarlo import (EventTable, SimSpec, project_empirical,
                                  projected_trajectory_is_valid, simulate, tv_distance)
from weyltasep.typec import build_transition_matrix, project


@dataclass
class Config:
    n: int = 3
    J: str = ""
    events: int = 1_000_000
    seed: int = 42
    burn_in: float = 0.1


def main(cfg: Config):
    J = frozenset(int(x) for x in cfg.J.split(",") if x)
    chain = build_transition_matrix(cfg.n, J)
    table = EventTable.from_moves(chain.states, chain.transitions)
    res = simulate(SimSpec(table, chain.states[0], cfg.events, cfg.seed, cfg.burn_in),
                   keep_trajectory=True)
    tv = tv_distance(res.empirical(), stationary(chain.matrix, chain.states))
    print("%s: %d states, TV to exact %.5f" % (chain.label, len(chain), float(tv)))
    for i in range(1, cfg.n + 1):
        if i in J:
            continue
        small = build_transition_matrix(cfg.n, J | {i})
        phi = lambda u, i=i: project(u, i, J)
        ok = projected_trajectory_is_valid(res, phi, small.transitions)
        tvp = tv_distance(project_empirical(res, phi, small.states),
                          stationary(small.matrix, small.states))
        print("  phi_%d -> %s: trajectory valid=%s, TV %.5f" % (i, small.label, ok, float(tvp)))


if __name__ == "__main__":
    main(from_argv(Config, __doc__))
