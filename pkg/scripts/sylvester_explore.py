"""Dimension of the conjugation space {U : M_J U = U M_J'} for type-C links.

For each J in [n-1] the queue matrix maps the J' = J + {n} chain onto the J
chain; this script solves the Sylvester equation exactly, reports the
dimension of the solution space and confirms the queue matrix lies in it.
"""

from dataclasses import dataclass

from _config import from_argv
from weyltasep.markov import solve_sylvester
from weyltasep.queue_ops import build_U
from weyltasep.typec import all_subsets, build_transition_matrix


@dataclass
class Config:
    max_n: int = 3


def main(cfg: Config):
    print("n  J        |Omega_J| |Omega_J'|  dim  queue-U-in-space")
    for n in range(2, cfg.max_n + 1):
        for J in all_subsets(n - 1):
            big = build_transition_matrix(n, J)
            small = build_transition_matrix(n, J | {n})
            space = solve_sylvester(big.matrix, small.matrix)
            u = build_U(n, J, small.states, big.states)
            print("%d  %-8s %9d %10d %4d  %s" % (n, sorted(J), len(big), len(small),
                                                 space.dimension, space.contains(u)))


if __name__ == "__main__":
    main(from_argv(Config, __doc__))
