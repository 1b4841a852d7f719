"""Table of the normalized two-class weights and which corollary bullets hold.

For each (n, t) prints the weight range and a verdict per bullet, plus the
first counterexample word where a bullet fails.
"""

from dataclasses import dataclass

from _config import from_argv
from weyltasep.bracket import normalized_weights, verify_corollary


@dataclass
class Config:
    max_n: int = 6


def main(cfg: Config):
    cache = {}
    for n in range(2, cfg.max_n + 1):
        for t in range(1, n + 1):
            r = verify_corollary(n, t, cache)
            w = normalized_weights(n, t)
            print("n=%d t=%d  weights %s..%s  %s%s" % (
                n, t, min(w.values()), max(w.values()), r.line(),
                "  witness %s" % (r.witness,) if r.witness else ""))


if __name__ == "__main__":
    main(from_argv(Config, __doc__))
