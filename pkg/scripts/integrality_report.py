"""Integer-normalized stationary vectors and integrality verdicts.

Covers the type-C particle chains for every J at each n up to ``max_n`` and
Lam's coset chains for the listed Weyl groups. Optionally dumps the full
integer vectors as JSON.
"""

import json
from dataclasses import dataclass

from _config import from_argv
from weyltasep.links import typec_integrality, weyl_integrality
from weyltasep.rational import fstr


@dataclass
class Config:
    max_n: int = 3
    weyl: str = "B3,C3,A3"     # family+rank, comma separated
    out: str = ""              # optional JSON file with the integer vectors


def main(cfg: Config):
    reports = []
    for n in range(2, cfg.max_n + 1):
        reports += typec_integrality(n)
    for token in filter(None, cfg.weyl.split(",")):
        reports.append(weyl_integrality(token[0], int(token[1:])))
    for r in reports:
        print(r.line())
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({r.label: [fstr(v) for v in r.values] for r in reports}, fh, indent=1)
        print("wrote", cfg.out)


if __name__ == "__main__":
    main(from_argv(Config, __doc__))
