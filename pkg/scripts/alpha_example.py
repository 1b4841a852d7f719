"""Walk the worked 16-column diagram through the involution, step by step.

Prints the reduction history, the reduced core with its label word, the
rewritten labels, every inverse move and the final image, together with the
involution and compatibility verdicts for the chosen delimiter rule.
"""

from dataclasses import dataclass

from _config import from_argv
from weyltasep.diagrams import Diagram, alpha_trace, compatible, format_labels, involution_alpha

SOURCE = ".WWBBBBB.W.BWBW.\nBBB..WWWBBBWW...\n"


@dataclass
class Config:
    rule: str = "extended"
    both: bool = False     # also show the other delimiter rule


def show(d: Diagram, rule: str):
    tr = alpha_trace(d, rule)
    print("== rule: %s" % rule)
    print("reductions:", " ".join("%s@%d" % m for m in tr.reduction.history))
    print(tr.reduction.core, "\n")
    print("labels    ", format_labels(tr.labels))
    print("rewritten ", format_labels(tr.new_labels))
    print(tr.new_core, "\n")
    for k, stage in enumerate(tr.stages, start=1):
        print("after inverse move %d (%d columns)" % (k, stage.n))
        print(stage, "\n")
    print("alpha(alpha(D)) == D:", involution_alpha(tr.image, rule) == d)
    print("compatible(D, alpha(D)):", compatible(d, tr.image))


def main(cfg: Config):
    d = Diagram.from_text(SOURCE)
    print("source\n%s\n" % d)
    rules = ("extended", "adjacent") if cfg.both else (cfg.rule,)
    for rule in rules:
        show(d, rule)


if __name__ == "__main__":
    main(from_argv(Config, __doc__))
