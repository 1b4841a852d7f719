"""Command-line front end.

Exit codes: 0 success or PASS, 1 a verification failed (a witness is
printed), 2 usage or configuration error. Every verification prints one
``PASS ...`` or ``FAIL ...`` line per check.

A ``--config FILE`` of ``key=value`` lines supplies defaults for flags of the
chosen subcommand; flags given on the command line win. ``WTL_THREADS`` caps
the number of worker processes (default: all cores).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import bracket, diagrams, ktasep, links, montecarlo, queue_ops, rootsys, typec
from .chain import Chain
from .markov import ReducibilityError, integrality_report, stationary, verify_conjugation
from .rational import fstr, load_matrix, save_matrix


class UsageError(Exception):
    pass


def worker_count() -> int:
    raw = os.environ.get("WTL_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError("WTL_THREADS must be a positive integer, got %r" % raw) from None
    if n < 1:
        raise UsageError("WTL_THREADS must be a positive integer, got %r" % raw)
    return n


def parse_set(text) -> frozenset:
    if text is None or str(text).strip() in ("", "-", "{}"):
        return frozenset()
    return frozenset(int(t) for t in str(text).replace("{", "").replace("}", "").split(","))


# -- reporting -----------------------------------------------------------------------

@dataclass
class Report:
    out: object = field(default_factory=lambda: sys.stdout)
    failed: bool = False

    def check(self, name: str, witness=None, detail: str = "") -> bool:
        ok = witness is None
        line = "%s %s" % ("PASS" if ok else "FAIL", name)
        if detail:
            line += " " + detail
        if not ok:
            self.failed = True
            line += " witness: %s" % (witness,)
        print(line, file=self.out)
        return ok

    def info(self, text: str):
        print(text, file=self.out)

    @property
    def code(self) -> int:
        return 1 if self.failed else 0


# -- models ----------------------------------------------------------------------------

@dataclass
class Model:
    chain: Chain
    fmt: object        # state -> text
    parse: object      # text -> state


def build_model(a) -> Model:
    kind = a.model
    if kind == "typec":
        n = _need(a, "n")
        ch = typec.build_transition_matrix(n, parse_set(a.J))
        return Model(ch, typec.format_state, typec.parse_state)
    if kind == "weyl":
        group = rootsys.Group(rootsys.build_root_system(rootsys.CartanSpec(_need(a, "family"),
                                                                           _need(a, "rank"))))
        J = parse_set(a.J)
        ch = rootsys.build_lam_chain(group, J)
        table = rootsys.coset_decompose(group, J)

        def fmt(cid):
            w = group.elements[table.min_rep[cid]]
            return "coset%d[%s]" % (cid, ",".join(map(str, w.signed_permutation()))) \
                if group.rs.spec.family != "A" else "coset%d" % cid
        return Model(ch, fmt, lambda t: int(t.split("[")[0].replace("coset", "")))
    if kind == "ktasep":
        word = ktasep.parse_word(_need(a, "word"))
        x = ktasep.parse_rates(a.x) if a.x else None
        ch = ktasep.build_Ak(word, _need(a, "k"), x)
        return Model(ch, ktasep.format_word, ktasep.parse_word)
    if kind == "twoclass":
        p = bracket.RateParams.parse(a.params) if a.params else None
        ch = bracket.build_two_class_chain(_need(a, "n"), _need(a, "t"), p)
        return Model(ch, bracket.format_word, bracket.parse_word)
    raise UsageError("unknown model %r" % kind)


def _need(a, name):
    v = getattr(a, name, None)
    if v is None:
        raise UsageError("--%s is required for model %s" % (name, a.model))
    return v


# -- commands --------------------------------------------------------------------------

def cmd_rootsys_show(a, rep: Report) -> int:
    spec = rootsys.CartanSpec(a.family, a.rank)
    rs = rootsys.build_root_system(spec)
    vec = lambda v: "(" + ",".join(fstr(x) for x in v) + ")"
    rep.info("type %s%d" % (spec.family, spec.rank))
    for i, r in enumerate(rs.simple_roots, start=1):
        rep.info("  alpha_%d = %s" % (i, vec(r)))
    rep.info("  highest root = %s" % vec(rs.highest_root))
    rep.info("  marks a_1..a_n = %s" % ",".join(map(str, rs.marks)))
    rep.info("  rates a_0..a_n = %s" % ",".join(map(str, rs.rates)))
    rep.info("  positive roots = %d" % len(rs.positive_roots))
    try:
        rep.info("  |W| = %d" % len(rootsys.enumerate_group(rs)))
    except Exception as exc:  # size guard
        rep.info("  |W| not enumerated (%s)" % exc)
    return 0


def cmd_chain_matrix(a, rep: Report) -> int:
    m = build_model(a)
    rep.info("%s: %d states" % (m.chain.label, len(m.chain)))
    if a.out:
        save_matrix(m.chain.matrix, a.out, a.format)
        rep.info("wrote %s" % a.out)
    else:
        rep.info(m.chain.matrix.to_json() if a.format == "json" else m.chain.matrix.to_text())
    if a.states_out:
        with open(a.states_out, "w") as fh:
            fh.writelines(m.fmt(s) + "\n" for s in m.chain.states)
    return 0


def cmd_chain_stationary(a, rep: Report) -> int:
    m = build_model(a)
    pi = stationary(m.chain.matrix, m.chain.states)
    d = pi.integer_form() if a.normalize == "integer" else pi
    for s, v in zip(d.states, d.values):
        rep.info("%s\t%s" % (m.fmt(s), fstr(v)))
    return 0


def cmd_verify_intertwine(a, rep: Report) -> int:
    n = a.rank
    if a.all_links:
        results = links.all_typec_links(n)
    else:
        if a.i is None:
            raise UsageError("give --i (and --J) or --all-links")
        results = [links.typec_link(n, a.i, parse_set(a.J))]
    for r in results:
        w = None if r.passed else (r.intertwine or "D pi_J not proportional to pi_J'")
        rep.check("intertwine n=%d i=%d J=%s" % (n, r.i, sorted(r.J)), w,
                  "ratio=%s" % fstr(r.ratio) if r.ratio is not None else "")
    return rep.code


def _corrupt_tau(u, theta, order=None):
    v = queue_ops.tau(u, theta, order)
    return v[1:] + v[:1]


def cmd_verify_queue(a, rep: Report) -> int:
    n = a.rank
    tau_fn = _corrupt_tau if a.corrupt_tau else queue_ops.tau
    Js = [parse_set(a.J)] if a.J is not None else [J for J in typec.all_subsets(n - 1)]
    for J in Js:
        w = queue_ops.verify_queue_theorem(n, J, tau_fn)
        rep.check("queue n=%d J=%s" % (n, sorted(J)), w)
        if w is None:
            u = queue_ops.build_U(n, J, tau_fn=tau_fn)
            bad = [c for c, s in enumerate(u.column_sums()) if s != 2 ** n]
            rep.check("queue-colsums n=%d J=%s" % (n, sorted(J)), bad[0] if bad else None)
        w = queue_ops.verify_square_corollary(n, J, tau_fn)
        rep.check("queue-square n=%d J=%s" % (n, sorted(J)), w)
    return rep.code


def cmd_verify_conjugation(a, rep: Report) -> int:
    if a.mj and a.mjp:
        mj, mjp = load_matrix(a.mj), load_matrix(a.mjp)
    elif a.mj or a.mjp:
        raise UsageError("give both --mj and --mjp, or neither")
    else:
        mj = typec.build_transition_matrix(links.PACKAGED_N, links.PACKAGED_J).matrix
        mjp = typec.build_transition_matrix(links.PACKAGED_N, links.PACKAGED_JP).matrix
    u = load_matrix(a.u) if a.u else links.packaged_matrix()
    if u.shape == (mjp.nrows, mj.nrows) and u.shape != (mj.nrows, mjp.nrows):
        u = u.transpose()
    if u.shape != (mj.nrows, mjp.nrows):
        raise UsageError("U has shape %s, expected %dx%d" % (u.shape, mj.nrows, mjp.nrows))
    rep.check("conjugation M_J U = U M_J' (%dx%d)" % u.shape, verify_conjugation(mj, u, mjp))
    return rep.code


def cmd_verify_bracket(a, rep: Report) -> int:
    p = bracket.RateParams.parse(a.params) if a.params else bracket.RateParams.default()
    for n in range(2, a.max_n + 1):
        for t in range(1, n + 1):
            rep.check("bracket n=%d t=%d" % (n, t), bracket.verify_bracket_theorem(n, t, p))
    if a.corollary:
        cache = {}
        for n in range(2, a.max_n + 1):
            for t in range(1, n):
                r = bracket.verify_corollary(n, t, cache)
                rep.check("corollary n=%d t=%d" % (n, t), None if r.passed else r.witness,
                          r.line())
    return rep.code


def cmd_verify_ktasep(a, rep: Report) -> int:
    word = ktasep.parse_word(a.word)
    if a.n is not None and a.n != len(word):
        raise UsageError("--n %d does not match the word length %d" % (a.n, len(word)))
    n = len(word)
    x = ktasep.parse_rates(a.x) if a.x else None
    for k in range(1, n):
        for l in range(k + 1, n):
            rep.check("ktasep-commute k=%d l=%d" % (k, l), ktasep.verify_commutation(word, x, k, l))
    rep.check("ktasep-stationary word=%s" % ktasep.format_word(word),
              ktasep.verify_equal_stationary(word, x))
    return rep.code


def cmd_diagram_alpha(a, rep: Report) -> int:
    with open(a.file) as fh:
        d = diagrams.Diagram.from_text(fh.read())
    tr = diagrams.alpha_trace(d, a.rule)
    rep.info("core (after %d moves: %s)" % (len(tr.reduction.history),
                                            " ".join("%s@%d" % m for m in tr.reduction.history)))
    rep.info(str(tr.reduction.core))
    rep.info("labels     %s" % diagrams.format_labels(tr.labels))
    rep.info("rewritten  %s" % diagrams.format_labels(tr.new_labels))
    rep.info("image")
    rep.info(str(tr.image))
    rep.check("alpha-involution", None if diagrams.involution_alpha(tr.image, a.rule) == d else "alpha(alpha(D)) != D")
    rep.check("alpha-compatible", None if diagrams.compatible(d, tr.image) else "incompatible")
    return rep.code


def cmd_verify_diagrams(a, rep: Report) -> int:
    for n in range(2, a.n + 1):
        pop = diagrams.population(n)
        bad = diagrams.check_inverses(pop)
        rep.check("diagram-inverses n=%d (%d diagrams)" % (n, len(pop)), bad[0] if bad else None)
        tested, bad = diagrams.check_reduced_compatibility(pop)
        rep.check("diagram-reduced-compat n=%d (%d pairs)" % (n, tested),
                  tuple(map(str, bad[0])) if bad else None)
        res = diagrams.check_alpha(pop, a.rule)
        for key in ("errors", "not_involutive", "incompatible"):
            rep.check("alpha-%s n=%d" % (key.replace("_", "-"), n),
                      str(res[key][0]) if res[key] else None)
        if a.pairing:
            checked, bad = diagrams.check_pairing(n, a.rule)
            rep.check("alpha-pairing n=%d (%d triples)" % (n, checked), bad[0] if bad else None)
    return rep.code


def cmd_simulate(a, rep: Report) -> int:
    m = build_model(a)
    table = montecarlo.EventTable.from_moves(m.chain.states, m.chain.transitions)
    init = m.parse(a.initial) if a.initial else m.chain.states[0]
    spec = montecarlo.SimSpec(table, init, a.events, a.seed, a.burn_in)
    exact = stationary(m.chain.matrix, m.chain.states) if a.exact else None
    if a.replicas > 1:
        seeds = montecarlo.derived_seeds(a.seed, a.replicas)
        results = montecarlo.replicas(spec, seeds, min(worker_count(), a.replicas))
        summary = {"replicas": [r.summary(exact) for r in results]}
    else:
        summary = montecarlo.simulate(spec).summary(exact)
    summary = _relabel(summary, m)
    text = json.dumps(summary, indent=1)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text + "\n")
    rep.info(text)
    return 0


def _relabel(summary, m: Model):
    """Replace tuple-joined state keys by the model's own state text."""
    if "replicas" in summary:
        return {"replicas": [_relabel(s, m) for s in summary["replicas"]]}
    text = {montecarlo._state_text(s): m.fmt(s) for s in m.chain.states}
    summary["empirical"] = [[text[s], v] for s, v in summary["empirical"]]
    return summary


def cmd_report_integrality(a, rep: Report) -> int:
    if a.model == "typec" and a.J is None:
        reports = links.typec_integrality(_need(a, "n"))
    else:
        m = build_model(a)
        reports = [integrality_report(stationary(m.chain.matrix, m.chain.states), m.chain.label)]
    for r in reports:
        rep.info("REPORT " + r.line())
    return 0


# -- parser -----------------------------------------------------------------------------

DEFAULTS = {"format": "json", "normalize": "prob", "burn_in": 0.1, "rule": "extended",
            "replicas": 1, "max_n": 4}


def _model_flags(p):
    p.add_argument("--model", choices=("typec", "weyl", "ktasep", "twoclass"))
    p.add_argument("--n", type=int)
    p.add_argument("--J", help="comma separated subset, e.g. 3,4 (empty: '')")
    p.add_argument("--family")
    p.add_argument("--rank", type=int)
    p.add_argument("--word", help="ring word, comma separated letters")
    p.add_argument("--k", type=int)
    p.add_argument("--x", help="letter rates x_1,x_2,... as rationals")
    p.add_argument("--t", type=int)
    p.add_argument("--params", help="two-class rates a,b,c,d,e")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="weyltasep", description=__doc__.split("\n\n")[0])
    top.add_argument("--config", help="key=value file with flag defaults")
    sub = top.add_subparsers(dest="group", required=True)

    g = sub.add_parser("rootsys").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("show")
    p.add_argument("--family", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.set_defaults(func=cmd_rootsys_show)

    g = sub.add_parser("chain").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("matrix")
    _model_flags(p)
    p.add_argument("--out")
    p.add_argument("--states-out")
    p.add_argument("--format", choices=("json", "text"))
    p.set_defaults(func=cmd_chain_matrix, required_model=True)
    p = g.add_parser("stationary")
    _model_flags(p)
    p.add_argument("--normalize", choices=("integer", "prob"))
    p.set_defaults(func=cmd_chain_stationary, required_model=True)

    g = sub.add_parser("verify").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("intertwine")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--all-links", action="store_true", default=None)
    p.add_argument("--i", type=int)
    p.add_argument("--J")
    p.set_defaults(func=cmd_verify_intertwine)
    p = g.add_parser("queue")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--J")
    p.add_argument("--corrupt-tau", action="store_true", default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_queue)
    p = g.add_parser("conjugation")
    p.add_argument("--mj")
    p.add_argument("--mjp")
    p.add_argument("--u", help="U or its transpose; default: the packaged 8x48 matrix")
    p.set_defaults(func=cmd_verify_conjugation)
    p = g.add_parser("bracket")
    p.add_argument("--max-n", type=int)
    p.add_argument("--params")
    p.add_argument("--corollary", action="store_true", default=None)
    p.set_defaults(func=cmd_verify_bracket)
    p = g.add_parser("ktasep")
    p.add_argument("--n", type=int)
    p.add_argument("--word", required=True)
    p.add_argument("--x")
    p.set_defaults(func=cmd_verify_ktasep)
    p = g.add_parser("diagrams")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rule", choices=diagrams.DELIMITER_RULES)
    p.add_argument("--pairing", action="store_true", default=None)
    p.set_defaults(func=cmd_verify_diagrams)

    g = sub.add_parser("diagram").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("alpha")
    p.add_argument("--file", required=True)
    p.add_argument("--rule", choices=diagrams.DELIMITER_RULES)
    p.set_defaults(func=cmd_diagram_alpha)

    p = sub.add_parser("simulate")
    _model_flags(p)
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--burn-in", type=float)
    p.add_argument("--initial")
    p.add_argument("--exact", action="store_true", default=None)
    p.add_argument("--replicas", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate, required_model=True)

    g = sub.add_parser("report").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("integrality")
    _model_flags(p)
    p.set_defaults(func=cmd_report_integrality, required_model=True)
    return top


def read_config(path) -> dict:
    out = {}
    with open(path) as fh:
        for num, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError("%s:%d: expected key=value" % (path, num))
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _subparser_actions(parser, argv):
    """Actions of the innermost subparser selected by ``argv``."""
    actions = {}
    p = parser
    while True:
        subs = [x for x in p._actions if isinstance(x, argparse._SubParsersAction)]
        for x in p._actions:
            if x.dest not in ("help", "config") and not isinstance(x, argparse._SubParsersAction):
                actions[x.dest] = x
        if not subs:
            return actions
        chosen = next((t for t in argv if t in subs[0].choices), None)
        if chosen is None:
            return actions
        p = subs[0].choices[chosen]


def apply_config(a, parser, argv, config: dict):
    actions = _subparser_actions(parser, argv)
    for key, raw in config.items():
        if key not in actions:
            raise UsageError("config key %r is not a flag of this command" % key)
        if getattr(a, key, None) is not None:
            continue   # flag given on the command line wins
        act = actions[key]
        if isinstance(act, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif act.type is not None:
            try:
                value = act.type(raw)
            except ValueError:
                raise UsageError("config value %r for %s is not valid" % (raw, key)) from None
        else:
            value = raw
        if act.choices is not None and value not in act.choices:
            raise UsageError("config value %r for %s not in %s" % (raw, key, list(act.choices)))
        setattr(a, key, value)


def run(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    rep = Report(out or sys.stdout)
    try:
        if a.config:
            apply_config(a, parser, argv, read_config(a.config))
        for key, value in DEFAULTS.items():
            if hasattr(a, key) and getattr(a, key) is None:
                setattr(a, key, value)
        for key in ("all_links", "corrupt_tau", "corollary", "pairing", "exact"):
            if hasattr(a, key) and getattr(a, key) is None:
                setattr(a, key, False)
        if getattr(a, "required_model", False) and a.model is None:
            raise UsageError("--model is required")
        if getattr(a, "seed", None) is not None and not 0 <= a.seed < 2 ** 64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        return a.func(a, rep)
    except (UsageError, ValueError, KeyError, OSError, ReducibilityError,
            rootsys.ConfigurationError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
