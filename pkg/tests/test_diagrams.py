import random
from itertools import permutations

import pytest

from fixtures import (ALPHA_LABELS_AFTER, ALPHA_LABELS_BEFORE, ALPHA_SOURCE_PATHS, ALPHA_STEPS,
                      SIX_A, SIX_A_PATHS, SIX_B)
from weyltasep.diagrams import (BLACK, EMPTY, TOP, WHITE, Diagram, DiagramError, alpha_trace,
                                applicable, build_diagram, check_alpha, check_inverses,
                                check_pairing, check_reduced_compatibility, compatible,
                                delimiters, format_labels, involution_alpha, inverse_reduce,
                                is_diagram, label_word, member_of_C, order_closure,
                                order_constraints, pass_counts, passes, population, reduce,
                                reduce_fully, rewrite_labels, trajectories)

POP3 = population(3)
POP4 = population(4)


def test_build_example():
    d = build_diagram((2, 1, 3), {2}, {2})
    assert d.top == (EMPTY, BLACK, EMPTY) and d.bottom == (EMPTY, WHITE, EMPTY)
    assert build_diagram((1, 2, 3), (), ()) == Diagram((EMPTY,) * 3, (EMPTY,) * 3)
    with pytest.raises(DiagramError):
        build_diagram((1, 1, 2), {1}, {2})


def test_text_roundtrip():
    for d in list(POP4)[:50] + ALPHA_STEPS:
        assert Diagram.from_text(d.to_text()) == d
    with pytest.raises(DiagramError):
        Diagram.from_text("BW.\n")
    with pytest.raises(DiagramError):
        Diagram(("X",), (".",))


def test_white_over_black_is_not_a_diagram():
    assert not is_diagram(Diagram((WHITE,), (BLACK,)))
    assert not is_diagram(Diagram((WHITE, EMPTY), (BLACK, EMPTY)))


def test_empty_diagram_has_no_constraints():
    d = Diagram((EMPTY,) * 4, (EMPTY,) * 4)
    assert len(order_constraints(d)) == 24


def test_six_column_constraints():
    cd = order_constraints(SIX_A)
    expected = {u for u in permutations(range(1, 7)) if u[1] == 6 and u[3] < u[2] < u[4]}
    assert cd == expected and len(cd) == 20
    assert sorted(trajectories(SIX_A)) == SIX_A_PATHS


def test_six_column_pair_compatible():
    assert compatible(SIX_A, SIX_B)
    assert not compatible(SIX_A, SIX_A)


def test_compatible_self_iff_balanced():
    for d in POP3:
        t, b = d.counts()
        assert compatible(d, d) == (t == b)


def test_different_black_totals_incompatible():
    d1 = build_diagram((2, 1, 3), {2}, {3})
    d2 = build_diagram((1, 2, 3), {2}, {3})
    assert sum(p[0] for p in pass_counts(d1)) != sum(p[0] for p in pass_counts(d2))
    assert not compatible(d1, d2)


def test_membership_replays():
    rng = random.Random(0)
    for d in rng.sample(sorted(POP4, key=str), 40):
        for u in order_constraints(d):
            assert member_of_C(d, u)
        assert order_closure(d) is not None


def test_trajectories_of_source_figure():
    col = lambda x: 16 if x == 0 else x
    assert sorted(trajectories(ALPHA_STEPS[0])) == sorted(tuple(map(col, p)) for p in ALPHA_SOURCE_PATHS)


def test_reduction_steps_reproduce_rows():
    d0 = ALPHA_STEPS[0]
    red = reduce_fully(d0)
    seq, d = [], d0
    for kind, c in red.history:
        d = reduce(d, kind, c)
        seq.append(d)
    assert ALPHA_STEPS[1] in seq and ALPHA_STEPS[2] in seq
    assert red.core == ALPHA_STEPS[3]
    assert [k for k, _ in red.history][:2] == ["I", "I"]
    assert red.history[-1][0] == "III"


def test_labels_of_core():
    assert format_labels(label_word(ALPHA_STEPS[3])) == ALPHA_LABELS_BEFORE
    assert format_labels(label_word(ALPHA_STEPS[4])) == ALPHA_LABELS_AFTER


def test_reduce_errors():
    with pytest.raises(DiagramError):
        reduce(SIX_A, "I", 9)
    d = Diagram((EMPTY, EMPTY), (EMPTY, EMPTY))
    with pytest.raises(DiagramError):
        reduce(d, "I", 1)
    with pytest.raises(ValueError):
        reduce(SIX_A, "IV", 1)


def test_inverses_exhaustive():
    assert check_inverses(POP3 | POP4) == []
    some = 0
    for d in POP4:
        for kind, c in applicable(d, ("I", "IIa", "IIb", "III")):
            assert inverse_reduce(reduce(d, kind, c), kind, c) == d
            some += 1
    assert some > 0


def test_reduced_invariants():
    for d in POP4:
        core = reduce_fully(d).core
        for a, b in passes(core):
            if a != EMPTY and b != EMPTY:
                assert a == b == WHITE


def test_reduced_compatibility_lifts():
    tested, bad = check_reduced_compatibility(POP4)
    assert tested > 0 and bad == []


def test_delimiter_rules():
    w = tuple("LTUULLUU0")
    assert rewrite_labels(w, "adjacent") == tuple("UTULLLUL0")
    assert rewrite_labels(w) == tuple("LTUULLUL0")
    assert delimiters(tuple("TT")) == [True, True]
    assert rewrite_labels(tuple("TTT")) == tuple("TTT")
    with pytest.raises(ValueError):
        delimiters(w, "nope")


def test_all_t_core_is_fixed():
    d = Diagram((WHITE, EMPTY, EMPTY), (WHITE, EMPTY, EMPTY))
    if is_diagram(d):
        assert involution_alpha(d) == d


@pytest.mark.parametrize("pop", ["3", "4"])
def test_alpha_involution_and_compatibility(pop):
    res = check_alpha(POP3 if pop == "3" else POP4)
    assert res["checked"] > 0
    assert res["errors"] == [] and res["not_involutive"] == [] and res["incompatible"] == []


def test_alpha_pairing_matches_commutation():
    for n in (3, 4):
        checked, bad = check_pairing(n)
        assert checked > 0 and bad == []


def test_alpha_on_source_figure():
    d0 = ALPHA_STEPS[0]
    t = alpha_trace(d0)
    assert t.reduction.core == ALPHA_STEPS[3]
    assert compatible(d0, t.image)
    assert involution_alpha(t.image) == d0


def test_adjacent_rule_reproduces_printed_image():
    t = alpha_trace(ALPHA_STEPS[0], "adjacent")
    assert t.new_core == ALPHA_STEPS[4]
    assert t.image == ALPHA_STEPS[7]
    assert ALPHA_STEPS[6] in t.stages


def test_printed_pair_is_not_compatible():
    # the drawn first and last diagrams force different order relations
    d0, d7 = ALPHA_STEPS[0], ALPHA_STEPS[7]
    assert len(order_closure(d0)) != len(order_closure(d7))
    assert not compatible(d0, d7)
