from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from dqcount.brute import brute_count
from dqcount.formula import And, Dqbf, Iff, Not, Or, Var, Xor
from dqcount.generators import GenSpec, gen_random, gen_two_col
from dqcount.reachability import (
    LiteralSpace, NotTwoDqbf, build_transition_system, check_satisfiable, edge_relation,
    transitive_closure, ts_unsatisfiable,
)


def _verdicts(d):
    sp = LiteralSpace(d)
    E = edge_relation(sp)
    tr, iters = transitive_closure(sp, E)
    return sp, E, tr, iters


@given(st.integers(0, 100_000), st.integers(1, 5))
def test_closure_verdict_matches_brute(seed, n):
    d = gen_random(GenSpec(n=n, seed=seed, widths=(min(2, n), min(3, n)), gates=5))
    sp, E, tr, _ = _verdicts(d)
    sat = check_satisfiable(sp, tr)
    assert sat == (not brute_count(d).is_zero())
    round_trip, flipped = ts_unsatisfiable(build_transition_system(sp, E))
    assert round_trip == (not sat)
    assert flipped or not round_trip


def test_closure_is_transitive():
    d = gen_random(GenSpec(n=3, seed=11, widths=(2, 2), gates=6))
    sp, E, tr, iters = _verdicts(d)
    assert iters >= 1
    # E is contained in its closure, and composing the closure with itself adds nothing
    assert (E & ~tr).is_false
    m = sp.mgr
    mid = sp.rename(tr, {"P": "M"})
    step = sp.rename(tr, {"L": "M"})
    comp = m.and_exists(mid, step, sp.code_ids("M"))
    assert (comp & ~tr).is_false


def test_unsat_example():
    # y1 must equal x and differ from x at the same time
    d = Dqbf(("x",), (("y1", ("x",)), ("y2", ())),
             And(Iff(Var("y1"), Var("x")), Xor(Var("y1"), Var("x")), Or(Var("y2"), Not(Var("y2")))))
    sp, _, tr, _ = _verdicts(d)
    assert not check_satisfiable(sp, tr)


def test_two_col_is_satisfiable():
    sp, _, tr, _ = _verdicts(gen_two_col(4, 0))
    assert check_satisfiable(sp, tr)


def test_rejects_other_arities():
    d = gen_random(GenSpec(n=2, seed=0, widths=(1, 1, 1), gates=3))
    with pytest.raises(NotTwoDqbf):
        LiteralSpace(d)
