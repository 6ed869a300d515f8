from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from dqcount.bigcount import BigCount
from dqcount.brute import brute_count
from dqcount.counter import (
    SymbolicContext, count, count_1dqbf_restricted, count_component, count_symbolic, select_method,
)
from dqcount.formula import Dqbf, Or, Var
from dqcount.generators import GenSpec, gen_ind_set, gen_random, gen_two_col, ind_set_count
from dqcount.limits import Budget, DeadlineExceeded


def _random(seed, n=4, widths=(2, 3), gates=5):
    return gen_random(GenSpec(n=n, seed=seed, widths=widths, gates=gates))


@pytest.mark.parametrize("strategy", ["enumerate", "compile", "auto"])
@given(seed=st.integers(0, 100_000))
def test_strategies_match_brute(strategy, seed):
    d = _random(seed)
    assert count_symbolic(d, strategy=strategy).count == brute_count(d)


@given(st.integers(0, 100_000))
def test_pruning_does_not_change_count(seed):
    d = _random(seed, n=3, widths=(2, 2))
    assert count_symbolic(d, strategy="enumerate", prune=False).count == \
        count_symbolic(d, strategy="enumerate").count


def test_component_product_and_support():
    d = gen_ind_set(4, 1)
    r = count_symbolic(d)
    assert r.count == ind_set_count(4, 1)
    assert len(r.components) == 2
    assert BigCount.one().shl(r.nonsupport_exponent) * \
        (r.components[0].n_c * r.components[1].n_c) == r.count


def test_enumerate_counts_candidates():
    ctx = SymbolicContext(gen_two_col(3, 1))
    stats = [count_component(ctx, c, "enumerate") for c in ctx.components()]
    assert all(s.strategy == "enumerate" and s.candidates_enumerated >= 1 for s in stats)


def test_unsat_reports_zero():
    d = Dqbf(("x",), (("y", ("x",)), ("z", ())), Var("x"))
    r = count_symbolic(d)
    assert not r.satisfiable and r.count.is_zero() and r.components == []


def test_report_json_schema_and_determinism():
    d = gen_two_col(3, 0)
    a, b = count(d, "symbolic").to_json(), count(d, "symbolic").to_json()
    for rep in (a, b):
        rep.pop("elapsed_ms")
    assert a == b
    assert set(a) == {"schema", "count", "satisfiable", "support", "components", "method"}
    assert a["count"]["decimal"] == "2"
    assert set(a["support"]) == {"s1", "s2", "nonsupport_exponent"}
    json.dumps(a)


def test_auto_method_selection():
    small = gen_two_col(3, 0)
    assert select_method(small) == "expansion"
    assert select_method(small, Budget(expansion_cells=4)) == "symbolic"
    three = _random(1, n=2, widths=(1, 1, 1), gates=3)
    assert select_method(three, Budget(expansion_cells=2)) == "reduction"
    # too many clauses for expansion: falls back to the symbolic counter
    assert count(gen_two_col(8, 0), budget=Budget(expansion_clauses=16)).method == "symbolic"


@pytest.mark.parametrize("method", ["expansion", "brute", "reduction", "symbolic"])
def test_every_method_agrees(method):
    d = gen_ind_set(3, 1)
    assert count(d, method).count == ind_set_count(3, 1)


def test_parallel_components_match_serial():
    d = gen_ind_set(4, 2)
    assert count_symbolic(d, jobs=2).count == count_symbolic(d).count == ind_set_count(4, 2)


def test_deadline():
    with pytest.raises(DeadlineExceeded):
        count_symbolic(gen_ind_set(9, 3), Budget().with_timeout(-1))


def test_restricted_1dqbf_count():
    # y must be true wherever x1 holds; free elsewhere
    d1 = Dqbf(("x1", "x2"), (("y", ("x1", "x2")),), Or(Var("y"), ~Var("x1")))
    assert count_1dqbf_restricted(d1).to_int() == 4
    assert count_1dqbf_restricted(d1, [1, 3]).to_int() == 1
    assert count_1dqbf_restricted(d1, [0]).to_int() == 2
    with pytest.raises(ValueError):
        count_1dqbf_restricted(gen_two_col(2, 0))
