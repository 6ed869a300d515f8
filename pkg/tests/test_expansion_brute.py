from __future__ import annotations

import itertools
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from dqcount import _search_py
from dqcount.bigcount import BigCount
from dqcount.brute import brute_count, brute_count_naive, falsifier_masks
from dqcount.expansion import count_via_expansion, expand, render_cell
from dqcount.formula import evaluate
from dqcount.generators import GenSpec, gen_random, gen_two_col
from dqcount.limits import Budget, BudgetExceeded

try:
    from dqcount import _search as _search_c
except ImportError:  # pragma: no cover
    _search_c = None


def _random(seed, n=3, widths=(2, 2), k=None, gates=4):
    if k is not None:
        widths = tuple([min(1, n)] * k)
    return gen_random(GenSpec(n=n, seed=seed, widths=widths, gates=gates))


@given(st.integers(0, 100_000), st.integers(1, 3))
def test_brute_matches_naive(seed, n):
    d = _random(seed, n=n, widths=(min(2, n), 1))
    assert brute_count(d).to_int() == brute_count_naive(d)


@given(st.integers(0, 100_000))
def test_brute_matches_naive_three_existentials(seed):
    d = gen_random(GenSpec(n=2, seed=seed, widths=(1, 1, 2), gates=4))
    assert brute_count(d).to_int() == brute_count_naive(d)


@given(st.integers(0, 100_000))
def test_expansion_matches_brute(seed):
    d = _random(seed, n=4, widths=(3, 2), gates=5)
    assert count_via_expansion(d) == brute_count(d)


@given(st.integers(0, 100_000))
def test_clauses_are_exactly_the_projected_falsifiers(seed):
    d = _random(seed, n=3, widths=(2, 2), gates=4)
    cnf, table = expand(d)
    expected = set()
    for bits in itertools.product((False, True), repeat=len(d.variables)):
        env = dict(zip(d.variables, bits))
        if evaluate(d.matrix, env):
            continue
        clause = []
        for i, y in enumerate(d.names):
            c = sum(1 << j for j, x in enumerate(d.deps(i)) if env[x])
            v = table.var(i, c)
            clause.append(-v if env[y] else v)
        expected.add(tuple(clause))
    assert set(cnf.clauses) == expected


def test_dimacs_map_lines():
    d = gen_two_col(2, 0)
    cnf, table = expand(d)
    text = cnf.to_dimacs(table)
    lines = text.splitlines()
    maps = [ln for ln in lines if ln.startswith("c map ")]
    assert len(maps) == len(table) == cnf.num_vars
    i, cell, var = maps[0].split()[2:]
    assert (int(i), int(var)) == (1, 1) and cell == render_cell(table.cell(1)[1], 2)
    header = next(ln for ln in lines if ln.startswith("p cnf"))
    assert header == f"p cnf {cnf.num_vars} {len(cnf.clauses)}"
    assert all(ln.endswith(" 0") for ln in lines[len(maps) + 1:])


def test_empty_dependency_cell_renders_as_dash():
    assert render_cell(0, 0) == "-"
    assert render_cell(0b01, 2) == "10"


def test_expansion_budget():
    with pytest.raises(BudgetExceeded):
        expand(gen_two_col(6, 0), Budget(expansion_clauses=1 << 8))
    with pytest.raises(BudgetExceeded):
        expand(gen_two_col(6, 0), Budget(expansion_cells=16))


def test_brute_budget():
    with pytest.raises(BudgetExceeded):
        brute_count(gen_two_col(5, 0), max_cells=8)


@given(st.integers(0, 100_000))
def test_falsifier_masks_match_evaluation(seed):
    d = _random(seed, n=4, widths=(2, 3), gates=5)
    masks = falsifier_masks(d)
    assert masks.shape == (1 << d.n,)
    for a in range(1 << d.n):
        for b in range(1 << d.k):
            env = {x: bool(a >> j & 1) for j, x in enumerate(d.universals)}
            env.update({y: bool(b >> i & 1) for i, y in enumerate(d.names)})
            assert bool(int(masks[a]) >> b & 1) == (not evaluate(d.matrix, env))


@pytest.mark.skipif(_search_c is None, reason="compiled kernel not built")
@given(st.integers(0, 100_000))
def test_compiled_and_pure_search_agree(seed):
    d = _random(seed, n=3, widths=(2, 2), gates=5)
    assert brute_count(d) == brute_count(d, pure=True)


def test_pure_fallback_selected_by_environment():
    code = ("import dqcount.brute as b, dqcount.bdd as d;"
            "print(b._search.__name__, d.KERNEL_COMPILED)")
    out = subprocess.run([sys.executable, "-c", code], env={"DQCOUNT_PURE": "1", "PATH": ""},
                         capture_output=True, text=True, check=True).stdout.split()
    assert out == ["dqcount._search_py", "False"]


def test_search_node_limit():
    d = gen_two_col(3, 0)
    with pytest.raises((BudgetExceeded, _search_py.SearchLimit)):
        brute_count(d, max_nodes=3, pure=True)
