from __future__ import annotations

import itertools
import random

from hypothesis import given, strategies as st

from dqcount.twocnf import _Counter, _eliminate, count_2cnf


def _brute(nvars, clauses):
    total = 0
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in clauses):
            total += 1
    return total


clause = st.lists(st.integers(1, 9).flatmap(lambda v: st.sampled_from((v, -v))), min_size=1, max_size=2)


@given(st.lists(clause, max_size=18))
def test_matches_enumeration(clauses):
    assert count_2cnf(9, clauses) == _brute(9, clauses)


def test_units_conflicts_and_tautologies():
    assert count_2cnf(3, [(1,), (-1,)]) == 0
    assert count_2cnf(3, [(1, -1)]) == 8
    assert count_2cnf(2, [(1,), (-1, 2)]) == 1
    assert count_2cnf(0, []) == 1


def test_elimination_and_search_agree():
    rng = random.Random(5)
    for _ in range(30):
        cls = set()
        for _ in range(40):
            a, b = (rng.choice((1, -1)) * rng.randint(1, 24) for _ in range(2))
            if a != -b:
                cls.add(frozenset((a, b)))
        cls = frozenset(cls)
        assert _eliminate(cls, cap=64) == _Counter().solve(cls)


def test_search_fallback_past_width_cap():
    # a complete graph of implications is wider than any cap
    n = 30
    cls = frozenset(frozenset((-i, j)) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)
    assert count_2cnf(n, cls) == 2


def test_large_chain_is_fast():
    n = 3000
    clauses = [(-i, i + 1) for i in range(1, n)]
    assert count_2cnf(n, clauses) == n + 1


def test_complete_bipartite_blocks_merge():
    # independent sets of K_{m,m}: 2 * 2^m - 1
    m = 300
    clauses = [(-a, -(m + b)) for a in range(1, m + 1) for b in range(1, m + 1)]
    assert count_2cnf(2 * m, clauses) == 2 * (1 << m) - 1


@given(st.integers(0, 10_000))
def test_twin_rich_formulas_match_enumeration(seed):
    # blow up a random 2-CNF on 4 variables by cloning variables into twins
    rng = random.Random(seed)
    base = [tuple(rng.choice((1, -1)) * v for v in rng.sample(range(1, 5), 2)) for _ in range(rng.randint(1, 6))]
    copies = {v: [v] + [4 + 3 * (v - 1) + j for j in range(rng.randint(0, 2))] for v in range(1, 5)}
    clauses = [(sa * a2, sb * b2)
               for a, b in base
               for sa, sb in [((1 if a > 0 else -1), (1 if b > 0 else -1))]
               for a2 in copies[abs(a)] for b2 in copies[abs(b)]]
    n = max(abs(l) for cl in clauses for l in cl)
    assert count_2cnf(n, clauses) == _brute(n, clauses)
