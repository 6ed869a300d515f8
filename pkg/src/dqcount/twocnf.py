"""Exact model counting for 2-CNF.

The primary method is sum-product variable elimination along a greedy
min-degree order, which is fast whenever the interaction graph has small
treewidth (the graphs produced by the counting reductions are chain-like).
Before eliminating, variables with identical clause neighbourhoods (twins)
are merged into one weighted group, which turns dense bipartite blocks into
a handful of variables.  If the elimination width still grows past a cap, a
branching counter with unit propagation, component splitting and caching
takes over.

Literals are nonzero ints in DIMACS style (variable v is ``v + 1``).
"""
from __future__ import annotations

import heapq
import itertools
import sys
from collections import defaultdict

import numpy as np

__all__ = ["count_2cnf", "WIDTH_CAP"]

WIDTH_CAP = 22

Clause = frozenset  # of one or two literals


def _propagate(clauses: frozenset, lits) -> tuple[frozenset, set[int]] | None:
    """Assign ``lits`` and everything they force; None on conflict."""
    occ = defaultdict(list)
    for cl in clauses:
        for l in cl:
            occ[l].append(cl)
    assigned: set[int] = set()
    queue = list(lits)
    while queue:
        l = queue.pop()
        if l in assigned:
            continue
        if -l in assigned:
            return None
        assigned.add(l)
        for cl in occ[-l]:
            rest = [x for x in cl if x != -l]
            if not rest:
                return None
            queue.append(rest[0])
    if not assigned:
        return clauses, assigned
    out = []
    for cl in clauses:
        if any(l in assigned for l in cl):
            continue
        out.append(cl)  # untouched: literals of assigned vars were resolved above
    return frozenset(out), {abs(l) for l in assigned}


def _components(clauses: frozenset) -> list[frozenset]:
    parent: dict[int, int] = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for cl in clauses:
        vs = [abs(l) for l in cl]
        a = find(vs[0])
        for v in vs[1:]:
            b = find(v)
            if a != b:
                parent[b] = a
    groups = defaultdict(list)
    for cl in clauses:
        groups[find(abs(next(iter(cl))))].append(cl)
    return [frozenset(g) for g in groups.values()]


def _vars(clauses) -> set[int]:
    return {abs(l) for cl in clauses for l in cl}


class _Counter:
    def __init__(self, tick=None):
        self.cache: dict[frozenset, int] = {}
        self.tick = tick

    def solve(self, clauses: frozenset) -> int:
        """Models over exactly the variables of ``clauses``."""
        units = [next(iter(cl)) for cl in clauses if len(cl) == 1]
        free_factor = 1
        if units:
            res = _propagate(clauses, units)
            if res is None:
                return 0
            rest, fixed = res
            free_factor = 1 << len(_vars(clauses) - fixed - _vars(rest))
            clauses = rest
        total = free_factor
        for comp in _components(clauses):
            total *= self.component(comp)
            if not total:
                return 0
        return total

    def component(self, clauses: frozenset) -> int:
        hit = self.cache.get(clauses)
        if hit is not None:
            return hit
        if self.tick is not None:
            self.tick()
        degree = defaultdict(int)
        for cl in clauses:
            for l in cl:
                degree[abs(l)] += 1
        v = max(degree, key=lambda x: (degree[x], -x))
        allv = set(degree)
        total = 0
        for lit in (v, -v):
            res = _propagate(clauses, [lit])
            if res is None:
                continue
            rest, fixed = res
            total += (1 << len(allv - fixed - _vars(rest))) * self.solve(rest)
        self.cache[clauses] = total
        return total


class _TooWide(Exception):
    pass


def _fill(adj, v) -> int:
    nb = list(adj[v])
    return sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])


def _merge_twins(clauses: frozenset) -> tuple[frozenset, list[tuple[int, int, int]]]:
    """Merge groups of variables that occur in exactly the same clauses.

    Clauses are all binary here.  A group G of m > 1 twins is replaced by
    two fresh variables: t (some member is true) and f (some member is
    false).  Every member literal ``+v`` becomes ``-f`` and ``-v`` becomes
    ``-t``, which is exact because twins see identical constraints, so the
    rest of the formula only depends on whether any member is true and
    whether any member is false.  Returns the new clauses and one
    ``(t, f, m)`` per group; the pair carries weight 1 for (1, 0) and
    (0, 1), 2^m - 2 for (1, 1) and 0 for (0, 0).
    """
    nb: dict[int, set[int]] = defaultdict(set)
    for cl in clauses:
        a, b = tuple(cl)
        nb[a].add(b)
        nb[b].add(a)
    by_sig = defaultdict(list)
    for v in {abs(l) for l in nb}:
        by_sig[(frozenset(nb[v]), frozenset(nb[-v]))].append(v)
    groups = [sorted(g) for g in by_sig.values() if len(g) > 1]
    if not groups:
        return clauses, []
    top = max(abs(l) for l in nb)
    image: dict[int, int] = {}
    weights = []
    for g in groups:
        t, f = top + 1, top + 2
        top += 2
        for v in g:
            image[v], image[-v] = -f, -t
        weights.append((t, f, len(g)))
    out = frozenset(frozenset(image.get(l, l) for l in cl) for cl in clauses)
    return out, weights


def _eliminate(clauses: frozenset, tick=None, cap: int = WIDTH_CAP, weights=()) -> int:
    """Models over the variables of ``clauses`` by variable elimination.

    ``weights`` lists twin groups as produced by :func:`_merge_twins`.
    """
    tables: dict[tuple[int, ...], np.ndarray] = {}
    for cl in clauses:
        vs = tuple(sorted({abs(l) for l in cl}))
        t = tables.get(vs)
        if t is None:
            t = tables[vs] = np.ones((2,) * len(vs), dtype=object)
        # zero the one assignment falsifying the clause
        t[tuple(0 if v in cl else 1 for v in vs)] = 0
    for tv, fv, m in weights:
        w = np.array([[0, 1], [1, (1 << m) - 2]], dtype=object)  # indexed [t][f], t < f
        prev = tables.get((tv, fv))
        tables[(tv, fv)] = w if prev is None else prev * w
    ids = itertools.count()
    factors: dict[int, tuple[tuple[int, ...], np.ndarray]] = {}
    holding: dict[int, set[int]] = defaultdict(set)  # var -> ids of factors on it
    adj: dict[int, set[int]] = defaultdict(set)

    def add(vs, t):
        fid = next(ids)
        factors[fid] = (vs, t)
        for v in vs:
            holding[v].add(fid)
            adj[v].update(u for u in vs if u != v)

    for vs, t in tables.items():
        add(vs, t)
    heap = [(len(nb), v) for v, nb in adj.items()]
    heapq.heapify(heap)
    result = 1
    while heap:
        deg, v = heapq.heappop(heap)
        if v not in adj or deg != len(adj[v]):
            continue  # stale entry
        # among a few variables of minimum degree, take the least fill-in
        tied = [v]
        while heap and heap[0][0] == deg and len(tied) < 16:
            d2, u = heapq.heappop(heap)
            if u in adj and d2 == len(adj[u]) and u not in tied:
                tied.append(u)
        if len(tied) > 1:
            v = min(tied, key=lambda x: (_fill(adj, x), x))
            for u in tied:
                if u != v:
                    heapq.heappush(heap, (deg, u))
        if tick is not None:
            tick()
        if deg > cap:
            raise _TooWide(deg)
        mine = []
        for fid in holding.pop(v):
            vs, t = factors.pop(fid)
            mine.append((vs, t))
            for u in vs:
                if u != v:
                    holding[u].discard(fid)
        scope = sorted({u for vs, _ in mine for u in vs})
        prod = None
        for vs, t in mine:
            present = set(vs)
            shaped = t.reshape([2 if u in present else 1 for u in scope])
            prod = shaped if prod is None else prod * shaped
        prod = np.broadcast_to(prod, (2,) * len(scope))
        out = prod.sum(axis=scope.index(v))
        nb = adj.pop(v)
        for u in nb:
            adj[u].discard(v)
        rest = tuple(u for u in scope if u != v)
        if rest:
            add(rest, np.asarray(out, dtype=object))
        else:
            result *= int(out)
            if not result:
                return 0
        for u in nb:
            heapq.heappush(heap, (len(adj[u]), u))
    return result


def count_2cnf(nvars: int, clauses, tick=None) -> int:
    """Number of assignments to variables 1..nvars satisfying all clauses.

    ``tick`` is called periodically (for time budgets).
    """
    cls = set()
    for cl in clauses:
        lits = frozenset(cl)
        if not lits:
            return 0
        if any(-l in lits for l in lits):
            continue
        if any(abs(l) > nvars or l == 0 for l in lits):
            raise ValueError(f"literal out of range in {sorted(lits)}")
        cls.add(lits)
    cls = frozenset(cls)
    used = _vars(cls)
    units = [next(iter(cl)) for cl in cls if len(cl) == 1]
    if units:
        res = _propagate(cls, units)
        if res is None:
            return 0
        cls = res[0]
    free = nvars - len(_vars(cls)) - (len(res[1]) if units else 0)
    merged, weights = _merge_twins(cls)
    try:
        n = _eliminate(merged, tick, weights=weights)
    except _TooWide:
        # the branching counter recurses about twice per variable
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * len(used) + 1000))
        try:
            n = _Counter(tick).solve(cls)
        finally:
            sys.setrecursionlimit(limit)
    return (1 << free) * n
