"""Exact model counting for 2-DQBF.

The count factors as (product of N_C over weakly connected components C of
the implication graph) times 2^m, where m counts the cells no falsifier
touches.  N_C is computed either by enumerating Skolem candidates for one
existential on the component and counting the completions of the other
("enumerate"), or by collapsing the strongly connected classes of the
component and counting the models of the quotient 2-CNF with a caching search
("compile").
"""
from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bdd import DdManager, Function
from .bigcount import BigCount, product
from .formula import Dqbf
from .limits import Budget, BudgetExceeded, DeadlineExceeded, DEFAULT_BUDGET
from .reachability import (
    LiteralSpace, check_satisfiable, edge_relation, transitive_closure, weak_adjacency,
)
from .twocnf import count_2cnf

__all__ = [
    "SupportSets", "Component", "ComponentStats", "CountReport", "SymbolicContext",
    "support_sets", "extract_component", "iter_components", "count_1dqbf_restricted",
    "count_component", "count", "count_symbolic", "select_method", "CounterError",
    "STRATEGIES", "METHODS",
]

STRATEGIES = ("auto", "enumerate", "compile")
METHODS = ("auto", "symbolic", "expansion", "brute", "reduction")
CLASS_LIMIT = 4096


class CounterError(AssertionError):
    """An internal consistency check failed."""


class _TooManyClasses(Exception):
    pass


@dataclass
class SupportSets:
    S1: Function
    S2: Function
    s1: int
    s2: int
    nonsupport_exponent: int


@dataclass
class Component:
    C: Function
    C1: Function
    C2: Function
    cells1: int
    cells2: int
    seed: tuple[int, int, bool] | None = None


@dataclass
class ComponentStats:
    cells1: int
    cells2: int
    candidates_enumerated: int
    n_c: BigCount
    strategy: str

    def to_json(self) -> dict:
        return {
            "cells1": self.cells1,
            "cells2": self.cells2,
            "candidates_enumerated": self.candidates_enumerated,
            "n_c_sparse": list(self.n_c.exponents),
        }


@dataclass
class CountReport:
    count: BigCount
    satisfiable: bool
    method: str
    s1: int | None = None
    s2: int | None = None
    nonsupport_exponent: int | None = None
    components: list[ComponentStats] = field(default_factory=list)
    closure_iterations: int | None = None
    elapsed_ms: float = 0.0
    terms: tuple[BigCount, ...] = ()

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "count": self.count.to_json(),
            "satisfiable": self.satisfiable,
            "support": None,
            "components": [c.to_json() for c in self.components],
            "method": self.method,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.s1 is not None:
            out["support"] = {
                "s1": self.s1, "s2": self.s2, "nonsupport_exponent": self.nonsupport_exponent,
            }
        if self.terms:
            out["terms"] = [t.to_json() for t in self.terms]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# support sets and components


def support_sets(space: LiteralSpace) -> SupportSets:
    m = space.mgr
    S = [space.support_cells(i) for i in (0, 1)]
    sizes = [m.count_int(S[i], space.cell_ids("L", i)) for i in (0, 1)]
    w1, w2 = space.widths
    exp = ((1 << w1) - sizes[0]) + ((1 << w2) - sizes[1])
    return SupportSets(S[0], S[1], sizes[0], sizes[1], exp)


def _project_side(space: LiteralSpace, lits: Function, i: int) -> Function:
    A = space["L"]
    pads = list(A.c[space.widths[i]:])
    return space.mgr.exists(lits & space.t_is("L", i), [A.t, A.b] + pads)


def extract_component(space: LiteralSpace, G: Function, seed: tuple[int, int, bool],
                      support: Function | None = None, budget: Budget | None = None) -> Component:
    """Least G-closed set of literals containing the seed and its negation."""
    m = space.mgr
    i, c, b = seed
    start = space.literal("L", i, c, b) | space.literal("L", i, c, not b)
    if support is not None and (start & support).is_false:
        raise ValueError(f"seed {space.describe(i, c, b)} is not a support literal")
    C = frontier = start
    while True:
        nxt = space.rename(m.and_exists(frontier, G, space.code_ids("L")), {"P": "L"})
        new = nxt & ~C
        if new.is_false:
            break
        C = C | new
        frontier = new
        if budget is not None:
            budget.check_nodes(m)
    C1, C2 = _project_side(space, C, 0), _project_side(space, C, 1)
    n1 = m.count_int(C1, space.cell_ids("L", 0))
    n2 = m.count_int(C2, space.cell_ids("L", 1))
    return Component(C, C1, C2, n1, n2, seed)


def _pick_seed(space: LiteralSpace, R: Function) -> tuple[int, int, bool]:
    values = space.mgr.pick_minterm(R, space.code_ids("L"))
    return space.decode(values)


def iter_components(space: LiteralSpace, G: Function, support: Function, budget: Budget | None = None):
    """Components in a deterministic order; R shrinks by each found component."""
    R = support
    while not R.is_false:
        comp = extract_component(space, G, _pick_seed(space, R), budget=budget)
        yield comp
        R = R & ~comp.C


# 1-DQBF slices


def _restricted_count(mgr: DdManager, forced: Function, S: Function, cell_ids) -> BigCount:
    s = mgr.count_int(S, cell_ids)
    f = mgr.count_int(forced & S, cell_ids)
    return BigCount.from_pow2(s - f)


def count_1dqbf_restricted(d1: Dqbf, S=None) -> BigCount:
    """Skolem functions of a satisfiable 1-DQBF that differ on the cell set S.

    ``S`` is an iterable of cell indices (little-endian over the dependency
    set); ``None`` means every cell.  Equals 2^(|S| - |forced cells in S|),
    where a cell is forced when the negated matrix is satisfiable there.
    """
    if d1.k != 1:
        raise ValueError("expected a 1-DQBF")
    m = DdManager()
    z = d1.deps(0)
    ids = m.declare_many(z)
    others = [m.declare(v) for v in d1.variables if v not in z]
    vm = {v: m.var(v) for v in d1.variables}
    neg = ~m.build(d1.matrix, vm)
    forced = m.exists(neg, others)
    if S is None:
        Sf = m.wrap(1)
    else:
        Sf = m.disj(m.minterm({v: bool((c >> j) & 1) for j, v in enumerate(ids)}) for c in S)
    return _restricted_count(m, forced, Sf, ids)


# shared symbolic state


class SymbolicContext:
    """Everything the per-component counters share for one instance."""

    def __init__(self, d: Dqbf, budget: Budget = DEFAULT_BUDGET, mgr: DdManager | None = None):
        self.d = d
        self.budget = budget
        self.space = LiteralSpace(d, mgr)
        self.mgr = self.space.mgr
        self.support = support_sets(self.space)
        sp = self.space
        self.support_lits = sp.support_literals(self.support.S1, self.support.S2)
        self.E = edge_relation(sp)
        budget.check_nodes(self.mgr)
        self.tr, self.iterations = transitive_closure(sp, self.E, budget)
        self.satisfiable = check_satisfiable(sp, self.tr)
        self._G = None
        self._vectors: list[list[int]] = []

    @property
    def G(self) -> Function:
        if self._G is None:
            self._G = weak_adjacency(self.space, self.E, self.support_lits)
        return self._G

    def components(self):
        return iter_components(self.space, self.G, self.support_lits, self.budget)

    def vector(self, i: int) -> list[int]:
        """Fresh cell vector v_i, declared on first use below all other variables."""
        while len(self._vectors) <= i:
            j = len(self._vectors)
            w = max(self.space.widths)
            self._vectors.append([self.mgr.declare(f"v{j}.{b}") for b in range(w)])
        return self._vectors[i]

    def closure(self, rel: Function) -> Function:
        return transitive_closure(self.space, rel, self.budget)[0]


# enumeration of candidates


class _Enumerator:
    """Skolem-candidate enumeration for existential ``side`` on one component."""

    def __init__(self, ctx: SymbolicContext, comp: Component, side: int, prune: bool = True):
        self.ctx = ctx
        self.sp = sp = ctx.space
        self.m = ctx.mgr
        self.side = side
        self.other = 1 - side
        self.w = sp.widths[side]
        self.Cs = comp.C1 if side == 0 else comp.C2
        self.Co = comp.C2 if side == 0 else comp.C1
        self.prune = prune
        inC = comp.C
        self.tr = ctx.tr & inC
        self.E = ctx.E & inC
        self.F: list[Function] = []
        self.candidates = 0

    # literal codes

    def _code_map(self, cp: str, cell: list, sign: Function) -> dict[int, Function]:
        sp, m = self.sp, self.m
        A = sp[cp]
        out = {A.t: m.wrap(1) if self.side else m.wrap(0), A.b: sign}
        for j, v in enumerate(A.c):
            out[v] = cell[j] if j < self.w else m.wrap(0)
        return out

    def _on(self, f: Function, vec: list[int]) -> Function:
        """f (over L cell bits) evaluated at the vector ``vec``."""
        sp = self.sp
        return self.m.rename(f, {sp["L"].c[j]: vec[j] for j in range(self.w)})

    def _conflict(self, i: int, j: int) -> Function:
        m = self.m
        vi, vj = self.ctx.vector(i), self.ctx.vector(j)
        fi, fj = self._on(self.F[i], vi), self._on(self.F[j], vj)
        bits_i = [m.var(v) for v in vi[: self.w]]
        bits_j = [m.var(v) for v in vj[: self.w]]
        mapping = self._code_map("L", bits_i, ~fi)
        mapping.update(self._code_map("P", bits_j, fj))
        c = m.compose(self.tr, mapping)
        if i != j:
            same = m.conj(a.iff(b) for a, b in zip(bits_i, bits_j))
            c = c | (same & (fi ^ fj))
        return c

    def _forcing(self, M: dict[int, bool]) -> Function:
        sp, m = self.sp, self.m
        edges = m.wrap(0)
        for i, f in enumerate(self.F):
            vec = self.ctx.vector(i)
            cell = sum(1 << j for j in range(self.w) if M[vec[j]])
            val = m.evaluate(f, {sp["L"].c[j]: bool((cell >> j) & 1) for j in range(self.w)})
            edges = edges | (sp.literal("L", self.side, cell, val) & sp.literal("P", self.side, cell, not val))
        return edges

    def _forced(self, tr: Function, value: bool) -> Function:
        """Cells of this side whose literal is forced to ``value`` under ``tr``."""
        sp, m = self.sp, self.m
        A = sp["L"]
        start = sp.t_is("L", self.side) & (~sp.bit(A.b) if value else sp.bit(A.b))
        back = m.and_exists(tr, sp.eq("P", "L", sign=False), sp.code_ids("P"))
        return m.exists(back & start, [A.t, A.b] + list(A.c[self.w:]))

    def _force_false(self, tr: Function, cube: dict[int, bool]) -> Function:
        """Force the cells of ``cube`` to false, halving the cube on conflict."""
        sp, m = self.sp, self.m
        K = m.minterm(cube) & self.Cs
        lits = K & sp.t_is("L", self.side) & sp.bit(sp["L"].b) & sp.valid("L")
        edges = lits & sp.eq("P", "L", sign=False)
        tr2 = self.ctx.closure(tr | edges)
        if check_satisfiable(sp, tr2):
            return tr2
        free = [v for v in sp.cell_ids("L", self.side) if v not in cube]
        if not free:
            raise CounterError("an unforced cell could not be forced")
        lo = dict(cube)
        lo[free[0]] = False
        if (m.minterm(lo) & self.Cs).is_false:
            lo[free[0]] = True
        return self._force_false(tr, lo)

    def _extract(self, tr: Function) -> Function:
        m = self.m
        while True:
            ft = self._forced(tr, True)
            ff = self._forced(tr, False)
            U = self.Cs & ~ft & ~ff
            if U.is_false:
                return ft & self.Cs
            tr = self._force_false(tr, m.pick_cube(U))
            self.ctx.budget.check_nodes(m)

    def _completions(self, f: Function) -> BigCount:
        """Completions of the other existential on the component given f."""
        sp, m = self.sp, self.m
        d = sp.d
        s, o = self.side, self.other
        zo, zs = d.deps(o), d.deps(s)
        A = sp["L"]
        leaf = {x: sp.bit(A.c[q]) for q, x in enumerate(zo)}
        sub = {}
        for p, x in enumerate(zs):
            sub[A.c[p]] = leaf.get(x, sp.bit(sp.free[x]))
        leaf[d.names[s]] = m.compose(f, sub)
        neg = sp.neg_matrix(leaf)
        yo = sp.free[d.names[o]]
        rest = [v for v in sp.free_ids() if v != yo]
        both = m.exists(m.cofactor(neg, yo, False) & m.cofactor(neg, yo, True), rest)
        if not (both & self.Co).is_false:
            raise CounterError("extracted candidate has no completion")
        forced = m.exists(neg, sp.free_ids())
        return _restricted_count(m, forced, self.Co, sp.cell_ids("L", o))

    def run(self) -> BigCount:
        m = self.m
        total = BigCount.zero()
        A = m.wrap(1)
        while not A.is_false:
            self.ctx.budget.check_nodes(m)
            vids = [v for i in range(len(self.F)) for v in self.ctx.vector(i)[: self.w]]
            M = m.pick_minterm(A, vids)
            tr = self.tr
            if self.F:
                tr = self.ctx.closure(tr | self._forcing(M))
                if not check_satisfiable(self.sp, tr):
                    A = A & ~m.minterm(M)
                    continue
            f = self._extract(tr)
            total = total + self._completions(f)
            self.candidates += 1
            t = len(self.F)
            self.F.append(f)
            A = A & self._on(self.Cs, self.ctx.vector(t))
            if self.prune:
                for i in range(t + 1):
                    A = A & ~self._conflict(i, t)
                    if i != t:
                        A = A & ~self._conflict(t, i)
        return total


# quotient by strongly connected classes


def _less_than(space: LiteralSpace, a: str, b: str) -> Function:
    """Key of copy a < key of copy b; key = (t, c) with t most significant."""
    A, B = space[a], space[b]
    lt = space.mgr.wrap(0)
    for x, y in list(zip(A.c, B.c)) + [(A.t, B.t)]:
        bx, by = space.bit(x), space.bit(y)
        lt = (~bx & by) | (bx.iff(by) & lt)
    return lt


def _iter_minterms(m: DdManager, f: Function, ids: list[int]):
    """All assignments to ``ids`` (a superset of f's support) satisfying f."""
    k = m.kernel
    order = sorted(ids)
    pos = {v: i for i, v in enumerate(order)}

    def rec(node: int, i: int, acc: dict):
        if node == 0:
            return
        if i == len(order):
            yield dict(acc)
            return
        v = order[i]
        nv = k.var_of(node) if node > 1 else None
        if nv is not None and pos.get(nv, -1) < i:
            raise ValueError("support escapes the enumeration variables")
        for val in (False, True):
            acc[v] = val
            child = node
            if nv == v:
                child = k.high(node) if val else k.low(node)
            yield from rec(child, i + 1, acc)
        del acc[v]

    yield from rec(f.node, 0, {})


def _iter_cubes(m: DdManager, f: Function):
    k = m.kernel
    stack = [(f.node, {})]
    while stack:
        node, cube = stack.pop()
        if node == 0:
            continue
        if node == 1:
            yield cube
            continue
        v = k.var_of(node)
        stack.append((k.high(node), {**cube, v: True}))
        stack.append((k.low(node), {**cube, v: False}))


def _count_compiled(ctx: SymbolicContext, comp: Component, limit: int) -> BigCount:
    sp, m = ctx.space, ctx.mgr
    inL = comp.C
    tr = ctx.tr & inL
    scc = (tr & sp.rename(tr, {"L": "P", "P": "L"})) | (sp.eq("L", "P") & inL)
    below = m.and_exists(sp.rename(scc, {"P": "M"}), _less_than(sp, "M", "P"), sp.code_ids("M"))
    rep = scc & ~below  # rep(L, P): P is the least member of L's class
    reps = m.exists(rep, sp.code_ids("L"))
    P = sp["P"]
    key_ids = [P.t] + list(P.c)
    keys = m.exists(reps & sp.bit(P.b), [P.b])
    nclasses = m.count_int(keys, key_ids)
    if nclasses > limit:
        raise _TooManyClasses(nclasses)
    qvar = {}
    for mt in _iter_minterms(m, keys, key_ids):
        qvar[tuple(mt[v] for v in key_ids)] = len(qvar) + 1
    rep_src = sp.rename(rep, {"P": "L0"})
    rep_dst = sp.rename(rep, {"L": "P", "P": "P0"})
    step = m.and_exists(rep_src, ctx.E & inL, sp.code_ids("L"))
    Q = m.and_exists(step, rep_dst, sp.code_ids("P"))
    L0, P0 = sp["L0"], sp["P0"]

    def lits(cube: dict[int, bool], X) -> list[int]:
        ids = X.ids
        free = [v for v in ids if v not in cube]
        out = []
        for vals in itertools.product((False, True), repeat=len(free)):
            mt = {**cube, **dict(zip(free, vals))}
            x = qvar[(mt[X.t],) + tuple(mt[v] for v in X.c)]
            out.append(x if mt[X.b] else -x)
        return out

    # each edge a -> b between class representatives is the clause (~a | b)
    clauses = set()
    for cube in _iter_cubes(m, Q):
        ctx.budget.check_time()
        for a in lits(cube, L0):
            for b in lits(cube, P0):
                clauses.add((-a, b))
    return BigCount.from_int(count_2cnf(len(qvar), clauses, tick=ctx.budget.check_time))


def count_component(ctx: SymbolicContext, comp: Component, strategy: str = "auto",
                    prune: bool = True, class_limit: int = CLASS_LIMIT) -> ComponentStats:
    """N_C for one component of a satisfiable instance."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy in ("auto", "compile"):
        try:
            n = _count_compiled(ctx, comp, class_limit if strategy == "auto" else 1 << 62)
            return ComponentStats(comp.cells1, comp.cells2, 0, n, "compile")
        except _TooManyClasses:
            pass
    side = 1 if comp.cells2 < comp.cells1 else 0
    en = _Enumerator(ctx, comp, side, prune)
    n = en.run()
    return ComponentStats(comp.cells1, comp.cells2, en.candidates, n, "enumerate")


# top level


def _component_worker(args):
    d, budget, seed, strategy, prune, class_limit = args
    ctx = SymbolicContext(d, budget)
    comp = extract_component(ctx.space, ctx.G, seed, budget=budget)
    return count_component(ctx, comp, strategy, prune, class_limit)


def count_symbolic(d: Dqbf, budget: Budget = DEFAULT_BUDGET, strategy: str = "auto",
                   prune: bool = True, jobs: int = 1, class_limit: int = CLASS_LIMIT,
                   ctx: SymbolicContext | None = None) -> CountReport:
    t0 = time.perf_counter()
    ctx = ctx or SymbolicContext(d, budget)
    sup = ctx.support
    report = CountReport(
        BigCount.zero(), ctx.satisfiable, "symbolic", sup.s1, sup.s2,
        sup.nonsupport_exponent, [], ctx.iterations,
    )
    if ctx.satisfiable:
        comps = list(ctx.components())
        if jobs > 1 and len(comps) > 1:
            work = [(d, budget, c.seed, strategy, prune, class_limit) for c in comps]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                stats = list(pool.map(_component_worker, work))
        else:
            stats = [count_component(ctx, c, strategy, prune, class_limit) for c in comps]
        report.components = stats
        report.count = product(s.n_c for s in stats).shl(sup.nonsupport_exponent)
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report


def select_method(d: Dqbf, budget: Budget = DEFAULT_BUDGET) -> str:
    cells = sum(1 << len(z) for _, z in d.existentials)
    if cells <= budget.expansion_cells:
        return "expansion"
    return "symbolic" if d.k == 2 else "reduction"


def count(d: Dqbf, method: str = "auto", budget: Budget = DEFAULT_BUDGET, **kw) -> CountReport:
    """Count the models of a DQBF with the chosen method.

    ``symbolic`` needs exactly two existentials; ``reduction`` takes any
    number and goes through a pair of 2-DQBFs.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = select_method(d, budget)
        if method == "expansion":
            try:
                return count(d, "expansion", budget)
            except DeadlineExceeded:
                raise
            except BudgetExceeded:
                # few cells but too many clauses: fall through to the symbolic side
                method = "symbolic" if d.k == 2 else "reduction"
    if method == "symbolic":
        return count_symbolic(d, budget, **kw)
    if method == "reduction":
        from .reductions.pipeline import count_general
        return count_general(d, budget, **kw)
    t0 = time.perf_counter()
    if method == "expansion":
        from .expansion import count_via_expansion
        n = count_via_expansion(d, budget)
    else:
        from .brute import brute_count
        n = brute_count(d, budget)
    return CountReport(n, not n.is_zero(), method, elapsed_ms=(time.perf_counter() - t0) * 1000)
