"""The expansion of a DQBF into a CNF over one variable per (existential, cell).

A falsifying assignment (a, b) of the matrix yields the clause
``OR_i X^{not b_i}_{i, a|z_i}``: at least one existential must disagree with
b on its own cell.  Satisfying assignments of the clause set correspond one to
one with tuples of Skolem functions restricted to the cells that occur.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bdd import DdManager, Function
from .bigcount import BigCount
from .formula import Dqbf
from .limits import Budget, BudgetExceeded, DEFAULT_BUDGET

__all__ = [
    "instance_order", "falsifying_bdd", "ExpansionVarTable", "CnfFormula",
    "expand", "count_via_expansion", "render_cell",
]


def render_cell(c: int, width: int) -> str:
    """Little-endian bit string of cell ``c``: character j is dependency j."""
    if width == 0:
        return "-"
    return "".join("1" if (c >> j) & 1 else "0" for j in range(width))


def instance_order(d: Dqbf) -> list[str]:
    """Variable order for diagrams over the instance variables.

    Universals are taken round-robin over the dependency lists, so that
    position j of every dependency set sits together (keeps equalities such
    as x = x' linear); leftovers follow, then the existentials.
    """
    order: list[str] = []
    seen: set[str] = set()
    width = max((len(z) for _, z in d.existentials), default=0)
    for j in range(width):
        for _, z in d.existentials:
            if j < len(z) and z[j] not in seen:
                seen.add(z[j])
                order.append(z[j])
    order.extend(x for x in d.universals if x not in seen)
    order.extend(d.names)
    return order


def falsifying_bdd(d: Dqbf, m: DdManager) -> Function:
    """Diagram of the negated matrix over the instance variables.

    Instance variables missing from ``m`` are declared under their own names.
    """
    for name in instance_order(d):
        if name not in m._ids:
            m.declare(name)
    vm = {name: m.id_of(name) for name in d.variables}
    return ~m.build(d.matrix, vm)


@dataclass
class ExpansionVarTable:
    """Bijection between occurring cells (i, c) and DIMACS variables 1..V.

    Ordered by existential index, then by cell value as an unsigned integer.
    """

    widths: tuple[int, ...]
    cells: list[tuple[int, int]] = field(default_factory=list)
    index: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def from_cells(cls, widths, occurring) -> ExpansionVarTable:
        t = cls(tuple(widths))
        for cell in sorted(occurring):
            t.index[cell] = len(t.cells) + 1
            t.cells.append(cell)
        return t

    def __len__(self) -> int:
        return len(self.cells)

    def var(self, i: int, c: int) -> int:
        return self.index[(i, c)]

    def cell(self, v: int) -> tuple[int, int]:
        return self.cells[v - 1]

    def map_lines(self) -> list[str]:
        return [
            f"c map {i + 1} {render_cell(c, self.widths[i])} {v}"
            for v, (i, c) in enumerate(self.cells, 1)
        ]


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[tuple[int, ...]]

    def to_dimacs(self, table: ExpansionVarTable | None = None) -> str:
        out = table.map_lines() if table is not None else []
        out.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        out.extend(" ".join(map(str, cl)) + " 0" for cl in self.clauses)
        return "\n".join(out) + "\n"


def _projected_falsifiers(d: Dqbf, budget: Budget):
    """Diagram of the falsifiers projected to the dependency universals and
    the existentials, with the manager and the id lists it lives over."""
    m = DdManager()
    neg = falsifying_bdd(d, m)
    dep_vars = sorted({x for _, z in d.existentials for x in z}, key=m.id_of)
    keep = {m.id_of(x) for x in dep_vars} | {m.id_of(y) for y in d.names}
    drop = [m.id_of(x) for x in d.universals if m.id_of(x) not in keep]
    proj = m.exists(neg, drop)
    budget.check_nodes(m)
    return m, proj, sorted(keep)


def expand(d: Dqbf, budget: Budget = DEFAULT_BUDGET) -> tuple[CnfFormula, ExpansionVarTable]:
    """Materialize the expansion: one clause per distinct projected falsifier."""
    widths = tuple(len(z) for _, z in d.existentials)
    total_cells = sum(1 << w for w in widths)
    if total_cells > budget.expansion_cells:
        raise BudgetExceeded(
            f"expansion needs {total_cells} cells, budget is {budget.expansion_cells}"
        )
    m, proj, keep = _projected_falsifiers(d, budget)
    n_clauses = m.count_int(proj, keep)
    if n_clauses > budget.expansion_clauses:
        raise BudgetExceeded(
            f"expansion has {n_clauses} clauses, budget is {budget.expansion_clauses}"
        )
    # where each kept universal lands: (existential, bit position) pairs
    uses: dict[int, list[tuple[int, int]]] = {v: [] for v in keep}
    for i, (_, z) in enumerate(d.existentials):
        for j, x in enumerate(z):
            uses[m.id_of(x)].append((i, j))
    yid = [m.id_of(y) for y in d.names]

    raw: list[tuple[tuple[int, int, int], ...]] = []
    seen: set = set()
    for cube in _paths(m, proj):
        free = [v for v in keep if v not in cube]
        for bits in itertools.product((False, True), repeat=len(free)):
            a = dict(cube)
            a.update(zip(free, bits))
            cells = [0] * d.k
            for v, val in a.items():
                if val:
                    for i, j in uses.get(v, ()):
                        cells[i] |= 1 << j
            # literal X_{i,c} is positive exactly when y_i is false in the falsifier
            clause = tuple((i, cells[i], not a[yid[i]]) for i in range(d.k))
            if clause not in seen:
                seen.add(clause)
                raw.append(clause)
        budget.check_time()
    table = ExpansionVarTable.from_cells(widths, {(i, c) for cl in raw for i, c, _ in cl})
    clauses = sorted(
        tuple(table.var(i, c) if pos else -table.var(i, c) for i, c, pos in cl) for cl in raw
    )
    clauses.sort(key=lambda cl: [(abs(l), l < 0) for l in cl])
    return CnfFormula(len(table), clauses), table


def _paths(m: DdManager, f: Function):
    """All root-to-true paths of ``f`` as partial assignments (disjoint cubes)."""
    k = m.kernel
    if f.node == 0:
        return
    stack: list[tuple[int, dict[int, bool]]] = [(f.node, {})]
    while stack:
        n, cube = stack.pop()
        if n == 1:
            yield cube
            continue
        if n == 0:
            continue
        v = k.var_of(n)
        hi = dict(cube)
        hi[v] = True
        stack.append((k.high(n), hi))
        cube[v] = False
        stack.append((k.low(n), cube))


def count_cnf(cnf: CnfFormula, table: ExpansionVarTable, budget: Budget = DEFAULT_BUDGET) -> int:
    """Models of the clause set over its own variables, via a diagram."""
    if cnf.num_vars > budget.expansion_vars:
        raise BudgetExceeded(
            f"expansion has {cnf.num_vars} variables, counting budget is {budget.expansion_vars}"
        )
    m = DdManager()
    # interleave existentials cell by cell so cross-function constraints stay local
    order = sorted(range(1, cnf.num_vars + 1), key=lambda v: (table.cell(v)[1], table.cell(v)[0]))
    ids = {}
    for v in order:
        i, c = table.cell(v)
        ids[v] = m.declare(f"X{i + 1}_{render_cell(c, table.widths[i])}")
    lits = {}
    for v, vid in ids.items():
        x = m.var(vid)
        lits[v] = x
        lits[-v] = ~x
    clause_fns = [m.disj(lits[l] for l in cl) for cl in cnf.clauses]
    # conjoin bottom-up in the order, which keeps intermediate diagrams small
    clause_fns.sort(key=lambda f: -m.kernel.var_of(f.node) if f.node > 1 else 0)
    acc = m.true
    for g in clause_fns:
        acc = acc & g
        if acc.is_false:
            return 0
        budget.check_nodes(m)
    return m.count_int(acc, ids.values())


def count_via_expansion(d: Dqbf, budget: Budget = DEFAULT_BUDGET) -> BigCount:
    """#d: models of the expansion times 2 to the number of absent cells."""
    cnf, table = expand(d, budget)
    essential = count_cnf(cnf, table, budget)
    total_cells = sum(1 << len(z) for _, z in d.existentials)
    return BigCount.from_int(essential).shl(total_cells - len(table))
