"""The matrix of a 2-DQBF read as a succinct implication graph.

Literals X^b_{i,c} of the expansion are encoded as bit vectors (t, c, b):
``t`` selects the existential (0 for y1, 1 for y2), ``c`` is the cell,
zero-padded at the high end to the wider dependency set, ``b`` the sign.
Negation flips ``b`` only.  Several copies of the encoding live side by side
in one manager so relations over pairs and triples of literals can be formed.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bdd import DdManager, Function
from .expansion import render_cell
from .formula import Dqbf

__all__ = [
    "LiteralCopy", "LiteralSpace", "TransitionSystem", "edge_relation", "transitive_closure",
    "build_transition_system", "ts_unsatisfiable", "check_satisfiable", "weak_adjacency",
    "self_looping", "NotTwoDqbf",
]

COPIES = ("L", "P", "M", "L0", "P0")


class NotTwoDqbf(ValueError):
    pass


@dataclass(frozen=True)
class LiteralCopy:
    name: str
    t: int
    c: tuple[int, ...]
    b: int

    @property
    def ids(self) -> tuple[int, ...]:
        return (self.t,) + self.c + (self.b,)


class LiteralSpace:
    """Variable layout and helpers for literal codes of a 2-DQBF.

    Order: cell bits (interleaved across copies, bit 0 first), then the index
    bits, then the sign bits, then two flag bits, then free copies of the
    instance variables, which only appear inside quantified subterms.
    """

    def __init__(self, d: Dqbf, mgr: DdManager | None = None, copies=COPIES):
        if d.k != 2:
            raise NotTwoDqbf(f"expected a 2-DQBF, got {d.k} existentials")
        self.d = d
        self.mgr = mgr if mgr is not None else DdManager()
        m = self.mgr
        self.widths = (len(d.deps(0)), len(d.deps(1)))
        self.D = max(self.widths)
        cbits = {cp: [] for cp in copies}
        for j in range(self.D):
            for cp in copies:
                cbits[cp].append(m.declare(f"{cp}.c{j}"))
        tbit = {cp: m.declare(f"{cp}.t") for cp in copies}
        bbit = {cp: m.declare(f"{cp}.b") for cp in copies}
        self.copies = {
            cp: LiteralCopy(cp, tbit[cp], tuple(cbits[cp]), bbit[cp]) for cp in copies
        }
        self.flag = m.declare("flag")
        self.flag_next = m.declare("flag'")
        self.free = {name: m.declare(f"free.{name}") for name in d.variables}
        self._valid: dict[str, Function] = {}

    def __getitem__(self, cp: str) -> LiteralCopy:
        return self.copies[cp]

    # small builders

    def bit(self, v: int) -> Function:
        return self.mgr.var(v)

    def t_is(self, cp: str, i: int) -> Function:
        t = self.bit(self[cp].t)
        return t if i else ~t

    def valid(self, cp: str) -> Function:
        """The copy encodes a real literal: padding cell bits are zero."""
        if cp not in self._valid:
            m = self.mgr
            c = self[cp].c
            pads = []
            for i in (0, 1):
                pad = m.conj(~self.bit(c[j]) for j in range(self.widths[i], self.D))
                pads.append(self.t_is(cp, i).implies(pad))
            self._valid[cp] = pads[0] & pads[1]
        return self._valid[cp]

    def eq(self, a: str, b: str, sign: bool = True) -> Function:
        """Copies ``a`` and ``b`` encode the same literal (or, with
        ``sign=False``, complementary literals)."""
        A, B = self[a], self[b]
        m = self.mgr
        parts = [self.bit(x).iff(self.bit(y)) for x, y in zip(A.c + (A.t,), B.c + (B.t,))]
        sb = self.bit(A.b).iff(self.bit(B.b)) if sign else self.bit(A.b) ^ self.bit(B.b)
        # conjoin bottom-up for small intermediates
        acc = sb
        for p in reversed(parts):
            acc = p & acc
        return acc

    def cell_eq(self, a: str, b: str) -> Function:
        A, B = self[a], self[b]
        return self.mgr.conj(self.bit(x).iff(self.bit(y)) for x, y in zip(A.c, B.c))

    def literal(self, cp: str, i: int, c: int, b: bool) -> Function:
        A = self[cp]
        values = {A.t: bool(i), A.b: bool(b)}
        for j, v in enumerate(A.c):
            values[v] = bool((c >> j) & 1)
        return self.mgr.minterm(values)

    def rename(self, f: Function, pairs: dict[str, str]) -> Function:
        """Move copies simultaneously, e.g. ``{"P": "L"}`` or a swap."""
        mapping = {}
        for src, dst in pairs.items():
            for s, t in zip(self[src].ids, self[dst].ids):
                mapping[s] = t
        return self.mgr.rename(f, mapping)

    def negate_sign(self, f: Function, cp: str = "L") -> Function:
        b = self[cp].b
        return self.mgr.compose(f, {b: ~self.bit(b)})

    def decode(self, values: dict[int, bool], cp: str = "L") -> tuple[int, int, bool]:
        A = self[cp]
        c = sum(1 << j for j, v in enumerate(A.c) if values.get(v, False))
        return int(values.get(A.t, False)), c, bool(values.get(A.b, False))

    def describe(self, i: int, c: int, b: bool) -> str:
        return f"X{'' if b else '~'}{i + 1},{render_cell(c, self.widths[i])}"

    def cell_ids(self, cp: str, i: int) -> list[int]:
        return list(self[cp].c[: self.widths[i]])

    def code_ids(self, cp: str) -> list[int]:
        return list(self[cp].ids)

    # the matrix inside the space

    def neg_matrix(self, leaf: dict) -> Function:
        """Negated matrix with instance variables replaced by functions."""
        vm = {name: leaf.get(name, self.bit(self.free[name])) for name in self.d.variables}
        return ~self.mgr.build(self.d.matrix, vm)

    def free_ids(self) -> list[int]:
        return list(self.free.values())

    def support_cells(self, i: int, cp: str = "L") -> Function:
        """Cells c (over the copy's first |z_i| bits) where the negated matrix
        stays satisfiable after fixing z_i to c."""
        A = self[cp]
        B = self["M" if cp == "P" else "P"]
        leaf = {x: self.bit(A.c[p]) for p, x in enumerate(self.d.deps(i))}
        # the other dependency set goes to a neighbouring copy, which keeps
        # equalities between the two sets local in the variable order
        for q, x in enumerate(self.d.deps(1 - i)):
            leaf.setdefault(x, self.bit(B.c[q]))
        neg = self.neg_matrix(leaf)
        return self.mgr.exists(neg, self.free_ids() + list(B.c))

    def support_literals(self, s1: Function, s2: Function, cp: str = "L") -> Function:
        """Literals (either sign) of support cells, given S1, S2 over copy ``cp``."""
        return self.valid(cp) & ((self.t_is(cp, 0) & s1) | (self.t_is(cp, 1) & s2))


def edge_relation(space: LiteralSpace, src: str = "L", dst: str = "P") -> Function:
    """E(src, dst): an implication edge between literals of different existentials.

    From L = X^{b}_{1,c1} to L' = X^{b'}_{2,c2} iff some falsifier has
    z1 = c1, z2 = c2, y1 = b, y2 = not b'; symmetrically from y2 to y1.
    """
    d = space.d
    m = space.mgr
    S, T = space[src], space[dst]
    parts = []
    for i in (0, 1):
        j = 1 - i
        zi, zj = d.deps(i), d.deps(j)
        pos_i = {x: p for p, x in enumerate(zi)}
        leaf = {x: space.bit(S.c[p]) for x, p in pos_i.items()}
        shared = []
        for q, x in enumerate(zj):
            if x in pos_i:
                shared.append(space.bit(S.c[pos_i[x]]).iff(space.bit(T.c[q])))
            else:
                leaf[x] = space.bit(T.c[q])
        leaf[d.names[i]] = space.bit(S.b)
        leaf[d.names[j]] = ~space.bit(T.b)
        neg = space.neg_matrix(leaf)
        body = m.and_exists(neg, m.conj(shared), space.free_ids())
        guard = space.t_is(src, i) & space.t_is(dst, j)
        parts.append(guard & body)
    return (parts[0] | parts[1]) & space.valid(src) & space.valid(dst)


def transitive_closure(space: LiteralSpace, E: Function, budget=None) -> tuple[Function, int]:
    """Paths of length >= 1, by iterated squaring; returns (closure, squarings)."""
    m = space.mgr
    mids = space.code_ids("M")
    R = E
    iterations = 0
    while True:
        left = space.rename(R, {"P": "M"})
        right = space.rename(R, {"L": "M"})
        R2 = R | m.and_exists(left, right, mids)
        iterations += 1
        if budget is not None:
            budget.check_nodes(m)
        if R2 == R:
            return R, iterations
        R = R2


def self_looping(space: LiteralSpace, tr: Function) -> Function:
    """Literals L (in copy L) with a path L ->* not L."""
    m = space.mgr
    return m.and_exists(tr, space.eq("P", "L", sign=False), space.code_ids("P"))


def check_satisfiable(space: LiteralSpace, tr: Function) -> bool:
    """Satisfiable iff no literal lies on a cycle with its negation."""
    a = self_looping(space, tr)
    return (a & space.negate_sign(a)).is_false


def weak_adjacency(space: LiteralSpace, E: Function, support: Function) -> Function:
    """Undirected graph: edges in either direction plus literal--negation links
    on support literals (``support`` over copy L)."""
    back = space.rename(E, {"L": "P", "P": "L"})
    neg_link = space.eq("P", "L", sign=False) & support
    return E | back | neg_link


@dataclass
class TransitionSystem:
    """States (flag, L, L0); next state uses (flag', P, P0)."""

    space: LiteralSpace
    init: Function
    trans: Function

    def state_ids(self) -> list[int]:
        s = self.space
        return [s.flag] + s.code_ids("L") + s.code_ids("L0")

    def next_ids(self) -> list[int]:
        s = self.space
        return [s.flag_next] + s.code_ids("P") + s.code_ids("P0")

    def image(self, states: Function) -> Function:
        s = self.space
        nxt = s.mgr.and_exists(states, self.trans, self.state_ids())
        return s.mgr.rename(nxt, dict(zip(self.next_ids(), self.state_ids())))

    def reachable(self, budget=None) -> tuple[Function, int]:
        reach = self.init
        frontier = self.init
        steps = 0
        while not frontier.is_false:
            new = self.image(frontier) & ~reach
            reach = reach | new
            frontier = new
            steps += 1
            if budget is not None:
                budget.check_nodes(self.space.mgr)
        return reach, steps


def build_transition_system(space: LiteralSpace, E: Function) -> TransitionSystem:
    s = space
    flag, flag2 = s.bit(s.flag), s.bit(s.flag_next)
    init = ~flag & s.eq("L", "L0") & s.valid("L0")
    keep_start = s.eq("P0", "L0")
    walk = flag.iff(flag2) & keep_start & E
    flip = ~flag & flag2 & s.eq("P", "L") & keep_start & s.eq("L", "L0", sign=False)
    return TransitionSystem(s, init, walk | flip)


def ts_unsatisfiable(ts: TransitionSystem, budget=None) -> tuple[bool, bool]:
    """Verdicts from the reachable states.

    Returns (round_trip, flipped): ``round_trip`` says some state with the
    flag set is back at its start literal (L0 ->* not L0 ->* L0, the exact
    unsatisfiability condition); ``flipped`` only says the flag was set,
    i.e. some L0 ->* not L0.
    """
    s = ts.space
    reach, _ = ts.reachable(budget)
    flag = s.bit(s.flag)
    round_trip = not (reach & flag & s.eq("L", "L0")).is_false
    flipped = not (reach & flag & s.eq("L", "L0", sign=False)).is_false
    return round_trip, flipped
