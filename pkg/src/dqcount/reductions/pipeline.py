"""Counting general DQBF through 2-DQBF.

The expansion of a k-DQBF is a CNF whose clauses are indexed by the
falsifying assignments (x, y) of the matrix.  The CNF-to-2-CNF counting
reduction (clause indicators c, parity bits p and four case variables per
clause) is applied to that expansion succinctly: every family of expansion
variables becomes one existential over the appropriate index vector.  This
gives two extended 2-DQBFs Psi1, Psi2 (each conjunct mentions at most two
existentials) with #d = #Psi1 - #Psi2; each is then folded into a plain
2-DQBF by merging its existentials into one indexed function.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from ..bigcount import BigCountError
from ..formula import And, Dqbf, Expr, Iff, Implies, Not, Or, Var, Xor, substitute, variables_of
from ..limits import Budget, DEFAULT_BUDGET
from .common import equal, fresh, has_value, index_width

__all__ = [
    "ExtendedTwoDqbf", "to_extended_pair", "extended_to_2dqbf", "to_2dqbf_pair", "count_general",
    "PipelineError",
]


class PipelineError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ExtendedTwoDqbf:
    """A DQBF whose matrix is the conjunction of ``parts``, each mentioning at
    most two existentials."""

    dqbf: Dqbf
    parts: tuple[Expr, ...]

    def __post_init__(self):
        names = set(self.dqbf.names)
        for p in self.parts:
            used = variables_of(p) & names
            if len(used) > 2:
                raise ValueError(f"conjunct mentions {len(used)} existentials: {sorted(used)}")

    @classmethod
    def from_parts(cls, universals, existentials, parts) -> ExtendedTwoDqbf:
        parts = tuple(parts)
        return cls(Dqbf(tuple(universals), tuple(existentials), And(*parts)), parts)


def _decrement(src: list[str], dst: list[str]) -> Expr:
    """dst = src - 1 for little-endian vectors with src != 0."""
    parts = []
    borrow: list[Expr] = []
    for j, (a, b) in enumerate(zip(src, dst)):
        flip = And(*borrow) if borrow else And()
        parts.append(Iff(Var(b), Xor(Var(a), flip)))
        borrow.append(Not(Var(a)))
    nonzero = Or(*[Var(a) for a in src])
    return And(nonzero, *parts)


def to_extended_pair(d: Dqbf) -> tuple[ExtendedTwoDqbf, ExtendedTwoDqbf]:
    """Psi1, Psi2 with #d = #Psi1 - #Psi2.

    Clauses of the expansion are indexed by lam = (x, v) where v stands for
    the values of the original existentials.  Time indices t, t' range over
    lam extended by -1, encoded with a tag bit (tag set means -1, whatever
    the other bits say).  Existentials: the original f_i(z_i), c(lam), p(t'),
    o1, o2, e1, e2 (t).
    """
    n, k = d.n, d.k
    if k < 1:
        raise ValueError("need at least one existential")
    taken = set(d.variables)
    vals = [fresh(f"v.{y}", taken) for y in d.names]
    lam = list(d.universals) + vals
    L = n + k
    t = [fresh(f"t[{j}]", taken) for j in range(L)]
    s = [fresh(f"s[{j}]", taken) for j in range(L)]
    t_neg, s_neg = fresh("t.neg", taken), fresh("s.neg", taken)
    c = fresh("c", taken)
    p = fresh("p", taken)
    cases = [fresh(name, taken) for name in ("o1", "o2", "e1", "e2")]

    # time bits interleaved with the clause index, most significant first
    order = [t_neg, s_neg]
    for j in reversed(range(L)):
        order += [t[j], s[j], lam[j]]
    existentials = [(y, d.deps(i)) for i, y in enumerate(d.names)]
    existentials += [(c, tuple(lam)), (p, tuple(s) + (s_neg,))]
    existentials += [(o, tuple(t) + (t_neg,)) for o in cases]
    rank = {v: r for r, v in enumerate(order)}
    existentials = [(y, tuple(sorted(z, key=rank.__getitem__))) for y, z in existentials]

    T_ok = Not(Var(t_neg))
    prev = And(T_ok, Or(And(Var(s_neg), *[Not(Var(b)) for b in t]), And(Not(Var(s_neg)), _decrement(t, s))))
    same = And(T_ok, Not(Var(s_neg)), equal(t, s))
    at_clause = And(T_ok, equal(t, lam))

    def lit(name: str, positive: bool) -> Expr:
        return Var(name) if positive else Not(Var(name))

    phi = substitute(d.matrix, {y: Var(v) for y, v in zip(d.names, vals)})
    parts: list[Expr] = []
    # S1: a clause may be marked falsified only if it is a clause of the
    # expansion and every literal of it is false
    for y, v in zip(d.names, vals):
        parts.append(Implies(Not(phi), Implies(Var(v), Implies(Var(c), Var(y)))))
        parts.append(Implies(Not(phi), Implies(Not(Var(v)), Implies(Var(c), Not(Var(y))))))
    parts.append(Implies(phi, Not(Var(c))))
    # S2: case variables witness the parity step p(t-1) -> p(t)
    signs = {"o1": (False, True, True), "o2": (True, False, True),
             "e1": (True, True, False), "e2": (False, False, False)}
    for o, key in zip(cases, ("o1", "o2", "e1", "e2")):
        before, marked, after = signs[key]
        parts.append(Implies(prev, Implies(Var(o), lit(p, before))))
        parts.append(Implies(at_clause, Implies(Var(o), lit(c, marked))))
        parts.append(Implies(same, Implies(Var(o), lit(p, after))))
        # case variables at index -1 take part in no clause; pin them
        parts.append(Implies(Var(t_neg), Not(Var(o))))
    # S3: nothing is falsified before the first clause
    parts.append(Implies(Var(s_neg), Not(Var(p))))
    last = And(Not(Var(s_neg)), *[Var(b) for b in s])
    psi1 = parts + [Implies(last, Not(Var(p)))]
    psi2 = parts + [Implies(last, Var(p))]
    return (
        ExtendedTwoDqbf.from_parts(order, existentials, psi1),
        ExtendedTwoDqbf.from_parts(order, existentials, psi2),
    )


def extended_to_2dqbf(e: ExtendedTwoDqbf) -> Dqbf:
    """Fold m existentials into y(x, i), y'(x', i') with index width ceil(log m).

    y(., i) and y'(., i) are tied together and to z_i; unused indices are
    tied and pinned to true; with x = x', each conjunct is checked with its
    two existentials read off y and y' at their indices.
    """
    d = e.dqbf
    m = d.k
    w = index_width(m)
    taken = set(d.variables)
    X = list(d.universals)
    Xp = [fresh(f"{x}'", taken) for x in X]
    I = [fresh(f"i[{j}]", taken) for j in range(w)]
    Ip = [fresh(f"i'[{j}]", taken) for j in range(w)]
    y, yp = fresh("y", taken), fresh("y'", taken)
    universals = [v for pair in zip(I, Ip) for v in pair] + [v for pair in zip(X, Xp) for v in pair]
    existentials = [(y, tuple(I + X)), (yp, tuple(Ip + Xp))]
    pos = {x: j for j, x in enumerate(X)}
    same_fn = Iff(Var(y), Var(yp))
    parts: list[Expr] = []
    for idx in range(m):
        z = [pos[x] for x in d.deps(idx)]
        tie = equal([X[j] for j in z], [Xp[j] for j in z])
        parts.append(Implies(And(has_value(I, idx), has_value(Ip, idx), tie), same_fn))
    for idx in range(m, 1 << w):
        parts.append(Implies(And(has_value(I, idx), has_value(Ip, idx)), same_fn))
        parts.append(Implies(has_value(I, idx), Var(y)))
    index_of = {name: idx for idx, name in enumerate(d.names)}
    cases = []
    for part in e.parts:
        used = sorted((variables_of(part) & index_of.keys()), key=index_of.__getitem__)
        if len(used) == 2:
            a, b = used
            guard = And(has_value(I, index_of[a]), has_value(Ip, index_of[b]))
            body = substitute(part, {a: Var(y), b: Var(yp)})
        elif len(used) == 1:
            a = used[0]
            guard = And(has_value(I, index_of[a]), has_value(Ip, index_of[a]))
            body = substitute(part, {a: Var(y)})
        else:
            guard, body = And(), part
        cases.append(Implies(guard, body))
    parts.append(Implies(equal(X, Xp), And(*cases)))
    return Dqbf(tuple(universals), tuple(existentials), And(*parts))


def to_2dqbf_pair(d: Dqbf) -> tuple[Dqbf, Dqbf]:
    psi1, psi2 = to_extended_pair(d)
    return extended_to_2dqbf(psi1), extended_to_2dqbf(psi2)


def count_general(d: Dqbf, budget: Budget = DEFAULT_BUDGET, **kw):
    """#d = #Phi1 - #Phi2, both counted with the symbolic 2-DQBF counter."""
    from ..counter import CountReport, count_symbolic

    t0 = time.perf_counter()
    phi1, phi2 = to_2dqbf_pair(d)
    r1 = count_symbolic(phi1, budget, **kw)
    r2 = count_symbolic(phi2, budget, **kw)
    try:
        diff = r1.count - r2.count
    except BigCountError as exc:
        raise PipelineError(f"pipeline produced #Phi1 < #Phi2 ({r1.count} < {r2.count})") from exc
    report = CountReport(diff, not diff.is_zero(), "reduction", terms=(r1.count, r2.count))
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report
