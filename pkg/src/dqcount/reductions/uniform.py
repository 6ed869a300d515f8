"""Model-preserving reduction of a k-DQBF to a uniform one, where every model
consists of k copies of a single function."""
from __future__ import annotations

from ..formula import And, Dqbf, Iff, Implies, Var, substitute
from .common import equal, fresh, has_value, index_width

__all__ = ["to_uniform"]


def to_uniform(d: Dqbf) -> Dqbf:
    """Merge y_1..y_k into one function f(index, x) copied k times.

    Universals are k copies x^(i) of x and k index vectors u^(i); y_i depends
    on x^(i) and u^(i).  Index i is encoded as the number i-1.  The matrix
    ties all copies together, makes f(i, .) depend on z_i only, evaluates the
    original matrix when every u^(i) = i and all copies of x agree, and
    forces f to true on unused indices.
    """
    k = d.k
    if k < 1:
        raise ValueError("need at least one existential")
    if k == 1:
        # one function is trivially uniform; the original already is the answer
        return Dqbf(d.universals, d.existentials, And(d.matrix, Iff(Var(d.names[0]), Var(d.names[0]))))
    taken = set(d.variables)
    w = index_width(k)
    xs = [[fresh(f"{x}.{i + 1}", taken) for x in d.universals] for i in range(k)]
    us = [[fresh(f"u{i + 1}[{j}]", taken) for j in range(w)] for i in range(k)]
    ys = [fresh(f"{y}'", taken) for y in d.names]
    universals = tuple(v for i in range(k) for v in xs[i] + us[i])
    existentials = tuple((ys[i], tuple(xs[i] + us[i])) for i in range(k))
    parts = []
    for i in range(k):
        for j in range(i + 1, k):
            parts.append(Implies(And(equal(xs[i], xs[j]), equal(us[i], us[j])), Iff(Var(ys[i]), Var(ys[j]))))
    pos = {x: p for p, x in enumerate(d.universals)}
    for i in range(k):
        zi = [pos[x] for x in d.deps(i)]
        same_z = equal([xs[0][p] for p in zi], [xs[1][p] for p in zi])
        parts.append(Implies(And(same_z, has_value(us[0], i), has_value(us[1], i)), Iff(Var(ys[0]), Var(ys[1]))))
    rename = {x: Var(xs[0][p]) for p, x in enumerate(d.universals)}
    rename.update({y: Var(ys[i]) for i, y in enumerate(d.names)})
    body = substitute(d.matrix, rename)
    agree = And(*[equal(xs[0], xs[i]) for i in range(1, k)])
    parts.append(Implies(And(*[has_value(us[i], i) for i in range(k)], agree), body))
    for i in range(k):
        for j in range(k, 1 << w):
            parts.append(Implies(has_value(us[i], j), Var(ys[i])))
    return Dqbf(universals, existentials, And(*parts))

