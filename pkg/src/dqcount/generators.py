"""Benchmark instances: the graph families TWO-COL and IND-SET over succinct
graphs, and seeded random DQBFs."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .bigcount import BigCount
from .formula import And, Dqbf, Expr, Iff, Implies, Not, Or, Var, Xor

__all__ = [
    "GenSpec", "edge_circuit", "gen_two_col", "gen_ind_set", "gen_random", "generate",
    "two_col_count", "ind_set_count", "random_corpus",
]


@dataclass(frozen=True)
class GenSpec:
    family: str = "random"
    n: int = 4
    k: int = 0
    seed: int = 0
    widths: tuple[int, ...] = (2, 2)
    gates: int = 4
    guard: bool = False

    def __post_init__(self):
        if self.family not in ("two_col", "ind_set", "random"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family != "random" and not 0 <= self.k < self.n:
            raise ValueError(f"need 0 <= k < n, got n={self.n}, k={self.k}")
        if self.family == "random":
            if self.n < 0 or any(not 0 <= w <= self.n for w in self.widths):
                raise ValueError(f"dependency widths {self.widths} must lie in 0..{self.n}")
            if self.gates < 1:
                raise ValueError("need at least one conjunct")


def _vertex_vars(n: int) -> tuple[list[Expr], list[Expr]]:
    return [Var(f"x{i}") for i in range(1, n + 1)], [Var(f"xp{i}") for i in range(1, n + 1)]


def edge_circuit(x: list[Expr], xp: list[Expr], k: int) -> Expr:
    """Edges of G_{n,k}: agree on the first k bits, differ on bit k+1."""
    return And(*[Iff(a, b) for a, b in zip(x[:k], xp[:k])], Xor(x[k], xp[k]))


def _graph_instance(n: int, k: int, edge_part) -> Dqbf:
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got n={n}, k={k}")
    x, xp = _vertex_vars(n)
    y, yp = Var("y"), Var("yp")
    same = And(*[Iff(a, b) for a, b in zip(x, xp)])
    matrix = And(Implies(same, Iff(y, yp)), Implies(edge_circuit(x, xp, k), edge_part(y, yp)))
    universals = tuple(v.name for v in x + xp)
    return Dqbf(
        universals,
        (("y", tuple(v.name for v in x)), ("yp", tuple(v.name for v in xp))),
        matrix,
    )


def gen_two_col(n: int, k: int) -> Dqbf:
    """Models are the proper 2-colourings of G_{n,k}."""
    return _graph_instance(n, k, lambda y, yp: Xor(y, yp))


def gen_ind_set(n: int, k: int) -> Dqbf:
    """Models are the independent sets of G_{n,k}."""
    return _graph_instance(n, k, lambda y, yp: Or(Not(y), Not(yp)))


def two_col_count(n: int, k: int) -> BigCount:
    # 2^k components, each complete bipartite with two colourings
    return BigCount.from_pow2(1 << k)


def ind_set_count(n: int, k: int) -> BigCount:
    m = 1 << (n - k - 1)
    per_component = BigCount(range(m + 1))  # 2 * 2^m - 1
    return per_component ** (1 << k)


def _literal(rng: random.Random, names: list[str]) -> Expr:
    v = Var(rng.choice(names))
    return Not(v) if rng.random() < 0.5 else v


def _atom(rng: random.Random, names: list[str]) -> Expr:
    r = rng.random()
    if r < 0.6:
        return _literal(rng, names)
    a, b = _literal(rng, names), _literal(rng, names)
    return And(a, b) if r < 0.8 else Xor(a, b)


def gen_random(spec: GenSpec) -> Dqbf:
    """Seeded random DQBF: a conjunction of ``spec.gates`` small random
    disjunctions, each mentioning at least one existential.  The first
    conjunct always mentions two existentials (or the only one)."""
    if spec.family != "random":
        raise ValueError("gen_random needs a random-family spec")
    rng = random.Random(spec.seed)
    n, k = spec.n, len(spec.widths)
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, k + 1)]
    deps = []
    for w in spec.widths:
        chosen = set(rng.sample(xs, w))
        deps.append(tuple(x for x in xs if x in chosen))
    leaves = xs + ys
    conjuncts: list[Expr] = []
    if k:
        pair = rng.sample(ys, min(2, k))
        first = [Not(Var(y)) if rng.random() < 0.5 else Var(y) for y in pair]
        if xs and rng.random() < 0.7:
            first.append(_atom(rng, xs))
        conjuncts.append(Or(*first))
    while len(conjuncts) < spec.gates:
        width = rng.choice((1, 2, 2, 3))
        atoms = [_atom(rng, leaves) for _ in range(width - 1)]
        # a conjunct over universals alone would usually make the instance false
        atoms.insert(rng.randrange(width), _literal(rng, ys) if ys else _atom(rng, leaves))
        conjuncts.append(Or(*atoms))
    if spec.guard and k >= 2 and len(spec.widths) >= 2 and spec.widths[0] == spec.widths[1]:
        # uniformity-style guard: equal cells must get equal values
        eq = And(*[Iff(Var(a), Var(b)) for a, b in zip(deps[0], deps[1])])
        conjuncts.append(Implies(eq, Iff(Var(ys[0]), Var(ys[1]))))
    return Dqbf(tuple(xs), tuple(zip(ys, deps)), And(*conjuncts))


def generate(spec: GenSpec) -> Dqbf:
    if spec.family == "two_col":
        return gen_two_col(spec.n, spec.k)
    if spec.family == "ind_set":
        return gen_ind_set(spec.n, spec.k)
    return gen_random(spec)


def random_corpus(count: int, seed: int = 0, n_max: int = 6, width_max: int = 3, k: int = 2):
    """Deterministic stream of random specs with varied sizes."""
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        n = rng.randint(1, n_max)
        widths = tuple(rng.randint(0, min(width_max, n)) for _ in range(k))
        gates = rng.randint(1, 6)
        guard = rng.random() < 0.2
        out.append(GenSpec("random", n=n, seed=seed * 1_000_003 + idx, widths=widths, gates=gates, guard=guard))
    return out
