"""First-order model counting as DQBF counting.

A universal relational sentence ``forall u v ... . body`` over a domain of
2^n elements becomes a DQBF with one block of n universal bits per FO
variable and one existential per distinct atom occurrence, depending on the
blocks of its arguments.  Occurrences of the same predicate are tied
together by agreement conjuncts, so models of the DQBF correspond one to one
to structures satisfying the sentence.

Input format (line oriented, ``#`` starts a comment)::

    predicate smoke/1
    predicate friend/2
    forall u v;
    friend(u, v) & smoke(u) -> smoke(v)
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from ..formula import (
    TRUE, And, Dqbf, Expr, Iff, Implies, ParseError, SemanticError, Var, evaluate,
    parse_expr, substitute, variables_of,
)
from .common import equal

__all__ = ["Atom", "FoSentence", "parse_fo", "fomc_encode", "fomc_brute", "fomc_naive", "SMOKER_FRIEND"]

SMOKER_FRIEND = """\
predicate stress/1
predicate smoke/1
predicate friend/2
forall u v;
(stress(u) -> smoke(u)) & (friend(u, v) & smoke(u) -> smoke(v))
"""

_PRED_RE = re.compile(r"predicate\s+([A-Za-z_]\w*)\s*/\s*(\d+)\s*$")
_FORALL_RE = re.compile(r"forall((?:\s+[A-Za-z_]\w*)*)\s*;(.*)$")


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[str, ...]

    @property
    def key(self) -> str:
        return f"{self.pred}({','.join(self.args)})"


@dataclass(frozen=True)
class FoSentence:
    """``forall variables . body``; atoms and equalities in ``body`` are
    placeholder variables named by ``Atom.key`` and ``"u=v"``."""

    variables: tuple[str, ...]
    predicates: tuple[tuple[str, int], ...]
    body: Expr
    atoms: tuple[Atom, ...]

    @property
    def arity(self) -> dict[str, int]:
        return dict(self.predicates)

    def equalities(self) -> list[tuple[str, str]]:
        names = variables_of(self.body)
        out = []
        for a in self.variables:
            for b in self.variables:
                if f"{a}={b}" in names:
                    out.append((a, b))
        return out


def parse_fo(text: str) -> FoSentence:
    preds: dict[str, int] = {}
    variables: tuple[str, ...] | None = None
    body_lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if variables is None:
            m = _PRED_RE.match(line)
            if m:
                if m.group(1) in preds:
                    raise SemanticError(f"predicate {m.group(1)} declared twice", lineno)
                preds[m.group(1)] = int(m.group(2))
                continue
            m = _FORALL_RE.match(line)
            if m:
                variables = tuple(m.group(1).split())
                if len(set(variables)) != len(variables):
                    raise SemanticError("repeated quantified variable", lineno)
                if m.group(2).strip():
                    body_lines.append((lineno, m.group(2)))
                continue
            if line.startswith("exists"):
                raise SemanticError("existential quantifiers are outside the fragment", lineno)
            raise ParseError(f"expected 'predicate P/r' or 'forall ...;', got {line!r}", lineno)
        body_lines.append((lineno, line))
    if variables is None:
        raise ParseError("missing 'forall ...;' line", 1)
    if not body_lines:
        raise ParseError("missing sentence body", len(text.splitlines()) or 1)
    atoms: dict[str, Atom] = {}
    first = body_lines[0][0]

    def atom(name: str, args: list[str]) -> Expr:
        if name not in preds:
            raise SemanticError(f"undeclared predicate {name}", first)
        if len(args) != preds[name]:
            raise SemanticError(f"{name} takes {preds[name]} arguments, got {len(args)}", first)
        for a in args:
            if a not in variables:
                raise SemanticError(f"{a} is not a quantified variable (function symbols are not allowed)", first)
        at = Atom(name, tuple(args))
        atoms.setdefault(at.key, at)
        return Var(at.key)

    def equality(a: str, b: str) -> Expr:
        for v in (a, b):
            if v not in variables:
                raise SemanticError(f"{v} is not a quantified variable", first)
        return TRUE if a == b else Var(f"{a}={b}")

    body = parse_expr(" ".join(t for _, t in body_lines), atom, equality, line=first)
    stray = variables_of(body) - set(atoms) - {f"{a}={b}" for a in variables for b in variables}
    for name in sorted(stray):
        if preds.get(name) == 0:
            at = Atom(name, ())
            atoms.setdefault(at.key, at)
            body = substitute(body, {name: Var(at.key)})
        else:
            raise SemanticError(f"unknown name {name} in the body", first)
    return FoSentence(variables, tuple(preds.items()), body, tuple(atoms.values()))


def _block(var: str, n: int) -> list[str]:
    return [f"{var}[{j}]" for j in range(n)]


def _distinct(args) -> list[str]:
    return list(dict.fromkeys(args))


def _ties_to(a: Atom, c: Atom) -> bool:
    """Every input of occurrence ``a`` is reachable through occurrence ``c``
    (all arguments distinct) within a single universal assignment: matching
    argument positions never forces two distinct arguments of ``a`` equal."""
    parent: dict[str, str] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    for x, y in zip(a.args, c.args):
        parent[find(x)] = find(y)
    roots = [find(x) for x in _distinct(a.args)]
    return len(set(roots)) == len(roots)


def fomc_encode(s: FoSentence, n: int) -> Dqbf:
    """DQBF whose model count is the number of models of ``s`` over 2^n elements."""
    if n < 0:
        raise ValueError("log domain size must be non-negative")
    blocks = {v: _block(v, n) for v in s.variables}
    universals = [b for v in s.variables for b in blocks[v]]
    existentials: list[tuple[str, tuple[str, ...]]] = []
    name_of: dict[str, str] = {}
    args_of: dict[str, list[list[str]]] = {}  # existential -> argument blocks
    for a in s.atoms:
        y = ".".join((a.pred,) + a.args)
        name_of[a.key] = y
        deps = [b for v in _distinct(a.args) for b in blocks[v]]
        existentials.append((y, tuple(deps)))
        args_of[y] = [blocks[v] for v in a.args]
    parts: list[Expr] = []
    for pred, arity in s.predicates:
        occ = [a for a in s.atoms if a.pred == pred]
        canon = next((c for c in occ if len(set(c.args)) == arity and all(_ties_to(a, c) for a in occ)), None)
        if canon is None:
            # no occurrence covers every tuple, or some occurrence cannot be
            # tied to one in a single assignment: add a full copy over fresh blocks
            fresh_vars = [f"{pred}.arg{j + 1}" for j in range(arity)]
            fblocks = [_block(v, n) for v in fresh_vars]
            y = f"{pred}.all"
            universals += [b for blk in fblocks for b in blk]
            existentials.append((y, tuple(b for blk in fblocks for b in blk)))
            args_of[y] = fblocks
            occ_names = [y] + [name_of[a.key] for a in occ]
        else:
            occ_names = [name_of[a.key] for a in occ]
        for y1, y2 in itertools.combinations(occ_names, 2):
            same = And(*[equal(b1, b2) for b1, b2 in zip(args_of[y1], args_of[y2])])
            parts.append(Implies(same, Iff(Var(y1), Var(y2))))
    leaves = {f"{a}={b}": equal(blocks[a], blocks[b]) for a, b in s.equalities()}
    leaves.update({key: Var(y) for key, y in name_of.items()})
    body = substitute(s.body, leaves)
    return Dqbf(tuple(universals), tuple(existentials), And(body, *parts))


def _ground_atoms(s: FoSentence, size: int) -> list[tuple[str, tuple[int, ...]]]:
    out = []
    for pred, arity in s.predicates:
        out += [(pred, t) for t in itertools.product(range(size), repeat=arity)]
    # small elements first so constraints close early in the search
    out.sort(key=lambda g: (max(g[1], default=-1), g[1], g[0]))
    return out


def fomc_naive(s: FoSentence, n: int, limit: int = 20) -> int:
    """Models of ``s`` over 2^n elements by enumerating every structure."""
    size = 1 << n
    ground = _ground_atoms(s, size)
    if len(ground) > limit:
        raise ValueError(f"{len(ground)} ground atoms exceed the enumeration limit {limit}")
    assignments = list(itertools.product(range(size), repeat=len(s.variables)))
    count = 0
    for bits in itertools.product((False, True), repeat=len(ground)):
        table = dict(zip(ground, bits))
        if all(_holds(s, table, dict(zip(s.variables, vals))) for vals in assignments):
            count += 1
    return count


def _holds(s: FoSentence, table, env: dict[str, int]) -> bool:
    vals = {a.key: table[(a.pred, tuple(env[v] for v in a.args))] for a in s.atoms}
    for a, b in s.equalities():
        vals[f"{a}={b}"] = env[a] == env[b]
    return evaluate(s.body, vals)


def fomc_brute(s: FoSentence, n: int, max_nodes: int = -1, tick=None) -> int:
    """Models of ``s`` over 2^n elements by depth-first search over ground
    atoms, where each grounding of the body is checked as soon as all of its
    ground atoms are assigned."""
    from .. import brute

    size = 1 << n
    ground = _ground_atoms(s, size)
    pos = {g: i for i, g in enumerate(ground)}
    rows: dict[tuple[int, ...], int] = {}
    k = max(1, len(s.atoms))
    for vals in itertools.product(range(size), repeat=len(s.variables)):
        env = dict(zip(s.variables, vals))
        cells = _distinct(pos[(a.pred, tuple(env[v] for v in a.args))] for a in s.atoms)
        which = {a.key: cells.index(pos[(a.pred, tuple(env[v] for v in a.args))]) for a in s.atoms}
        fixed = {f"{a}={b}": env[a] == env[b] for a, b in s.equalities()}
        mask = 0
        for b in range(1 << len(cells)):
            assign = {key: bool((b >> j) & 1) for key, j in which.items()}
            if not evaluate(s.body, {**assign, **fixed}):
                mask |= 1 << b
        if not mask:
            continue
        if not cells:
            return 0
        key = tuple(cells + [-1] * (k - len(cells)))
        rows[key] = rows.get(key, 0) | mask
    used = sorted({c for key in rows for c in key if c >= 0})
    remap = {c: i for i, c in enumerate(used)}
    table = [(tuple(remap.get(c, -1) for c in key), m) for key, m in rows.items()]
    trigger = [max(c for c in key if c >= 0) for key, _ in table]
    order = sorted(range(len(table)), key=trigger.__getitem__)
    npos = len(used)
    ptr = np.zeros(npos + 1, dtype=np.int64)
    np.cumsum(np.bincount(np.array(trigger, dtype=np.int64), minlength=npos), out=ptr[1:])
    cells = np.array([table[i][0] for i in order], dtype=np.int64).reshape(-1, k)
    wide = k > 6
    masks = np.array([table[i][1] for i in order], dtype=object if wide else np.uint64)
    engine = brute._search_py if wide else brute._search
    n_models = engine.search(npos, ptr, cells, masks, k, max_nodes, tick)
    return int(n_models) << (len(ground) - npos)

