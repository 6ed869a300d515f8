"""Prenex DQBF instances: expressions, parsing, serialization, evaluation.

A DQBF is ``forall x1..xn exists y1(z1) .. yk(zk). matrix`` where each
dependency set ``zi`` is an ordered sublist of the universals.  Matrices are
Boolean circuits (DAGs of :class:`Expr`), so the same structure serves the
circuit file format and DQDIMACS clause lists.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

__all__ = [
    "Expr", "Var", "Not", "And", "Or", "Xor", "Ite", "Iff", "Implies", "TRUE", "FALSE",
    "Dqbf", "Assignment", "ParseError", "SemanticError",
    "parse", "serialize", "project", "eval_matrix", "fold", "variables_of", "parse_expr", "substitute",
]

_OPS = ("var", "not", "and", "or", "xor", "ite")


class Expr:
    """Immutable node of a Boolean circuit.

    ``op`` is one of ``var``, ``not``, ``and``, ``or``, ``xor``, ``ite``.
    Empty ``and``/``or`` are the constants true/false.  Subterms may be shared.
    """

    __slots__ = ("op", "args", "name", "_hash")

    def __init__(self, op: str, args: tuple[Expr, ...] = (), name: str | None = None):
        if op not in _OPS:
            raise ValueError(f"unknown operator {op!r}")
        if op == "var" and not name:
            raise ValueError("variable leaf needs a name")
        if op == "not" and len(args) != 1:
            raise ValueError("not takes one argument")
        if op == "ite" and len(args) != 3:
            raise ValueError("ite takes three arguments")
        self.op = op
        self.args = args
        self.name = name
        self._hash: int | None = None

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Expr):
            return NotImplemented
        return _struct_eq(self, other, {})

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = fold(
                self,
                lambda e: hash(("var", e.name)),
                lambda e, hs: hash((e.op, tuple(hs))),
            )
        return self._hash

    def __repr__(self) -> str:
        return to_text(self)

    def __and__(self, other: Expr) -> Expr:
        return And(self, other)

    def __or__(self, other: Expr) -> Expr:
        return Or(self, other)

    def __xor__(self, other: Expr) -> Expr:
        return Xor(self, other)

    def __invert__(self) -> Expr:
        return Not(self)

    @property
    def is_const(self) -> bool:
        return self.op in ("and", "or") and not self.args


def _struct_eq(a: Expr, b: Expr, seen: dict) -> bool:
    key = (id(a), id(b))
    if key in seen:
        return seen[key]
    if a is b:
        ok = True
    elif a.op != b.op or a.name != b.name or len(a.args) != len(b.args):
        ok = False
    else:
        ok = all(_struct_eq(x, y, seen) for x, y in zip(a.args, b.args))
    seen[key] = ok
    return ok


def Var(name: str) -> Expr:
    return Expr("var", (), name)


def Not(e: Expr) -> Expr:
    return Expr("not", (e,))


def And(*es: Expr) -> Expr:
    return Expr("and", tuple(es))


def Or(*es: Expr) -> Expr:
    return Expr("or", tuple(es))


def Xor(*es: Expr) -> Expr:
    return Expr("xor", tuple(es))


def Ite(c: Expr, t: Expr, e: Expr) -> Expr:
    return Expr("ite", (c, t, e))


def Iff(a: Expr, b: Expr) -> Expr:
    return Not(Xor(a, b))


def Implies(a: Expr, b: Expr) -> Expr:
    return Or(Not(a), b)


TRUE = And()
FALSE = Or()


def fold(root: Expr, leaf: Callable[[Expr], object], node: Callable[[Expr, list], object]):
    """Bottom-up evaluation of a DAG, visiting each shared node once.

    Iterative, so deep circuits (long chains of gates) do not hit the
    recursion limit.
    """
    memo: dict[int, object] = {}
    stack: list[tuple[Expr, bool]] = [(root, False)]
    while stack:
        e, expanded = stack.pop()
        k = id(e)
        if k in memo:
            continue
        if e.op == "var":
            memo[k] = leaf(e)
            continue
        if expanded:
            memo[k] = node(e, [memo[id(a)] for a in e.args])
            continue
        stack.append((e, True))
        for a in e.args:
            if id(a) not in memo:
                stack.append((a, False))
    return memo[id(root)]


def variables_of(e: Expr) -> set[str]:
    out: set[str] = set()
    fold(e, lambda v: out.add(v.name), lambda n, xs: None)
    return out


def evaluate(e: Expr, env: Mapping[str, bool]) -> bool:
    def node(n: Expr, xs: list) -> bool:
        op = n.op
        if op == "not":
            return not xs[0]
        if op == "and":
            return all(xs)
        if op == "or":
            return any(xs)
        if op == "xor":
            r = False
            for x in xs:
                r ^= bool(x)
            return r
        return xs[1] if xs[0] else xs[2]

    return bool(fold(e, lambda v: bool(env[v.name]), node))


def evaluate_array(e: Expr, env: Mapping[str, object], size: int):
    """Evaluate over numpy boolean columns (one row per assignment)."""
    import numpy as np

    def node(n: Expr, xs: list):
        op = n.op
        if op == "not":
            return ~xs[0]
        if op == "and":
            if not xs:
                return np.ones(size, dtype=bool)
            r = xs[0]
            for x in xs[1:]:
                r = r & x
            return r
        if op == "or":
            if not xs:
                return np.zeros(size, dtype=bool)
            r = xs[0]
            for x in xs[1:]:
                r = r | x
            return r
        if op == "xor":
            r = np.zeros(size, dtype=bool)
            for x in xs:
                r = r ^ x
            return r
        return np.where(xs[0], xs[1], xs[2])

    return fold(e, lambda v: env[v.name], node)


def to_text(e: Expr) -> str:
    def node(n: Expr, xs: list) -> str:
        if n.op == "not":
            return f"-{xs[0]}"
        if n.is_const:
            return "true" if n.op == "and" else "false"
        return f"{n.op}({', '.join(xs)})"

    return fold(e, lambda v: v.name, node)


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace variable leaves by expressions (simultaneously); sharing is kept."""

    def leaf(v: Expr) -> Expr:
        return mapping.get(v.name, v)

    def node(n: Expr, xs: list) -> Expr:
        if all(a is b for a, b in zip(xs, n.args)):
            return n
        return Expr(n.op, tuple(xs))

    return fold(e, leaf, node)


# instances


@dataclass(frozen=True)
class Dqbf:
    """A prenex DQBF.

    ``existentials`` pairs each existential name with its dependency set.
    Dependency sets are stored in universal-declaration order whatever
    order they were given in, so cells always read in that order.
    """

    universals: tuple[str, ...]
    existentials: tuple[tuple[str, tuple[str, ...]], ...]
    matrix: Expr
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        universals = tuple(self.universals)
        if len(set(universals)) != len(universals):
            raise SemanticError(f"duplicate universal in {universals}")
        pos = {x: i for i, x in enumerate(universals)}
        exist = []
        seen: set[str] = set()
        for name, deps in self.existentials:
            if name in pos or name in seen:
                raise SemanticError(f"duplicate declaration of {name!r}")
            seen.add(name)
            deps = tuple(deps)
            if len(set(deps)) != len(deps):
                raise SemanticError(f"duplicate dependency in {name!r}")
            for d in deps:
                if d not in pos:
                    raise SemanticError(f"dependency {d!r} of {name!r} is not a universal")
            exist.append((name, tuple(sorted(deps, key=pos.__getitem__))))
        undeclared = variables_of(self.matrix) - set(pos) - seen
        if undeclared:
            raise SemanticError(f"undeclared variable(s) in matrix: {sorted(undeclared)}")
        object.__setattr__(self, "universals", universals)
        object.__setattr__(self, "existentials", tuple(exist))
        ids = {x: i for i, x in enumerate(universals)}
        ids.update({y: len(universals) + j for j, (y, _) in enumerate(exist)})
        object.__setattr__(self, "_index", ids)

    @property
    def n(self) -> int:
        return len(self.universals)

    @property
    def k(self) -> int:
        return len(self.existentials)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(y for y, _ in self.existentials)

    def deps(self, i: int) -> tuple[str, ...]:
        return self.existentials[i][1]

    def dep_positions(self, i: int) -> tuple[int, ...]:
        """Positions (into ``universals``) of the dependency set of existential ``i``."""
        return tuple(self._index[x] for x in self.existentials[i][1])

    def var_id(self, name: str) -> int:
        """Dense id: universals first, then existentials, in declaration order."""
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"undeclared variable {name!r}") from None

    @property
    def variables(self) -> tuple[str, ...]:
        return self.universals + self.names

    def cell_counts(self) -> list[int]:
        return [1 << len(d) for _, d in self.existentials]

    def is_2dqbf(self) -> bool:
        return self.k == 2

    def with_matrix(self, matrix: Expr) -> Dqbf:
        return Dqbf(self.universals, self.existentials, matrix)


class Assignment(Mapping[str, bool]):
    """Total map from a declared variable list to Booleans."""

    def __init__(self, variables: Sequence[str], values: Iterable[bool]):
        self.variables = tuple(variables)
        vals = tuple(bool(v) for v in values)
        if len(vals) != len(self.variables):
            raise ValueError("assignment must be total over its declared variables")
        self._map = dict(zip(self.variables, vals))
        self.values_ = vals

    def __getitem__(self, name: str) -> bool:
        try:
            return self._map[name]
        except KeyError:
            raise KeyError(f"variable {name!r} is not declared in this assignment") from None

    def __iter__(self):
        return iter(self.variables)

    def __len__(self) -> int:
        return len(self.variables)

    def __repr__(self) -> str:
        return "Assignment(" + ", ".join(f"{k}={int(v)}" for k, v in self._map.items()) + ")"


def project(a: Sequence[bool] | Assignment, x: Sequence[str], z: Sequence[str]) -> tuple[bool, ...]:
    """Restrict ``a`` (an assignment over ``x``) to the components in ``z``, in ``x`` order."""
    if isinstance(a, Assignment):
        vals = [a[name] for name in x]
    else:
        vals = list(a)
    pos = {name: i for i, name in enumerate(x)}
    idx = sorted(pos[name] for name in z)
    return tuple(bool(vals[i]) for i in idx)


def eval_matrix(d: Dqbf, a: Mapping[str, bool]) -> bool:
    return evaluate(d.matrix, a)


# parsing


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        loc = f"{line}:{column}: " if line else ""
        super().__init__(f"{loc}{message}")


class SemanticError(ParseError):
    pass


_NAME = r"[A-Za-z_][A-Za-z0-9_.\[\]']*"
_GATE_RE = re.compile(rf"^\s*({_NAME})\s*=\s*([a-z]+)\s*\((.*)\)\s*$")
_CALL_RE = re.compile(r"^\s*([a-z]+)\s*\((.*)\)\s*$")


_TOKEN_RE = re.compile(rf"\s*(<->|->|{_NAME}|[()&|^~!,=-])")
_KEYWORDS = {"and": "and", "or": "or", "xor": "xor", "ite": "ite", "not": "not"}


def parse_expr(text: str, atom: Callable[[str, list[str]], Expr] | None = None,
               equality: Callable[[str, str], Expr] | None = None, line: int = 1) -> Expr:
    """Parse an expression in surface syntax.

    Infix: ``~``/``!``/``-`` (not), ``&``, ``^``, ``|``, ``->`` (right
    associative), ``<->``, from tightest to loosest, plus parentheses and the
    constants ``true``/``false``.  The prefix form produced by ``to_text``
    (``and(a, -b)``, ``ite(c, t, e)``) is accepted too.  ``atom`` turns
    ``P(u, v)`` into an expression, ``equality`` handles ``u = v``; without
    them those forms are errors.
    """
    toks: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, pos + 1)
        toks.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    toks.append(("", len(text) + 1))
    i = 0

    def peek() -> str:
        return toks[i][0]

    def take(expected: str | None = None) -> str:
        nonlocal i
        tok, col = toks[i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok or 'end of input'!r}", line, col)
        if not tok:
            raise ParseError("unexpected end of input", line, col)
        i += 1
        return tok

    def args() -> list:
        take("(")
        out = [iff()]
        while peek() == ",":
            take(",")
            out.append(iff())
        take(")")
        return out

    def names() -> list[str]:
        take("(")
        out = []
        if peek() != ")":
            out.append(take())
            while peek() == ",":
                take(",")
                out.append(take())
        take(")")
        return out

    def primary() -> Expr:
        tok, col = toks[i]
        if tok in ("~", "!", "-"):
            take()
            return Not(primary())
        if tok == "(":
            take()
            e = iff()
            take(")")
            return e
        if not tok or not re.fullmatch(_NAME, tok):
            raise ParseError(f"unexpected {tok or 'end of input'!r}", line, col)
        take()
        if tok in _KEYWORDS and peek() == "(":
            xs = args()
            op = _KEYWORDS[tok]
            if op == "not":
                if len(xs) != 1:
                    raise ParseError("not takes one argument", line, col)
                return Not(xs[0])
            if op == "ite":
                if len(xs) != 3:
                    raise ParseError("ite takes three arguments", line, col)
                return Ite(*xs)
            return {"and": And, "or": Or, "xor": Xor}[op](*xs)
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if peek() == "(":
            if atom is None:
                raise ParseError(f"atom {tok}(...) not allowed here", line, col)
            return atom(tok, names())
        if peek() == "=":
            take()
            other = take()
            if equality is None:
                raise ParseError("equality not allowed here", line, col)
            return equality(tok, other)
        return Var(tok)

    def conj() -> Expr:
        xs = [primary()]
        while peek() == "&":
            take()
            xs.append(primary())
        return xs[0] if len(xs) == 1 else And(*xs)

    def xor() -> Expr:
        xs = [conj()]
        while peek() == "^":
            take()
            xs.append(conj())
        return xs[0] if len(xs) == 1 else Xor(*xs)

    def disj() -> Expr:
        xs = [xor()]
        while peek() == "|":
            take()
            xs.append(xor())
        return xs[0] if len(xs) == 1 else Or(*xs)

    def imp() -> Expr:
        a = disj()
        if peek() == "->":
            take()
            return Implies(a, imp())
        return a

    def iff() -> Expr:
        a = imp()
        while peek() == "<->":
            take()
            a = Iff(a, imp())
        return a

    e = iff()
    if peek():
        tok, col = toks[i]
        raise ParseError(f"trailing input at {tok!r}", line, col)
    return e


def parse(text: str, format: str = "circuit") -> Dqbf:
    if format in ("circuit", "dqcir"):
        return _parse_circuit(text)
    if format in ("cnf", "dqdimacs"):
        return _parse_dqdimacs(text)
    raise ValueError(f"unknown format {format!r}")


def _split_args(body: str, lineno: int, col: int) -> list[str]:
    body = body.strip()
    if not body:
        return []
    parts = [p.strip() for p in body.split(",")]
    for p in parts:
        if not p:
            raise ParseError("empty argument", lineno, col)
    return parts


def _parse_circuit(text: str) -> Dqbf:
    lines = text.splitlines()
    universals: list[str] = []
    existentials: list[tuple[str, tuple[str, ...]]] = []
    gates: dict[str, Expr] = {}
    declared: set[str] = set()
    leaves: dict[str, Expr] = {}
    output: Expr | None = None
    header_seen = False

    def ref(token: str, lineno: int, col: int) -> Expr:
        neg = token.startswith("-")
        name = token[1:].strip() if neg else token
        if name in gates:
            e = gates[name]
        elif name in declared:
            e = leaves.setdefault(name, Var(name))
        elif re.fullmatch(_NAME, name):
            raise SemanticError(f"undeclared variable or gate {name!r}", lineno, col)
        else:
            raise ParseError(f"bad reference {token!r}", lineno, col)
        return Not(e) if neg else e

    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        if not header_seen:
            if line.lower().startswith("#dqcir"):
                header_seen = True
                continue
            raise ParseError("expected '#dqcir' header", lineno, col)
        if line.startswith("#"):
            continue
        if output is not None:
            raise ParseError("content after output(...)", lineno, col)
        m = _GATE_RE.match(line)
        if m and m.group(1) not in ("forall", "exists", "output"):
            gname, op, body = m.groups()
            if gname in gates or gname in declared:
                raise SemanticError(f"redefinition of {gname!r}", lineno, col)
            args = [ref(t, lineno, col) for t in _split_args(body, lineno, col)]
            if op == "and":
                e = And(*args)
            elif op == "or":
                e = Or(*args)
            elif op == "xor":
                if not args:
                    raise ParseError("xor needs at least one argument", lineno, col)
                e = Xor(*args)
            elif op == "ite":
                if len(args) != 3:
                    raise ParseError("ite takes three arguments", lineno, col)
                e = Ite(*args)
            elif op == "not":
                if len(args) != 1:
                    raise ParseError("not takes one argument", lineno, col)
                e = Not(args[0])
            else:
                raise ParseError(f"unknown gate operator {op!r}", lineno, col)
            gates[gname] = e
            continue
        m = _CALL_RE.match(line)
        if not m:
            raise ParseError(f"cannot parse line {line!r}", lineno, col)
        kw, body = m.groups()
        if kw == "forall":
            if existentials or gates:
                raise ParseError("forall must precede exists and gates", lineno, col)
            for name in _split_args(body, lineno, col):
                if not re.fullmatch(_NAME, name):
                    raise ParseError(f"bad variable name {name!r}", lineno, col)
                if name in declared:
                    raise SemanticError(f"duplicate declaration of {name!r}", lineno, col)
                declared.add(name)
                universals.append(name)
        elif kw == "exists":
            if gates:
                raise ParseError("exists must precede gates", lineno, col)
            if ";" in body:
                head, deps_s = body.split(";", 1)
            else:
                head, deps_s = body, ""
            name = head.strip()
            if not re.fullmatch(_NAME, name):
                raise ParseError(f"bad variable name {name!r}", lineno, col)
            if name in declared:
                raise SemanticError(f"duplicate declaration of {name!r}", lineno, col)
            deps = _split_args(deps_s, lineno, col)
            for dname in deps:
                if dname not in universals:
                    raise SemanticError(
                        f"dependency {dname!r} of {name!r} is not a declared universal", lineno, col
                    )
            if len(set(deps)) != len(deps):
                raise SemanticError(f"duplicate dependency in {name!r}", lineno, col)
            declared.add(name)
            existentials.append((name, tuple(deps)))
        elif kw == "output":
            args = _split_args(body, lineno, col)
            if len(args) != 1:
                raise ParseError("output takes exactly one reference", lineno, col)
            output = ref(args[0], lineno, col)
        else:
            raise ParseError(f"unknown statement {kw!r}", lineno, col)
    if not header_seen:
        raise ParseError("empty input: expected '#dqcir' header", 1, 1)
    if output is None:
        raise ParseError("missing output(...)", len(lines) or 1, 1)
    return Dqbf(tuple(universals), tuple(existentials), output)


def _parse_dqdimacs(text: str) -> Dqbf:
    nvars = None
    universals: list[str] = []
    existentials: dict[str, tuple[str, ...]] = {}
    order: list[str] = []
    clauses: list[Expr] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if nvars is not None:
                raise ParseError("duplicate problem line", lineno, 1)
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno, 1)
            try:
                nvars = int(toks[2])
                int(toks[3])
            except ValueError:
                raise ParseError("non-integer in problem line", lineno, 1) from None
            continue
        if nvars is None:
            raise ParseError("missing problem line before content", lineno, 1)
        try:
            nums = [int(t) for t in (toks[1:] if toks[0] in ("a", "e", "d") else toks)]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno, 1) from None
        if not nums or nums[-1] != 0:
            raise ParseError("line must be terminated by 0", lineno, len(raw))
        body = nums[:-1]
        for v in body:
            if v == 0 or abs(v) > nvars:
                raise SemanticError(f"variable {v} out of range 1..{nvars}", lineno, 1)
        if toks[0] == "a":
            if clauses:
                raise ParseError("quantifier line after clauses", lineno, 1)
            for v in body:
                name = str(v)
                if name in universals or name in existentials:
                    raise SemanticError(f"duplicate declaration of {v}", lineno, 1)
                universals.append(name)
        elif toks[0] == "e":
            if clauses:
                raise ParseError("quantifier line after clauses", lineno, 1)
            for v in body:
                name = str(v)
                if name in universals or name in existentials:
                    raise SemanticError(f"duplicate declaration of {v}", lineno, 1)
                existentials[name] = tuple(universals)
                order.append(name)
        elif toks[0] == "d":
            if clauses:
                raise ParseError("quantifier line after clauses", lineno, 1)
            if not body:
                raise ParseError("empty dependency line", lineno, 1)
            name = str(body[0])
            if name in universals or name in existentials:
                raise SemanticError(f"duplicate declaration of {body[0]}", lineno, 1)
            deps = tuple(str(v) for v in body[1:])
            for dname in deps:
                if dname not in universals:
                    raise SemanticError(f"dependency {dname} of {name} is not universal", lineno, 1)
            existentials[name] = deps
            order.append(name)
        else:
            lits = []
            for v in body:
                name = str(abs(v))
                if name not in existentials and name not in universals:
                    raise SemanticError(f"clause references undeclared variable {abs(v)}", lineno, 1)
                lits.append(Var(name) if v > 0 else Not(Var(name)))
            clauses.append(Or(*lits))
    if nvars is None:
        raise ParseError("missing problem line", 1, 1)
    shared: dict[str, Expr] = {}
    clauses = [_share_leaves(c, shared) for c in clauses]
    return Dqbf(tuple(universals), tuple((y, existentials[y]) for y in order), And(*clauses))


def _share_leaves(e: Expr, shared: dict[str, Expr]) -> Expr:
    def leaf(v: Expr) -> Expr:
        return shared.setdefault(v.name, v)

    def node(n: Expr, xs: list) -> Expr:
        return Expr(n.op, tuple(xs))

    return fold(e, leaf, node)


def serialize(d: Dqbf, format: str = "circuit") -> str:
    if format in ("circuit", "dqcir"):
        return _serialize_circuit(d)
    if format in ("cnf", "dqdimacs"):
        return _serialize_dqdimacs(d)
    raise ValueError(f"unknown format {format!r}")


def _serialize_circuit(d: Dqbf) -> str:
    out = ["#dqcir"]
    if d.universals:
        out.append(f"forall({', '.join(d.universals)})")
    for y, deps in d.existentials:
        out.append(f"exists({y}; {', '.join(deps)})" if deps else f"exists({y})")
    gate_names: dict[int, str] = {}
    taken = set(d.variables)
    counter = [0]

    def fresh() -> str:
        while True:
            counter[0] += 1
            g = f"g{counter[0]}"
            if g not in taken:
                taken.add(g)
                return g

    # refs are computed bottom-up; a negation of a leaf or of a gate is inlined
    def leaf(v: Expr) -> str:
        return v.name

    def node(n: Expr, xs: list[str]) -> str:
        if n.op == "not" and not n.args[0].op == "not":
            return "-" + xs[0]
        g = fresh()
        gate_names[id(n)] = g
        out.append(f"{g} = {n.op}({', '.join(xs)})")
        return g

    root = fold(d.matrix, leaf, node)
    out.append(f"output({root})")
    return "\n".join(out) + "\n"


def _serialize_dqdimacs(d: Dqbf) -> str:
    ids = {name: i + 1 for i, name in enumerate(d.variables)}
    clauses = cnf_clauses(d.matrix)
    if clauses is None:
        raise ValueError("matrix is not in clause form; use the circuit format")
    out = [f"c {name} -> {ids[name]}" for name in d.variables]
    out.append(f"p cnf {len(ids)} {len(clauses)}")
    if d.universals:
        out.append("a " + " ".join(str(ids[x]) for x in d.universals) + " 0")
    for y, deps in d.existentials:
        out.append(f"d {ids[y]} " + "".join(f"{ids[x]} " for x in deps) + "0")
    for cl in clauses:
        out.append(" ".join(str(ids[n] if pos else -ids[n]) for n, pos in cl) + (" 0" if cl else "0"))
    return "\n".join(out) + "\n"


def cnf_clauses(e: Expr) -> list[list[tuple[str, bool]]] | None:
    """Clause list if ``e`` is a conjunction of disjunctions of literals, else None."""

    def literal(x: Expr):
        if x.op == "var":
            return (x.name, True)
        if x.op == "not" and x.args[0].op == "var":
            return (x.args[0].name, False)
        return None

    def clause(x: Expr):
        lit = literal(x)
        if lit is not None:
            return [lit]
        if x.op == "or":
            lits = [literal(a) for a in x.args]
            return None if any(l is None for l in lits) else lits
        return None

    parts = e.args if e.op == "and" else (e,)
    out = []
    for p in parts:
        c = clause(p)
        if c is None:
            return None
        out.append(c)
    return out
