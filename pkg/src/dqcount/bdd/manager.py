"""Manager and function handles on top of a BDD kernel.

Variables are dense ids whose order is the declaration order.  A
:class:`Function` pairs a node with its manager; two handles of one manager
are equal exactly when they denote the same Boolean function.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from ..bigcount import BigCount
from ..formula import Expr, fold

_OPS = ("and", "or", "xor", "iff", "implies", "nand", "nor")


class DdError(ValueError):
    pass


class Function:
    __slots__ = ("mgr", "node")

    def __init__(self, mgr: DdManager, node: int):
        self.mgr = mgr
        self.node = node

    def _other(self, g: Function) -> int:
        if not isinstance(g, Function):
            raise TypeError(f"expected a Function, got {type(g).__name__}")
        if g.mgr is not self.mgr:
            raise DdError("operands belong to different managers")
        return g.node

    def __and__(self, g: Function) -> Function:
        return Function(self.mgr, self.mgr.kernel.and_(self.node, self._other(g)))

    def __or__(self, g: Function) -> Function:
        return Function(self.mgr, self.mgr.kernel.or_(self.node, self._other(g)))

    def __xor__(self, g: Function) -> Function:
        return Function(self.mgr, self.mgr.kernel.xor_(self.node, self._other(g)))

    def __invert__(self) -> Function:
        return Function(self.mgr, self.mgr.kernel.not_(self.node))

    def implies(self, g: Function) -> Function:
        k = self.mgr.kernel
        return Function(self.mgr, k.or_(k.not_(self.node), self._other(g)))

    def iff(self, g: Function) -> Function:
        k = self.mgr.kernel
        return Function(self.mgr, k.not_(k.xor_(self.node, self._other(g))))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Function):
            return NotImplemented
        return self.mgr is other.mgr and self.node == other.node

    def __hash__(self) -> int:
        return hash((id(self.mgr), self.node))

    def __bool__(self):
        raise TypeError("use is_false/is_true or Function equality, not truthiness")

    @property
    def is_false(self) -> bool:
        return self.node == 0

    @property
    def is_true(self) -> bool:
        return self.node == 1

    def __repr__(self) -> str:
        if self.node <= 1:
            return f"Function({bool(self.node)})"
        return f"Function(node={self.node}, var={self.mgr.kernel.var_of(self.node)})"


class DdManager:
    """Owns one kernel, its variable order and name table."""

    def __init__(self, kernel=None):
        if kernel is None:
            from . import Kernel

            kernel = Kernel()
        self.kernel = kernel
        self.names: list[str] = []
        self._ids: dict[str, int] = {}
        self.true = Function(self, 1)
        self.false = Function(self, 0)

    # variables

    def declare(self, name: str | None = None) -> int:
        v = self.kernel.new_var()
        if name is None:
            name = f"v{v}"
        if name in self._ids:
            raise DdError(f"variable {name!r} already declared")
        self._ids[name] = v
        self.names.append(name)
        return v

    def declare_many(self, names: Iterable[str]) -> list[int]:
        return [self.declare(n) for n in names]

    @property
    def nvars(self) -> int:
        return self.kernel.nvars

    def id_of(self, name: str) -> int:
        return self._ids[name]

    def var(self, v: int | str) -> Function:
        if isinstance(v, str):
            v = self._ids[v]
        if not 0 <= v < self.kernel.nvars:
            raise DdError(f"undeclared variable id {v}")
        return Function(self, self.kernel.ithvar(v))

    def wrap(self, node: int) -> Function:
        return Function(self, node)

    def cube(self, vars: Iterable[int]) -> int:
        """Kernel node of the positive conjunction of ``vars``."""
        k = self.kernel
        node = 1
        for v in sorted(set(vars), reverse=True):
            node = k.mk(v, 0, node)
        return node

    def minterm(self, values: Mapping[int, bool]) -> Function:
        k = self.kernel
        node = 1
        for v in sorted(values, reverse=True):
            node = k.mk(v, node, 0) if not values[v] else k.mk(v, 0, node)
        return Function(self, node)

    def reorder(self, order=None) -> bool:
        """Hook for dynamic reordering.  The static order is kept; returns False."""
        return False

    def _check(self, *fs: Function) -> None:
        for f in fs:
            if not isinstance(f, Function):
                raise TypeError(f"expected a Function, got {type(f).__name__}")
            if f.mgr is not self:
                raise DdError("operand belongs to a different manager")

    # construction

    def build(self, e: Expr, var_map: Mapping[str, int | Function]) -> Function:
        """Diagram of ``e`` with each leaf replaced by a variable id or a Function."""
        k = self.kernel

        def leaf(v: Expr) -> int:
            try:
                target = var_map[v.name]
            except KeyError:
                raise DdError(f"unmapped variable {v.name!r}") from None
            if isinstance(target, Function):
                self._check(target)
                return target.node
            return k.ithvar(target)

        def node(n: Expr, xs: list[int]) -> int:
            op = n.op
            if op == "not":
                return k.not_(xs[0])
            if op == "and":
                r = 1
                for x in xs:
                    r = k.and_(r, x)
                    if r == 0:
                        break
                return r
            if op == "or":
                r = 0
                for x in xs:
                    r = k.or_(r, x)
                    if r == 1:
                        break
                return r
            if op == "xor":
                r = 0
                for x in xs:
                    r = k.xor_(r, x)
                return r
            return k.ite(xs[0], xs[1], xs[2])

        return Function(self, fold(e, leaf, node))

    def combine(self, op: str, f: Function, g: Function) -> Function:
        self._check(f, g)
        k = self.kernel
        if op == "and":
            n = k.and_(f.node, g.node)
        elif op == "or":
            n = k.or_(f.node, g.node)
        elif op == "xor":
            n = k.xor_(f.node, g.node)
        elif op == "iff":
            n = k.not_(k.xor_(f.node, g.node))
        elif op == "implies":
            n = k.or_(k.not_(f.node), g.node)
        elif op == "nand":
            n = k.not_(k.and_(f.node, g.node))
        elif op == "nor":
            n = k.not_(k.or_(f.node, g.node))
        else:
            raise DdError(f"unknown operator {op!r}; expected one of {_OPS}")
        return Function(self, n)

    def negate(self, f: Function) -> Function:
        self._check(f)
        return Function(self, self.kernel.not_(f.node))

    def ite(self, f: Function, g: Function, h: Function) -> Function:
        self._check(f, g, h)
        return Function(self, self.kernel.ite(f.node, g.node, h.node))

    def conj(self, fs: Iterable[Function]) -> Function:
        k = self.kernel
        r = 1
        for f in fs:
            self._check(f)
            r = k.and_(r, f.node)
            if r == 0:
                break
        return Function(self, r)

    def disj(self, fs: Iterable[Function]) -> Function:
        k = self.kernel
        r = 0
        for f in fs:
            self._check(f)
            r = k.or_(r, f.node)
            if r == 1:
                break
        return Function(self, r)

    # quantification and substitution

    def exists(self, f: Function, vars: Iterable[int]) -> Function:
        self._check(f)
        return Function(self, self.kernel.exists(f.node, self.cube(vars)))

    def forall(self, f: Function, vars: Iterable[int]) -> Function:
        self._check(f)
        k = self.kernel
        return Function(self, k.not_(k.exists(k.not_(f.node), self.cube(vars))))

    def and_exists(self, f: Function, g: Function, vars: Iterable[int]) -> Function:
        self._check(f, g)
        return Function(self, self.kernel.and_exists(f.node, g.node, self.cube(vars)))

    def rename(self, f: Function, mapping: Mapping[int, int]) -> Function:
        """Substitute variable ``v`` by variable ``mapping[v]`` simultaneously.

        Raises on collisions: two sources mapped to one target, or a target
        that is also a variable of ``f`` left in place.
        """
        self._check(f)
        mapping = {s: t for s, t in mapping.items() if s != t}
        if not mapping:
            return f
        targets = list(mapping.values())
        if len(set(targets)) != len(targets):
            raise DdError("rename collision: two sources map to one target")
        sup = self.support(f)
        moved = {s for s in mapping if s in sup}
        if not moved:
            return f
        for t in targets:
            if t in sup and t not in mapping:
                raise DdError(f"rename collision: target {t} is a live variable not being renamed")
        table = [-1] * self.kernel.nvars
        for s, t in mapping.items():
            table[s] = t
        # relabel in place when the map keeps the support order
        image = [(v, mapping.get(v, v)) for v in sorted(sup)]
        if all(a[1] < b[1] for a, b in zip(image, image[1:])):
            return Function(self, self.kernel.rename_monotone(f.node, table))
        table = [self.kernel.ithvar(t) if t >= 0 else -1 for t in table]
        return Function(self, self.kernel.compose(f.node, table))

    def compose(self, f: Function, mapping: Mapping[int, Function]) -> Function:
        """Simultaneous substitution of variables by functions."""
        self._check(f, *mapping.values())
        table = [-1] * self.kernel.nvars
        for v, g in mapping.items():
            table[v] = g.node
        return Function(self, self.kernel.compose(f.node, table))

    def cofactor(self, f: Function, var: int, value: bool) -> Function:
        self._check(f)
        return Function(self, self.kernel.restrict(f.node, var, bool(value)))

    def restrict(self, f: Function, values: Mapping[int, bool]) -> Function:
        self._check(f)
        node = f.node
        for v, b in values.items():
            node = self.kernel.restrict(node, v, bool(b))
        return Function(self, node)

    # inspection

    def _nodes(self, root: int) -> list[int]:
        """Internal nodes reachable from ``root`` in children-first order."""
        k = self.kernel
        seen: set[int] = set()
        order: list[int] = []
        stack = [(root, False)]
        while stack:
            n, done = stack.pop()
            if n <= 1:
                continue
            if done:
                order.append(n)
                continue
            if n in seen:
                continue
            seen.add(n)
            stack.append((n, True))
            stack.append((k.high(n), False))
            stack.append((k.low(n), False))
        return order

    def support(self, f: Function) -> set[int]:
        self._check(f)
        k = self.kernel
        return {k.var_of(n) for n in self._nodes(f.node)}

    def dag_size(self, f: Function) -> int:
        self._check(f)
        return len(self._nodes(f.node))

    def is_sat(self, f: Function) -> bool:
        self._check(f)
        return f.node != 0

    def count_int(self, f: Function, universe: Iterable[int]) -> int:
        """Number of assignments to ``universe`` satisfying ``f``, as a Python int."""
        self._check(f)
        U = sorted(set(universe))
        pos = {v: i for i, v in enumerate(U)}
        width = len(U)
        k = self.kernel
        if f.node <= 1:
            return f.node << width
        nodes = self._nodes(f.node)
        counts: dict[int, int] = {0: 0, 1: 1}
        level: dict[int, int] = {0: width, 1: width}
        for n in nodes:
            v = k.var_of(n)
            p = pos.get(v)
            if p is None:
                raise DdError(f"support variable {v} escapes the counting universe")
            lo, hi = k.low(n), k.high(n)
            counts[n] = (counts[lo] << (level[lo] - p - 1)) + (counts[hi] << (level[hi] - p - 1))
            level[n] = p
        return counts[f.node] << level[f.node]

    def count_models(self, f: Function, universe: Iterable[int]) -> BigCount:
        return BigCount.from_int(self.count_int(f, universe))

    def pick_cube(self, f: Function) -> dict[int, bool]:
        """One satisfying path; variables off the path are free.  Prefers low edges."""
        self._check(f)
        if f.node == 0:
            raise DdError("pick_cube on the false function")
        k = self.kernel
        out: dict[int, bool] = {}
        n = f.node
        while n > 1:
            v = k.var_of(n)
            lo = k.low(n)
            if lo != 0:
                out[v] = False
                n = lo
            else:
                out[v] = True
                n = k.high(n)
        return out

    def pick_minterm(self, f: Function, vars: Iterable[int]) -> dict[int, bool]:
        """A total assignment over ``vars`` (free ones set to False) satisfying f."""
        cube = self.pick_cube(f)
        return {v: cube.get(v, False) for v in vars}

    def evaluate(self, f: Function, values: Mapping[int, bool]) -> bool:
        self._check(f)
        k = self.kernel
        n = f.node
        while n > 1:
            n = k.high(n) if values.get(k.var_of(n), False) else k.low(n)
        return n == 1

    def to_dot(self, f: Function, name: str = "bdd") -> str:
        self._check(f)
        k = self.kernel
        lines = [f"digraph {name} {{", '  n0 [shape=box,label="0"];', '  n1 [shape=box,label="1"];']
        for n in self._nodes(f.node):
            v = k.var_of(n)
            label = self.names[v] if v < len(self.names) else f"v{v}"
            lines.append(f'  n{n} [label="{label}"];')
            lines.append(f"  n{n} -> n{k.low(n)} [style=dashed];")
            lines.append(f"  n{n} -> n{k.high(n)};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def node_count(self) -> int:
        return self.kernel.node_count()
