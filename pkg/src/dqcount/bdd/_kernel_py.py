"""Pure-Python BDD kernel, used when the compiled kernel is unavailable.

Nodes are integers: 0 is the false leaf, 1 the true leaf.  Variable ids are
also their levels, so a fresh variable always sits below every existing one.
The interface mirrors the compiled kernel exactly.
"""
from __future__ import annotations

import sys

FALSE = 0
TRUE = 1
TERMINAL_VAR = 1 << 30

_AND, _OR, _XOR, _NOT, _ITE, _EXISTS, _ANDEX, _COMPOSE, _RESTRICT, _RENAME = range(10)
_CACHE_LIMIT = 1 << 21

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class Kernel:
    compiled = False

    def __init__(self) -> None:
        self._var = [TERMINAL_VAR, TERMINAL_VAR]
        self._lo = [0, 1]
        self._hi = [0, 1]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict[tuple, int] = {}
        self._map: list[int] = []
        self._gen = 0
        self.nvars = 0

    # structure

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars - 1

    def node_count(self) -> int:
        return len(self._var)

    def var_of(self, f: int) -> int:
        return self._var[f]

    def low(self, f: int) -> int:
        return self._lo[f]

    def high(self, f: int) -> int:
        return self._hi[f]

    def mk(self, v: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (v, lo, hi)
        n = self._unique.get(key)
        if n is None:
            n = len(self._var)
            self._var.append(v)
            self._lo.append(lo)
            self._hi.append(hi)
            self._unique[key] = n
        return n

    def ithvar(self, v: int) -> int:
        return self.mk(v, FALSE, TRUE)

    def _remember(self, key: tuple, r: int) -> int:
        cache = self._cache
        if len(cache) > _CACHE_LIMIT:
            cache.clear()
        cache[key] = r
        return r

    def clear_cache(self) -> None:
        self._cache.clear()

    # boolean operations

    def and_(self, f: int, g: int) -> int:
        if f == g:
            return f
        if f == FALSE or g == FALSE:
            return FALSE
        if f == TRUE:
            return g
        if g == TRUE:
            return f
        if f > g:
            f, g = g, f
        key = (_AND, f, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        V = self._var
        vf, vg = V[f], V[g]
        v = vf if vf < vg else vg
        f0, f1 = (self._lo[f], self._hi[f]) if vf == v else (f, f)
        g0, g1 = (self._lo[g], self._hi[g]) if vg == v else (g, g)
        r = self.mk(v, self.and_(f0, g0), self.and_(f1, g1))
        return self._remember(key, r)

    def or_(self, f: int, g: int) -> int:
        if f == g:
            return f
        if f == TRUE or g == TRUE:
            return TRUE
        if f == FALSE:
            return g
        if g == FALSE:
            return f
        if f > g:
            f, g = g, f
        key = (_OR, f, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        V = self._var
        vf, vg = V[f], V[g]
        v = vf if vf < vg else vg
        f0, f1 = (self._lo[f], self._hi[f]) if vf == v else (f, f)
        g0, g1 = (self._lo[g], self._hi[g]) if vg == v else (g, g)
        r = self.mk(v, self.or_(f0, g0), self.or_(f1, g1))
        return self._remember(key, r)

    def xor_(self, f: int, g: int) -> int:
        if f == g:
            return FALSE
        if f == FALSE:
            return g
        if g == FALSE:
            return f
        if f == TRUE:
            return self.not_(g)
        if g == TRUE:
            return self.not_(f)
        if f > g:
            f, g = g, f
        key = (_XOR, f, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        V = self._var
        vf, vg = V[f], V[g]
        v = vf if vf < vg else vg
        f0, f1 = (self._lo[f], self._hi[f]) if vf == v else (f, f)
        g0, g1 = (self._lo[g], self._hi[g]) if vg == v else (g, g)
        r = self.mk(v, self.xor_(f0, g0), self.xor_(f1, g1))
        return self._remember(key, r)

    def not_(self, f: int) -> int:
        if f <= TRUE:
            return 1 - f
        key = (_NOT, f)
        r = self._cache.get(key)
        if r is not None:
            return r
        r = self.mk(self._var[f], self.not_(self._lo[f]), self.not_(self._hi[f]))
        return self._remember(key, r)

    def ite(self, f: int, g: int, h: int) -> int:
        if f == TRUE:
            return g
        if f == FALSE:
            return h
        if g == h:
            return g
        if g == TRUE and h == FALSE:
            return f
        if g == FALSE and h == TRUE:
            return self.not_(f)
        if g == TRUE:
            return self.or_(f, h)
        if h == FALSE:
            return self.and_(f, g)
        key = (_ITE, f, g, h)
        r = self._cache.get(key)
        if r is not None:
            return r
        V, L, H = self._var, self._lo, self._hi
        v = min(V[f], V[g], V[h])
        f0, f1 = (L[f], H[f]) if V[f] == v else (f, f)
        g0, g1 = (L[g], H[g]) if V[g] == v else (g, g)
        h0, h1 = (L[h], H[h]) if V[h] == v else (h, h)
        r = self.mk(v, self.ite(f0, g0, h0), self.ite(f1, g1, h1))
        return self._remember(key, r)

    # quantification and substitution

    def exists(self, f: int, cube: int) -> int:
        """Existentially quantify the variables of the positive cube ``cube``."""
        V = self._var
        while cube > TRUE and V[cube] < V[f]:
            cube = self._hi[cube]
        if f <= TRUE or cube <= TRUE:
            return f
        key = (_EXISTS, f, cube)
        r = self._cache.get(key)
        if r is not None:
            return r
        v = V[f]
        if V[cube] == v:
            nxt = self._hi[cube]
            lo = self.exists(self._lo[f], nxt)
            r = TRUE if lo == TRUE else self.or_(lo, self.exists(self._hi[f], nxt))
        else:
            r = self.mk(v, self.exists(self._lo[f], cube), self.exists(self._hi[f], cube))
        return self._remember(key, r)

    def and_exists(self, f: int, g: int, cube: int) -> int:
        """Relational product: exists cube . f and g."""
        if f == FALSE or g == FALSE:
            return FALSE
        if f == TRUE:
            return self.exists(g, cube)
        if g == TRUE or f == g:
            return self.exists(f, cube)
        if f > g:
            f, g = g, f
        V = self._var
        vf, vg = V[f], V[g]
        v = vf if vf < vg else vg
        while cube > TRUE and V[cube] < v:
            cube = self._hi[cube]
        if cube <= TRUE:
            return self.and_(f, g)
        key = (_ANDEX, f, g, cube)
        r = self._cache.get(key)
        if r is not None:
            return r
        f0, f1 = (self._lo[f], self._hi[f]) if vf == v else (f, f)
        g0, g1 = (self._lo[g], self._hi[g]) if vg == v else (g, g)
        if V[cube] == v:
            nxt = self._hi[cube]
            lo = self.and_exists(f0, g0, nxt)
            r = TRUE if lo == TRUE else self.or_(lo, self.and_exists(f1, g1, nxt))
        else:
            r = self.mk(v, self.and_exists(f0, g0, cube), self.and_exists(f1, g1, cube))
        return self._remember(key, r)

    def restrict(self, f: int, v: int, value: bool) -> int:
        V = self._var
        if V[f] > v:
            return f
        if V[f] == v:
            return self._hi[f] if value else self._lo[f]
        key = (_RESTRICT, f, 2 * v + (1 if value else 0))
        r = self._cache.get(key)
        if r is not None:
            return r
        r = self.mk(V[f], self.restrict(self._lo[f], v, value), self.restrict(self._hi[f], v, value))
        return self._remember(key, r)

    def compose(self, f: int, mapping: list[int]) -> int:
        """Simultaneous substitution: variable ``v`` becomes node ``mapping[v]``.

        ``mapping[v] < 0`` leaves ``v`` untouched.  Works for any target
        order since every level is rebuilt through ``ite``.
        """
        self._gen += 1
        m = list(mapping)
        if len(m) < self.nvars:
            m.extend([-1] * (self.nvars - len(m)))
        self._map = m
        return self._compose(f, self._gen)

    def _compose(self, f: int, gen: int) -> int:
        if f <= TRUE:
            return f
        key = (_COMPOSE, f, gen)
        r = self._cache.get(key)
        if r is not None:
            return r
        v = self._var[f]
        g = self._map[v]
        if g < 0:
            g = self.ithvar(v)
        r = self.ite(g, self._compose(self._hi[f], gen), self._compose(self._lo[f], gen))
        return self._remember(key, r)

    def rename_monotone(self, f: int, mapping: list[int]) -> int:
        """Substitute variables by variables under a map that is strictly
        increasing on the support of ``f``, so nodes can be relabelled in place."""
        self._gen += 1
        m = list(mapping)
        if len(m) < self.nvars:
            m.extend([-1] * (self.nvars - len(m)))
        self._map = m
        return self._rename(f, self._gen)

    def _rename(self, f: int, gen: int) -> int:
        if f <= TRUE:
            return f
        key = (_RENAME, f, gen)
        r = self._cache.get(key)
        if r is not None:
            return r
        v = self._var[f]
        w = self._map[v]
        if w < 0:
            w = v
        r = self.mk(w, self._rename(self._lo[f], gen), self._rename(self._hi[f], gen))
        return self._remember(key, r)
