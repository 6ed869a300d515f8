# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled BDD kernel: node arrays, open-addressing unique table, lossy cache.

Same interface and node numbering as the pure-Python kernel.
"""
from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport uint64_t

cdef enum:
    NIL = -1

cdef int TERMINAL = 1 << 30

FALSE = 0
TRUE = 1
TERMINAL_VAR = 1 << 30

cdef enum:
    OP_AND = 1
    OP_OR = 2
    OP_XOR = 3
    OP_NOT = 4
    OP_ITE = 5
    OP_EXISTS = 6
    OP_ANDEX = 7
    OP_COMPOSE = 8
    OP_RESTRICT = 9
    OP_RENAME = 10

cdef struct Entry:
    int op
    int a
    int b
    int c
    int r

cdef inline uint64_t mix(uint64_t h) nogil:
    h ^= h >> 33
    h *= 0xff51afd7ed558ccdULL
    h ^= h >> 33
    h *= 0xc4ceb9fe1a85ec53ULL
    h ^= h >> 33
    return h

cdef inline uint64_t hash3(int a, int b, int c) nogil:
    return mix((<uint64_t>a) * 0x9E3779B97F4A7C15ULL ^ (<uint64_t>b) * 0xC2B2AE3D27D4EB4FULL ^ (<uint64_t>c))

cdef inline uint64_t hash4(int op, int a, int b, int c) nogil:
    return mix(hash3(a, b, c) ^ (<uint64_t>op) * 0x165667B19E3779F9ULL)


cdef class Kernel:
    cdef int* _var
    cdef int* _lo
    cdef int* _hi
    cdef int _n
    cdef int _cap
    cdef int* _table
    cdef uint64_t _tmask
    cdef Entry* _cache
    cdef uint64_t _cmask
    cdef int* _map
    cdef int _maplen
    cdef int _gen
    cdef public int nvars
    compiled = True

    def __cinit__(self):
        self._cap = 1 << 16
        self._var = <int*>malloc(self._cap * sizeof(int))
        self._lo = <int*>malloc(self._cap * sizeof(int))
        self._hi = <int*>malloc(self._cap * sizeof(int))
        if not self._var or not self._lo or not self._hi:
            raise MemoryError()
        self._var[0] = TERMINAL
        self._var[1] = TERMINAL
        self._lo[0] = 0
        self._hi[0] = 0
        self._lo[1] = 1
        self._hi[1] = 1
        self._n = 2
        self._table = NULL
        self._cache = NULL
        self._map = NULL
        self._maplen = 0
        self._gen = 0
        self.nvars = 0
        self._alloc_table(1 << 17)
        self._alloc_cache(1 << 16)

    def __dealloc__(self):
        free(self._var)
        free(self._lo)
        free(self._hi)
        free(self._table)
        free(self._cache)
        free(self._map)

    cdef int _alloc_table(self, uint64_t size) except -1:
        cdef uint64_t i, h
        cdef int n
        free(self._table)
        self._table = <int*>malloc(size * sizeof(int))
        if not self._table:
            raise MemoryError()
        for i in range(size):
            self._table[i] = NIL
        self._tmask = size - 1
        for n in range(2, self._n):
            h = hash3(self._var[n], self._lo[n], self._hi[n]) & self._tmask
            while self._table[h] != NIL:
                h = (h + 1) & self._tmask
            self._table[h] = n
        return 0

    cdef int _alloc_cache(self, uint64_t size) except -1:
        cdef uint64_t i
        free(self._cache)
        self._cache = <Entry*>malloc(size * sizeof(Entry))
        if not self._cache:
            raise MemoryError()
        for i in range(size):
            self._cache[i].op = 0
        self._cmask = size - 1
        return 0

    def clear_cache(self):
        cdef uint64_t i
        for i in range(self._cmask + 1):
            self._cache[i].op = 0

    # structure

    def new_var(self):
        self.nvars += 1
        return self.nvars - 1

    def node_count(self):
        return self._n

    def var_of(self, int f):
        return self._var[f]

    def low(self, int f):
        return self._lo[f]

    def high(self, int f):
        return self._hi[f]

    def mk(self, int v, int lo, int hi):
        return self._mk(v, lo, hi)

    def ithvar(self, int v):
        return self._mk(v, 0, 1)

    cdef int _mk(self, int v, int lo, int hi) except -1:
        cdef uint64_t h
        cdef int n
        if lo == hi:
            return lo
        h = hash3(v, lo, hi) & self._tmask
        while True:
            n = self._table[h]
            if n == NIL:
                break
            if self._var[n] == v and self._lo[n] == lo and self._hi[n] == hi:
                return n
            h = (h + 1) & self._tmask
        if self._n >= self._cap:
            if self._cap >= (1 << 30):
                raise MemoryError("BDD node table full")
            self._cap *= 2
            self._var = <int*>realloc(self._var, self._cap * sizeof(int))
            self._lo = <int*>realloc(self._lo, self._cap * sizeof(int))
            self._hi = <int*>realloc(self._hi, self._cap * sizeof(int))
            if not self._var or not self._lo or not self._hi:
                raise MemoryError()
        n = self._n
        self._n += 1
        self._var[n] = v
        self._lo[n] = lo
        self._hi[n] = hi
        self._table[h] = n
        if <uint64_t>self._n * 2 > self._tmask:
            self._alloc_table((self._tmask + 1) * 2)
            if (self._cmask + 1) < (1 << 24) and <uint64_t>self._n > (self._cmask + 1):
                self._alloc_cache((self._cmask + 1) * 4)
        return n

    cdef inline int _lookup(self, int op, int a, int b, int c):
        cdef Entry* e = &self._cache[hash4(op, a, b, c) & self._cmask]
        if e.op == op and e.a == a and e.b == b and e.c == c:
            return e.r
        return NIL

    cdef inline void _store(self, int op, int a, int b, int c, int r):
        cdef Entry* e = &self._cache[hash4(op, a, b, c) & self._cmask]
        e.op = op
        e.a = a
        e.b = b
        e.c = c
        e.r = r

    # boolean operations

    def and_(self, int f, int g):
        return self._and(f, g)

    def or_(self, int f, int g):
        return self._or(f, g)

    def xor_(self, int f, int g):
        return self._xor(f, g)

    def not_(self, int f):
        return self._not(f)

    def ite(self, int f, int g, int h):
        return self._ite(f, g, h)

    cdef int _and(self, int f, int g) except -1:
        cdef int r, v, vf, vg, f0, f1, g0, g1, t
        if f == g:
            return f
        if f == 0 or g == 0:
            return 0
        if f == 1:
            return g
        if g == 1:
            return f
        if f > g:
            t = f; f = g; g = t
        r = self._lookup(OP_AND, f, g, 0)
        if r != NIL:
            return r
        vf = self._var[f]
        vg = self._var[g]
        v = vf if vf < vg else vg
        if vf == v:
            f0 = self._lo[f]; f1 = self._hi[f]
        else:
            f0 = f; f1 = f
        if vg == v:
            g0 = self._lo[g]; g1 = self._hi[g]
        else:
            g0 = g; g1 = g
        f0 = self._and(f0, g0)
        f1 = self._and(f1, g1)
        r = self._mk(v, f0, f1)
        self._store(OP_AND, f, g, 0, r)
        return r

    cdef int _or(self, int f, int g) except -1:
        cdef int r, v, vf, vg, f0, f1, g0, g1, t
        if f == g:
            return f
        if f == 1 or g == 1:
            return 1
        if f == 0:
            return g
        if g == 0:
            return f
        if f > g:
            t = f; f = g; g = t
        r = self._lookup(OP_OR, f, g, 0)
        if r != NIL:
            return r
        vf = self._var[f]
        vg = self._var[g]
        v = vf if vf < vg else vg
        if vf == v:
            f0 = self._lo[f]; f1 = self._hi[f]
        else:
            f0 = f; f1 = f
        if vg == v:
            g0 = self._lo[g]; g1 = self._hi[g]
        else:
            g0 = g; g1 = g
        f0 = self._or(f0, g0)
        f1 = self._or(f1, g1)
        r = self._mk(v, f0, f1)
        self._store(OP_OR, f, g, 0, r)
        return r

    cdef int _xor(self, int f, int g) except -1:
        cdef int r, v, vf, vg, f0, f1, g0, g1, t
        if f == g:
            return 0
        if f == 0:
            return g
        if g == 0:
            return f
        if f == 1:
            return self._not(g)
        if g == 1:
            return self._not(f)
        if f > g:
            t = f; f = g; g = t
        r = self._lookup(OP_XOR, f, g, 0)
        if r != NIL:
            return r
        vf = self._var[f]
        vg = self._var[g]
        v = vf if vf < vg else vg
        if vf == v:
            f0 = self._lo[f]; f1 = self._hi[f]
        else:
            f0 = f; f1 = f
        if vg == v:
            g0 = self._lo[g]; g1 = self._hi[g]
        else:
            g0 = g; g1 = g
        f0 = self._xor(f0, g0)
        f1 = self._xor(f1, g1)
        r = self._mk(v, f0, f1)
        self._store(OP_XOR, f, g, 0, r)
        return r

    cdef int _not(self, int f) except -1:
        cdef int r, lo, hi
        if f <= 1:
            return 1 - f
        r = self._lookup(OP_NOT, f, 0, 0)
        if r != NIL:
            return r
        lo = self._not(self._lo[f])
        hi = self._not(self._hi[f])
        r = self._mk(self._var[f], lo, hi)
        self._store(OP_NOT, f, 0, 0, r)
        return r

    cdef int _ite(self, int f, int g, int h) except -1:
        cdef int r, v, f0, f1, g0, g1, h0, h1
        if f == 1:
            return g
        if f == 0:
            return h
        if g == h:
            return g
        if g == 1 and h == 0:
            return f
        if g == 0 and h == 1:
            return self._not(f)
        if g == 1:
            return self._or(f, h)
        if h == 0:
            return self._and(f, g)
        r = self._lookup(OP_ITE, f, g, h)
        if r != NIL:
            return r
        v = self._var[f]
        if self._var[g] < v:
            v = self._var[g]
        if self._var[h] < v:
            v = self._var[h]
        if self._var[f] == v:
            f0 = self._lo[f]; f1 = self._hi[f]
        else:
            f0 = f; f1 = f
        if self._var[g] == v:
            g0 = self._lo[g]; g1 = self._hi[g]
        else:
            g0 = g; g1 = g
        if self._var[h] == v:
            h0 = self._lo[h]; h1 = self._hi[h]
        else:
            h0 = h; h1 = h
        f0 = self._ite(f0, g0, h0)
        f1 = self._ite(f1, g1, h1)
        r = self._mk(v, f0, f1)
        self._store(OP_ITE, f, g, h, r)
        return r

    # quantification and substitution

    def exists(self, int f, int cube):
        return self._exists(f, cube)

    def and_exists(self, int f, int g, int cube):
        return self._and_exists(f, g, cube)

    def restrict(self, int f, int v, value):
        return self._restrict(f, v, 1 if value else 0)

    cdef int _exists(self, int f, int cube) except -1:
        cdef int r, v, lo, hi, nxt
        while cube > 1 and self._var[cube] < self._var[f]:
            cube = self._hi[cube]
        if f <= 1 or cube <= 1:
            return f
        r = self._lookup(OP_EXISTS, f, cube, 0)
        if r != NIL:
            return r
        v = self._var[f]
        if self._var[cube] == v:
            nxt = self._hi[cube]
            lo = self._exists(self._lo[f], nxt)
            if lo == 1:
                r = 1
            else:
                hi = self._exists(self._hi[f], nxt)
                r = self._or(lo, hi)
        else:
            lo = self._exists(self._lo[f], cube)
            hi = self._exists(self._hi[f], cube)
            r = self._mk(v, lo, hi)
        self._store(OP_EXISTS, f, cube, 0, r)
        return r

    cdef int _and_exists(self, int f, int g, int cube) except -1:
        cdef int r, v, vf, vg, f0, f1, g0, g1, lo, hi, nxt, t
        if f == 0 or g == 0:
            return 0
        if f == 1:
            return self._exists(g, cube)
        if g == 1 or f == g:
            return self._exists(f, cube)
        if f > g:
            t = f; f = g; g = t
        vf = self._var[f]
        vg = self._var[g]
        v = vf if vf < vg else vg
        while cube > 1 and self._var[cube] < v:
            cube = self._hi[cube]
        if cube <= 1:
            return self._and(f, g)
        r = self._lookup(OP_ANDEX, f, g, cube)
        if r != NIL:
            return r
        if vf == v:
            f0 = self._lo[f]; f1 = self._hi[f]
        else:
            f0 = f; f1 = f
        if vg == v:
            g0 = self._lo[g]; g1 = self._hi[g]
        else:
            g0 = g; g1 = g
        if self._var[cube] == v:
            nxt = self._hi[cube]
            lo = self._and_exists(f0, g0, nxt)
            if lo == 1:
                r = 1
            else:
                hi = self._and_exists(f1, g1, nxt)
                r = self._or(lo, hi)
        else:
            lo = self._and_exists(f0, g0, cube)
            hi = self._and_exists(f1, g1, cube)
            r = self._mk(v, lo, hi)
        self._store(OP_ANDEX, f, g, cube, r)
        return r

    cdef int _restrict(self, int f, int v, int value) except -1:
        cdef int r, lo, hi
        if self._var[f] > v:
            return f
        if self._var[f] == v:
            return self._hi[f] if value else self._lo[f]
        r = self._lookup(OP_RESTRICT, f, v, value)
        if r != NIL:
            return r
        lo = self._restrict(self._lo[f], v, value)
        hi = self._restrict(self._hi[f], v, value)
        r = self._mk(self._var[f], lo, hi)
        self._store(OP_RESTRICT, f, v, value, r)
        return r

    cdef int _set_map(self, mapping) except -1:
        cdef int i, n = len(mapping)
        cdef int size = n if n > self.nvars else self.nvars
        free(self._map)
        self._map = <int*>malloc((size + 1) * sizeof(int))
        if not self._map:
            raise MemoryError()
        for i in range(size):
            self._map[i] = mapping[i] if i < n else -1
        self._maplen = size
        self._gen += 1
        return 0

    def compose(self, int f, mapping):
        self._set_map(mapping)
        return self._compose(f, self._gen)

    def rename_monotone(self, int f, mapping):
        self._set_map(mapping)
        return self._rename(f, self._gen)

    cdef int _compose(self, int f, int gen) except -1:
        cdef int r, v, g, lo, hi
        if f <= 1:
            return f
        r = self._lookup(OP_COMPOSE, f, gen, 0)
        if r != NIL:
            return r
        v = self._var[f]
        g = self._map[v] if v < self._maplen else -1
        if g < 0:
            g = self._mk(v, 0, 1)
        hi = self._compose(self._hi[f], gen)
        lo = self._compose(self._lo[f], gen)
        r = self._ite(g, hi, lo)
        self._store(OP_COMPOSE, f, gen, 0, r)
        return r

    cdef int _rename(self, int f, int gen) except -1:
        cdef int r, v, w, lo, hi
        if f <= 1:
            return f
        r = self._lookup(OP_RENAME, f, gen, 0)
        if r != NIL:
            return r
        v = self._var[f]
        w = self._map[v] if v < self._maplen else -1
        if w < 0:
            w = v
        lo = self._rename(self._lo[f], gen)
        hi = self._rename(self._hi[f], gen)
        r = self._mk(w, lo, hi)
        self._store(OP_RENAME, f, gen, 0, r)
        return r
