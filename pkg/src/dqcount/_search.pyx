# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled depth-first search over cell values (see ``_search_py``).

Masks are 64-bit, so at most six cells per constraint.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, int32_t

cnp.import_array()

compiled = True


class SearchLimit(Exception):
    pass


def search(int npos, ptr, cells, masks, int k, long long max_nodes=-1, tick=None):
    if npos == 0:
        return 1
    if k > 6:
        raise ValueError("compiled search supports at most 6 cells per constraint")
    cdef cnp.ndarray[int64_t, ndim=1] P = np.ascontiguousarray(ptr, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=2] C = np.ascontiguousarray(cells, dtype=np.int32).reshape(-1, k)
    cdef cnp.ndarray[uint64_t, ndim=1] M = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] val = np.zeros(npos, dtype=np.int8)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] nxt = np.zeros(npos, dtype=np.int8)
    cdef long long count = 0
    cdef long long nodes = 0
    cdef int p = 0
    cdef int v, i, c, ok
    cdef int64_t j
    cdef uint64_t b
    while p >= 0:
        v = nxt[p]
        if v > 1:
            nxt[p] = 0
            p -= 1
            continue
        nxt[p] = v + 1
        val[p] = v
        nodes += 1
        if max_nodes >= 0 and nodes > max_nodes:
            raise SearchLimit(nodes)
        if tick is not None and (nodes & 0xFFFFF) == 0:
            tick()
        ok = 1
        for j in range(P[p], P[p + 1]):
            b = 0
            for i in range(k):
                c = C[j, i]
                if c >= 0 and val[c]:
                    b |= (<uint64_t>1) << i
            if (M[j] >> b) & 1:
                ok = 0
                break
        if not ok:
            continue
        if p == npos - 1:
            count += 1
        else:
            p += 1
    return count
