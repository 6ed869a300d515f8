"""Brute-force model counting, the oracle every other counter is tested against.

The matrix is tabulated once over all assignments with bit-sliced numpy
evaluation (64 assignments per machine word).  Each universal assignment ``a``
then forbids some sign vectors ``b`` on its tuple of cells; those constraints
drive a depth-first enumeration of cell values that abandons a partial tuple
of functions as soon as one of them is violated.  Every tuple of Skolem
functions is still accounted for: cells that no constraint mentions are free
and contribute a factor of two each.
"""
from __future__ import annotations

import itertools
import os

import numpy as np

from .bigcount import BigCount
from .formula import Dqbf, Expr, evaluate, fold
from .limits import Budget, BudgetExceeded, DEFAULT_BUDGET

if os.environ.get("DQCOUNT_PURE") == "1":
    from . import _search_py as _search
else:
    try:
        from . import _search
    except ImportError:
        from . import _search_py as _search

from . import _search_py

__all__ = ["brute_count", "brute_count_naive", "falsifier_masks", "TABLE_BITS_LIMIT"]

TABLE_BITS_LIMIT = 30
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
_PATTERNS = [
    np.uint64(0xAAAAAAAAAAAAAAAA),
    np.uint64(0xCCCCCCCCCCCCCCCC),
    np.uint64(0xF0F0F0F0F0F0F0F0),
    np.uint64(0xFF00FF00FF00FF00),
    np.uint64(0xFFFF0000FFFF0000),
    np.uint64(0xFFFFFFFF00000000),
]
_CHUNK_WORDS = 1 << 14


def _eval_words(e: Expr, bit_of: dict[str, int], w0: int, w1: int) -> np.ndarray:
    """Truth values of ``e`` for assignment indices 64*w0 .. 64*w1-1, packed."""
    nw = w1 - w0
    widx = np.arange(w0, w1, dtype=np.uint64)

    def leaf(v: Expr):
        p = bit_of[v.name]
        if p < 6:
            return np.full(nw, _PATTERNS[p], dtype=np.uint64)
        on = ((widx >> np.uint64(p - 6)) & np.uint64(1)).astype(bool)
        return np.where(on, _ALL, np.uint64(0))

    def node(n: Expr, xs: list):
        op = n.op
        if op == "not":
            return ~xs[0]
        if op == "and":
            r = np.full(nw, _ALL, dtype=np.uint64)
            for x in xs:
                r &= x
            return r
        if op == "or":
            r = np.zeros(nw, dtype=np.uint64)
            for x in xs:
                r |= x
            return r
        if op == "xor":
            r = np.zeros(nw, dtype=np.uint64)
            for x in xs:
                r ^= x
            return r
        c, t, f = xs
        return (c & t) | (~c & f)

    return fold(e, leaf, node)


def falsifier_masks(d: Dqbf) -> np.ndarray:
    """For each universal assignment ``a`` (bit j = universal j), a mask with
    bit ``b`` set iff (a, b) falsifies the matrix (bit i of b = existential i)."""
    n, k = d.n, d.k
    nbits = n + k
    if nbits > TABLE_BITS_LIMIT:
        raise BudgetExceeded(f"truth table of 2^{nbits} rows exceeds the tabulation limit")
    bit_of = {x: j for j, x in enumerate(d.universals)}
    bit_of.update({y: n + i for i, y in enumerate(d.names)})
    dtype = np.uint64 if k <= 6 else object
    forb = np.zeros(1 << n, dtype=dtype)
    total = 1 << nbits
    nwords = max(1, total >> 6)
    size_a = 1 << n
    for w0 in range(0, nwords, _CHUNK_WORDS):
        w1 = min(nwords, w0 + _CHUNK_WORDS)
        words = _eval_words(d.matrix, bit_of, w0, w1)
        bits = np.unpackbits(words.view(np.uint8), bitorder="little").astype(bool)
        r0 = w0 * 64
        r1 = min(total, w1 * 64)
        bad = ~bits[: r1 - r0]
        r = r0
        while r < r1:
            b = r >> n
            a = r & (size_a - 1)
            stop = min(r1, (b + 1) << n)
            seg = bad[r - r0 : stop - r0]
            if seg.any():
                if dtype is object:
                    bit = 1 << b
                    idx = np.nonzero(seg)[0] + a
                    for j in idx:
                        forb[j] |= bit
                else:
                    forb[a : a + len(seg)] |= seg.astype(np.uint64) << np.uint64(b)
            r = stop
    return forb


def _cell_index(a: np.ndarray, positions) -> np.ndarray:
    c = np.zeros(len(a), dtype=np.int64)
    for j, p in enumerate(positions):
        c |= ((a >> p) & 1).astype(np.int64) << j
    return c


def _constraints(d: Dqbf):
    """Deduplicated constraints (global cell ids with -1 for don't-care, mask)."""
    k = d.k
    forb = falsifier_masks(d)
    nz = np.nonzero(forb)[0].astype(np.int64)
    masks = forb[nz]
    offsets = np.cumsum([0] + [1 << len(z) for _, z in d.existentials])
    cells = np.empty((len(nz), k), dtype=np.int64)
    for i in range(k):
        cells[:, i] = offsets[i] + _cell_index(nz, d.dep_positions(i))
    width = 1 << k
    for i in range(k):
        sh = 1 << i
        low = sum(1 << b for b in range(width) if not (b >> i) & 1)
        if masks.dtype == object:
            flipped = np.array([((m & low) << sh) | ((m >> sh) & low) for m in masks], dtype=object)
        else:
            lw = np.uint64(low)
            s = np.uint64(sh)
            flipped = ((masks & lw) << s) | ((masks >> s) & lw)
        cells[flipped == masks, i] = -1
    if masks.dtype == object:
        uniq = sorted({(tuple(int(c) for c in row), int(m)) for row, m in zip(cells, masks)})
        cells = np.array([u[0] for u in uniq], dtype=np.int64).reshape(-1, k)
        masks = np.array([u[1] for u in uniq], dtype=object)
    elif len(masks):
        table = np.concatenate([cells, masks.view(np.int64)[:, None]], axis=1)
        table = np.unique(table, axis=0)
        cells = np.ascontiguousarray(table[:, :k])
        masks = np.ascontiguousarray(table[:, k]).view(np.uint64)
    return cells, masks, int(offsets[-1])


def brute_count(
    d: Dqbf,
    budget: Budget = DEFAULT_BUDGET,
    max_cells: int | None = None,
    max_nodes: int = -1,
    pure: bool = False,
) -> BigCount:
    """Number of tuples of Skolem functions making the matrix a tautology.

    ``max_cells`` (default: the budget's ``brute_cells``) bounds the total
    number of cells the enumeration ranges over.
    """
    limit = budget.brute_cells if max_cells is None else max_cells
    total_cells = sum(1 << len(z) for _, z in d.existentials)
    if total_cells > limit:
        raise BudgetExceeded(f"brute force over {total_cells} cells exceeds the budget of {limit}")
    k = d.k
    cells, masks, ncells = _constraints(d)
    if len(masks) and (cells < 0).all(axis=1).any():
        return BigCount.zero()
    # only constrained cells are searched; order them cell value first so
    # that constraints between functions on equal cells fire early
    used = np.unique(cells[cells >= 0])
    owner = np.searchsorted(np.cumsum([1 << len(z) for _, z in d.existentials]), used, side="right")
    starts = np.array([0] + list(np.cumsum([1 << len(z) for _, z in d.existentials])))
    value = used - starts[owner]
    order = np.lexsort((owner, value))
    used = used[order]
    pos_of = np.full(ncells + 1, -1, dtype=np.int64)
    pos_of[used] = np.arange(len(used))
    pcells = np.where(cells >= 0, pos_of[np.where(cells >= 0, cells, ncells)], -1)
    trigger = pcells.max(axis=1) if len(pcells) else np.zeros(0, dtype=np.int64)
    srt = np.argsort(trigger, kind="stable")
    pcells = np.ascontiguousarray(pcells[srt])
    masks = masks[srt]
    npos = len(used)
    ptr = np.zeros(npos + 1, dtype=np.int64)
    np.cumsum(np.bincount(trigger, minlength=npos), out=ptr[1:])
    engine = _search_py if (pure or k > 6) else _search
    try:
        n = engine.search(npos, ptr, pcells, masks, k, max_nodes, budget.check_time)
    except engine.SearchLimit as exc:
        raise BudgetExceeded(f"brute-force search exceeded {max_nodes} nodes") from exc
    return BigCount.from_int(int(n)).shl(total_cells - npos)


def brute_count_naive(d: Dqbf, max_cells: int = 16) -> int:
    """Literal enumeration of every function tuple against every assignment.

    Exponential in everything; used to validate the tabulated oracle on tiny
    instances.
    """
    widths = [len(z) for _, z in d.existentials]
    total = sum(1 << w for w in widths)
    if total > max_cells:
        raise BudgetExceeded(f"naive enumeration over {total} cells exceeds {max_cells}")
    deps = [d.dep_positions(i) for i in range(d.k)]
    count = 0
    universal_rows = list(itertools.product((False, True), repeat=d.n))
    for bits in itertools.product((False, True), repeat=total):
        funcs = []
        off = 0
        for w in widths:
            funcs.append(bits[off : off + (1 << w)])
            off += 1 << w
        ok = True
        for a in universal_rows:
            env = dict(zip(d.universals, a))
            for i, y in enumerate(d.names):
                c = sum(int(a[p]) << j for j, p in enumerate(deps[i]))
                env[y] = funcs[i][c]
            if not evaluate(d.matrix, env):
                ok = False
                break
        if ok:
            count += 1
    return count
