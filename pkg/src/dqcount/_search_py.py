"""Pure-Python depth-first search over cell values for the brute-force oracle.

Cells are numbered by search position.  Constraint ``j`` is checked as soon
as its last cell is assigned (all constraints triggered at position ``p`` are
listed in ``ptr[p]:ptr[p+1]``).  It reads up to ``k`` cells (``-1`` = ignored,
read as 0), packs their values into an index ``b`` and fails when bit ``b`` of
``masks[j]`` is set.
"""
from __future__ import annotations

compiled = False


class SearchLimit(Exception):
    pass


def search(npos: int, ptr, cells, masks, k: int, max_nodes: int = -1, tick=None) -> int:
    """Number of 0/1 assignments to positions 0..npos-1 violating no constraint."""
    ptr = [int(x) for x in ptr]
    cells = [[int(c) for c in row] for row in cells]
    masks = [int(m) for m in masks]
    if npos == 0:
        return 1
    groups = [
        [(cells[j], masks[j]) for j in range(ptr[p], ptr[p + 1])] for p in range(npos)
    ]
    val = [0] * npos
    count = 0
    nodes = 0
    p = 0
    nxt = [0] * npos  # next value to try at each position; 2 = exhausted
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
        ok = True
        for cs, m in groups[p]:
            b = 0
            for i in range(k):
                c = cs[i]
                if c >= 0 and val[c]:
                    b |= 1 << i
            if (m >> b) & 1:
                ok = False
                break
        if not ok:
            continue
        if p == npos - 1:
            count += 1
        else:
            p += 1
    return count
