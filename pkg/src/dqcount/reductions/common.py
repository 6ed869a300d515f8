"""Small expression builders shared by the reductions."""
from __future__ import annotations

from ..formula import And, Expr, Iff, Not, Var


def fresh(name: str, taken: set[str]) -> str:
    """``name`` or a primed variant not in ``taken``; the result is added to it."""
    out = name
    while out in taken:
        out += "'"
    taken.add(out)
    return out


def index_width(m: int) -> int:
    """Bits needed for m distinct indices (0 for m <= 1)."""
    return (m - 1).bit_length() if m > 1 else 0


def equal(a: list[str], b: list[str]) -> Expr:
    return And(*[Iff(Var(x), Var(y)) for x, y in zip(a, b)])


def has_value(bits: list[str], value: int) -> Expr:
    """Little-endian bit vector ``bits`` equals ``value``."""
    return And(*[Var(b) if (value >> j) & 1 else Not(Var(b)) for j, b in enumerate(bits)])
