"""Nonnegative integers stored as the sorted positions of their set bits.

Model counts of DQBFs are routinely doubly exponential, e.g. ``2^(2^64)``,
which no machine integer (and no Python ``int``) can hold.  A count is kept
as a strictly increasing tuple of exponents, each an arbitrary Python int,
so ``0b10100101`` is ``BigCount((0, 2, 5, 7))``.
"""
from __future__ import annotations

import bisect
import heapq
from functools import total_ordering
from typing import Iterable

DECIMAL_BOUND = 4096


class BigCountError(ArithmeticError):
    """Raised on subtraction underflow or an impossible rendering request."""


def _normalize(exponents: Iterable[int]) -> tuple[int, ...]:
    """Collapse a multiset of exponents into canonical form by carrying."""
    heap = list(exponents)
    if not heap:
        return ()
    heapq.heapify(heap)
    out: list[int] = []
    while heap:
        e = heapq.heappop(heap)
        if e < 0:
            raise ValueError(f"negative exponent {e}")
        n = 1
        while heap and heap[0] == e:
            heapq.heappop(heap)
            n += 1
        # n copies of 2^e: bit e is n mod 2, the rest carries upward
        if n & 1:
            out.append(e)
        shift = 1
        n >>= 1
        while n:
            if n & 1:
                heapq.heappush(heap, e + shift)
            n >>= 1
            shift += 1
    return tuple(out)


@total_ordering
class BigCount:
    __slots__ = ("exponents",)

    def __init__(self, exponents: Iterable[int] = ()):
        exps = tuple(exponents)
        if any(b <= a for a, b in zip(exps, exps[1:])):
            exps = _normalize(exps)
        elif exps and exps[0] < 0:
            raise ValueError(f"negative exponent {exps[0]}")
        self.exponents = exps

    # construction

    @classmethod
    def zero(cls) -> BigCount:
        return cls(())

    @classmethod
    def one(cls) -> BigCount:
        return cls((0,))

    @classmethod
    def from_pow2(cls, e: int) -> BigCount:
        return cls((e,))

    @classmethod
    def from_bits(cls, bits: str) -> BigCount:
        """Parse a binary string, most significant bit first."""
        bits = bits.strip().replace("_", "")
        if not bits or any(ch not in "01" for ch in bits):
            raise ValueError(f"not a binary string: {bits!r}")
        return cls(tuple(i for i, ch in enumerate(reversed(bits)) if ch == "1"))

    @classmethod
    def from_int(cls, value: int) -> BigCount:
        if value < 0:
            raise ValueError("BigCount is nonnegative")
        exps = []
        while value:
            low = value & -value
            pos = low.bit_length() - 1
            exps.append(pos)
            value ^= low
        return cls(tuple(exps))

    # inspection

    def is_zero(self) -> bool:
        return not self.exponents

    def is_pow2(self) -> bool:
        return len(self.exponents) == 1

    @property
    def max_exponent(self) -> int | None:
        return self.exponents[-1] if self.exponents else None

    def to_int(self, bound: int | None = DECIMAL_BOUND) -> int:
        if self.exponents and bound is not None and self.exponents[-1] > bound:
            raise BigCountError(
                f"value 2^{self.exponents[-1]}+... exceeds the int conversion bound 2^{bound}"
            )
        return sum(1 << e for e in self.exponents)

    # arithmetic

    def __add__(self, other: BigCount) -> BigCount:
        if not isinstance(other, BigCount):
            return NotImplemented
        if not other.exponents:
            return self
        if not self.exponents:
            return other
        return BigCount(_normalize(self.exponents + other.exponents))

    def __sub__(self, other: BigCount) -> BigCount:
        if not isinstance(other, BigCount):
            return NotImplemented
        if self < other:
            raise BigCountError("subtraction underflow")
        bits = list(self.exponents)
        # subtract one power of two at a time, largest first
        for e in reversed(other.exponents):
            i = bisect.bisect_left(bits, e)
            f = bits.pop(i)
            # 2^f - 2^e = 2^e + 2^(e+1) + ... + 2^(f-1)
            bits[i:i] = range(e, f)
        return BigCount(tuple(bits))

    def __mul__(self, other: BigCount) -> BigCount:
        if not isinstance(other, BigCount):
            return NotImplemented
        if not self.exponents or not other.exponents:
            return BigCount.zero()
        if len(other.exponents) == 1:
            return self.shl(other.exponents[0])
        if len(self.exponents) == 1:
            return other.shl(self.exponents[0])
        return BigCount(_normalize(a + b for a in self.exponents for b in other.exponents))

    def shl(self, e: int) -> BigCount:
        if e < 0:
            raise ValueError("negative shift")
        if e == 0 or not self.exponents:
            return self
        return BigCount(tuple(x + e for x in self.exponents))

    def __pow__(self, k: int) -> BigCount:
        if k < 0:
            raise ValueError("negative power")
        result = BigCount.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def cmp(self, other: BigCount) -> int:
        a, b = self.exponents, other.exponents
        i, j = len(a) - 1, len(b) - 1
        while i >= 0 and j >= 0:
            if a[i] != b[j]:
                return 1 if a[i] > b[j] else -1
            i -= 1
            j -= 1
        if i >= 0:
            return 1
        if j >= 0:
            return -1
        return 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return other >= 0 and self == BigCount.from_int(other)
        if not isinstance(other, BigCount):
            return NotImplemented
        return self.exponents == other.exponents

    def __lt__(self, other: BigCount) -> bool:
        if isinstance(other, int):
            other = BigCount.from_int(other)
        return self.cmp(other) < 0

    def __hash__(self) -> int:
        return hash(self.exponents)

    # rendering

    def format(self, mode: str = "decimal_if_small", bound: int = DECIMAL_BOUND) -> str:
        if not self.exponents:
            return "0"
        if mode == "decimal_if_small":
            if self.exponents[-1] <= bound:
                return str(self.to_int(bound))
            return self.format("log2_summary")
        if mode == "decimal":
            if self.exponents[-1] > bound:
                raise BigCountError(f"decimal rendering above 2^{bound} requested")
            return str(self.to_int(bound))
        if mode == "sparse":
            return " + ".join(f"2^{e}" for e in reversed(self.exponents))
        if mode == "log2_summary":
            return f"≈2^{self.exponents[-1]} ({len(self.exponents)} set bits)"
        raise ValueError(f"unknown format mode {mode!r}")

    def to_json(self, bound: int = DECIMAL_BOUND) -> dict:
        out: dict = {"sparse": list(self.exponents)}
        if not self.exponents or self.exponents[-1] <= bound:
            out["decimal"] = str(self.to_int(bound))
        return out

    def __repr__(self) -> str:
        return f"BigCount({list(self.exponents)})"

    def __str__(self) -> str:
        return self.format()


def product(values: Iterable[BigCount]) -> BigCount:
    out = BigCount.one()
    for v in values:
        out = out * v
    return out
