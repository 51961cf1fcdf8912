"""GF(2**64) modulo the irreducible ``x**64 + x**4 + x**3 + x + 1``.

Reduction of a 128-bit carry-less product needs one extra carry-less
multiplication by the low part ``r = 27`` plus a lookup in a 16-entry
table: the high part of ``(x >> 64) * r`` has degree at most 3, and
``w * x**64 mod p`` has degree at most 7 for those ``w``.
"""

from __future__ import annotations

from .clbits import MASK64, cl_divmod, clmul64

R = 27
P = (1 << 64) ^ R

# w * 2**64 mod P for w in 0..15
MEMO_TABLE = (0, 27, 54, 45, 108, 119, 90, 65, 216, 195, 238, 245, 180, 175, 130, 153)


class MemoTableError(AssertionError):
    pass


def derive_memo_table() -> tuple[int, ...]:
    """Recompute the reduction table with long division."""
    return tuple(cl_divmod(clmul64(w, 1 << 64), P).remainder for w in range(16))


def check_memo_table(table=MEMO_TABLE) -> None:
    derived = derive_memo_table()
    if tuple(table) != derived:
        raise MemoTableError(f"memo table {tuple(table)} != derived {derived}")


def reduce128(x: int, table=MEMO_TABLE) -> int:
    """Reduce a 128-bit polynomial modulo ``P``."""
    z = clmul64(x >> 64, R)
    return (x & MASK64) ^ (z & MASK64) ^ table[z >> 64]


def gf64_mul(a: int, b: int) -> int:
    return reduce128(clmul64(a, b))


def gf64_pow(a: int, e: int) -> int:
    result = 1
    while e:
        if e & 1:
            result = gf64_mul(result, a)
        a = gf64_mul(a, a)
        e >>= 1
    return result
