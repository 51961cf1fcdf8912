"""Carry-less (GF(2)[x]) arithmetic on Python integers.

Bit ``i`` of an integer is the coefficient of ``x**i``.  Addition is XOR,
multiplication is the carry-less product.  Everything here is written for
clarity first; the compiled kernels in :mod:`clhash._kernels` are checked
against these functions.
"""

from __future__ import annotations

from typing import NamedTuple

MASK64 = (1 << 64) - 1
MASK128 = (1 << 128) - 1


class DivModResult(NamedTuple):
    quotient: int
    remainder: int


def degree(x: int) -> int:
    """Index of the most significant set bit; ``degree(0) == -1``."""
    return x.bit_length() - 1


def clmul_eq2(a: int, b: int) -> int:
    """Carry-less product evaluated coefficient by coefficient.

    Bit ``i`` of the result is the XOR over ``k`` of ``a[i-k] & b[k]``.
    Quadratic in the bit width; only meant as a test oracle.
    """
    if a == 0 or b == 0:
        return 0
    na, nb = a.bit_length(), b.bit_length()
    result = 0
    for i in range(na + nb - 1):
        bit = 0
        for k in range(max(0, i - na + 1), min(i, nb - 1) + 1):
            bit ^= (a >> (i - k)) & (b >> k) & 1
        result |= bit << i
    return result


def clmul_bitloop(a: int, b: int) -> int:
    """Shift-and-XOR carry-less product, one iteration per set bit of ``b``.

    Works for operands of any width.  This is the slow multiplier used by
    the reference evaluator and the division oracle.
    """
    result = 0
    shift = 0
    while b:
        if b & 1:
            result ^= a << shift
        b >>= 1
        shift += 1
    return result


def _window_table(a: int) -> list[int]:
    a2 = a << 1
    a4 = a << 2
    a8 = a << 3
    a3 = a2 ^ a
    a5 = a4 ^ a
    a6 = a4 ^ a2
    a7 = a6 ^ a
    return [
        0, a, a2, a3, a4, a5, a6, a7,
        a8, a8 ^ a, a8 ^ a2, a8 ^ a3, a8 ^ a4, a8 ^ a5, a8 ^ a6, a8 ^ a7,
    ]


def clmul64(a: int, b: int) -> int:
    """Carry-less product of two 64-bit polynomials (128-bit result).

    Portable path: 4-bit windows over the smaller operand with a 16-entry
    table of multiples of the larger one.
    """
    if a < b:
        a, b = b, a
    if b == 0:
        return 0
    table = _window_table(a)
    result = 0
    shift = 0
    while b:
        result ^= table[b & 15] << shift
        b >>= 4
        shift += 4
    return result


def clmul128(a: int, b: int) -> int:
    """256-bit carry-less product of two 128-bit polynomials.

    Schoolbook over 64-bit halves: four 64x64 products.
    """
    a0, a1 = a & MASK64, a >> 64
    b0, b1 = b & MASK64, b >> 64
    lo = clmul64(a0, b0)
    mid = clmul64(a0, b1) ^ clmul64(a1, b0)
    hi = clmul64(a1, b1)
    return lo ^ (mid << 64) ^ (hi << 128)


def cl_divmod(a: int, b: int) -> DivModResult:
    """Carry-less Euclidean division: ``a == clmul(q, b) ^ r``, ``degree(r) < degree(b)``.

    Repeatedly cancels the leading term of the remainder with a shifted
    copy of ``b``.  Used as the ground truth for every fast reduction.
    """
    if b == 0:
        raise ZeroDivisionError("carry-less division by zero")
    nb = b.bit_length()
    alpha = 0
    beta = a
    # shift >= 0  <=>  degree(beta) >= degree(b)
    shift = beta.bit_length() - nb
    while shift >= 0:
        alpha ^= 1 << shift
        beta ^= b << shift
        shift = beta.bit_length() - nb
    return DivModResult(alpha, beta)


def cl_mod(a: int, b: int) -> int:
    return cl_divmod(a, b).remainder


def cl_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, cl_mod(a, b)
    return a


def _mulmod(a: int, b: int, p: int) -> int:
    return cl_mod(clmul_bitloop(a, b), p)


def _prime_factors(n: int) -> list[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def _x_pow_2k(k: int, p: int) -> int:
    # x**(2**k) mod p by repeated squaring
    r = cl_mod(2, p)
    for _ in range(k):
        r = _mulmod(r, r, p)
    return r


def is_irreducible(p: int) -> bool:
    """Rabin's irreducibility test over GF(2).

    ``p`` of degree ``n`` is irreducible iff ``x**(2**n) == x (mod p)`` and
    ``gcd(x**(2**(n/q)) - x, p) == 1`` for every prime ``q`` dividing ``n``.
    """
    n = degree(p)
    if n < 1:
        raise ValueError("degree(p) must be at least 1")
    if n == 1:
        return True
    x = cl_mod(2, p)
    if _x_pow_2k(n, p) != x:
        return False
    for q in _prime_factors(n):
        if degree(cl_gcd(p, _x_pow_2k(n // q, p) ^ x)) > 0:
            return False
    return True


def is_irreducible_trial(p: int) -> bool:
    """Irreducibility by trial division; exponential, keep ``degree(p)`` small."""
    n = degree(p)
    if n < 1:
        raise ValueError("degree(p) must be at least 1")
    for b in range(2, 1 << (n // 2 + 1)):
        if degree(b) > n // 2:
            break
        if cl_mod(p, b) == 0:
            return False
    return True
