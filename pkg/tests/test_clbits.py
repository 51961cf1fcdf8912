import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clhash.clbits import (
    cl_divmod,
    cl_mod,
    clmul64,
    clmul128,
    clmul_bitloop,
    clmul_eq2,
    degree,
    is_irreducible,
    is_irreducible_trial,
)

u64 = st.integers(0, 2**64 - 1)
u128 = st.integers(0, 2**128 - 1)


@pytest.mark.parametrize("a, b, want", [
    (2, 3, 6),
    (3, 3, 5),
    (3, 27, 45),
    (2**63, 2, 2**64),
    (0, 12345, 0),
    (2**64 - 1, 0, 0),
])
def test_clmul64_examples(a, b, want):
    assert clmul64(a, b) == want
    assert clmul_eq2(a, b) == want
    assert clmul_bitloop(a, b) == want


def test_clmul64_all_ones_square():
    # (sum of x^i)^2 over GF(2) is sum of x^(2i)
    assert clmul64(2**64 - 1, 2**64 - 1) == sum(1 << (2 * i) for i in range(64))


def test_clmul64_matches_eq2_on_random_inputs(rng):
    for _ in range(300):
        a, b = rng.getrandbits(64), rng.getrandbits(64)
        assert clmul64(a, b) == clmul_eq2(a, b)


@given(u64, u64, u64)
def test_clmul_commutative_associative(a, b, c):
    assert clmul64(a, b) == clmul64(b, a)
    assert clmul_bitloop(clmul64(a, b), c) == clmul_bitloop(a, clmul64(b, c))


@given(u64, u64, u64)
def test_clmul_distributes_over_xor(a, b, c):
    assert clmul64(a, b ^ c) == clmul64(a, b) ^ clmul64(a, c)


@given(u64.filter(bool), u64.filter(bool))
def test_degree_is_additive(a, b):
    assert degree(clmul64(a, b)) == degree(a) + degree(b)


def test_clmul128_examples(rng):
    a = rng.getrandbits(128)
    assert clmul128(a, 1) == a
    assert clmul128(2**64, 2**64) == 2**128
    x, y = rng.getrandbits(64), rng.getrandbits(64)
    assert clmul128(x, y) == clmul64(x, y)


def test_clmul128_matches_bit_oracle(rng):
    for _ in range(50):
        a, b = rng.getrandbits(128), rng.getrandbits(128)
        assert clmul128(a, b) == clmul_eq2(a, b)


@pytest.mark.parametrize("x, d", [(0, -1), (1, 0), (2, 1), (27, 4), (2**64 + 27, 64)])
def test_degree(x, d):
    assert degree(x) == d


def test_degree_powers_of_two():
    assert all(degree(1 << j) == j for j in range(300))


def test_divmod_by_one(rng):
    a = rng.getrandbits(200)
    assert cl_divmod(a, 1) == (a, 0)


def test_divmod_by_zero():
    with pytest.raises(ZeroDivisionError):
        cl_divmod(5, 0)


def test_divmod_memo_table_column():
    p = 2**64 + 27
    table = [0, 27, 54, 45, 108, 119, 90, 65, 216, 195, 238, 245, 180, 175, 130, 153]
    assert [cl_divmod(clmul64(w, 2**64), p).remainder for w in range(16)] == table


def test_divmod_identity_and_degree_bound(rng):
    for _ in range(500):
        a = rng.getrandbits(rng.randrange(1, 257))
        b = rng.getrandbits(rng.randrange(1, 130)) or 1
        q, r = cl_divmod(a, b)
        assert clmul_bitloop(q, b) ^ r == a
        assert degree(r) < degree(b)


@given(st.integers(0, 2**256 - 1), st.integers(0, 2**256 - 1), u128.filter(bool))
def test_mod_and_div_distribute_over_xor(a, b, p):
    qa, ra = cl_divmod(a, p)
    qb, rb = cl_divmod(b, p)
    assert cl_divmod(a ^ b, p) == (qa ^ qb, ra ^ rb)


def test_reduce_27_squared_via_long_division():
    # x^64 = 27 (mod p), and 27 * 27 already has degree < 64
    assert cl_mod(clmul64(27, 2**64), 2**64 + 27) == clmul64(27, 27)


@pytest.mark.parametrize("p, want", [
    (2, True),
    (3, True),
    (5, False),
    (7, True),
    (0b10011, True),
    (0b11111, True),
    (0b10101, False),
    (2**64 + 27, True),
    (2**127 + 3, True),
    (2**64 + 1, False),
    (2**128 + 6, False),
])
def test_is_irreducible(p, want):
    assert is_irreducible(p) is want


def test_rabin_agrees_with_trial_division():
    for p in range(2, 1 << 11):
        assert is_irreducible(p) == is_irreducible_trial(p), p


def test_count_of_irreducibles_degree_8():
    # number of monic irreducible binary polynomials of degree 8 is 30
    assert sum(is_irreducible(p) for p in range(256, 512)) == 30
