"""Self-test battery run by ``clhash verify``.

Each suite compares a fast path against a slow oracle on seeded random
inputs and reports how many cases agreed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .clbits import MASK64, cl_divmod, cl_mod, clmul64, clmul128, clmul_bitloop, clmul_eq2, is_irreducible
from .core import HashConfig, clhash, derive_key, finalize_mix, finalize_unmix, lazy_reduce127, stream_init
from .gf64 import MEMO_TABLE, P, derive_memo_table, gf64_pow, reduce128
from .reference import P127, reference_clhash


@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _count(name, cases, check) -> SuiteResult:
    cases = list(cases)
    return SuiteResult(name, sum(1 for c in cases if check(c)), len(cases))


def suite_memo_table(memo_table=MEMO_TABLE) -> SuiteResult:
    derived = derive_memo_table()
    return SuiteResult("memo-table", sum(a == b for a, b in zip(memo_table, derived)), 16)


def suite_clmul(rng, n) -> SuiteResult:
    pairs = [(rng.getrandbits(64), rng.getrandbits(64)) for _ in range(n)]
    wide = [(rng.getrandbits(128), rng.getrandbits(128)) for _ in range(n)]
    r1 = _count("clmul64", pairs, lambda p: clmul64(*p) == clmul_eq2(*p))
    r2 = _count("clmul128", wide, lambda p: clmul128(*p) == clmul_bitloop(*p))
    return SuiteResult("clmul", r1.passed + r2.passed, r1.total + r2.total)


def suite_hw_parity(n) -> SuiteResult:
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2**64, size=n, dtype=np.uint64)
    b = rng.integers(0, 2**64, size=n, dtype=np.uint64)
    hlo, hhi = _kernels.clmul_batch(a, b, True)
    slo, shi = _kernels.clmul_batch(a, b, False)
    return SuiteResult("hw-parity", int(np.count_nonzero((hlo == slo) & (hhi == shi))), n)


def suite_reduce128(rng, n, memo_table=MEMO_TABLE) -> SuiteResult:
    xs = [w << 64 for w in range(16)] + [rng.getrandbits(128) for _ in range(n)]
    return _count("reduce128", xs, lambda x: reduce128(x, memo_table) == cl_divmod(x, P).remainder)


def suite_lazy(rng, n) -> SuiteResult:
    xs = [rng.getrandbits(254) for _ in range(n)]
    return _count("lazy-reduce", xs, lambda x: cl_mod(lazy_reduce127(x), P127) == cl_mod(x, P127))


def suite_field(rng, n) -> SuiteResult:
    xs = [rng.getrandbits(64) or 1 for _ in range(n)]
    r = _count("field", xs, lambda a: gf64_pow(a, MASK64) == 1)
    irreducible = is_irreducible(P) and is_irreducible(P127)
    return SuiteResult("field", r.passed + irreducible, r.total + 1)


def _random_lengths(rng, n):
    edges = [0, 1, 7, 8, 9, 1023, 1024, 1025, 2048, 2049]
    return edges + [rng.randrange(0, 9001) for _ in range(max(0, n - len(edges)))]


def suite_end_to_end(rng, n) -> SuiteResult:
    backends = [False] + ([True] if _kernels.HAVE_HW_CLMUL else [])

    def check(length):
        key = derive_key(rng.getrandbits(64))
        msg = rng.randbytes(length)
        want = reference_clhash(key, msg)
        return all(clhash(key, msg, hardware=hw) == want for hw in backends)

    return _count("end-to-end", _random_lengths(rng, n), check)


def suite_streaming(rng, n) -> SuiteResult:
    key = derive_key(rng.getrandbits(64))

    def check(length):
        msg = rng.randbytes(length)
        state = stream_init(key)
        cut = sorted(rng.randrange(0, length + 1) for _ in range(3))
        for lo, hi in zip([0, *cut], [*cut, length]):
            state.update(msg[lo:hi])
        return state.finish() == clhash(key, msg)

    return _count("streaming", _random_lengths(rng, n), check)


def suite_finalizer(rng, n) -> SuiteResult:
    xs = [rng.getrandbits(64) for _ in range(n)]
    key = derive_key(rng.getrandbits(64))
    r = _count("finalizer", xs, lambda x: finalize_unmix(finalize_mix(x)) == x)
    same = clhash(key, b"abc", HashConfig(finalize=True)) == finalize_mix(clhash(key, b"abc"))
    return SuiteResult("finalizer", r.passed + same, r.total + 1)


def run_verify(n: int = 2000, seed: int = 2024, memo_table=MEMO_TABLE) -> list[SuiteResult]:
    rng = random.Random(seed)
    results = [
        suite_memo_table(memo_table),
        suite_clmul(rng, n),
        suite_reduce128(rng, 10 * n, memo_table),
        suite_lazy(rng, n),
        suite_field(rng, max(1, n // 20)),
        suite_end_to_end(rng, max(10, n // 20)),
        suite_streaming(rng, max(10, n // 20)),
        suite_finalizer(rng, n),
    ]
    if _kernels.HAVE_HW_CLMUL:
        results.append(suite_hw_parity(1_000_000))
    return results
