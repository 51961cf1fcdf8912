"""Throughput harness: nanoseconds (and TSC ticks) per byte over input lengths.

Built-in schemes run their repetition loop inside compiled code so the
interpreter never sits between two hashes.  Extra schemes can be
registered as plain ``bytes -> int`` callables; those are looped in
Python and report no cycle count.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .core import derive_key

DEFAULT_LENGTHS = (8, 16, 32, 64, 128, 256, 1024, 4096, 8192)
MIN_BYTES = 320_000_000
CSV_HEADER = ["scheme", "input_len", "reps", "ns_per_byte", "cycles_per_byte"]


@dataclass(frozen=True)
class BenchResult:
    scheme: str
    input_len: int
    reps: int
    ns_per_byte: float
    cycles_per_byte: float | None = None

    def __post_init__(self):
        if not self.ns_per_byte > 0:
            raise ValueError("ns_per_byte must be positive")


def _kernel_runner(loop, hw):
    def run(words, nbytes, key, reps):
        return loop(words, nbytes, key, reps, hw)
    return run


_BUILTIN = {
    "clhash": _kernel_runner(_kernels.bench_clhash, _kernels.HAVE_HW_CLMUL),
    "clhash-portable": _kernel_runner(_kernels.bench_clhash, False),
    "xor-fold": _kernel_runner(_kernels.bench_xor_fold, False),
}
_EXTERNAL: dict[str, Callable[[bytes], int]] = {}


def register_scheme(name: str, fn: Callable[[bytes], int]) -> None:
    if name in _BUILTIN:
        raise ValueError(f"{name!r} is a built-in scheme")
    _EXTERNAL[name] = fn


def available_schemes() -> list[str]:
    return sorted([*_BUILTIN, *_EXTERNAL])


def have_cycle_counter() -> bool:
    a = int(_kernels.cycle_counter())
    b = int(_kernels.cycle_counter())
    return a != 0 and b >= a


def _measure_builtin(run, words, nbytes, key, reps, cycles_ok):
    run(words, nbytes, key, max(1, reps // 100))  # compile and warm caches
    t0 = time.perf_counter_ns()
    ticks, _ = run(words, nbytes, key, reps)
    elapsed = time.perf_counter_ns() - t0
    total = reps * nbytes
    return elapsed / total, (int(ticks) / total if cycles_ok else None)


def _measure_external(fn, buf, reps):
    for _ in range(min(reps, 1000)):
        fn(buf)
    t0 = time.perf_counter_ns()
    for _ in range(reps):
        fn(buf)
    return (time.perf_counter_ns() - t0) / (reps * len(buf))


def bench_run(schemes, lengths=DEFAULT_LENGTHS, seed: int = 0,
              min_bytes: int = MIN_BYTES) -> list[BenchResult]:
    """Time each scheme on each input length.

    Every data point processes at least ``min_bytes`` bytes.  The key is
    derived before the clock starts.
    """
    schemes = list(schemes)
    lengths = sorted({int(n) for n in lengths})
    if not lengths or lengths[0] < 1:
        raise ValueError("lengths must be a nonempty set of positive byte counts")
    unknown = [s for s in schemes if s not in _BUILTIN and s not in _EXTERNAL]
    if unknown:
        raise KeyError(f"unknown scheme(s): {', '.join(unknown)}")

    key = derive_key(seed).words
    rng = np.random.default_rng(seed)
    cycles_ok = have_cycle_counter()
    results = []
    for scheme in sorted(schemes):
        for n in lengths:
            reps = math.ceil(min_bytes / n)
            data = rng.integers(0, 256, size=n, dtype=np.uint8).tobytes()
            if scheme in _BUILTIN:
                words = np.frombuffer(data + bytes(-n % 8), dtype="<u8").astype(np.uint64)
                ns, cyc = _measure_builtin(_BUILTIN[scheme], words, n, key, reps, cycles_ok)
            else:
                ns, cyc = _measure_external(_EXTERNAL[scheme], data, reps), None
            results.append(BenchResult(scheme, n, reps, ns, cyc))
    return results


def emit_csv(results) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in sorted(results, key=lambda r: (r.scheme, r.input_len)):
        writer.writerow([r.scheme, r.input_len, r.reps, repr(r.ns_per_byte),
                         "" if r.cycles_per_byte is None else repr(r.cycles_per_byte)])
    return out.getvalue()


def parse_csv(text: str) -> list[BenchResult]:
    rows = csv.DictReader(io.StringIO(text))
    if rows.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {rows.fieldnames}")
    return [
        BenchResult(row["scheme"], int(row["input_len"]), int(row["reps"]),
                    float(row["ns_per_byte"]),
                    float(row["cycles_per_byte"]) if row["cycles_per_byte"] else None)
        for row in rows
    ]
