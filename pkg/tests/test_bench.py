import csv
import io

import pytest

from clhash import _kernels
from clhash.bench import (
    CSV_HEADER,
    DEFAULT_LENGTHS,
    MIN_BYTES,
    BenchResult,
    bench_run,
    emit_csv,
    parse_csv,
    register_scheme,
)


def test_emit_csv_empty():
    assert emit_csv([]) == ",".join(CSV_HEADER) + "\n"


def test_emit_csv_one_row():
    text = emit_csv([BenchResult("clhash", 64, 10, 1.5)])
    assert text.splitlines() == [",".join(CSV_HEADER), "clhash,64,10,1.5,"]


def test_emit_csv_orders_rows():
    rows = [BenchResult("b", 8, 1, 1.0), BenchResult("a", 64, 1, 1.0), BenchResult("a", 8, 1, 1.0, 2.0)]
    parsed = parse_csv(emit_csv(rows))
    assert [(r.scheme, r.input_len) for r in parsed] == [("a", 8), ("a", 64), ("b", 8)]


def test_bench_result_validation():
    with pytest.raises(ValueError):
        BenchResult("x", 8, 1, 0.0)


def test_unknown_scheme():
    with pytest.raises(KeyError):
        bench_run(["sha-nothing"], [64])


def test_amortization_and_round_trip():
    results = bench_run(["clhash", "xor-fold"], [64, 4096])
    assert len(results) == 4
    by = {(r.scheme, r.input_len): r for r in results}
    assert by["clhash", 4096].ns_per_byte < by["clhash", 64].ns_per_byte
    assert by["xor-fold", 4096].ns_per_byte < by["clhash", 4096].ns_per_byte
    for r in results:
        assert r.reps * r.input_len >= MIN_BYTES
    text = emit_csv(results)
    assert emit_csv(parse_csv(text)) == text
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 4


def test_repeat_runs_are_stable():
    first = bench_run(["clhash"], [4096])[0].ns_per_byte
    second = bench_run(["clhash"], [4096])[0].ns_per_byte
    assert abs(first - second) / min(first, second) < 0.15


def test_portable_sweep_completes():
    results = bench_run(["clhash-portable"], DEFAULT_LENGTHS)
    assert [r.input_len for r in results] == list(DEFAULT_LENGTHS)
    assert all(r.ns_per_byte > 0 for r in results)


def test_external_scheme():
    register_scheme("len-only", lambda b: len(b))
    (r,) = bench_run(["len-only"], [256], min_bytes=256 * 1000)
    assert r.scheme == "len-only" and r.reps == 1000 and r.cycles_per_byte is None
    with pytest.raises(ValueError):
        register_scheme("clhash", len)
