"""Command-line interface.

Exit codes: 0 success, 1 verification or statistical failure (or an
unreadable input), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from . import bench, statcheck
from .core import HashConfig, clhash, derive_key, load_key
from .verify import run_verify


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"{text} is not a 64-bit unsigned integer")
    return value


def _lengths(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad length list {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("lengths must be positive integers")
    return values


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _key_from(args):
    if getattr(args, "key", None):
        return load_key(args.key)
    return derive_key(args.seed if args.seed is not None else 0)


def _report(args, report, lines) -> int:
    with _output(args.out) as out:
        if args.json:
            out.write(report.to_json() + "\n")
        else:
            for line in lines:
                out.write(line + "\n")
    return 0 if report.passed else 1


def cmd_hash(args) -> int:
    try:
        key = _key_from(args)
    except (OSError, ValueError) as exc:
        print(f"clhash: cannot load key: {exc}", file=sys.stderr)
        return 1
    config = HashConfig(finalize=args.finalize)
    status = 0
    with _output(args.out) as out:
        for name in args.inputs or ["-"]:
            try:
                data = sys.stdin.buffer.read() if name == "-" else Path(name).read_bytes()
            except OSError as exc:
                print(f"clhash: {name}: {exc.strerror or exc}", file=sys.stderr)
                status = 1
                continue
            out.write(f"{clhash(key, data, config):016x}  {name}\n")
    return status


def cmd_keygen(args) -> int:
    data = derive_key(args.seed).to_bytes()
    if args.out is None or args.out == "-":
        sys.stdout.buffer.write(data)
        return 0
    try:
        Path(args.out).write_bytes(data)
    except OSError as exc:
        print(f"clhash: cannot write {args.out}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    results = run_verify(n=args.trials)
    with _output(args.out) as out:
        if args.json:
            out.write(json.dumps([{"suite": r.name, "passed": r.passed, "total": r.total}
                                  for r in results], indent=2) + "\n")
        else:
            for r in results:
                out.write(f"{'PASS' if r.ok else 'FAIL'}  {r.name:<12} {r.passed}/{r.total}\n")
    return 0 if all(r.ok for r in results) else 1


def cmd_avalanche(args) -> int:
    report = statcheck.avalanche_test(_key_from(args), args.length, args.trials,
                                      HashConfig(finalize=args.finalize), seed=args.seed or 0)
    verdict = "PASS" if report.passed else "FAIL"
    return _report(args, report, [
        f"{verdict}  {report.description}: worst bias {report.worst_bias:.5f} "
        f"(gate < {statcheck.AVALANCHE_GATE}) over {report.trials} trials",
    ])


def cmd_universality(args) -> int:
    if args.files:
        s, s2 = (Path(f).read_bytes() for f in args.files)
    else:
        s = statcheck.random_message(args.length, args.seed or 0)
        s2 = statcheck.random_message(args.length, (args.seed or 0) + 1)
    report = statcheck.lowbit_universality_test(s, s2, args.bits, args.trials, seed=args.seed or 0)
    verdict = "PASS" if report.passed else "FAIL"
    return _report(args, report, [
        f"{verdict}  {report.description}: {report.collisions} collisions over "
        f"{report.trials} keys (bound {report.bound:.2f}, limit {report.limit:.2f})",
    ])


def cmd_twobytes(args) -> int:
    report = statcheck.twobytes_test(_key_from(args), HashConfig(finalize=args.finalize))
    verdict = "PASS" if report.passed else "FAIL"
    return _report(args, report, [f"{verdict}  {report.description}: {report.collisions} collisions"])


def cmd_bench(args) -> int:
    results = bench.bench_run(args.schemes, args.lengths, seed=args.seed or 0)
    with _output(args.out) as out:
        out.write(bench.emit_csv(results))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clhash", description="CLHASH hashing, validation and benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, key=True):
        if key:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--seed", type=_u64, help="derive the key from this 64-bit seed (default 0)")
            g.add_argument("--key", help="read the key from a CLH1 key file")
        else:
            p.add_argument("--seed", type=_u64)
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("hash", help="hash files (or stdin as '-')")
    common(p)
    p.add_argument("--finalize", action="store_true", help="apply the 64-bit bit-mixing finalizer")
    p.add_argument("inputs", nargs="*")
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("keygen", help="write a CLH1 key file derived from a seed")
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("verify", help="run the self-test battery")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("avalanche", help="single-bit avalanche test")
    common(p)
    p.add_argument("--finalize", action="store_true")
    p.add_argument("--length", type=int, default=8)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_avalanche)

    p = sub.add_parser("universality", help="low-bit collision rate over random keys")
    common(p, key=False)
    p.add_argument("files", nargs="*", help="two files to compare (default: two random messages)")
    p.add_argument("--length", type=int, default=64)
    p.add_argument("--bits", type=int, default=16)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_universality)

    p = sub.add_parser("twobytes", help="collisions among inputs with at most two non-zero bytes")
    common(p)
    p.add_argument("--finalize", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_twobytes)

    p = sub.add_parser("bench", help="throughput sweep, CSV output")
    p.add_argument("--seed", type=_u64)
    p.add_argument("--lengths", type=_lengths, default=list(bench.DEFAULT_LENGTHS))
    p.add_argument("--schemes", type=lambda t: [s for s in t.split(",") if s],
                   default=["clhash", "clhash-portable", "xor-fold"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "universality" and args.files and len(args.files) != 2:
        parser.error("universality takes exactly two files")
    if args.command == "bench":
        unknown = set(args.schemes) - set(bench.available_schemes())
        if unknown:
            parser.error(f"unknown scheme(s): {', '.join(sorted(unknown))}")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"clhash: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"clhash: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
