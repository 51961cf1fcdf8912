import json

import pytest

from clhash import ClKey, derive_key
from clhash.cli import main

GOLDEN_256 = "d8e70e99b7718b4e"


@pytest.fixture
def zero_key(tmp_path):
    path = tmp_path / "zero.key"
    path.write_bytes(ClKey.zero().to_bytes())
    return path


def feed_stdin(monkeypatch, data: bytes):
    import io
    import sys

    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))


def test_hash_empty_stdin_zero_key(monkeypatch, capsys, zero_key):
    feed_stdin(monkeypatch, b"")
    assert main(["hash", "--key", str(zero_key), "-"]) == 0
    assert capsys.readouterr().out == "0000000000000000  -\n"


def test_hash_golden_file(tmp_path, capsys):
    f = tmp_path / "golden.bin"
    f.write_bytes(bytes(range(256)))
    assert main(["hash", "--seed", "42", str(f), str(f)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == [f"{GOLDEN_256}  {f}"] * 2


def test_hash_finalize_flag(tmp_path, capsys):
    f = tmp_path / "golden.bin"
    f.write_bytes(bytes(range(256)))
    main(["hash", "--seed", "42", "--finalize", str(f)])
    assert capsys.readouterr().out.split()[0] == "72d66990ab0ae091"


def test_hash_unreadable_file_continues(tmp_path, capsys):
    f = tmp_path / "ok.bin"
    f.write_bytes(b"abc")
    assert main(["hash", "--seed", "1", str(tmp_path / "missing"), str(f)]) == 1
    captured = capsys.readouterr()
    assert "missing" in captured.err
    assert captured.out.endswith(f"  {f}\n")
    assert len(captured.out.splitlines()) == 1


def test_hash_seed_and_key_exclusive(zero_key):
    with pytest.raises(SystemExit) as exc:
        main(["hash", "--seed", "1", "--key", str(zero_key)])
    assert exc.value.code == 2


def test_hash_bad_key_file(tmp_path, capsys):
    bad = tmp_path / "bad.key"
    bad.write_bytes(b"XXXX" + bytes(1064))
    assert main(["hash", "--key", str(bad), "-"]) == 1
    assert "magic" in capsys.readouterr().err


def test_keygen_round_trip(tmp_path, capsys):
    a, b = tmp_path / "a.key", tmp_path / "b.key"
    assert main(["keygen", "--seed", "7", "--out", str(a)]) == 0
    assert main(["keygen", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert ClKey.from_bytes(a.read_bytes()) == derive_key(7)
    msg = tmp_path / "m"
    msg.write_bytes(b"hello world")
    main(["hash", "--key", str(a), str(msg)])
    main(["hash", "--seed", "7", str(msg)])
    out = capsys.readouterr().out.splitlines()
    assert out[0] == out[1]


def test_keygen_unwritable(tmp_path):
    assert main(["keygen", "--seed", "7", "--out", str(tmp_path / "no" / "such" / "dir")]) == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_verify_passes(capsys):
    assert main(["verify", "--trials", "200"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "memo-table" in out


def test_verify_detects_corrupted_table(monkeypatch, capsys):
    from clhash import verify

    bad = list(verify.MEMO_TABLE)
    bad[3] = 44
    results = {r.name: r for r in verify.run_verify(n=50, memo_table=bad)}
    assert not results["memo-table"].ok
    assert not results["reduce128"].ok
    assert results["lazy-reduce"].ok


def test_avalanche_command_json(capsys):
    assert main(["avalanche", "--seed", "3", "--length", "8", "--trials", "10000", "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["worst_bias"] == 0.5
    assert main(["avalanche", "--seed", "3", "--finalize", "--trials", "10000", "--json"]) == 0


def test_universality_command(capsys):
    assert main(["universality", "--seed", "1", "--bits", "12", "--trials", "20000"]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_universality_files(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    a.write_bytes(b"abc")
    b.write_bytes(b"abd")
    assert main(["universality", str(a), str(b), "--bits", "10", "--trials", "10000", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["trials"] == 10000


def test_universality_rejects_identical(tmp_path, capsys):
    a = tmp_path / "a"
    a.write_bytes(b"abc")
    assert main(["universality", str(a), str(a), "--trials", "10"]) == 2


def test_bench_command(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--lengths", "4096", "--schemes", "xor-fold", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "scheme,input_len,reps,ns_per_byte,cycles_per_byte"
    assert lines[1].startswith("xor-fold,4096,")


def test_bench_unknown_scheme():
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--schemes", "nope"])
    assert exc.value.code == 2


def test_twobytes_command(capsys):
    assert main(["twobytes", "--seed", "11", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["collisions"] == 0 and report["passed"]
