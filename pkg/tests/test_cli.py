import json
import subprocess
import sys

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from qcstern import fileformat as ff
from qcstern.cli import main
from qcstern.fiatshamir import signature_challenges, signature_size

SEED = "00112233445566778899aabbccddeeff"


@pytest.fixture
def toy_files(tmp_path):
    prefix = str(tmp_path / "key")
    assert main(["keygen", "--paramset", "TOY", "--out", prefix, "--seed", SEED]) == 0
    msg = tmp_path / "msg"
    msg.write_bytes(b"attack at dawn")
    sig = tmp_path / "sig"
    assert main(["sign", "--sk", prefix + ".sk", "--pk", prefix + ".pk", "--out", str(sig),
                 str(msg)]) == 0
    return tmp_path, prefix, msg, sig


def test_keygen_reports_both_pk_sizes(tmp_path, capsys):
    prefix = str(tmp_path / "k")
    assert main(["keygen", "--paramset", "QCS-128-s1", "--out", prefix, "--seed", SEED]) == 0
    out = capsys.readouterr().out
    assert "16 B payload" in out and "98 B" in out and "179 B" in out
    params, sk = ff.load_secret_key(open(prefix + ".sk", "rb").read())
    assert params.name == "QCS-128-s1" and len(sk.to_bytes()) == 16


def test_keygen_is_reproducible(tmp_path):
    for name in ("a", "b"):
        main(["keygen", "--paramset", "TOY", "--out", str(tmp_path / name), "--seed", SEED])
    assert (tmp_path / "a.pk").read_bytes() == (tmp_path / "b.pk").read_bytes()


def test_sign_verify(toy_files, capsys):
    tmp, prefix, msg, sig = toy_files
    assert main(["verify", "--pk", prefix + ".pk", str(msg), str(sig)]) == 0
    other = tmp / "other"
    other.write_bytes(b"attack at dusk")
    assert main(["verify", "--pk", prefix + ".pk", str(other), str(sig)]) == 1


def test_printed_size_matches_predictor(toy_files, capsys):
    tmp, prefix, msg, _ = toy_files
    capsys.readouterr()
    out = tmp / "s2"
    main(["sign", "--sk", prefix + ".sk", "--pk", prefix + ".pk", "--out", str(out), str(msg)])
    printed = int(capsys.readouterr().out.split(":")[1].split()[0])
    params, sig = ff.load_signature(out.read_bytes())
    _, pk = ff.load_public_key(open(prefix + ".pk", "rb").read())
    _, ch2 = signature_challenges(pk, params, msg.read_bytes(), sig)
    assert printed == len(sig) == signature_size(params, ch2.bits)


def test_no_opt_signature_verifies(toy_files, capsys):
    tmp, prefix, msg, _ = toy_files
    out = tmp / "plain"
    assert main(["sign", "--sk", prefix + ".sk", "--pk", prefix + ".pk", "--out", str(out),
                 "--no-opt", "cw-compression", "--no-opt", "seed-pairing", str(msg)]) == 0
    assert main(["verify", "--pk", prefix + ".pk", str(msg), str(out)]) == 0
    params, _ = ff.load_signature(out.read_bytes())
    assert set(params.disabled()) == {"cw_compression", "seed_pairing"}


def test_usage_and_io_errors(toy_files, capsys):
    tmp, prefix, msg, sig = toy_files
    assert main(["verify", "--pk", str(tmp / "missing.pk"), str(msg), str(sig)]) == 2
    assert main(["verify", "--pk", prefix + ".sk", str(msg), str(sig)]) == 2
    assert main(["keygen", "--paramset", "NOPE", "--out", prefix]) == 2
    assert main(["keygen", "--paramset", "TOY", "--out", str(tmp / "no" / "dir" / "k")]) == 2
    assert main(["keygen", "--paramset", "TOY", "--out", prefix, "--seed", "zz"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["bench", "--paramset", "TOY", "--iterations", "0"]) == 2
    assert "error" in capsys.readouterr().err


def test_corrupted_signature_files_reject(toy_files):
    tmp, prefix, msg, sig = toy_files
    data = sig.read_bytes()
    bad = tmp / "bad"
    for mutated in (b"XXXX" + data[4:], data[:4] + b"\x02" + data[5:], data[:5] + b"\x0f" + data[6:],
                    data[:6], data[:-1], data + b"\x00", data[:6] + b"\x00" * (len(data) - 6)):
        bad.write_bytes(mutated)
        assert main(["verify", "--pk", prefix + ".pk", str(msg), str(bad)]) == 1


def test_signature_from_other_set_rejected(toy_files, tmp_path):
    tmp, prefix, msg, _ = toy_files
    main(["keygen", "--paramset", "QCS-128-s1", "--out", str(tmp / "big"), "--seed", SEED])
    big_sig = tmp / "bigsig"
    main(["sign", "--sk", str(tmp / "big.sk"), "--pk", str(tmp / "big.pk"), "--out", str(big_sig),
          str(msg)])
    assert main(["verify", "--pk", prefix + ".pk", str(msg), str(big_sig)]) == 1
    assert main(["sign", "--sk", prefix + ".sk", "--pk", str(tmp / "big.pk"), "--out",
                 str(tmp / "x"), str(msg)]) == 2


@settings(max_examples=150, suppress_health_check=[HealthCheck.function_scoped_fixture],
          deadline=None)
@given(st.binary(max_size=400))
def test_verify_fuzz_never_crashes(toy_files, data):
    tmp, prefix, msg, _ = toy_files
    path = tmp / "fuzz"
    path.write_bytes(ff.MAGIC["signature"] + bytes([1, 0]) + data)
    assert main(["verify", "--pk", prefix + ".pk", str(msg), str(path)]) == 1
    path.write_bytes(data)
    assert main(["verify", "--pk", prefix + ".pk", str(msg), str(path)]) == 1


def test_params_outputs(capsys):
    assert main(["params", "--paramset", "QCS-128-s20"]) == 0
    text = capsys.readouterr().out
    assert "alpha_star" in text and "delta_selected      141" in text
    assert main(["params", "--format", "kv"]) == 0
    kv = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert kv["QCS-128-s1.delta_selected"] == "151"
    assert kv["QCS-128-s4.pk_bytes_nbit"] == "669"
    assert kv["TOY.security"] == "n/a"
    assert main(["params", "--format", "json"]) == 0
    docs = json.loads(capsys.readouterr().out)
    assert [d["name"] for d in docs] == ["TOY", "QCS-128-s1", "QCS-128-s4", "QCS-128-s20"]


def test_bench_toy(capsys):
    assert main(["bench", "--paramset", "TOY", "--iterations", "30", "--seed", SEED]) == 0
    out = capsys.readouterr().out
    assert "verify failures     0" in out and "formula bytes       246.0" in out


def _spawn_verifier(tmp, pk, *extra):
    proc = subprocess.Popen(
        [sys.executable, "-m", "qcstern.cli", "identify", "--role", "verifier", "--listen",
         "127.0.0.1:0", "--pk", pk, *extra],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True, cwd=tmp)
    line = proc.stdout.readline()
    assert line.startswith("listening on"), line + proc.stderr.read()
    return proc, line.split()[-1]


def test_identify_end_to_end(toy_files, capsys):
    tmp, prefix, _, _ = toy_files
    log = str(tmp / "session.json")
    proc, endpoint = _spawn_verifier(tmp, prefix + ".pk", "--transcript-log", log)
    code = main(["identify", "--role", "prover", "--connect", endpoint, "--pk", prefix + ".pk",
                 "--sk", prefix + ".sk"])
    assert proc.wait(timeout=30) == 0
    assert code == 0
    assert main(["replay", log]) == 0
    doc = json.load(open(log))
    doc["rsp"] = ("00" if doc["rsp"][:2] != "00" else "01") + doc["rsp"][2:]
    json.dump(doc, open(log, "w"))
    assert main(["replay", log]) == 1


def test_identify_wrong_key(toy_files):
    tmp, prefix, _, _ = toy_files
    other = str(tmp / "other")
    main(["keygen", "--paramset", "TOY", "--out", other])
    rejected = 0
    for _ in range(3):
        proc, endpoint = _spawn_verifier(tmp, prefix + ".pk")
        code = main(["identify", "--role", "prover", "--connect", endpoint, "--pk", other + ".pk",
                     "--sk", other + ".sk"])
        assert proc.wait(timeout=30) == code
        rejected += code == 1
    assert rejected >= 2


def test_identify_usage(toy_files):
    tmp, prefix, _, _ = toy_files
    assert main(["identify", "--role", "prover", "--connect", "127.0.0.1:1", "--pk",
                 prefix + ".pk"]) == 2
    assert main(["identify", "--role", "verifier", "--listen", "nonsense", "--pk",
                 prefix + ".pk"]) == 2
    assert main(["identify", "--role", "prover", "--connect", "127.0.0.1:1", "--pk",
                 prefix + ".pk", "--sk", prefix + ".sk", "--timeout", "1"]) == 1
