import json

import pytest

from agiopp.cli import DEFAULT_T, main, repetitions
from agiopp.config import build_plan
from agiopp.presets import MERSENNE, preset


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_plan(capsys, tmp_path):
    out = tmp_path / "plan.json"
    code, captured = _run(capsys, "plan", "--preset", "hermitian", "--out", str(out))
    assert code == 0
    document = json.loads(captured.out)
    assert document["n"] == 60
    assert document["rounds"] == 3
    assert document["lambda"] == "3/4"
    assert json.loads(out.read_text())["digest"] == document["digest"]


def test_tower_plan_report(capsys):
    code, captured = _run(capsys, "plan", "--preset", "tower-q2")
    assert code == 0
    tower = json.loads(captured.out)["tower"]
    assert tower["degrees"] == [3, 6, 8]
    assert tower["genera"] == [0, 1, 6]


def test_plan_errors(capsys):
    code, captured = _run(capsys, "plan", "--preset", "non-congruent")
    assert code == 2
    assert "not -1 mod" in captured.err
    code, captured = _run(capsys, "plan")
    assert code == 2
    assert "--config or --preset" in captured.err


def test_prove_and_verify(capsys, tmp_path):
    plan = tmp_path / "plan.json"
    proof = tmp_path / "proof.bin"
    assert _run(capsys, "plan", "--preset", "f4-kummer", "--out", str(plan))[0] == 0
    prove = ("prove", "--config", str(plan), "--t", "3", "--out", str(proof))
    assert _run(capsys, *prove)[0] == 0
    code, captured = _run(capsys, "verify", "--config", str(plan), "--proof", str(proof))
    assert code == 0
    assert captured.out.strip() == "accept"

    data = bytearray(proof.read_bytes())
    data[-5] ^= 0xFF
    proof.write_bytes(bytes(data))
    code, captured = _run(capsys, "verify", "--config", str(plan), "--proof", str(proof))
    assert code in (1, 2)


def test_encode_prove_verify_word(capsys, tmp_path):
    word = tmp_path / "word.bin"
    proof = tmp_path / "proof.bin"
    args = ("--preset", "tower-q2", "--seed", "8")
    assert _run(capsys, "encode", *args, "--out", str(word))[0] == 0
    prove = ("prove", *args, "--word", str(word), "--mode", "membership", "--out", str(proof))
    assert _run(capsys, *prove)[0] == 0
    verify = ("verify", *args, "--proof", str(proof), "--word", str(word))
    assert _run(capsys, *verify)[0] == 0

    other = tmp_path / "other.bin"
    encode = ("encode", "--preset", "tower-q2", "--seed", "9", "--out", str(other))
    assert _run(capsys, *encode)[0] == 0
    code, captured = _run(capsys, "verify", *args, "--proof", str(proof), "--word", str(other))
    assert code == 1
    assert captured.out.startswith("reject (commitment")


def test_interactive_proof(capsys, tmp_path):
    proof = tmp_path / "proof.bin"
    args = ("--preset", "hermitian", "--seed", "21")
    assert _run(capsys, "prove", *args, "--interactive", "--out", str(proof))[0] == 0
    assert _run(capsys, "verify", *args, "--proof", str(proof))[0] == 0
    code, captured = _run(capsys, "verify", "--preset", "hermitian", "--proof", str(proof))
    assert code == 1
    assert captured.out.startswith("reject (challenge")


def test_prove_needs_out(capsys):
    with pytest.raises(SystemExit):
        main(["prove", "--preset", "f4-kummer"])


def test_repetitions():
    config = preset("f4-kummer")
    plan = build_plan(config)
    assert repetitions(config.replace(t=5), plan) == 5
    assert repetitions(config, plan) == DEFAULT_T


def test_soundness(capsys):
    argv = ["soundness", "--n", "1048576", "--field-size", str(MERSENNE ** 2), "--p-max", "2"]
    argv += ["--lam", "7/8", "--eps", "2^-6.55", "--closed-form"]
    code, captured = _run(capsys, *argv, "--kappa", "90")
    assert code == 0
    assert json.loads(captured.out)["t"] == 199

    code, captured = _run(capsys, *argv, "--kappa", "0")
    assert code == 2
    code, captured = _run(capsys, "soundness", "--n", "64")
    assert code == 2
    assert "--field-size" in captured.err


def test_report_commands(capsys):
    code, captured = _run(capsys, "paper-example")
    assert code == 0
    assert json.loads(captured.out)["t"] == 199
    code, captured = _run(capsys, "worked-example", "--kappa", "40")
    assert code == 0
    assert json.loads(captured.out)["kappa"] == 40
    for command in ("table1", "rate-table"):
        code, captured = _run(capsys, command)
        assert code == 0
        assert len(json.loads(captured.out)) == 9


def test_bench(capsys):
    code, captured = _run(capsys, "bench", "--min-log", "10", "--max-log", "11", "--t", "2")
    assert code == 0
    document = json.loads(captured.out)
    assert [row["n"] for row in document["rows"]] == [1024, 2048]
    assert document["prover_exponent"] > 0.5


def test_bench_scaling(capsys):
    code, captured = _run(capsys, "bench", "--min-log", "10", "--max-log", "14", "--t", "2")
    assert code == 0
    document = json.loads(captured.out)
    rows = document["rows"]
    assert [row["n"] for row in rows] == [2 ** k for k in range(10, 15)]
    assert abs(document["prover_exponent"] - 1.0) <= 0.1
    assert document["proof_below_n"]
    assert all(row["proof_length"] < row["n"] for row in rows)
    # Sixteen times the length costs the verifier less than twice the work.
    assert document["verifier_log_slope"] > 0
    assert document["verifier_log_ratio"] <= 1.5
    assert rows[-1]["verifier_ops"] < 2 * rows[0]["verifier_ops"]
