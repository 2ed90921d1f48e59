from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from bwbverify.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "literal, expected",
    [
        ("w1+w6-4w2", "Acyclic (singular at vertex 4 after s2 s4 s3 s5)"),
        ("[1,-4,0,0,0,1]", "Acyclic (singular at vertex 4 after s2 s4 s3 s5)"),
        ("w1+w3+w5-3w2", "V^{w1}[-2] (w = s2 s4)"),
        ("[0,0,0,0,0,0]", "C[0]"),
        ("O(-11)", "C[-21] (w = " ),
    ],
)
def test_bwb(capsys, literal, expected):
    code, out, _ = run(capsys, "bwb", literal)
    assert code == 0
    assert out.startswith(expected)


def test_bwb_json(capsys):
    code, out, _ = run(capsys, "bwb", "w1+w3+w5-3w2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["degree"] == 2 and data["highest_weight"] == [1, 0, 0, 0, 0, 0] and data["word"] == [2, 4]


@pytest.mark.parametrize("bad", ["w1-w3", "[1/2,0,0,0,0,0]", "w9", "garbage(", "Nope"])
def test_bwb_errors_exit_two(capsys, bad):
    code, out, err = run(capsys, "bwb", bad)
    assert code == 2 and err.startswith("error:")


def test_tensor(capsys):
    assert run(capsys, "tensor", "w6-w2", "w1")[1] == "O + S^{w1+w6}(-1)\n"
    code, out, _ = run(capsys, "tensor", "w4", "w4")
    assert code == 0
    assert set(out.strip().split(" + ")) == {"O(3)", "S^{w1+w6}(2)", "S^{w3+w5}(1)", "S^{2w4}"}
    assert run(capsys, "tensor", "w1+w4-2w2", "[0,0,0,0,0,0]")[1] == "S^{w1+w4}(-2)\n"


def test_tensor_rejects_filtered(capsys):
    assert run(capsys, "tensor", "T~", "O")[0] == 2


def test_ext_dual_rank(capsys):
    assert run(capsys, "ext", "O(1)", "S^{w4}(-1)")[1] == "C[-1]\n"
    assert run(capsys, "ext", "O", "O(-3)")[1] == "0\n"
    assert "upper bound" in run(capsys, "ext", "T~", "T~")[1]
    assert run(capsys, "dual", "S^{w1}")[1] == "S^{w6}(-1)\n"
    assert run(capsys, "dual", "T~")[1] == "O(-1); S^{w4}(-2); O\n"
    assert run(capsys, "rank", "T~")[1] == "22\n"
    assert run(capsys, "rank", "w1+w6-w2")[1] == "35\n"


def test_roots_and_korder(capsys):
    out = run(capsys, "roots")[1]
    assert "non-parabolic roots: 21" in out and "degree 1: 20 roots" in out and "degree 2: 1 root," in out
    data = json.loads(run(capsys, "korder", "--format", "json")[1])
    assert data == {"k_theory_rank": 72, "canonical_index": 11, "dimension": 21}


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "lemma-3.5")
    assert code == 0 and out.rstrip().endswith("verdict: verified")
    code, out, _ = run(capsys, "verify", "lemma-3.6")
    assert code == 1 and "verdict: refuted" in out
    assert run(capsys, "verify", "no-such-script")[0] == 2


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "main-theorem", "--format", "json")
    data = json.loads(out)
    assert code == 1
    assert {"lemma", "obligations", "verdict", "counts"} <= set(data)
    assert data["counts"]["total"] == len(data["obligations"]) == 635
    assert all(r["status"] in ("Proven", "Refuted", "Unknown") for r in data["obligations"])


def test_verify_output_identical_across_jobs(capsys):
    one = run(capsys, "verify", "lemma-4.4", "--format", "json", "--jobs", "1")[1]
    two = run(capsys, "verify", "lemma-4.4", "--format", "json", "--jobs", "2")[1]
    assert one == two


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "bwb")[0] == 2
    assert run(capsys, "verify", "lemma-3.5", "--jobs", "0")[0] == 2
    assert run(capsys, "bwb", "0", "--format", "xml")[0] == 2


def test_schema_error_exit_two(tmp_path, capsys):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"lemma": "x", "obligations": [{"kind": "Nope", "args": []}]}))
    assert run(capsys, "verify", str(p))[0] == 2


def test_console_script_with_cache(tmp_path):
    env = dict(os.environ, BWBVERIFY_CACHE_DIR=str(tmp_path))
    cmd = [sys.executable, "-m", "bwbverify.cli", "bwb", "w1+w6-4w2"]
    first = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    assert first.stdout == "Acyclic (singular at vertex 4 after s2 s4 s3 s5)\n"
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].read_text().strip()
    second = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    assert second.stdout == first.stdout
