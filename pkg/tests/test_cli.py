import io
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from signedbit.cli import main
from signedbit.streams import parse_stream_text

HERE = Path(__file__).parent
FIXTURE = HERE / "fixtures" / "one_over_n.txt"
GOLDEN = HERE / "golden"

GOLDEN_CASES = {
    "cideal_0_depth6_check.txt": ["cideal", "0/1", "--depth", "6", "--check"],
    "eval_third_plus_sixth_bits30.txt": ["eval", "1/3+1/6", "--bits", "30"],
    "modulus_one_over_n_m1.txt": ["modulus", "--p", str(FIXTURE), "--q", str(FIXTURE), "--m", "1", "--witness", "6"],
}


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name):
    code, text = run(GOLDEN_CASES[name])
    assert code == 0
    assert text == (GOLDEN / name).read_text()


def test_golden_cideal_content():
    # C_0 at level l is the three nodes with k in {-2,-1,0}
    lines = (GOLDEN / "cideal_0_depth6_check.txt").read_text().splitlines()
    assert lines[0] == "kind=C r=0/1 levels=1..6"
    assert lines[1:19] == [f"({k},{l})" for l in range(1, 7) for k in (-2, -1, 0)]
    assert sum(ln.endswith(": PASS") for ln in lines[19:]) == 7


def test_golden_eval_content():
    text = (GOLDEN / "eval_third_plus_sixth_bits30.txt").read_text()
    start, digits, depth = parse_stream_text(text)
    assert depth == 30
    assert sum(F(d, 2 ** (start + i)) for i, d in enumerate(digits)) == F(1, 2)
    assert text.endswith("midpoint=1/2\n")


def test_golden_modulus_content():
    assert (GOLDEN / "modulus_one_over_n_m1.txt").read_text().startswith("mu=2\n")


def test_console_script_subprocess():
    proc = subprocess.run([sys.executable, "-m", "signedbit", "eval", "1/3+1/6", "--bits", "30"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "eval_third_plus_sixth_bits30.txt").read_text()


@pytest.mark.parametrize("argv", [
    ["eval", "1//3", "--bits", "4"],
    ["eval", "(1+2", "--bits", "4"],
    ["eval", "1/3"],
    ["eval", "1/3", "--bits", "0"],
    ["oideal", "1/0", "--depth", "3"],
    ["riesz-demo", "--dim", "2", "--coord", "3", "--depth", "4"],
    ["cauchy-from-seq", "/nonexistent/file", "--depth", "3"],
    ["frobnicate"],
])
def test_usage_errors_exit_1(argv, capsys):
    # argparse exits on its own; the rest return a code
    try:
        code, _ = run(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1
    assert capsys.readouterr().err


def test_parse_error_names_offset(capsys):
    code, _ = run(["eval", "1//3", "--bits", "4"])
    assert code == 1
    assert "at offset 2" in capsys.readouterr().err


def test_contract_violations_exit_2(tmp_path):
    bad_q = tmp_path / "q.txt"
    bad_q.write_text("".join(f"{n}/1\n" for n in range(1, 10)))
    code, _ = run(["modulus", "--p", str(FIXTURE), "--q", str(bad_q), "--m", "1", "--witness", "6"])
    assert code == 2
    # witness too small: |p(1) - q(3)| = 2/3 > 1/2
    code, _ = run(["modulus", "--p", str(FIXTURE), "--q", str(FIXTURE), "--m", "1", "--witness", "1"])
    assert code == 2
    code, _ = run(["cauchy-from-seq", str(FIXTURE), "--depth", "40"])
    assert code == 2


def test_eval_json():
    code, text = run(["eval", "min(1/3, 1/4)*2", "--bits", "20", "--json"])
    assert code == 0
    payload = json.loads(text)
    assert abs(F(payload["midpoint"]) - F(1, 2)) <= F(1, 2 ** 20)


def test_oideal_and_stream_backed():
    code, text = run(["oideal", "1/3", "--depth", "6"])
    assert code == 0
    assert len(text.splitlines()) == 13
    code, text = run(["oideal", "1/3+1/6", "--depth", "4"])
    assert code == 0
    # 1/2 is an endpoint at every level below 1, so some memberships stay open
    assert "?" in text


def test_cideal_json_and_chain_depth():
    code, text = run(["cideal", "5/7", "--depth", "10", "--check", "--chain-depth", "4", "--json"])
    assert code == 0
    payload = json.loads(text)
    assert payload["kind"] == "C"


def test_cauchy_from_seq_fixture():
    code, text = run(["cauchy-from-seq", str(FIXTURE), "--depth", "12"])
    assert code == 0
    assert "cauchy_check: PASS" in text
    assert text.endswith("unblocked: FAIL\n")


def test_riesz_demo():
    code, text = run(["riesz-demo", "--dim", "3", "--coord", "2", "--depth", "16"])
    assert code == 0, text
    assert "chi_member: PASS" in text and "overall: PASS" in text
    code, _ = run(["riesz-demo", "--dim", "3", "--coord", "2", "--depth", "6"])
    assert code == 2
