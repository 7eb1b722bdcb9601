import json
import subprocess
import sys
from pathlib import Path

import pytest

from rsdkit.cli import run
from rsdkit.lotteries import parse_lottery
from rsdkit.theorem import load_fixture

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "rsdkit" / "fixtures"
EXAMPLE = str(FIXTURES / "example.prof")


def cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_rsd(capsys):
    code, out, _ = cli(capsys, "eval", "--scheme", "rsd", "--profile", EXAMPLE)
    assert code == 0
    assert out == "5/12*a + 5/12*b + 1/12*c + 1/12*d\n"


def test_replay_rsd_exits_one(capsys):
    code, out, _ = cli(capsys, "replay", "--scheme", "rsd")
    assert code == 1
    assert "violated property: SdEfficiency" in out
    assert "witness re-verified: True" in out


def test_enumerate_count(capsys):
    code, out, _ = cli(capsys, "enumerate", "--alternatives", "a,b,c,d", "--count-only")
    assert (code, out) == (0, "75\n")
    code, out, _ = cli(capsys, "enumerate", "--alternatives", "a,b")
    assert out.splitlines() == ["a > b", "a~b", "b > a"]


def test_check_sdeff_witness_reverifies(capsys):
    code, out, _ = cli(capsys, "check-sdeff", "--profile", EXAMPLE, "--lottery", "1/4*a + 1/4*b + 1/4*c + 1/4*d",
                       "--format", "structured", "--max-denominator", "12")
    assert code == 1
    data = json.loads(out)
    assert data["efficient"] is False and data["reverified"] is True
    assert data["brute_force_dominator"] is not None
    code, out, _ = cli(capsys, "check-sdeff", "--profile", EXAMPLE, "--lottery", "1/2*a + 1/2*b")
    assert code == 0 and out.startswith("SD-efficient")


def test_check_expost(capsys):
    r5 = str(FIXTURES / "R5.prof")
    code, out, _ = cli(capsys, "check-expost", "--profile", r5, "--lottery", "1/2*a + 1/4*b + 1/4*c")
    assert code == 1 and "c has probability 1/4" in out
    code, _, _ = cli(capsys, "check-expost", "--profile", r5, "--lottery", "1/2*a + 1/2*b")
    assert code == 0


def test_check_sp_profile_and_exhaustive(capsys, tmp_path):
    table = tmp_path / "mock.tab"
    table.write_text("@R12 => 1/2*b + 1/2*c\ndefault => 1/4*a + 1/2*b + 1/4*c\n")
    r13 = str(FIXTURES / "R13.prof")
    code, out, _ = cli(capsys, "check-sp", "--table", str(table), "--profile", r13, "--format", "structured")
    assert code == 1
    witness = json.loads(out)["witness"]
    assert witness["agent"] == 4 and witness["misreport"] == "b~c > a > d"
    code, out, _ = cli(capsys, "check-sp", "--scheme", "rsd", "--strong", "--agents", "2", "--alternatives", "a,b")
    assert code == 0 and "holds" in out


def test_symmetry(capsys):
    r1 = str(FIXTURES / "R1.prof")
    code, out, _ = cli(capsys, "symmetry", "--scheme", "rsd", "--profile", r1, "--pi", "(1 2)(3 4)",
                       "--sigma", "(a b)(c d)")
    assert code == 0 and "hold" in out


def test_lift(capsys):
    r1 = str(FIXTURES / "R1.prof")
    code, out, _ = cli(capsys, "lift", "--profile", r1, "--agents", "5", "--alternatives", "a,b,c,d,e")
    assert code == 0
    assert out.splitlines()[0] == "agent 1: a~c > b~d > e"
    assert out.splitlines()[-1] == "agent 5: a~b~c~d~e"


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--scheme", "borda", "--profile", EXAMPLE],
        ["eval", "--scheme", "rsd"],
        ["eval", "--scheme", "rsd", "--profile", "/nonexistent.prof"],
        ["check-sdeff", "--profile", EXAMPLE, "--lottery", "1/2*a + 1/3*b"],
        ["symmetry", "--scheme", "rsd", "--profile", EXAMPLE, "--pi", "(1 9)"],
        ["enumerate"],
        ["eval", "--scheme", "rd", "--profile", EXAMPLE],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = cli(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_parse_error_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.prof"
    bad.write_text("agent 1: a > b > c > d\nagent 2: a > > b c d\n")
    code, _, err = cli(capsys, "eval", "--scheme", "rsd", "--profile", str(bad))
    assert code == 2 and "line 2" in err and "column" in err


def test_structured_output_is_byte_stable(capsys):
    outputs = []
    for _ in range(2):
        code, out, _ = cli(capsys, "replay", "--scheme", "rsd", "--format", "structured")
        outputs.append(out)
    assert outputs[0] == outputs[1]
    data = json.loads(outputs[0])
    assert data["violated_property"] == "SdEfficiency" and data["reverified"] is True
    assert data["lotteries"]["R1"] == [["a", 7, 24], ["b", 7, 24], ["c", 5, 24], ["d", 5, 24]]


def test_replay_lifted(capsys):
    code, out, _ = cli(capsys, "replay", "--scheme", "rsd", "--agents", "6", "--alternatives", "a,b,c,d,e",
                       "--format", "structured")
    data = json.loads(out)
    assert code == 1 and data["lifted"] is True and data["reverified"] is True


def test_eval_table_round_trip(capsys, tmp_path):
    table = tmp_path / "t.tab"
    table.write_text(f"{EXAMPLE} => 1/2*a + 1/2*b\n")
    code, out, _ = cli(capsys, "eval", "--table", str(table), "--profile", EXAMPLE, "--format", "structured")
    data = json.loads(out)
    assert code == 0
    assert parse_lottery(data["lottery"], load_fixture("example").universe) == parse_lottery(
        "1/2*a + 1/2*b", ("a", "b", "c", "d"))


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "rsdkit.cli", "enumerate", "--alternatives", "a,b,c", "--count-only"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "13\n"
