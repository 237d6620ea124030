"""End-to-end command-line behavior: exit codes, report text, JSON bytes.

Most tests drive main() in process for speed; one subprocess test makes
sure the installed entry points agree with the in-process path.
"""

import json
import shutil
import subprocess
import sys

import pytest

from equigerm.cli import main


def run(argv):
    try:
        return main(argv)
    except SystemExit as e:
        return e.code


def test_whitney_certified_exits_zero(capsys):
    assert run(["check", "whitney-a", "examples/example_4_4.germ"]) == 0
    out = capsys.readouterr().out
    assert "verdict: CERTIFIED" in out
    assert "at origin: (4,)" in out
    assert "seed: 0:whitney" in out


def test_whitney_not_constant_exits_one(capsys):
    assert run(["check", "whitney-a", "examples/umbrella_b2.germ"]) == 1
    assert "verdict: NOT_CONSTANT" in capsys.readouterr().out


def test_af_certified_exits_zero(capsys):
    assert run(["check", "af", "examples/a1_surface_with_f.germ"]) == 0
    out = capsys.readouterr().out
    assert "verdict: CERTIFIED" in out
    assert "(2, 2, 2)" in out


def test_wf_not_constant_exits_one(capsys):
    assert run(["check", "wf", "examples/mu_jump_af.germ"]) == 1
    out = capsys.readouterr().out
    assert "at origin: 5" in out
    assert "verdict: NOT_CONSTANT" in out


def test_chain_report_exit_codes(capsys):
    assert run(["chain-report", "examples/a1_surface_with_f.germ"]) == 0
    assert run(["chain-report", "examples/mu_jump_af.germ"]) == 1
    capsys.readouterr()
    assert run(["chain-report", "examples/umbrella_b1.germ"]) == 2
    assert "no chain" in capsys.readouterr().err


def test_invariants_panel(capsys):
    assert run(["invariants", "examples/example_2_3.germ"]) == 0
    out = capsys.readouterr().out
    assert "associated multiplicities e^j" in out
    assert "[36, 4]" in out
    assert "'2': 4" in out and "'3': 32" in out
    assert "verdict: COMPUTED" in out


def test_invariants_with_function(capsys):
    assert run(["invariants", "examples/mu_jump_af.germ"]) == 0
    out = capsys.readouterr().out
    assert "em invariant" in out
    assert "at origin: 5" in out
    assert "mu_i(Z): [2, 1, 1]" in out


def test_arc_test_nested_ideals(capsys):
    assert run(["arc-test", "examples/example_1_3.germ"]) == 1
    out = capsys.readouterr().out
    assert "pullback of M along phi: orders [3]" in out
    assert "pullback of N along phi: orders [5]" in out
    assert "dependence of h on M along phi: CONSISTENT" in out
    assert "dependence of h on N along phi: REFUTED" in out


def test_arc_test_strict_umbrellas(capsys):
    assert run(["arc-test", "examples/umbrella_b1.germ", "--strict"]) == 1
    assert (
        run(
            [
                "arc-test",
                "examples/umbrella_b2.germ",
                "--strict",
                "--arc",
                "witness",
            ]
        )
        == 0
    )
    assert "CONSISTENT" in capsys.readouterr().out


def test_arc_test_rejects_off_germ_arc(capsys):
    code = run(
        ["arc-test", "examples/umbrella_b2.germ", "--arc", "off_germ"]
    )
    assert code == 2
    assert "arc not on the germ" in capsys.readouterr().err


def test_arc_test_usage_errors(capsys):
    # two arcs, none chosen
    assert run(["arc-test", "examples/umbrella_b2.germ"]) == 64
    assert run(["arc-test", "examples/umbrella_b2.germ", "--arc", "nope"]) == 64
    # no arcs at all
    assert run(["arc-test", "examples/example_2_3.germ"]) == 64
    capsys.readouterr()


def test_usage_errors(capsys):
    assert run(["frobnicate", "examples/example_4_4.germ"]) == 64
    assert run(["check", "whitney-a", "examples/no_such_file.germ"]) == 64
    assert run(["check", "whitney-a", "examples/example_4_4.germ", "--samples", "0,1"]) == 64
    assert run(["check", "whitney-a", "examples/example_4_4.germ", "--samples", "abc"]) == 64
    capsys.readouterr()


def test_field_flag_validation(capsys):
    base = ["check", "whitney-a", "examples/example_4_4.germ"]
    assert run(base + ["--field", "fp:15"]) == 64
    assert run(base + ["--field", "fp:7919"]) == 64  # prime but too small
    assert run(base + ["--field", "zz"]) == 64
    capsys.readouterr()
    assert run(base + ["--field", "fp:2147483647"]) == 0
    assert "verdict: CERTIFIED" in capsys.readouterr().out


def test_parse_errors_exit_65(tmp_path, capsys):
    bad = tmp_path / "bad.germ"
    bad.write_text("vars: x\nF: x ** 2\n")
    assert run(["invariants", str(bad)]) == 65
    assert "parse error" in capsys.readouterr().err
    rejected = tmp_path / "rejected.germ"
    rejected.write_text("vars: x\nparams: t\nf: x + 1\n")
    assert run(["invariants", str(rejected)]) == 65
    assert "rejected family" in capsys.readouterr().err


def test_json_report_bytes_are_stable(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert (
            run(["check", "wf", "examples/mu_jump_af.germ", "--json", str(p)])
            == 1
        )
    capsys.readouterr()
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1]
    text = blobs[0].decode()
    assert text.endswith("\n")
    reports = json.loads(text)
    assert [list(r) for r in reports] == [
        ["invariant", "at_origin", "samples", "verdict", "seed", "notes"]
    ]
    assert reports[0]["at_origin"] == 5
    assert reports[0]["samples"] == [
        {"point": "1", "value": 4},
        {"point": "-2", "value": 4},
    ]
    # fixed separators, no indent
    assert text == json.dumps(reports, separators=(", ", ": ")) + "\n"


def test_seed_flag_is_echoed(capsys):
    assert run(["check", "whitney-a", "examples/example_4_4.germ", "--seed", "7"]) == 0
    assert "seed: 7:whitney" in capsys.readouterr().out


def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "equigerm.cli", "check", "whitney-a", "examples/example_4_4.germ"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "verdict: CERTIFIED" in proc.stdout


@pytest.mark.skipif(shutil.which("equigerm") is None, reason="script not installed")
def test_console_script_help():
    proc = subprocess.run(
        ["equigerm", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "invariants" in proc.stdout
    assert "arc-test" in proc.stdout
