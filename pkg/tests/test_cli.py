import json

import pytest

from ainfty.cli import main

from conftest import DATA

F26 = str(DATA / "example-2.6.dga")
F33 = str(DATA / "example-3.3.dga")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", F33)
    assert code == 0 and "ok" in out


def test_validate_missing_file(capsys):
    code, _, err = run(capsys, "validate", str(DATA / "nope.dga"))
    assert code == 2 and "error" in err


def test_validate_d_squared(tmp_path, capsys):
    bad = tmp_path / "bad.dga"
    bad.write_text(
        "dga {\n  degree_cap: 8;\n"
        "  generators { t: 1; u: 2; v: 2; w: 3; }\n"
        "  d { v = t*u; w = v*u; }\n}\n"
    )
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and "d^2" in out


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 2


def test_cohomology_json(capsys):
    code, out, _ = run(capsys, "cohomology", F26, "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["format_version"] == 1
    assert rec["dimensions"]["10"] == 2


def test_json_output_is_deterministic(capsys):
    _, out1, _ = run(capsys, "transfer", F33, "--arity", "3", "--json")
    _, out2, _ = run(capsys, "transfer", F33, "--arity", "3", "--json")
    assert out1 == out2


def test_contract_table(capsys):
    code, out, _ = run(capsys, "contract", F26, "--table", F26)
    assert code == 0 and "identities: ok" in out


def test_contract_random(capsys):
    code, _, _ = run(capsys, "contract", F33, "--random", "7")
    assert code == 0


def test_checks_pass_on_examples(capsys):
    for cmd in ["stasheff-check", "morphism-check"]:
        code, out, _ = run(capsys, cmd, F33, "--arity", "3")
        assert code == 0 and "0 violation" in out


def test_bar_check(capsys):
    code, out, _ = run(capsys, "bar-check", F33, "--words", "3", "--dga")
    assert code == 0 and "round trip ok" in out


def test_massey_cli(capsys):
    code, out, _ = run(capsys, "massey", F33, "a01", "a12", "a23", "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["kind"] == "coset" and rec["subspace_dim"] == 4


def test_massey_rejects_non_cocycle(capsys):
    code, _, err = run(capsys, "massey", F26, "a02", "a12", "a23")
    assert code == 2 and "not a cocycle" in err


def test_adapted_check_exit_codes(capsys):
    code, _, _ = run(capsys, "adapted-check", F33, "a01", "a12", "a23")
    assert code == 0
    code, out, _ = run(
        capsys, "adapted-check", F26, "a01", "a12", "a23", "a34", "--table", F26
    )
    assert code == 1 and "FAILS" in out


def test_reproduce_both_examples(capsys):
    code, out, _ = run(capsys, "reproduce", "example-2.6")
    assert code == 0 and "all values match" in out
    code, out, _ = run(capsys, "reproduce", "example-3.3", "--seeds", "5")
    assert code == 0 and "all values match" in out
