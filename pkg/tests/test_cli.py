import json

import pytest

from maxsub.cli import (EXIT_OK, EXIT_REFUSED, SpecError, main, parse_spec)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_builtins():
    assert parse_spec("sym:4").resolved.order == 24
    assert parse_spec("alt:5").resolved.order == 60
    assert parse_spec("agl:3,2").resolved.order == 1344
    assert parse_spec("agammal:1,8").resolved.order == 168


def test_parse_perm():
    gs = parse_spec("perm:4:(1,2);(1,2,3,4)")
    assert gs.resolved.order == 24


def test_parse_dp():
    gs = parse_spec("dp:cyc:2+cyc:3")
    assert gs.resolved.order == 6
    assert gs.resolved.degree == 5


def test_parse_lk():
    gs = parse_spec("lk:sym:4,2")
    assert gs.resolved.order == 96
    gs3 = parse_spec("lk:sym:4,3")
    assert gs3.resolved.order == 384


def test_parse_hat():
    gs = parse_spec("hat:agl:1,8;2")
    assert gs.resolved.degree == 128


def test_parse_sub():
    gs = parse_spec("sub:cyc:5+cyc:5")
    assert gs.resolved.order == 5


def test_parse_errors():
    for bad in ["", "nosuch:3", "lk:sym:4", "dp:cyc:2", "perm:x:(1,2)"]:
        with pytest.raises((SpecError, ValueError)):
            parse_spec(bad)


def test_cmd_analyze_s4(capsys):
    code, out, err = run_cli(capsys, "analyze", "sym:4")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["profile"]["lambda"] == 3
    assert payload["profile"]["m_exact"] == {"2": 1, "3": 3, "4": 4}
    assert payload["profile"]["script_M"]["value"] == pytest.approx(1.0)


def test_cmd_analyze_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "--seed", "3", "analyze", "alt:5")
    code2, out2, _ = run_cli(capsys, "--seed", "3", "analyze", "alt:5")
    assert code1 == code2 == EXIT_OK
    assert out1 == out2


def test_cmd_bounds_markdown(capsys):
    code, out, _ = run_cli(capsys, "bounds", "alt:5",
                           "--indices", "5,6,10", "--markdown")
    assert code == EXIT_OK
    assert "| 5 |" in out


def test_cmd_nu(capsys):
    code, out, _ = run_cli(capsys, "nu", "alt:5")
    assert code == EXIT_OK
    assert json.loads(out)["nu"] == 2


def test_cmd_nu_mc(capsys):
    code, out, _ = run_cli(capsys, "--seed", "5", "nu", "alt:5",
                           "--mode", "mc", "--trials", "4000")
    assert code == EXIT_OK
    assert json.loads(out)["nu"] == 2


def test_cmd_construct_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "construct", "lk:sym:4,2")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["order"] == "96"
    gs = parse_spec(payload["as_perm_spec"])
    assert gs.resolved.order == 96


def test_refusal_exit_code(capsys):
    # a hat too large to materialize refuses with exit code 2
    code, out, err = run_cli(capsys, "--materialize-limit", "64",
                             "analyze", "hat:agl:1,8;2")
    assert code == EXIT_REFUSED
    assert "refused" in err
