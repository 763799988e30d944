import json
import shutil
import subprocess

import pytest
from hypothesis import given, strategies as st

from anticyc import cli, oracles
from anticyc.cli import RunConfig, main, run
from anticyc.errors import InputError


def _invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, json.loads(out) if out.startswith("{") else out


@given(st.builds(RunConfig, disc=st.sampled_from([None, -4, -7, -23]), p=st.sampled_from([None, 3, 5, 13]),
                 precision=st.integers(1, 200), B=st.integers(1, 5000), L=st.integers(1, 5000),
                 characters=st.lists(st.sampled_from(["i/psi0_5", "sqrt-7/w2_p2sq"]), max_size=2),
                 seed=st.integers(0, 2 ** 32), threads=st.integers(1, 8)))
def test_config_round_trip_is_byte_identical(cfg):
    assert RunConfig.from_json(cfg.dumps()).dumps() == cfg.dumps()


def test_config_rejects_unknown_keys_and_bad_values():
    with pytest.raises(InputError):
        RunConfig.from_json('{"precison": 3}')
    with pytest.raises(InputError):
        RunConfig.from_json('{"p": 4}')


def test_report_schema_and_determinism():
    argv = ["euler", "root-number", "--nu", "1", "--j", "3", "--k", "4"]
    code1, r1, _ = run(argv, environ={})
    code2, r2, _ = run(argv, environ={})
    assert code1 == code2 == 0
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
    assert set(r1) == {"version", "config", "results", "timing"} and r1["timing"] is None
    (res,) = r1["results"]
    assert res["status"] == "ok"
    assert res["witness"] == {"eps_fK": 1, "eps_fchi": -1, "quadrant": "4th"}


def test_timing_only_on_request():
    _, r, _ = run(["interp", "types", "--k1", "4", "--k2", "2", "--timing"], environ={})
    assert r["timing"]["total_seconds"] >= 0


def test_exit_codes(capsys):
    assert _invoke(capsys, "interp", "ep-factor")[0] == 0
    assert _invoke(capsys, "interp", "ep-factor", "--swap-square")[0] == 1
    code, diag = _invoke(capsys, "classgroup", "--bogus")
    assert code == 2 and diag["error"] == "usage"
    code, diag = _invoke(capsys, "interp", "gamma", "--s", "0")
    assert code == 2 and "pole" in json.dumps(diag).lower()
    code, diag = _invoke(capsys, "classgroup", "--disc", "-12")
    assert code == 2


def test_environment_overrides():
    _, r, _ = run(["field", "info", "--disc", "-7"], environ={"ANTICYC_PRECISION": "33", "ANTICYC_THREADS": "2"})
    assert r["config"]["precision"] == 33 and r["config"]["threads"] == 2
    _, r, _ = run(["field", "info", "--disc", "-7", "--N", "9"], environ={"ANTICYC_PRECISION": "33"})
    assert r["config"]["precision"] == 9
    with pytest.raises(InputError):
        run(["field", "info", "--disc", "-7"], environ={"ANTICYC_PRECISION": "many"})


def test_config_file_is_loaded(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(RunConfig(disc=-23, B=50).dumps())
    _, r, _ = run(["classgroup", "--config", str(path)], environ={})
    assert r["config"]["disc"] == -23 and r["results"][0]["witness"]["order"] == 3


def test_ideal_syntax():
    from anticyc.iqfield import quadratic_field
    K = quadratic_field(-4)
    assert cli.parse_ideal(K, "5") == K.ideal(5)
    assert cli.parse_ideal(K, "2,1") == K.ideal((2, 1))
    assert cli.parse_ideal(K, "5,2,1") == K.ideal((2, 1))


def test_character_build_save_and_reload(tmp_path, capsys):
    target = tmp_path / "psi.json"
    code, rep = _invoke(capsys, "char", "build", "--disc", "-4", "--conductor", "5,2,1", "--type=-1,0",
                        "--order", "4", "--exponents", "1", "--save", str(target))
    assert code == 0 and target.exists()
    code, rep = _invoke(capsys, "char", "eval", "--char", str(target), "--ideal", "13")
    assert code == 0


def test_char_theta_and_euler_commands(capsys):
    assert _invoke(capsys, "theta", "check", "--char", "i/cm32", "--B", "150")[0] == 0
    assert _invoke(capsys, "char", "spade", "--char", "i/psi0_5", "--p", "5")[0] == 0
    assert _invoke(capsys, "euler", "tame-check", "--disc", "-4", "--curve", "0,-1,1,-10,-20", "--level", "11",
                   "--char1", "i/cm32", "--char2", "i/cm32", "--m", "41", "--p", "5", "--L", "60")[0] == 0
    assert _invoke(capsys, "euler", "inert-check", "--disc", "-7", "--form", "11a1",
                   "--char1", "sqrt-7/w2_p2sq", "--char2", "sqrt-7/w2_p2sq", "--L", "60")[0] == 0


def test_ring_and_ray_class_commands(capsys):
    code, rep = _invoke(capsys, "ringclass", "--disc", "-4", "--m", "7")
    assert code == 0 and rep["results"][0]["witness"]["order"] == oracles.ring_class_number(-4, 7) == 4
    code, rep = _invoke(capsys, "rayclass", "--disc", "-4", "--modulus", "5")
    assert code == 0


def test_quick_suite_subset_passes(capsys):
    code, rep = _invoke(capsys, "suite", "--profile", "quick", "--only", "1,10,12")
    assert code == 0
    names = [r["name"] for r in rep["results"]]
    assert names[:3] == ["01-class-groups", "10-interpolation-factors", "12-sign-tables"]
    assert all(r["status"] == "pass" for r in rep["results"][:3])


def test_pretty_output(capsys):
    code, out = _invoke(capsys, "interp", "types", "--k1", "4", "--k2", "2", "--pretty")
    assert code == 0 and out.startswith("anticyc") and "twist-types" in out


@pytest.mark.skipif(shutil.which("anticyc") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["anticyc", "euler", "selmer", "--j", "1", "--k", "4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][0]["witness"]["condition"] == "OrdinaryOrdinary"


def test_documented_root_number_example(capsys):
    code, rep = _invoke(capsys, "euler", "root-number", "--nu", "1", "--j", "2", "--k", "2")
    assert code == 0 and rep["results"][0]["witness"] == {"eps_fK": 1, "eps_fchi": -1, "quadrant": "4th"}


def test_form_table_input(tmp_path, capsys):
    from anticyc import catalog
    fd = catalog.form("11a1")
    table = {"schema": "anticyc.form-table/1", "weight": 2, "level": 11,
             "a": {str(ell): fd.a(ell) for ell in range(2, 80) if ell != 11 and all(ell % q for q in range(2, ell))}}
    path = tmp_path / "f.json"
    path.write_text(json.dumps(table))
    code, _ = _invoke(capsys, "euler", "inert-check", "--disc", "-7", "--form-table", str(path), "--L", "60")
    assert code == 0
    path.write_text(json.dumps({**table, "schema": "anticyc.form-table/9"}))
    assert _invoke(capsys, "euler", "inert-check", "--disc", "-7", "--form-table", str(path), "--L", "60")[0] == 2


def test_character_schema_is_versioned(tmp_path, capsys):
    from anticyc import catalog
    data = catalog.character("i/psi0_5").to_json()
    assert data["schema"] == "anticyc.character/1"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({**data, "schema": "anticyc.character/0"}))
    assert _invoke(capsys, "char", "eval", "--char", str(path), "--ideal", "13")[0] == 2
