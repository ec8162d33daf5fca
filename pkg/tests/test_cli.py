import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from tadpole_nls.cli import RunConfig, build_parser, main, parse_config, parse_real, UsageError


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_real():
    assert parse_real("pi") == math.pi
    assert parse_real("2pi") == 2 * math.pi
    assert parse_real("-0.5*pi") == -0.5 * math.pi
    assert parse_real("pi/4") == math.pi / 4
    assert parse_real("1.5") == 1.5


def test_help_lists_every_flag():
    text = build_parser().format_help()
    for flag in ("--kind", "--L", "--omega", "--n", "--index", "--out-dir", "--config",
                 "--format", "--state", "--out", "--phi", "--zmin", "--zmax", "--dz",
                 "--witness", "--h", "--tol-ode", "--tol-bc"):
        assert flag in text


def test_family_writes_files(tmp_path, capsys):
    code, out, _ = run(["family", "--kind", "cn", "--L", "3.14159", "--omega", "-1", "--n",
                        "1", "--out-dir", str(tmp_path)], capsys)
    assert code == 0 and json.loads(out)["pass"] is True
    assert (tmp_path / "CnVanishingTail_1_state.json").exists()
    assert (tmp_path / "CnVanishingTail_1_report.json").exists()


def test_family_no_solution_names_condition(tmp_path, capsys):
    code, _, err = run(["family", "--kind", "cn", "--L", "3.14159", "--omega", "2", "--n", "1",
                        "--out-dir", str(tmp_path)], capsys)
    assert code == 2 and "omega >= lambda_n" in err


def test_family_dn1_small_z(tmp_path, capsys):
    code, _, err = run(["family", "--kind", "dn1", "--L", "3.14159", "--omega", "-0.001",
                        "--index", "1", "--out-dir", str(tmp_path)], capsys)
    assert code == 2 and "0 root(s)" in err


def _state_file(tmp_path, capsys, kind="dn0", label=("--index", "1")):
    run(["family", "--kind", kind, "--L", "pi", "--omega", "-1", *label,
         "--out-dir", str(tmp_path)], capsys)
    name = {"dn0": "Dn0", "cn": "CnVanishingTail"}[kind]
    return tmp_path / f"{name}_{label[1]}_state.json"


def test_verify_fresh_and_perturbed(tmp_path, capsys):
    path = _state_file(tmp_path, capsys, "cn", ("--n", "1"))
    code, out, _ = run(["verify", "--state", str(path)], capsys)
    assert code == 0
    data = json.loads(path.read_text())
    data["grid"]["u"] = [1.01 * v for v in data["grid"]["u"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(["verify", "--state", str(bad)], capsys)
    assert code == 1 and json.loads(out)["samples_match_closed_form"] is False


def test_verify_schema_violation(tmp_path, capsys):
    path = _state_file(tmp_path, capsys)
    data = json.loads(path.read_text())
    del data["grid"]["eta"]
    path.write_text(json.dumps(data))
    code, _, err = run(["verify", "--state", str(path)], capsys)
    assert code == 2 and "schema" in err


def test_magnetic(tmp_path, capsys):
    path = _state_file(tmp_path, capsys)
    code, out, _ = run(["magnetic", "--state", str(path), "--phi", "2pi"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and abs(rep["phase"]["S_jump"] + 2 * math.pi) < 1e-9
    code, out, _ = run(["magnetic", "--state", str(path), "--phi", "pi",
                        "--out", str(tmp_path / "m.json")], capsys)
    rep = json.loads((tmp_path / "m.json").read_text())
    assert code == 1 and rep["quantization_violation"] and "2 n pi" in rep["condition"]


def test_thresholds(capsys):
    code, out, _ = run(["thresholds", "--kind", "dn0", "--zmin", "3", "--zmax", "3.5"], capsys)
    recs = json.loads(out)
    assert code == 0 and len(recs) == 1 and abs(recs[0]["location"] - 3.27141847) < 1e-7


def test_scan_config_errors(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{\n "L": "pi",\n "families": []\n}\n')
    code, _, err = run(["scan", "--config", str(cfg)], capsys)
    assert code == 2 and "line 3" in err
    cfg.write_text('{\n "L": "pi",\n "families": ["Dn0"],\n}\n')
    code, _, err = run(["scan", "--config", str(cfg)], capsys)
    assert code == 2 and "line 4" in err
    cfg.write_text('{\n "L": -1\n}\n')
    code, _, err = run(["scan", "--config", str(cfg)], capsys)
    assert code == 2 and "line 2" in err and "positive" in err


def test_config_defaults_and_pi():
    cfg = parse_config('{"L": "pi", "families": ["dn0", "cn+"]}')
    assert cfg.L == math.pi and cfg.families == ["Dn0", "CnPlus"]
    assert cfg.omega_grid["negative_points"] == 40
    with pytest.raises(UsageError):
        parse_config('{"bogus": 1}')


configs = st.builds(
    lambda L, fams, npts, fmt: RunConfig(
        L=L, families=fams,
        omega_grid={**RunConfig().omega_grid, "negative_points": npts},
        output={"dir": "out", "format": fmt}),
    st.floats(0.1, 100.0),
    st.lists(st.sampled_from(["CnVanishingTail", "CnPlus", "CnMinus", "Dn0", "Dn1"]),
             min_size=1, max_size=5, unique=True),
    st.integers(1, 200),
    st.sampled_from(["csv", "json", "both"]),
)


@given(configs)
@settings(max_examples=100, deadline=None)
def test_config_round_trip(cfg):
    assert parse_config(cfg.dumps()) == cfg


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "tadpole_nls", "--help"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and "thresholds" in r.stdout
