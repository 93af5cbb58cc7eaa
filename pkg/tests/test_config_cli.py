import csv
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabattery import cli, dynamics
from parabattery.config import ConfigError, ScenarioConfig, parse_range
from parabattery.io import format_number, sha256_file


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def as_array(rows):
    return np.array([[float(v) if v else np.nan for v in r] for r in rows])


def run(tmp_path, *argv):
    return cli.main([*argv, "--out", str(tmp_path), "--no-plot"])


# --- config ------------------------------------------------------------------------


def test_defaults_are_reference_scenario():
    cfg = ScenarioConfig()
    p = cfg.params()
    assert p.r1 == pytest.approx(p.r2, abs=1e-15) and p.delta == 0.0
    assert cfg.init().c1 == 1 and cfg.init().c2 == 0
    assert ScenarioConfig(nu=-0.3).params().delta == pytest.approx(-7.5)


cfg_st = st.builds(
    ScenarioConfig,
    nu=st.floats(-0.49, 2.0),
    rabi_ratio=st.floats(0.0, 60.0),
    r1=st.floats(0.0, 1.0),
    c1_phase=st.floats(-7, 7),
    t_end=st.one_of(st.none(), st.floats(0.1, 50)),
    n_points=st.one_of(st.none(), st.integers(2, 5000)),
    seed=st.integers(0, 2**31),
    nu_list=st.one_of(st.none(), st.lists(st.floats(-0.49, 1.0), max_size=4)),
)


@settings(max_examples=60, deadline=None)
@given(cfg_st)
def test_round_trip_idempotent(cfg):
    text = cfg.canonical_json()
    again = ScenarioConfig.from_json(text)
    assert again == ScenarioConfig.from_dict(json.loads(text))
    assert again.canonical_json() == text


def test_parse_errors_have_location():
    with pytest.raises(ConfigError, match="line 2, column"):
        ScenarioConfig.from_json('{"nu": 0.1,\n "R": }')
    with pytest.raises(ConfigError, match="unknown config field"):
        ScenarioConfig.from_dict({"mu": 1})
    with pytest.raises(ConfigError, match="rabi_ratio"):
        ScenarioConfig.from_dict({"rabi_ratio": "big"})
    with pytest.raises(ConfigError, match="normalised"):
        ScenarioConfig.from_dict({"c2_abs": 0.5})
    with pytest.raises(ConfigError, match="t_end"):
        ScenarioConfig.from_dict({"t_end": 0.0})


@pytest.mark.parametrize("text,expected", [("0:1:3", [0.0, 0.5, 1.0]), ("0.2", [0.2]), ("0:1:1", [0.0])])
def test_parse_range(text, expected):
    assert np.allclose(parse_range(text).values, expected)


@pytest.mark.parametrize("bad", ["0:1", "a:b:3", "0:1:0", "0:1:2.5"])
def test_parse_range_rejects(bad):
    with pytest.raises(ConfigError):
        parse_range(bad)


# --- cli -------------------------------------------------------------------------


def test_dynamics_csv_and_manifest(tmp_path):
    assert run(tmp_path, "dynamics", "--nu", "-0.3", "--R", "50", "--t-end", "0.3",
               "--n-points", "3001") == 0
    header, rows = read_csv(tmp_path / "dynamics.csv")
    assert header[:3] == ["lambda_t", "re_c1", "im_c1"]
    pop = np.array([float(r[header.index("pop_battery")]) for r in rows])
    t = np.array([float(r[0]) for r in rows])
    assert pop.max() == pytest.approx(0.980, abs=1e-3)
    assert t[pop.argmax()] == pytest.approx(0.099, abs=1e-3)
    man = json.loads((tmp_path / "run_manifest.json").read_text())
    assert man["engine_version"] and man["status"] == "ok"
    for entry in man["outputs"]:
        assert sha256_file(entry["path"]) == entry["sha256"]


def test_energetics_t0_efficiency_empty(tmp_path):
    assert run(tmp_path, "energetics", "--R", "0.4") == 0
    header, rows = read_csv(tmp_path / "energetics.csv")
    assert rows[0][header.index("efficiency")] == ""
    assert all(float(r[header.index("ergotropy")]) == 0.0 for r in rows)
    final = float(rows[-1][header.index("stored_energy")])
    assert abs(final / 5.0 - 0.25) < 2e-3


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert cli.main(["sweep", "--out", str(out), "--nu", "-0.3", "--sweep", "r1=0:1:5",
                         "--t-end", "5", "--n-points", "51", "--seed", "3", "--jobs", "2"]) == 0
    for name in ("sweep.csv", "sweep_summary.csv", "sweep_summary.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_sweep_boundaries_store_nothing(tmp_path):
    assert run(tmp_path, "sweep", "--nu", "-0.3", "--sweep", "r1=0:1:11") == 0
    header, rows = read_csv(tmp_path / "sweep_summary.csv")
    first, last = rows[0], rows[-1]
    assert float(first[0]) == 0.0 and float(last[0]) == 1.0
    for r in (first, last):
        assert float(r[header.index("max_stored_energy")]) == pytest.approx(0.0, abs=1e-15)


def test_sweep_single_point(tmp_path):
    assert run(tmp_path, "sweep", "--sweep", "nu=-0.2", "--t-end", "1", "--n-points", "5") == 0
    _, rows = read_csv(tmp_path / "sweep_summary.csv")
    assert len(rows) == 1


def test_config_file_with_flag_override(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"nu": -0.3, "rabi_ratio": 50, "t_end": 0.2, "n_points": 11}))
    assert cli.main(["dynamics", "--config", str(path), "--n-points", "21",
                     "--out", str(tmp_path / "o"), "--no-plot"]) == 0
    _, rows = read_csv(tmp_path / "o" / "dynamics.csv")
    assert len(rows) == 21


def test_nonmarkov_endpoints_and_empty(tmp_path):
    assert run(tmp_path, "nonmarkov", "--nu-list", "0", "--n-theta", "6", "--n-phi", "4") == 0
    header, rows = read_csv(tmp_path / "nonmarkov.csv")
    assert header[:2] == ["nu", "blp_value"] and float(rows[0][1]) <= 1e-6
    assert run(tmp_path / "e", "nonmarkov", "--nu-list", "") == 0
    header, rows = read_csv(tmp_path / "e" / "nonmarkov.csv")
    assert header and rows == []


def test_strict_exit_on_coarse_grid(tmp_path):
    argv = ["nonmarkov", "--nu", "-0.3", "--R", "50", "--t-end", "5", "--n-points", "101",
            "--n-theta", "4", "--n-phi", "2"]
    assert run(tmp_path, *argv) == 0
    assert run(tmp_path, *argv, "--strict") == 2
    assert json.loads((tmp_path / "run_manifest.json").read_text())["status"] == "tolerance"


@pytest.mark.parametrize("argv", [
    ["dynamics", "--nu", "-0.6"],
    ["dynamics", "--t-end", "0"],
    ["dynamics", "--n-points", "1"],
    ["sweep"],
    ["sweep", "--sweep", "r1=0:1"],
    ["sweep", "--sweep", "foo=0:1:3"],
    ["reproduce", "fig9"],
    ["frobnicate"],
    ["dynamics", "--config", "/nonexistent.json"],
    ["dynamics", "--jobs", "0"],
])
def test_usage_errors_exit_1(tmp_path, argv):
    assert run(tmp_path, *argv) == 1


def test_reproduce_fig4b(tmp_path):
    assert run(tmp_path, "reproduce", "fig4b") == 0
    header, rows = read_csv(tmp_path / "fig4b.csv")
    data = as_array(rows)
    k = data[:, header.index("stored_energy")].argmax()
    assert data[k, header.index("stored_energy")] >= 0.95 * 5.0
    assert data[k, header.index("lambda_t")] == pytest.approx(0.1, abs=0.01)


def test_reproduce_fig2a_shapes(tmp_path):
    assert cli.main(["reproduce", "fig2a", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig2a.svg").exists()
    header, rows = read_csv(tmp_path / "fig2a.csv")
    data = as_array(rows)
    col = header.index("stored_energy")
    e0 = data[data[:, 0] == 0.0][:, col]
    e4 = data[data[:, 0] == -0.4][:, col]
    assert np.all(np.diff(e0) >= -1e-12)
    assert np.any(np.diff(e4) < -1e-6)


def test_validate_fast_passes(tmp_path, capsys):
    assert run(tmp_path, "validate", "--level", "fast") == 0
    assert "checks passed" in capsys.readouterr().out


def test_validate_negative_control(tmp_path, monkeypatch):
    real = dynamics.survival_amplitude

    def perturbed(consts, t):
        return real(consts, t) * (1 + 1e-3 * np.asarray(t))

    monkeypatch.setattr(dynamics, "survival_amplitude", perturbed)
    assert run(tmp_path, "validate") == 2


def test_format_number():
    assert format_number(0.1) == "0.10000000000000001"
    assert format_number(float("nan")) == ""
    assert format_number(3) == "3"
