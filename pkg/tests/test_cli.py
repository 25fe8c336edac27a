import csv
import io
import json
import math

import numpy as np
import pytest

from qdiscord import ConfigError, format_section_table, parse_config, werner
from qdiscord import cli
from qdiscord.config import sweep_points
from qdiscord.manifold import section2_table


def write(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


UNITARY = {
    "schema": 1,
    "name": "werner-xy",
    "state": {"kind": "werner", "alpha": "1/2"},
    "hamiltonian": {"kind": "xy_antisym", "J_yx": 1},
    "time": {"horizon": 1.5707963267948966, "samples": 121},
}
NOISY = {
    "schema": 1,
    "name": "werner-ising-rtn",
    "state": {"kind": "werner", "alpha": 1},
    "hamiltonian": {"kind": "ising", "J": 1, "B_z": "1/3"},
    "noise": {"g_z": "1/3", "gamma": 1},
    "time": {"horizon": 6, "samples": 61},
}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_measure_bell_state(capsys):
    code, out, _ = run(["measure", "--state", "N11=-1,N22=-1,N33=-1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert math.isclose(rep["D"], 1.0, abs_tol=1e-9)
    assert math.isclose(rep["D_G"], 0.5) and math.isclose(rep["C"], 1.0)
    assert rep["components"]["N33"] == -1.0


def test_measure_accepts_flat_components_and_config(tmp_path, capsys):
    flat = ",".join(str(v) for v in werner(0.5).flat())
    code, out, _ = run(["measure", "--state", flat], capsys)
    assert code == 0 and math.isclose(json.loads(out)["D_G"], 0.125)
    code, out2, _ = run(["measure", "--config", write(tmp_path, UNITARY)], capsys)
    assert code == 0 and json.loads(out2)["D_G"] == json.loads(out)["D_G"]


@pytest.mark.parametrize("state", ["N11=abc", "N44=1", "1,2,3", "N11=1,N22=1,N33=1"])
def test_measure_rejects_bad_states(state, capsys):
    code, _, err = run(["measure", "--state", state], capsys)
    assert code == 2 and "error" in err


def test_evolve_csv(tmp_path, capsys):
    code, out, _ = run(["evolve", "--config", write(tmp_path, UNITARY)], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 121
    assert list(rows[0])[:4] == ["t", "N01", "N02", "N03"] and list(rows[0])[-1] == "C"
    first = np.array([float(rows[0][k]) for k in cli.COLUMN_NAMES])
    assert np.array_equal(first, werner(0.5).flat())
    assert math.isclose(float(rows[-1]["t"]), math.pi / 2)


def test_evolve_noisy_has_norm_column_and_overrides(tmp_path, capsys):
    path = write(tmp_path, NOISY)
    code, out, _ = run(["evolve", "--config", path, "--samples", "31", "--horizon", "3"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 31 and float(rows[-1]["t"]) == 3.0
    norms = [float(r["norm"]) for r in rows]
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_output_is_byte_identical(tmp_path):
    path = write(tmp_path, NOISY)
    outs = []
    for k in range(2):
        dest = tmp_path / f"out{k}.csv"
        assert cli.main(["evolve", "--config", path, "--seed", "7", "--out", str(dest)]) == 0
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]


def test_classify_json(tmp_path, capsys):
    code, out, _ = run(["classify", "--config", write(tmp_path, UNITARY), "--samples", "401"], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["joint"] == "OB" and rec["scenario"] == "werner-xy"


def test_sweep_json_lines_in_grid_order(tmp_path, capsys):
    cfg = dict(UNITARY, sweep={"state.alpha": [1, "1/2"], "hamiltonian.J_yx": [1, 2]})
    code, out, _ = run(["sweep", "--config", write(tmp_path, cfg), "--samples", "201"], capsys)
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["index"] for r in recs] == [0, 1, 2, 3]
    assert [r["assignment"]["state.alpha"] for r in recs] == [1, 1, "1/2", "1/2"]
    assert [r["assignment"]["hamiltonian.J_yx"] for r in recs] == [1, 2, 1, 2]
    code, parallel, _ = run(["sweep", "--config", write(tmp_path, cfg), "--samples", "201",
                             "--jobs", "2"], capsys)
    assert code == 0 and parallel == out


def test_sections(capsys):
    code, out, _ = run(["sections", "--dim", "2", "--grid", "101"], capsys)
    assert code == 0
    assert out == format_section_table(section2_table(101)) + "\n"
    code, out, _ = run(["sections", "--dim", "3", "--axes", "0X,0Y,0Z", "--grid", "21"], capsys)
    assert code == 0 and "ball" in out.lower()
    code, _, _ = run(["sections", "--dim", "3", "--axes", "XX,YY"], capsys)
    assert code == 2


def test_integrate_is_deterministic(capsys):
    args = ["integrate", "--samples", "5000", "--seed", "11", "--fn", "purity"]
    code, a, _ = run(args, capsys)
    _, b, _ = run(args, capsys)
    assert code == 0 and a == b
    assert json.loads(a)["integrand"] == "purity"


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(colour="red"),
    lambda d: d.update(schema=2),
    lambda d: d["state"].update(alpha="1/0"),
    lambda d: d["state"].update(alpha="half"),
    lambda d: d["hamiltonian"].update(kind="dzyaloshinskii"),
    lambda d: d["time"].update(samples=1),
    lambda d: d.update(noise={"g_z": 1, "gamma": -1}),
    lambda d: d.pop("hamiltonian"),
])
def test_config_errors_exit_2(mutate, tmp_path, capsys):
    cfg = json.loads(json.dumps(UNITARY))
    mutate(cfg)
    code, _, err = run(["evolve", "--config", write(tmp_path, cfg)], capsys)
    assert code == 2 and "config error" in err


def test_missing_file_bad_json_and_bad_args(tmp_path, capsys):
    assert run(["evolve", "--config", str(tmp_path / "nope.json")], capsys)[0] == 2
    assert run(["evolve", "--config", write(tmp_path, "{not json")], capsys)[0] == 2
    assert run(["evolve"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["integrate", "--seed", "-1"], capsys)[0] == 2
    assert run(["integrate", "--seed", str(2**64)], capsys)[0] == 2
    assert run(["measure"], capsys)[0] == 2


def test_numerical_failures_exit_3(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, UNITARY)
    bad = np.tile(werner(1.0).flat() * 1.5, (121, 1))  # negative eigenvalue
    monkeypatch.setattr(cli, "run_trajectory", lambda cfg: bad)
    code, _, err = run(["evolve", "--config", path], capsys)
    assert code == 3 and "numerical" in err
    monkeypatch.setattr(cli, "run_trajectory", lambda cfg: np.full((121, 15), np.nan))
    assert run(["classify", "--config", path], capsys)[0] == 3


def test_parse_config_fractions_and_overrides():
    cfg = parse_config(NOISY, samples=11, seed=3)
    assert cfg.noise.g_z == pytest.approx(1 / 3) and cfg.samples == 11 and cfg.seed == 3
    assert len(cfg.times) == 11 and cfg.times[-1] == 6.0
    with pytest.raises(ConfigError):
        parse_config(NOISY, horizon=-1)


def test_sweep_points_validation():
    pts = list(sweep_points(dict(UNITARY, sweep={"state.alpha": [0.1, 0.2, 0.3]})))
    assert [p[2]["state"]["alpha"] for p in pts] == [0.1, 0.2, 0.3]
    with pytest.raises(ConfigError):
        list(sweep_points(dict(UNITARY, sweep={"bath.gamma": [1]})))
    # a new leaf is inserted, and then rejected when the point is parsed
    (_, _, d), = sweep_points(dict(UNITARY, sweep={"state.gamma": [1]}))
    with pytest.raises(ConfigError):
        parse_config(d)
    with pytest.raises(ConfigError):
        list(sweep_points(dict(UNITARY, sweep={"state.alpha": []})))
    with pytest.raises(ConfigError):
        list(sweep_points(UNITARY))


def test_demo_configs_are_valid():
    from pathlib import Path

    from qdiscord import load_json

    paths = sorted((Path(__file__).resolve().parents[1] / "demos" / "configs").glob("*.json"))
    assert len(paths) >= 19
    for path in paths:
        raw = load_json(path)
        for _, _, d in (sweep_points(raw) if "sweep" in raw else [(0, {}, raw)]):
            cfg = parse_config(d)
            assert cfg.name == path.stem
