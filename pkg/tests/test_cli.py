import dataclasses
import json
import math

import pytest

from gravamp import cli, units
from gravamp.analytic import amplification_point, phase_functions
from gravamp.cli import (RunConfig, TimeGrid, ValueWithUnit, emit_config_lines,
                         main, parse_config, run_compare, run_point, run_scan,
                         run_weakvalue, scan_to_csv, scan_to_json)
from gravamp.errors import ConfigError

POINT_SWEEP = """
# comment lines and blank lines are ignored
source = point
M = 100.0 kg
R = 10.0 cm
N = 1e15
m1 = 86.909180531 u
dm = 1e-5 eV
d = 1.0 mm
T = 0.3 .. 0.7 s / 8
"""

CYL_SINGLE = """
source = cylinder
rho = 1000.0 kg/m
l = 5.0 cm
R = 10.0 cm
N = 1e15
m1 = 86.909180531 u
dm = 1e-5 eV
d = 1.0 mm
T = 0.5 s
fast_phase = off
"""


def single_time_config(t_value="0.5", unit="s"):
    return parse_config(POINT_SWEEP.replace("T = 0.3 .. 0.7 s / 8",
                                            "T = %s %s" % (t_value, unit)))


# -------------------------------------------------------------- parsing

def test_parse_point_sweep():
    cfg = parse_config(POINT_SWEEP)
    assert cfg.source_kind == "point"
    assert cfg.source_mass == ValueWithUnit(100.0, "kg")
    assert cfg.n_atoms == 1e15
    assert cfg.time == TimeGrid(0.3, 0.7, "s", 8)
    assert cfg.fast_phase is False  # defaults to off


def test_parse_cylinder_single():
    cfg = parse_config(CYL_SINGLE)
    assert cfg.source_kind == "cylinder"
    assert cfg.line_density == ValueWithUnit(1000.0, "kg/m")
    assert cfg.cylinder_radius == ValueWithUnit(5.0, "cm")
    assert cfg.time == ValueWithUnit(0.5, "s")
    source = cfg.source()
    assert source.line_density == pytest.approx(1000.0 * units.KG_PER_M_EV2)


@pytest.mark.parametrize("mutate,fragment", [
    (lambda t: t + "tilt = 3 deg\n", "unknown key"),
    (lambda t: t + "N = 2e15\n", "duplicate"),
    (lambda t: t.replace("M = 100.0 kg\n", ""), "missing required key 'M'"),
    (lambda t: t.replace("100.0 kg", "100.0 stone"), "unsupported unit"),
    (lambda t: t.replace("100.0 kg", "many kg"), "cannot parse"),
    (lambda t: t.replace("100.0 kg", "100.0"), "expected"),
    (lambda t: t.replace("1e15", "1e15 atoms"), "bare count"),
    (lambda t: t + "rho = 1 kg/m\n", "only applies to cylinder"),
    (lambda t: t.replace("T = 0.3 .. 0.7 s / 8", "T = 0.3 .. s / 8"), "sweep"),
    (lambda t: t.replace("T = 0.3 .. 0.7 s / 8", "T = 0.7 .. 0.3 s / 8"),
     "start < stop"),
    (lambda t: t.replace("T = 0.3 .. 0.7 s / 8", "T = 0.3 .. 0.7 s / 0"),
     "positive"),
    (lambda t: t.replace("T = 0.3 .. 0.7 s / 8", "T = -1 s"), "positive"),
    (lambda t: t + "fast_phase = maybe\n", "fast_phase"),
    (lambda t: t.replace("N = 1e15", "N = 0.2"), "at least 1"),
    (lambda t: t.replace("source = point", "source = shell"),
     "point' or 'cylinder"),
])
def test_parse_errors(mutate, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(mutate(POINT_SWEEP))


def test_cylinder_rejects_point_mass_key():
    with pytest.raises(ConfigError, match="only applies to point"):
        parse_config(CYL_SINGLE + "M = 1 kg\n")


def test_config_round_trip_exact():
    for text in (POINT_SWEEP, CYL_SINGLE):
        cfg = parse_config(text)
        assert parse_config("\n".join(emit_config_lines(cfg))) == cfg


# ---------------------------------------------------------------- times

def test_times_are_half_open():
    cfg = parse_config(POINT_SWEEP)
    pairs = cfg.times()
    assert len(pairs) == 8
    assert pairs[0][0] == 0.3 + (0.7 - 0.3) * 1 / 8  # start excluded
    assert pairs[-1][0] == 0.7                        # stop included, exactly
    seconds = [s for s, _ in pairs]
    assert seconds == sorted(seconds)


def test_times_doubling_shares_grid_points_bitwise():
    cfg = parse_config(POINT_SWEEP)
    coarse = cfg.times()
    fine = dataclasses.replace(
        cfg, time=dataclasses.replace(cfg.time, points=16)).times()
    fine_seconds = {s for s, _ in fine}
    assert all(s in fine_seconds for s, _ in coarse)


def test_single_time_conversion():
    cfg = parse_config(CYL_SINGLE)
    ((seconds, natural),) = cfg.times()
    assert seconds == 0.5
    assert natural == 0.5 * units.S_INV_EV


# ----------------------------------------------------------------- scans

def test_scan_deterministic_across_runs_and_workers():
    cfg = parse_config(POINT_SWEEP)
    a = scan_to_csv(run_scan(cfg))
    b = scan_to_csv(run_scan(cfg))
    c = scan_to_csv(run_scan(cfg, workers=3))
    assert a == b == c


def test_scan_csv_shape_and_values():
    cfg = parse_config(POINT_SWEEP)
    text = scan_to_csv(run_scan(cfg))
    lines = text.splitlines()
    assert lines[0] == "# gravamp scan"
    header = [ln for ln in lines if not ln.startswith("#")][0]
    assert header == ",".join(cli._COLUMNS)
    rows = [ln for ln in lines if not ln.startswith("#")][1:]
    assert len(rows) == 8
    # every float cell round-trips to the recomputed value, bitwise
    params, source, r = cfg.params(), cfg.source(), cfg.distance_natural()
    for row, (t_s, t_nat) in zip(rows, cfg.times()):
        cells = row.split(",")
        assert len(cells) == len(cli._COLUMNS)
        pt = amplification_point(params, source, r, t_nat)
        assert float(cells[0]) == t_s
        assert float(cells[1]) == pt.f
        assert cells[4] == "false"
        assert float(cells[5]) == pt.amp_exact
        assert float(cells[7]) == pt.x_cl * units.HBAR_C_EV_M


def test_scan_json_shape():
    cfg = parse_config(POINT_SWEEP)
    doc = json.loads(scan_to_json(run_scan(cfg)))
    assert doc["columns"] == list(cli._COLUMNS)
    assert len(doc["rows"]) == 8
    assert doc["config"]["source"] == "point"
    assert doc["config"]["M"] == {"value": 100.0, "unit": "kg"}
    for row in doc["rows"]:
        assert row["leading_diverged"] is False
        assert isinstance(row["amp_exact"], float)


def test_scan_rejects_single_time_nowhere():
    # a scalar T still scans: exactly one row
    cfg = parse_config(CYL_SINGLE)
    assert len(run_scan(cfg).rows) == 1


# ----------------------------------------------------------------- point

def test_run_point_report():
    cfg = single_time_config()
    doc = run_point(cfg)
    assert doc["T_seconds"] == 0.5
    assert doc["T_natural"] == 0.5 * units.S_INV_EV
    assert doc["amp_exact"] == pytest.approx(-1011.708453810, rel=1e-9)
    assert doc["amp_exact_alt"] == pytest.approx(-1011.7005516, rel=1e-6)
    assert doc["beta"] == pytest.approx(338.0826023856, rel=1e-9)
    assert doc["surviving_atoms"] == pytest.approx(9.987467551e13, rel=1e-9)
    assert doc["width_mismatch"] == pytest.approx(4.513211e-35, rel=1e-6)
    assert doc["linearization_validity"] == pytest.approx(8.342875e-7,
                                                          rel=1e-9)


def test_run_point_rejects_sweep():
    with pytest.raises(ConfigError, match="single T"):
        run_point(parse_config(POINT_SWEEP))


def test_point_json_reports_divergence_as_null(tmp_path, capsys):
    # bisect f(T) = 2 pi, where the leading amplification diverges in-band
    cfg = single_time_config()
    params, source, r = cfg.params(), cfg.source(), cfg.distance_natural()

    def f_minus_2pi(t_s):
        # the divergence flag keys off the uncorrected (leading) phase
        pf = phase_functions(params, source, r, t_s * units.S_INV_EV,
                             variant="leading")
        return pf.f - 2 * math.pi

    lo, hi = 0.5569, 0.5570
    assert f_minus_2pi(lo) < 0 < f_minus_2pi(hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if f_minus_2pi(mid) > 0:
            hi = mid
        else:
            lo = mid
    t_root = 0.5 * (lo + hi)

    path = tmp_path / "bench.cfg"
    path.write_text(POINT_SWEEP)
    code = main(["point", "--config", str(path), "--T", repr(t_root), "s"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["leading_diverged"] is True
    assert doc["amp_leading"] is None
    # the regulated form stays finite and modest where the leading one blows up
    assert math.isfinite(doc["amp_exact"])
    assert abs(doc["amp_exact"]) < 10.0


def test_fast_phase_override(tmp_path, capsys):
    path = tmp_path / "bench.cfg"
    path.write_text(POINT_SWEEP)
    code = main(["point", "--config", str(path), "--T", "0.5", "s",
                 "--fast-phase", "on"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["amp_exact"] == pytest.approx(-166.694251272, rel=1e-9)


# --------------------------------------------------------------- compare

def test_compare_closed_oracle_supports_default_convention():
    report = run_compare(single_time_config(), oracle="closed")
    entry = report["oracle"]["closed_form"]
    assert entry["status"] == "ok"
    assert entry["backend"] == "mpmath"
    agree = report["agreement"]["closed_form"]
    assert agree["rel_diff_exact"] < 1e-9
    assert agree["rel_diff_alt"] > 1e-7
    assert agree["rel_diff_p_tran"] < 1e-9
    assert report["sign_convention"] == "default"


def test_compare_both_reports_grid_infeasibility():
    report = run_compare(single_time_config(), oracle="both")
    assert report["oracle"]["closed_form"]["status"] == "ok"
    grid = report["oracle"]["grid"]
    assert grid["status"] == "not_representable"
    assert "momenta" in grid["reason"]
    assert report["sign_convention"] == "default"


def test_compare_rejects_unknown_oracle():
    with pytest.raises(ConfigError):
        run_compare(single_time_config(), oracle="tea-leaves")


# -------------------------------------------------------------- weakvalue

def test_run_weakvalue_sigma_z():
    theta = math.pi / 8
    doc = {
        "observable": [[1, 0], [0, -1]],
        "psi_initial": [math.cos(theta), math.sin(theta)],
        "psi_final": [math.cos(theta), -math.sin(theta)],
        "mode": "momentum",
        "coupling": 0.05,
    }
    out = run_weakvalue(doc)
    assert out["weak_value"][0] == pytest.approx(math.sqrt(2), rel=1e-12)
    assert out["weak_value"][1] == pytest.approx(0.0, abs=1e-15)
    assert out["conditioning"] == pytest.approx(math.cos(2 * theta), rel=1e-12)
    assert out["pointer_shift"] == pytest.approx(0.05 * math.sqrt(2), rel=1e-12)


def test_run_weakvalue_complex_entries():
    doc = {
        "observable": [[0, [0, -1]], [[0, 1], 0]],  # sigma_y
        "psi_initial": [1, 0],
        "psi_final": [1, [0.2, 0.1]],
    }
    out = run_weakvalue(doc)
    assert isinstance(out["weak_value"][0], float)
    assert out["weak_value"][1] != 0.0  # genuinely complex here


def test_run_weakvalue_input_validation():
    with pytest.raises(ConfigError):
        run_weakvalue({"observable": [[1, 0], [0, -1]]})
    with pytest.raises(ConfigError):
        run_weakvalue({"observable": "diag", "psi_initial": [1, 0],
                       "psi_final": [1, 0]})


# ------------------------------------------------------------- exit codes

def write_cfg(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return str(path)


def test_main_scan_writes_file(tmp_path):
    cfg = write_cfg(tmp_path, POINT_SWEEP)
    out = tmp_path / "scan.csv"
    assert main(["scan", "--config", cfg, "--output", str(out)]) == 0
    direct = scan_to_csv(run_scan(parse_config(POINT_SWEEP)))
    assert out.read_text() == direct


def test_main_scan_json_format(tmp_path):
    cfg = write_cfg(tmp_path, POINT_SWEEP)
    out = tmp_path / "scan.json"
    assert main(["scan", "--config", cfg, "--format", "json",
                 "--output", str(out)]) == 0
    assert json.loads(out.read_text())["columns"][0] == "T_seconds"


def test_main_config_error_is_exit_1(tmp_path):
    cfg = write_cfg(tmp_path, POINT_SWEEP.replace("M = 100.0 kg\n", ""))
    assert main(["scan", "--config", cfg]) == 1
    assert main(["scan", "--config", str(tmp_path / "absent.cfg")]) == 1


def test_main_width_mismatch_is_exit_1(tmp_path):
    # legal config whose closed forms are out of their validity range
    text = CYL_SINGLE.replace("m1 = 86.909180531 u", "m1 = 1.0 eV") \
                     .replace("dm = 1e-5 eV", "dm = 1e-9 eV") \
                     .replace("N = 1e15", "N = 1")
    cfg = write_cfg(tmp_path, text)
    assert main(["point", "--config", cfg]) == 1


def test_main_singular_postselection_is_exit_2(tmp_path):
    doc = {"observable": [[1, 0], [0, -1]],
           "psi_initial": [1, 0], "psi_final": [0, 1]}
    path = tmp_path / "wv.json"
    path.write_text(json.dumps(doc))
    assert main(["weakvalue", str(path)]) == 2


def test_main_grid_oracle_infeasible_is_exit_3(tmp_path):
    cfg = write_cfg(tmp_path, POINT_SWEEP)
    assert main(["compare", "--config", cfg, "--T", "0.5", "s",
                 "--oracle", "grid"]) == 3


# ---------------------------------------------------------------- golden

def test_golden_regenerate_matches_direct_scan(tmp_path):
    out = tmp_path / "golden.csv"
    assert main(["golden", "regenerate", "--output", str(out)]) == 0
    cfg = parse_config(open("configs/benchmark.cfg").read())
    assert out.read_text() == scan_to_csv(run_scan(cfg))


def test_checked_in_golden_file_is_current():
    cfg = parse_config(open("configs/benchmark.cfg").read())
    assert open("golden/benchmark_scan.csv").read() == \
        scan_to_csv(run_scan(cfg))
