from __future__ import annotations

import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from qutrit_cad.cli import main as cli_main
from qutrit_cad.cli.config import AxisSpec, apply_override, parse_config
from qutrit_cad.cli.output import (
    emit_csv,
    format_number,
    read_csv,
    records_to_csv,
    render_svg_heatmap,
    value_color,
)
from qutrit_cad.cli.sweep import CSV_FIELDS, SweepRecord, grid_points, run_sweep
from qutrit_cad.errors import IncompleteGrid, ParseError, ValidationError
from qutrit_cad.states import StateClass

ROOT = Path(__file__).resolve().parent.parent
HEADER = "state_class,d1,d2,mu,p,q,p_r,q_r,scheme,negativity,probability"


def record(x, y, value, scheme="none"):
    return SweepRecord("class1", x, x, y, None, None, None, None, scheme, value, 1.0)


# --- config -------------------------------------------------------------------

def test_empty_config_is_default_sweep():
    cfg = parse_config("{}")
    assert cfg.state_class is StateClass.CLASS1
    assert cfg.scheme == "none"
    assert cfg.d1 == AxisSpec(0.0, 1.0, 51) and cfg.locked_d
    assert cfg.mu == AxisSpec(0.0, 1.0, 11)
    assert cfg.q_fixed is None and cfg.qmr_fixed is None


def test_eam_style_config():
    cfg = parse_config(json.dumps({
        "scheme": "eam",
        "grid": {"d": {"min": 0, "max": 1, "steps": 51}, "mu": {"min": 0, "max": 1, "steps": 11}},
    }))
    assert cfg.scheme == "eam" and len(grid_points(cfg)) == 561


def test_validation_collects_every_violation():
    with pytest.raises(ValidationError) as info:
        parse_config({
            "scheme": "magic",
            "grid": {"d": {"min": 0.8, "max": 0.2, "steps": 5}, "mu": {"min": 0, "max": 2, "steps": 0}},
        })
    text = " | ".join(info.value.violations)
    assert "scheme" in text and "grid.d: min" in text
    assert "grid.mu.steps" in text and "grid.mu: range" in text


def test_single_step_axis_needs_equal_bounds():
    with pytest.raises(ValidationError):
        parse_config({"grid": {"mu": {"min": 0, "max": 1, "steps": 1}}})


@pytest.mark.parametrize(
    "raw, path",
    [
        ({"grid": {"d": {"min": "zero", "max": 1, "steps": 3}}}, "grid.d.min"),
        ({"grid": {"d": {"min": 0, "max": 1}}}, "grid.d.steps"),
        ({"grid": {"mu": {"min": 0, "max": 1, "steps": 2.5}}}, "grid.mu.steps"),
        ({"amplitudes": {"alpha": 1, "beta": [0], "gamma": 0}}, "amplitudes.beta"),
        ({"colour": "red"}, ""),
        ({"grid": {"t": 1}}, "grid"),
        ({"q_policy": "half"}, "q_policy"),
    ],
)
def test_parse_errors_carry_field_path(raw, path):
    with pytest.raises(ParseError) as info:
        parse_config(raw)
    assert info.value.path == path


def test_malformed_json():
    with pytest.raises(ParseError):
        parse_config("{not json")


def test_amplitudes_and_policies():
    cfg = parse_config({
        "amplitudes": {"alpha": 1, "beta": {"re": 0, "im": 1}, "gamma": [1, 0], "normalize": True},
        "q_policy": {"fixed": 0.2},
        "qmr_policy": {"fixed": [0.3, 0.4]},
    })
    assert cfg.amplitudes.beta == pytest.approx(1j / 3**0.5)
    assert cfg.q_fixed == 0.2 and cfg.qmr_fixed == (0.3, 0.4)
    with pytest.raises(ValidationError):
        parse_config({"amplitudes": {"alpha": 1, "beta": 1, "gamma": 0}})


def test_d_axes_forms():
    cfg = parse_config({"grid": {"d1": 0.2, "d2": {"min": 0, "max": 1, "steps": 3}}})
    assert not cfg.locked_d and cfg.d1 == AxisSpec(0.2, 0.2, 1)
    with pytest.raises(ValidationError):
        parse_config({"grid": {"d1": 0.2}})
    with pytest.raises(ValidationError):
        parse_config({"grid": {"d": 0.2, "d1": 0.2, "d2": 0.1}})


def test_heatmap_fields_are_checked():
    with pytest.raises(ValidationError):
        parse_config({"heatmap": {"x": "colour"}})


def test_overrides():
    raw = {}
    apply_override(raw, "grid.d.steps=3")
    assert raw["grid"]["d"] == {"min": 0.0, "max": 1.0, "steps": 3}
    apply_override(raw, "scheme=wm")
    assert raw["scheme"] == "wm"
    cfg = parse_config("{}", ["grid.mu=0.5", "grid.d.steps=3", "state_class=class2"])
    assert cfg.mu == AxisSpec(0.5, 0.5, 1) and cfg.d1.steps == 3
    assert cfg.state_class is StateClass.CLASS2
    with pytest.raises(ParseError):
        parse_config("{}", ["no-equals-sign"])


# --- sweep --------------------------------------------------------------------

def test_single_point_sweep():
    cfg = parse_config({"grid": {"d": 0, "mu": 0}})
    (rec,) = run_sweep(cfg)
    assert rec.negativity == pytest.approx(1.0, abs=1e-12)
    assert rec.probability == 1.0 and rec.p is None and rec.p_r is None


def test_default_sweep_shape_and_monotone_decay():
    records = run_sweep(parse_config("{}"))
    assert len(records) == 561
    at_mu0 = [r.negativity for r in records if r.mu == 0.0]
    assert len(at_mu0) == 51
    assert all(b <= a + 1e-12 for a, b in zip(at_mu0, at_mu0[1:]))


def test_row_order_is_d_then_mu_then_p():
    cfg = parse_config({"scheme": "wm", "grid": {
        "d": {"min": 0, "max": 0.5, "steps": 2}, "mu": {"min": 0, "max": 1, "steps": 2},
        "p": {"min": 0.1, "max": 0.2, "steps": 2},
    }})
    keys = [(r.d1, r.mu, r.p) for r in run_sweep(cfg)]
    assert keys == sorted(keys) and len(keys) == 8


def test_compare_rows_pair_and_eam_dominates():
    cfg = parse_config({"scheme": "compare", "grid": {
        "d": {"min": 0.1, "max": 0.9, "steps": 9}, "mu": 0.6, "p": 0.9,
    }})
    records = run_sweep(cfg)
    assert [r.scheme for r in records[:4]] == ["wm", "eam", "wm", "eam"]
    for wm, eam in zip(records[::2], records[1::2]):
        assert (wm.d1, wm.mu) == (eam.d1, eam.mu)
        assert eam.p is None and wm.p == 0.9
        assert eam.negativity >= wm.negativity - 1e-9
        assert eam.probability >= wm.probability - 1e-9


def test_unlocked_d_axes_form_a_product():
    cfg = parse_config({"scheme": "eam", "grid": {
        "d1": {"min": 0, "max": 1, "steps": 3}, "d2": {"min": 0, "max": 1, "steps": 2}, "mu": 0.6,
    }})
    pairs = [(r.d1, r.d2) for r in run_sweep(cfg)]
    assert pairs == [(0, 0), (0, 1), (0.5, 0), (0.5, 1), (1, 0), (1, 1)]


def test_fixed_policies_reach_records():
    cfg = parse_config({"scheme": "wm", "grid": {"d": 0.3, "mu": 0.2, "p": 0.5},
                        "q_policy": {"fixed": 0.1}, "qmr_policy": {"fixed": [0.2, 0.7]}})
    (rec,) = run_sweep(cfg)
    assert (rec.p, rec.q, rec.p_r, rec.q_r) == (0.5, 0.1, 0.2, 0.7)


def test_zero_probability_rows_stay_empty():
    cfg = parse_config({"scheme": "eam", "state_class": "class2", "grid": {
        "d": {"min": 0.5, "max": 1, "steps": 2}, "mu": 0.0,
    }})
    ok, dead = run_sweep(cfg)
    assert ok.negativity is not None
    assert dead.negativity is None and dead.probability is None
    assert records_to_csv([dead]).splitlines()[1].endswith("eam,,")


def test_parallel_sweep_matches_serial():
    cfg = parse_config({"scheme": "compare", "grid": {
        "d": {"min": 0, "max": 1, "steps": 6}, "mu": {"min": 0, "max": 1, "steps": 3}, "p": 0.9,
    }})
    assert records_to_csv(run_sweep(cfg, workers=2)) == records_to_csv(run_sweep(cfg, workers=1))


# --- CSV ----------------------------------------------------------------------

def test_csv_header_and_sizes(tmp_path):
    assert ",".join(CSV_FIELDS) == HEADER
    path = emit_csv([], tmp_path / "empty.csv")
    assert path.read_bytes() == (HEADER + "\n").encode()
    path = emit_csv([record(0.5, 0.25, 0.125)], tmp_path / "one.csv")
    data = path.read_bytes()
    assert b"\r" not in data and data.count(b"\n") == 2


def test_csv_round_trip(tmp_path):
    records = run_sweep(parse_config({"scheme": "compare", "grid": {
        "d": {"min": 0, "max": 1, "steps": 4}, "mu": {"min": 0, "max": 1, "steps": 3}, "p": 0.7,
    }}))
    back = read_csv(emit_csv(records, tmp_path / "s.csv"))
    assert len(back) == len(records)
    for a, b in zip(records, back):
        for name in CSV_FIELDS:
            x, y = getattr(a, name), getattr(b, name)
            if isinstance(x, float):
                assert y == pytest.approx(x, rel=1e-11, abs=1e-300)
            else:
                assert x == y


def test_number_format():
    assert format_number(None) == ""
    assert format_number(1 / 3) == "0.333333333333"
    assert format_number(-0.0) == "0"
    assert format_number(1e-20) == "1e-20"


def test_csv_write_error_names_path(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError) as info:
        emit_csv([], target)
    assert str(target) in str(info.value)


# --- SVG ----------------------------------------------------------------------

def test_svg_two_by_two_extremes():
    recs = [record(0, 0, 0.0), record(1, 0, 1.0), record(0, 1, 1.0), record(1, 1, 0.0)]
    svg = render_svg_heatmap(recs, "d1", "mu", "negativity")
    cells = re.findall(r'<rect [^>]*data-value="([^"]*)"[^>]*/>', svg)
    assert len(cells) == 4
    fills = dict(re.findall(r'fill="(#[0-9a-f]{6})" data-x="[^"]*" data-y="[^"]*" data-value="([^"]*)"', svg))
    assert fills == {value_color(0, 1): "0", value_color(1, 1): "1"}
    assert value_color(0, 1) == "#ffffd9" and value_color(1, 1) == "#081d58"
    assert ">d1<" in svg and ">mu<" in svg and 'class="scale-bar"' in svg


def test_svg_missing_value_is_gray():
    recs = [record(0, 0, None), record(1, 0, 0.5)]
    assert 'fill="#bdbdbd"' in render_svg_heatmap(recs, "d1", "mu", "negativity")


def test_svg_rejects_incomplete_grids():
    with pytest.raises(IncompleteGrid):
        render_svg_heatmap([record(0, 0, 1), record(1, 0, 1), record(0, 1, 1)], "d1", "mu", "negativity")
    with pytest.raises(IncompleteGrid):
        render_svg_heatmap([record(0, 0, 1), record(0, 0, 1)], "d1", "mu", "negativity")
    with pytest.raises(IncompleteGrid):
        render_svg_heatmap([], "d1", "mu", "negativity")


def test_value_color_is_clamped_and_linear_endpoints():
    assert value_color(2.0, 1.0) == value_color(1.0, 1.0)
    assert value_color(-1.0, 1.0) == value_color(0.0, 1.0)
    assert value_color(0.0, 0.0) == "#ffffd9"


# --- command line -----------------------------------------------------------------

def test_sweep_to_stdout(capsys):
    assert cli_main.main(["sweep", "--set", "grid.d.steps=3", "--set", "grid.mu=0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == HEADER and len(lines) == 4


def test_sweep_writes_csv_and_svg(tmp_path):
    out = tmp_path / "fig.csv"
    code = cli_main.main([
        "compare", "--out", str(out), "--set", "format=csv+svg",
        "--set", "grid.d.steps=4", "--set", "grid.mu.steps=3", "--set", "grid.p=0.9",
    ])
    assert code == 0
    assert len(out.read_text().splitlines()) == 1 + 4 * 3 * 2
    svgs = sorted(p.name for p in tmp_path.glob("*.svg"))
    assert svgs == ["fig_eam.svg", "fig_wm.svg"]
    assert (tmp_path / "fig_eam.svg").read_text().count("data-value=") == 12


def test_svg_per_p_value(tmp_path):
    out = tmp_path / "wm.csv"
    code = cli_main.main([
        "sweep", "--out", str(out), "--set", "scheme=wm", "--set", "format=csv+svg",
        "--set", "grid.d.steps=3", "--set", "grid.mu.steps=2",
        "--set", 'grid.p={"min": 0.3, "max": 0.6, "steps": 2}',
    ])
    assert code == 0
    assert sorted(p.name for p in tmp_path.glob("*.svg")) == ["wm_p0.3.svg", "wm_p0.6.svg"]


def test_exit_codes(tmp_path, capsys):
    assert cli_main.main(["sweep", "--set", "scheme=nope"]) == 1
    assert cli_main.main(["sweep", "--set", "format=csv+svg"]) == 1
    assert cli_main.main(["evolve"]) == 1
    assert cli_main.main(["sweep", "--config", str(tmp_path / "absent.json")]) == 2
    assert cli_main.main(["sweep", "--out", str(tmp_path / "no" / "dir.csv"), "--set", "grid.d=0"]) == 2
    dead = ["--set", "state_class=class2", "--set", "scheme=eam", "--set", "grid.d=1", "--set", "grid.mu=0"]
    assert cli_main.main(["sweep", *dead]) == 2
    assert cli_main.main(["evolve", *dead]) == 2
    err = capsys.readouterr().err
    assert "invalid configuration" in err and "zero success probability" in err


def test_evolve_prints_state(capsys, tmp_path):
    out = tmp_path / "point.csv"
    code = cli_main.main([
        "evolve", "--set", "grid.d=0.4", "--set", "grid.mu=0.6", "--set", "scheme=compare",
        "--set", "grid.p=0.9", "--out", str(out),
    ])
    assert code == 0
    text = capsys.readouterr().out
    assert "scheme=wm" in text and "scheme=eam" in text
    assert "negativity  = 0.960495219345" in text
    assert len(read_csv(out)) == 2


def test_config_file_and_module_entry(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grid": {"d": {"min": 0, "max": 1, "steps": 2}, "mu": 1}}))
    run = subprocess.run(
        [sys.executable, "-m", "qutrit_cad.cli.main", "sweep", "--config", str(cfg)],
        capture_output=True, text=True, check=False,
    )
    assert run.returncode == 0
    lines = run.stdout.splitlines()
    assert lines[0] == HEADER and len(lines) == 3
    assert lines[1] == "class1,0,0,1,,,,,none,1,1"
    *fields, neg, prob = lines[2].split(",")
    assert fields == ["class1", "1", "1", "1", "", "", "", "", "none"]
    assert float(neg) < 1e-12 and prob == "1"


def test_committed_configs_parse():
    names = sorted(p.name for p in (ROOT / "configs").glob("*.json"))
    assert "fig2a.json" in names
    for name in names:
        parse_config((ROOT / "configs" / name).read_text())
