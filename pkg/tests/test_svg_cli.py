import re
import subprocess
import sys

import pytest

from plcalib import ExperimentConfig, ExperimentReport, emit_svg_plot, run_pair_evaluation, run_skip_experiment, run_translation_sweep
from plcalib.cli import main
from plcalib.errors import EmptySelection
from plcalib.svgplot import GROUP_COLORS


@pytest.fixture(scope="module")
def skip_report():
    return run_skip_experiment(ExperimentConfig(translations=[(0, 0), (50, 0)], method="pl", noise_sigma=0.5, seed=3))


def test_empty_report():
    with pytest.raises(EmptySelection):
        emit_svg_plot(ExperimentReport("skip"), "skip", "unused.svg")


def test_same_report_same_bytes(tmp_path, skip_report):
    a = emit_svg_plot(skip_report, "skip", tmp_path / "a.svg").read_bytes()
    b = emit_svg_plot(skip_report, "skip", tmp_path / "b.svg").read_bytes()
    assert a == b


def test_six_colour_groups(tmp_path, skip_report):
    text = emit_svg_plot(skip_report, "skip", tmp_path / "s.svg").read_text()
    fills = set(re.findall(r'<circle [^>]*r="3" fill="(#[0-9a-f]+)"', text))
    assert fills == set(GROUP_COLORS.values()) and len(fills) == 6
    for n in range(6):
        assert f">n={n}<" in text
    assert "<desc>window:" in text and "v - v0 (px)" in text


def test_other_kinds(tmp_path):
    cfg = ExperimentConfig(translations=[(50, 0)])
    assert "<polyline" in emit_svg_plot(run_translation_sweep(cfg), "sweep", tmp_path / "w.svg").read_text()
    assert "pairs 0+45" in emit_svg_plot(run_pair_evaluation(cfg), "pairs", tmp_path / "p.svg").read_text()
    with pytest.raises(ValueError):
        emit_svg_plot(run_pair_evaluation(cfg), "pie", tmp_path / "x.svg")


def _run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def test_cli_sweep_and_pairs(tmp_path, capsys):
    assert _run(tmp_path, "sweep", "--svg") == 0
    assert _run(tmp_path, "pairs", "--svg", "--seed", "4") == 0
    assert (tmp_path / "sweep.svg").exists() and (tmp_path / "pairs_pl.svg").exists()
    assert "# config.seed = 4" in (tmp_path / "pairs.csv").read_text()


def test_cli_config_and_flags(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("translations: [[0, 0]]\nskip_n: [0, 1]\nmethod: zhang\nzhang_variants: [alternation]\n")
    assert main(["skip", "--config", str(cfg), "--method", "pl", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "skip.csv").read_text()
    assert '# config.method = "pl"' in text and ",zhang," not in text


def test_cli_ingest_demo_and_calibrate(tmp_path):
    assert _run(tmp_path, "ingest-demo", "--method", "pl") == 0
    assert _run(tmp_path, "calibrate", "--corners", str(tmp_path / "corners.csv"), "--method", "pl") == 0
    rows = (tmp_path / "calibrate.csv").read_text().splitlines()
    assert any(r.startswith("detail,calibrate,pl,8 views") for r in rows)


def test_cli_errors_exit_nonzero(tmp_path, capsys):
    assert _run(tmp_path, "calibrate", "--corners", str(tmp_path / "missing.csv")) != 0
    bad = tmp_path / "bad.yaml"
    bad.write_text("colour: red\n")
    assert main(["sweep", "--config", str(bad), "--out", str(tmp_path)]) != 0
    assert "unknown config keys" in capsys.readouterr().err
    thin = tmp_path / "thin.csv"
    thin.write_text("pose_id,corner_row,corner_col,board_x,board_y,u,v\np,0,0,0,0,1,1\n")
    assert _run(tmp_path, "calibrate", "--corners", str(thin)) != 0
    with pytest.raises(SystemExit):
        main(["nonsense"])


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "plcalib", "sweep", "--out", str(tmp_path)], capture_output=True, text=True)
    assert out.returncode == 0 and "sweep.csv" in out.stdout
