"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <k> PASS|FAIL`` line with the
measured quantity and its bound; the lines are also repeated in the pytest
terminal summary. Bounds are used exactly as stated, never loosened.
"""
import itertools
import time

import numpy as np
import pytest

from plcalib import (
    ExperimentConfig,
    PoseRecipe,
    calibrate_zhang,
    drift_by_n,
    emit_svg_plot,
    paired_poses,
    pose_ring,
    principal_line_of,
    principal_point_from_lines,
    render_corners,
    run_pair_evaluation,
    run_skip_experiment,
    run_translation_sweep,
    spread_by_n,
)
from plcalib.svgplot import render_svg

TRUE_PP = (960.0, 540.0)
RESULTS = {}
TIMINGS = {}
_SUITE_START = time.perf_counter()


def record(k, ok, detail, elapsed=None):
    line = f"ACCEPTANCE {k:>2} {'PASS' if ok else 'FAIL'}  {detail}"
    if elapsed is not None:
        TIMINGS[k] = elapsed
        line += f"  [{elapsed:.1f} s]"
    RESULTS[k] = line
    print(line)
    assert ok, line


def dist_to_true(pp):
    return float(np.hypot(pp[0] - TRUE_PP[0], pp[1] - TRUE_PP[1]))


def test_01_distortion_free_soundness():
    t0 = time.perf_counter()
    cfg = ExperimentConfig(k1=0.0, k2=0.0)
    cam, dist, board = cfg.camera(), cfg.distortion(), cfg.board()
    obs = [render_corners(cam, dist, r, board) for r in pose_ring(cfg.base_recipe(), 8, 45)]
    pl_err = dist_to_true(principal_point_from_lines([principal_line_of(o) for o in obs]).pp)
    z_err = dist_to_true(calibrate_zhang(obs).intrinsics.pp)
    zr_err = dist_to_true(calibrate_zhang(obs, refine=True).intrinsics.pp)
    elapsed = time.perf_counter() - t0
    ok = pl_err < 1e-6 and z_err < 1e-3 and zr_err < 1e-3 and elapsed < 5
    record(1, ok, f"PL err {pl_err:.2e} px (<1e-6), Zhang err {z_err:.2e} / refined {zr_err:.2e} px (<1e-3), runtime < 5 s", elapsed)


def test_02_directionality():
    t0 = time.perf_counter()
    rep = run_translation_sweep(ExperimentConfig(sweep_steps=[50.0]))
    (radial,) = rep.select(label="radial", alpha_deg=0.0)
    (perp,) = rep.select(label="perpendicular", alpha_deg=0.0)
    ok = (
        radial["defl_angle_deg"] < perp["defl_angle_deg"]
        and radial["defl_offset_px"] < perp["defl_offset_px"]
        and radial["defl_angle_deg"] < 0.5
        and radial["defl_offset_px"] < 5
    )
    record(
        2,
        ok,
        f"(0,50): {radial['defl_angle_deg']:.2e} deg / {radial['defl_offset_px']:.2e} px (<0.5 deg, <5 px); "
        f"(50,0): {perp['defl_angle_deg']:.4f} deg / {perp['defl_offset_px']:.3f} px",
        time.perf_counter() - t0,
    )


def test_03_monotonicity():
    t0 = time.perf_counter()
    rep = run_translation_sweep(ExperimentConfig())
    violations = 0
    for alpha in (0.0, 180.0):
        rows = sorted(rep.select(label="perpendicular", alpha_deg=alpha), key=lambda r: r["tx"])
        assert [r["tx"] for r in rows] == [float(t) for t in range(0, 201, 25)]
        for a, b in zip(rows, rows[1:]):
            violations += b["defl_angle_deg"] < a["defl_angle_deg"]
            violations += b["defl_offset_px"] < a["defl_offset_px"]
    last = max(rep.select(label="perpendicular", alpha_deg=0.0), key=lambda r: r["tx"])
    record(
        3,
        violations == 0,
        f"{violations} violations over t=0..200 (need 0); at t=200: {last['defl_angle_deg']:.3f} deg / {last['defl_offset_px']:.2f} px",
        time.perf_counter() - t0,
    )


def test_04_pair_antisymmetry():
    t0 = time.perf_counter()
    cfg = ExperimentConfig()
    cam, dist, board = cfg.camera(), cfg.distortion(), cfg.board()
    worst = 0.0
    for translation in cfg.translations:
        for a, b in paired_poses([0, 45, 90, 135], cfg.base_recipe(translation)):
            l0 = principal_line_of(render_corners(cam, dist, a, board))
            l1 = principal_line_of(render_corners(cam, dist, b, board))
            r = l0.rotated_180(cam.pp)
            # two points of l1 spanning the image, measured against the rotated partner
            foot = np.array(cam.pp) - l1.signed_distance(cam.pp) * np.array([l1.a, l1.b])
            for p in (foot + 1100 * l1.direction, foot - 1100 * l1.direction):
                worst = max(worst, r.distance(p))
    record(4, worst < 1e-6, f"max distance {worst:.2e} px (<1e-6)", time.perf_counter() - t0)


def test_05_pair_cancellation():
    t0 = time.perf_counter()
    rep = run_pair_evaluation(ExperimentConfig(translations=[(50.0, 0.0)]))
    combos = [r for r in rep.rows if r["label"].startswith("pairs ")]
    (independent,) = [r for r in combos if r["label"] == "pairs 0+90"]
    err = independent["pp_err_px"]
    spread = max(np.hypot(a["pp_u"] - b["pp_u"], a["pp_v"] - b["pp_v"]) for a, b in itertools.combinations(combos, 2))
    ok = all(r["status"] == "ok" for r in combos) and len(combos) == 6 and err < 1e-3 and spread < 1e-3
    record(5, ok, f"PP err (pairs 0+90) {err:.2e} px (<1e-3); max disagreement over 6 combinations {spread:.2e} px (<1e-3)", time.perf_counter() - t0)


def test_06_skip_coincidence():
    # "coincide within d": every two of the 8 PPs of a group are within d of each other
    t0 = time.perf_counter()
    translations = [(0.0, 0.0), (0.0, 50.0)]
    worst = {}
    for sigma in (0.0, 0.5):
        rep = run_skip_experiment(ExperimentConfig(translations=translations, method="pl", noise_sigma=sigma, seed=0))
        worst[sigma] = {t: spread_by_n(rep, "pl", t) for t in translations}
    w0 = max(v for s in worst[0.0].values() for n, v in s.items() if n >= 1)
    w5 = max(v for s in worst[0.5].values() for n, v in s.items() if n >= 1)
    per_n = ", ".join(f"n={n}: {max(worst[0.5][t][n] for t in translations):.2f}" for n in range(1, 6))
    record(
        6,
        w0 < 0.5 and w5 < 3.0,
        f"sigma=0: max spread {w0:.2e} px (<0.5); sigma=0.5 seed 0: max spread {w5:.2f} px (<3) [{per_n}]",
        time.perf_counter() - t0,
    )


def test_07_skip_drift_trend():
    t0 = time.perf_counter()
    rep = run_skip_experiment(ExperimentConfig(translations=[(50.0, 0.0)], method="pl"))
    drift = drift_by_n(rep, "pl", (50.0, 0.0), TRUE_PP)
    bad = [(n, drift[n], drift[n + 1]) for n in range(1, 5) if drift[n + 1] < 0.95 * drift[n]]
    text = ", ".join(f"n={n}: {drift[n]:.3f}" for n in range(1, 6))
    record(7, not bad, f"max drift px [{text}]; need drift(n+1) >= 0.95 drift(n); violations {bad}", time.perf_counter() - t0)


def test_08_robustness_ratio():
    t0 = time.perf_counter()
    stds = {m: [] for m in ("pl", "zhang", "zhang_refined")}
    for seed in range(10):
        rep = run_skip_experiment(ExperimentConfig(translations=[(50.0, 0.0)], noise_sigma=0.5, seed=seed))
        for m in stds:
            (row,) = rep.select("std", method=m)
            stds[m].append((row["pp_u"], row["pp_v"]))
    mean = {m: np.mean(v, axis=0) for m, v in stds.items()}
    ratios = {m: mean[m] / mean["pl"] for m in ("zhang", "zhang_refined")}
    ok = all(np.all(r >= 2.0) for r in ratios.values())
    text = "; ".join(f"{m}/pl = ({r[0]:.1f}, {r[1]:.1f})" for m, r in ratios.items())
    record(
        8,
        ok,
        f"mean centroid std over 10 seeds: pl ({mean['pl'][0]:.4f}, {mean['pl'][1]:.4f}) px; ratios {text} (>=2 on both axes)",
        time.perf_counter() - t0,
    )


def test_09_noise_calibration():
    t0 = time.perf_counter()
    cfg = ExperimentConfig()
    cam, dist, board = cfg.camera(), cfg.distortion(), cfg.board()
    diffs = []
    for seed in range(24):
        for r in pose_ring(cfg.base_recipe((50.0, 0.0)), 8, 45):
            exact = render_corners(cam, dist, r, board).pixels
            diffs.append(render_corners(cam, dist, r, board, 0.5, seed).pixels - exact)
    d = np.concatenate(diffs).ravel()
    s = float(np.std(d, ddof=1))
    record(9, d.size >= 10_000 and 0.47 <= s <= 0.53, f"sample std {s:.4f} px over {d.size} coordinates (in [0.47, 0.53])", time.perf_counter() - t0)


def test_10_determinism(tmp_path):
    t0 = time.perf_counter()
    cfg = ExperimentConfig(translations=[(0.0, 0.0), (50.0, 0.0)], noise_sigma=0.5, seed=7, zhang_variants=["alternation"])
    runs = []
    for _ in range(2):
        out = []
        for kind, fn in (("sweep", run_translation_sweep), ("pairs", run_pair_evaluation), ("skip", run_skip_experiment)):
            rep = fn(cfg)
            out.append(rep.to_csv())
            out.append(render_svg(rep, kind))
        runs.append(out)
    identical = runs[0] == runs[1]
    emit_svg_plot(run_skip_experiment(cfg.replace(method="pl")), "skip", tmp_path / "a.svg")
    elapsed = time.perf_counter() - t0
    TIMINGS[10] = elapsed
    slow = {k: round(v, 1) for k, v in TIMINGS.items() if v >= 60}
    total = time.perf_counter() - _SUITE_START
    ok = identical and not slow and total < 300
    record(10, ok, f"byte-identical CSV/SVG on rerun: {identical}; experiments over 60 s: {slow or 'none'}; acceptance wall-clock {total:.1f} s (<300)", elapsed)
