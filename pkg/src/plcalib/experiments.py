"""Experiment runners producing :class:`~plcalib.report.ExperimentReport` objects.

* translation sweep: deflection of the principal line as the board is
  shifted along (radial) or across (perpendicular) its principal line;
* skip protocol: principal point from every ring subset left after removing
  ``n`` consecutive views, for the line method and the algebraic baseline;
* pair evaluation: principal point from pairs of half-turned views;
* calibration of an arbitrary set of observations (e.g. an ingested file).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import replace

import numpy as np

from .camera import ground_truth_principal_line
from .config import ExperimentConfig
from .errors import CalibrationError
from .principal_line import (
    line_deflection,
    principal_line_of,
    principal_point_from_lines,
    principal_point_from_pairs,
    reject_outlier_lines,
)
from .report import ExperimentReport, group_statistics
from .scene import paired_poses, pose_ring, realize_pose, render_corners, skip_sets
from .zhang import calibrate_zhang, refine_calibration

log = logging.getLogger(__name__)


def _new_report(config: ExperimentConfig, experiment: str) -> ExperimentReport:
    meta = [
        ("translation_units", "world units (same as square_size and depth)"),
        ("assumed_defaults", "image_size, board_rows, board_cols, square_size are synthetic-setup assumptions"),
        ("std_convention", "sample standard deviation (n - 1)"),
    ]
    return ExperimentReport(experiment, config_items=config.to_items(), metadata=meta)


def _status(exc: Exception) -> str:
    return f"error:{type(exc).__name__}: {exc}"


def render_ring(config: ExperimentConfig, translation=(0.0, 0.0)):
    """Observation sets for the full ring at one board translation."""
    cam, dist, board = config.camera(), config.distortion(), config.board()
    recipes = pose_ring(config.base_recipe(translation), config.ring_count, config.delta_alpha_deg)
    return [render_corners(cam, dist, r, board, config.noise_sigma, config.seed) for r in recipes]


def _pl_estimate(lines, ids, threshold):
    if threshold is not None and len(lines) >= 3:
        kept_ids = list(ids)
        kept, removed = reject_outlier_lines(lines, distance_threshold_px=threshold, ids=ids)
        kept_ids = [i for i in kept_ids if i not in removed]
        return principal_point_from_lines(kept, ids=kept_ids)
    return principal_point_from_lines(lines, ids=ids)


def _zhang_pps(observations, image_size, variants):
    """``{method_label: pp}`` for the requested baseline variants (shared alternation)."""
    base = calibrate_zhang(observations, refine=False, image_size=image_size)
    out = {}
    if "zhang" in variants:
        out["zhang"] = base.intrinsics.pp
    if "zhang_refined" in variants:
        out["zhang_refined"] = refine_calibration(base, observations).intrinsics.pp
    return out


def _pp_err(pp, true_pp):
    if true_pp is None:
        return None
    return float(np.hypot(pp[0] - true_pp[0], pp[1] - true_pp[1]))


def run_translation_sweep(config: ExperimentConfig) -> ExperimentReport:
    """Principal-line deflection against shift magnitude, across and along the line.

    The reference is the distortion-free principal line of the untranslated
    pose; offsets are measured at the true principal point.
    """
    report = _new_report(config, "sweep")
    cam, dist, board = config.camera(), config.distortion(), config.board()
    for direction, unit in (("perpendicular", (1.0, 0.0)), ("radial", (0.0, 1.0))):
        for t in config.sweep_steps:
            tx, ty = t * unit[0], t * unit[1]
            for alpha in (0.0, 180.0):
                recipe = replace(config.base_recipe((tx, ty)), alpha_deg=alpha)
                row = dict(method="pl", label=direction, tx=tx, ty=ty, alpha_deg=alpha, seed=config.seed)
                try:
                    untranslated = replace(config.base_recipe(), alpha_deg=alpha)
                    reference = ground_truth_principal_line(cam, realize_pose(untranslated))
                    obs = render_corners(cam, dist, recipe, board, config.noise_sigma, config.seed)
                    d = line_deflection(principal_line_of(obs), reference, cam.pp)
                    row.update(defl_angle_deg=d.angle_deg, defl_offset_px=d.offset_px)
                except CalibrationError as exc:
                    row["status"] = _status(exc)
                report.add(**row)
    return report


def skip_report_from_observations(config: ExperimentConfig, rings, true_pp=None, experiment="skip") -> ExperimentReport:
    """Skip-protocol report for pre-rendered (or ingested) rings.

    ``rings`` maps each ``(tx, ty)`` to its list of observation sets in ring
    order.
    """
    report = _new_report(config, experiment)
    methods = config.methods
    zhang_variants = [m for m in methods if m.startswith("zhang")]
    for translation, observations in rings.items():
        tx, ty = translation
        count = len(observations)
        ids = [o.pose_id for o in observations]
        lines, line_err = [], None
        if "pl" in methods:
            try:
                lines = [principal_line_of(o) for o in observations]
            except CalibrationError as exc:
                line_err = exc
        for n in config.skip_n:
            try:
                subsets = skip_sets(count, n)
            except CalibrationError as exc:
                for m in methods:
                    report.add(method=m, n=n, tx=tx, ty=ty, seed=config.seed, status=_status(exc))
                continue
            for s, subset in enumerate(subsets):
                skip_start = None if n == 0 else s
                common = dict(n=n, skip_start=skip_start, tx=tx, ty=ty, seed=config.seed, label=" ".join(map(str, subset)))
                if "pl" in methods:
                    row = dict(method="pl", **common)
                    try:
                        if line_err is not None:
                            raise line_err
                        est = _pl_estimate([lines[i] for i in subset], [ids[i] for i in subset], config.outlier_threshold_px)
                        row.update(pp_u=est.pp[0], pp_v=est.pp[1], pp_err_px=_pp_err(est.pp, true_pp), rms_line_px=est.rms_distance)
                    except CalibrationError as exc:
                        row["status"] = _status(exc)
                    report.add(**row)
                if zhang_variants:
                    try:
                        pps = _zhang_pps([observations[i] for i in subset], config.image_size, zhang_variants)
                        for m in zhang_variants:
                            report.add(method=m, pp_u=pps[m][0], pp_v=pps[m][1], pp_err_px=_pp_err(pps[m], true_pp), **common)
                    except CalibrationError as exc:
                        for m in zhang_variants:
                            report.add(method=m, status=_status(exc), **common)
    report.summary.extend(dict(experiment=experiment, status="ok", **r) for r in group_statistics(report))
    return report


def run_skip_experiment(config: ExperimentConfig, rings=None) -> ExperimentReport:
    if rings is None:
        rings = {tuple(t): render_ring(config, t) for t in config.translations}
    return skip_report_from_observations(config, rings, true_pp=config.principal_point)


def run_pair_evaluation(config: ExperimentConfig) -> ExperimentReport:
    """Principal point from every two-pair combination and from all pairs together."""
    report = _new_report(config, "pairs")
    cam, dist, board = config.camera(), config.distortion(), config.board()
    true_pp = config.principal_point
    for translation in config.translations:
        tx, ty = translation
        pairs = paired_poses(config.pair_alphas, config.base_recipe(translation))
        common = dict(tx=tx, ty=ty, seed=config.seed)
        try:
            pl_pairs = [
                tuple(principal_line_of(render_corners(cam, dist, r, board, config.noise_sigma, config.seed)) for r in pair)
                for pair in pairs
            ]
        except CalibrationError as exc:
            report.add(method="pl_pairs", status=_status(exc), **common)
            continue
        combo_pps = []
        for i, j in itertools.combinations(range(len(pairs)), 2):
            label = f"pairs {config.pair_alphas[i]:g}+{config.pair_alphas[j]:g}"
            row = dict(method="pl_pairs", label=label, **common)
            try:
                est = principal_point_from_pairs([pl_pairs[i], pl_pairs[j]])
                combo_pps.append(est.pp)
                row.update(pp_u=est.pp[0], pp_v=est.pp[1], pp_err_px=_pp_err(est.pp, true_pp), rms_line_px=est.rms_distance)
            except CalibrationError as exc:
                row["status"] = _status(exc)
            report.add(**row)
        for method, label, fn in (
            ("pl_pairs", "all pairs", lambda: principal_point_from_pairs(pl_pairs)),
            ("pl", "all lines", lambda: principal_point_from_lines([l for p in pl_pairs for l in p])),
        ):
            row = dict(method=method, label=label, **common)
            try:
                est = fn()
                row.update(pp_u=est.pp[0], pp_v=est.pp[1], pp_err_px=_pp_err(est.pp, true_pp), rms_line_px=est.rms_distance)
            except CalibrationError as exc:
                row["status"] = _status(exc)
            report.add(**row)
        spread = max((float(np.hypot(a[0] - b[0], a[1] - b[1])) for a, b in itertools.combinations(combo_pps, 2)), default=0.0)
        report.add_summary(row_type="spread", method="pl_pairs", label="2-pair spread", pp_err_px=spread, **common)
    return report


def run_calibration(config: ExperimentConfig, observations, true_pp=None) -> ExperimentReport:
    """Principal point of an arbitrary observation list by every selected method."""
    report = _new_report(config, "calibrate")
    observations = list(observations)
    common = dict(seed=config.seed, label=f"{len(observations)} views")
    methods = config.methods
    if "pl" in methods:
        row = dict(method="pl", **common)
        try:
            lines = [principal_line_of(o) for o in observations]
            est = _pl_estimate(lines, [o.pose_id for o in observations], config.outlier_threshold_px)
            row.update(pp_u=est.pp[0], pp_v=est.pp[1], pp_err_px=_pp_err(est.pp, true_pp), rms_line_px=est.rms_distance)
        except CalibrationError as exc:
            row["status"] = _status(exc)
        report.add(**row)
    variants = [m for m in methods if m.startswith("zhang")]
    if variants:
        try:
            pps = _zhang_pps(observations, config.image_size, variants)
            for m in variants:
                report.add(method=m, pp_u=pps[m][0], pp_v=pps[m][1], pp_err_px=_pp_err(pps[m], true_pp), **common)
        except CalibrationError as exc:
            for m in variants:
                report.add(method=m, status=_status(exc), **common)
    return report


def drift_by_n(report: ExperimentReport, method: str, translation, reference_pp) -> dict[int, float]:
    """Largest distance of any subset's principal point from ``reference_pp``, per ``n``."""
    out = {}
    for r in report.select(method=method, tx=translation[0], ty=translation[1]):
        if r["status"] == "ok":
            d = float(np.hypot(r["pp_u"] - reference_pp[0], r["pp_v"] - reference_pp[1]))
            out[r["n"]] = max(out.get(r["n"], 0.0), d)
    return out


def spread_by_n(report: ExperimentReport, method: str, translation) -> dict[int, float]:
    """Largest pairwise distance among the subset principal points, per ``n``."""
    pts: dict[int, list] = {}
    for r in report.select(method=method, tx=translation[0], ty=translation[1]):
        if r["status"] == "ok":
            pts.setdefault(r["n"], []).append((r["pp_u"], r["pp_v"]))
    return {
        n: max((float(np.hypot(a[0] - b[0], a[1] - b[1])) for a, b in itertools.combinations(p, 2)), default=0.0)
        for n, p in pts.items()
    }
