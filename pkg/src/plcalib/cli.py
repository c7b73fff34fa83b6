"""Command line entry point: ``plcalib {sweep,skip,pairs,calibrate,ingest-demo}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ExperimentConfig, load_config
from .corners import export_corner_file, ingest_corner_file
from .errors import CalibrationError
from .experiments import (
    render_ring,
    run_calibration,
    run_pair_evaluation,
    run_skip_experiment,
    run_translation_sweep,
    skip_report_from_observations,
)
from .svgplot import emit_svg_plot

log = logging.getLogger("plcalib")


def _config(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.method is not None:
        overrides["method"] = args.method
    if getattr(args, "noise_sigma", None) is not None:
        overrides["noise_sigma"] = args.noise_sigma
    return config.replace(**overrides) if overrides else config


def _write(report, out: Path, name: str, svg_kind: str | None, methods=()) -> list[Path]:
    written = [report.write_csv(out / f"{name}.csv")]
    if svg_kind:
        if svg_kind == "sweep":
            written.append(emit_svg_plot(report, "sweep", out / f"{name}.svg"))
        else:
            for m in methods:
                written.append(emit_svg_plot(report, svg_kind, out / f"{name}_{m}.svg", method=m))
    return written


def _cmd_sweep(config, args):
    return _write(run_translation_sweep(config), args.out, "sweep", "sweep" if args.svg else None)


def _cmd_skip(config, args):
    report = run_skip_experiment(config)
    return _write(report, args.out, "skip", "skip" if args.svg else None, config.methods)


def _cmd_pairs(config, args):
    report = run_pair_evaluation(config)
    return _write(report, args.out, "pairs", "pairs" if args.svg else None, ["pl"])


def _cmd_calibrate(config, args):
    if args.corners:
        observations = ingest_corner_file(args.corners)
        true_pp = None
    else:
        observations = render_ring(config, config.translations[0])
        true_pp = config.principal_point
    report = run_calibration(config, observations, true_pp=true_pp)
    failed = [r for r in report.rows if r["status"] != "ok"]
    written = _write(report, args.out, "calibrate", None)
    if failed:
        raise CalibrationError("; ".join(f"{r['method']}: {r['status']}" for r in failed))
    return written


def _cmd_ingest_demo(config, args):
    """Export a rendered ring, ingest it again and check both reports are byte-identical."""
    translation = next((t for t in config.translations if t != (0.0, 0.0)), config.translations[0])
    rings = {translation: render_ring(config, translation)}
    corner_path = export_corner_file(rings[translation], args.out / "corners.csv")
    ingested = {translation: ingest_corner_file(corner_path)}
    direct = skip_report_from_observations(config, rings, true_pp=config.principal_point, experiment="ingest-demo")
    again = skip_report_from_observations(config, ingested, true_pp=config.principal_point, experiment="ingest-demo")
    written = [corner_path, *_write(direct, args.out, "ingest_demo", None)]
    if direct.to_csv() != again.to_csv():
        raise CalibrationError("report from the ingested corner file differs from the in-memory report")
    log.info("ingested report identical to in-memory report")
    return written


COMMANDS = {
    "sweep": (_cmd_sweep, "principal-line deflection against board translation"),
    "skip": (_cmd_skip, "principal point drift when n consecutive views are skipped"),
    "pairs": (_cmd_pairs, "principal point from 180-degree view pairs"),
    "calibrate": (_cmd_calibrate, "principal point of a rendered ring or an ingested corner file"),
    "ingest-demo": (_cmd_ingest_demo, "export, ingest and re-run a rendered ring"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML config file")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: out)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--method", choices=("pl", "zhang", "both"), help="override the config method")
    common.add_argument("--noise-sigma", type=float, help="override the config noise_sigma")
    common.add_argument("--svg", action="store_true", help="also write SVG plots")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="plcalib", description="Principal point estimation from principal lines.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if name == "calibrate":
            p.add_argument("--corners", type=Path, help="corner CSV to calibrate instead of a rendered ring")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = _config(args)
        written = COMMANDS[args.command][0](config, args)
    except (CalibrationError, OSError, AssertionError) as exc:
        print(f"plcalib {args.command}: error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
