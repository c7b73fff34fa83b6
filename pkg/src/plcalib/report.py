"""Tabular experiment reports and their CSV serialization."""
from __future__ import annotations

import io
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

COLUMNS = (
    "row_type",
    "experiment",
    "method",
    "label",
    "n",
    "skip_start",
    "tx",
    "ty",
    "alpha_deg",
    "pp_u",
    "pp_v",
    "pp_err_px",
    "rms_line_px",
    "defl_angle_deg",
    "defl_offset_px",
    "seed",
    "status",
)

SUMMARY_TOL = 1e-9


def fmt(value) -> str:
    """Fixed CSV rendering: 9 significant digits, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            return str(float(value))
        s = format(float(value), ".9g")
        return "0" if s == "-0" else s
    return str(value)


def sample_std(values) -> float:
    """Standard deviation with the ``n - 1`` denominator (0 for a single value)."""
    v = np.asarray(values, dtype=float)
    return float(np.std(v, ddof=1)) if v.size > 1 else 0.0


@dataclass
class ExperimentReport:
    experiment: str
    config_items: list[tuple[str, str]] = field(default_factory=list)
    metadata: list[tuple[str, str]] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    summary: list[dict] = field(default_factory=list)

    def add(self, **row) -> dict:
        unknown = set(row) - set(COLUMNS)
        if unknown:
            raise KeyError(f"unknown report columns {sorted(unknown)}")
        row.setdefault("row_type", "detail")
        row.setdefault("experiment", self.experiment)
        row.setdefault("status", "ok")
        self.rows.append(row)
        return row

    def add_summary(self, **row) -> dict:
        row.setdefault("experiment", self.experiment)
        row.setdefault("status", "ok")
        self.summary.append(row)
        return row

    def select(self, row_type="detail", **criteria) -> list[dict]:
        pool = self.rows if row_type == "detail" else [r for r in self.summary if r["row_type"] == row_type]
        return [r for r in pool if all(r.get(k) == v for k, v in criteria.items())]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# plcalib report: experiment={self.experiment}\n")
        for key, value in self.metadata:
            buf.write(f"# meta.{key} = {value}\n")
        for key, value in self.config_items:
            buf.write(f"# config.{key} = {value}\n")
        buf.write(",".join(COLUMNS) + "\n")
        for row in [*self.rows, *self.summary]:
            buf.write(",".join(_csv_cell(fmt(row.get(c))) for c in COLUMNS) + "\n")
        return buf.getvalue()

    def write_csv(self, path) -> Path:
        verify_summary(self)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv(), newline="\n")
        return path


def _csv_cell(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def group_statistics(report: ExperimentReport) -> list[dict]:
    """Centroid per ``(translation, method, n)`` group, then mean and std of the centroids.

    Only successful detail rows with a principal point contribute.
    """
    groups = defaultdict(list)
    for r in report.rows:
        if r.get("status") == "ok" and r.get("pp_u") is not None and r.get("n") is not None:
            groups[(r["tx"], r["ty"], r["method"], r["n"])].append((r["pp_u"], r["pp_v"]))
    out = []
    per_setting = defaultdict(list)
    for (tx, ty, method, n), pts in sorted(groups.items()):
        c = np.mean(np.array(pts), axis=0)
        out.append(
            dict(row_type="centroid", method=method, n=n, tx=tx, ty=ty, pp_u=float(c[0]), pp_v=float(c[1]), label=f"{len(pts)} pps")
        )
        per_setting[(tx, ty, method)].append(c)
    for (tx, ty, method), cents in sorted(per_setting.items()):
        cents = np.array(cents)
        out.append(dict(row_type="mean", method=method, tx=tx, ty=ty, pp_u=float(cents[:, 0].mean()), pp_v=float(cents[:, 1].mean()), label=f"{len(cents)} centroids"))
        out.append(dict(row_type="std", method=method, tx=tx, ty=ty, pp_u=sample_std(cents[:, 0]), pp_v=sample_std(cents[:, 1]), label=f"{len(cents)} centroids"))
    return out


def verify_summary(report: ExperimentReport) -> None:
    """Recompute centroid/mean/std rows from the detail rows and compare.

    The recomputation uses plain Python sums, independently of
    :func:`group_statistics`.
    """
    stat_rows = [r for r in report.summary if r["row_type"] in ("centroid", "mean", "std")]
    if not stat_rows:
        return
    pts = defaultdict(list)
    for r in report.rows:
        if r.get("status") == "ok" and r.get("pp_u") is not None and r.get("n") is not None:
            pts[(r["tx"], r["ty"], r["method"], r["n"])].append((r["pp_u"], r["pp_v"]))
    cent = {k: (sum(p[0] for p in v) / len(v), sum(p[1] for p in v) / len(v)) for k, v in pts.items()}
    for r in stat_rows:
        key = (r["tx"], r["ty"], r["method"])
        if r["row_type"] == "centroid":
            expect = cent[key + (r["n"],)]
        else:
            cs = [c for k, c in sorted(cent.items()) if k[:3] == key]
            m = len(cs)
            mu = (sum(c[0] for c in cs) / m, sum(c[1] for c in cs) / m)
            if r["row_type"] == "mean":
                expect = mu
            else:
                expect = tuple(
                    (sum((c[i] - mu[i]) ** 2 for c in cs) / (m - 1)) ** 0.5 if m > 1 else 0.0 for i in range(2)
                )
        for got, want in zip((r["pp_u"], r["pp_v"]), expect):
            if abs(got - want) > SUMMARY_TOL * max(1.0, abs(want)):
                raise AssertionError(f"summary row {r} disagrees with detail rows ({want})")
