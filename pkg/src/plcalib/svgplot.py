"""Standalone SVG scatter plots of experiment reports.

Output is plain text assembled in a fixed order with fixed number
formatting, so the same report always yields the same bytes.
"""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import EmptySelection

# one colour per skip length n = 0..5; n = 0 is the full ring
GROUP_COLORS = {0: "#000000", 1: "#800080", 2: "#2ca02c", 3: "#ff7f0e", 4: "#17becf", 5: "#d62728"}
SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")

PANEL = 220
MARGIN = 48


def _n(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _color(n) -> str:
    return GROUP_COLORS.get(n, SERIES_COLORS[int(n) % len(SERIES_COLORS)])


def _axes(x0, y0, w, h, xlabel, ylabel, xr, yr):
    parts = [
        f'<rect x="{_n(x0)}" y="{_n(y0)}" width="{_n(w)}" height="{_n(h)}" fill="none" stroke="#444" stroke-width="1"/>',
        f'<text x="{_n(x0 + w / 2)}" y="{_n(y0 + h + 30)}" text-anchor="middle" font-size="11">{escape(xlabel)}</text>',
        f'<text x="{_n(x0 - 34)}" y="{_n(y0 + h / 2)}" text-anchor="middle" font-size="11" '
        f'transform="rotate(-90 {_n(x0 - 34)} {_n(y0 + h / 2)})">{escape(ylabel)}</text>',
    ]
    for frac in (0.0, 0.5, 1.0):
        xv = xr[0] + frac * (xr[1] - xr[0])
        yv = yr[0] + frac * (yr[1] - yr[0])
        parts.append(f'<text x="{_n(x0 + frac * w)}" y="{_n(y0 + h + 14)}" text-anchor="middle" font-size="9">{_n(xv)}</text>')
        parts.append(f'<text x="{_n(x0 - 4)}" y="{_n(y0 + h - frac * h + 3)}" text-anchor="end" font-size="9">{_n(yv)}</text>')
    return parts


def _legend(x0, y0, entries):
    parts = []
    for k, (label, color) in enumerate(entries):
        y = y0 + 14 * k
        parts.append(f'<circle cx="{_n(x0)}" cy="{_n(y)}" r="4" fill="{color}"/>')
        parts.append(f'<text x="{_n(x0 + 8)}" y="{_n(y + 3)}" font-size="10">{escape(label)}</text>')
    return parts


def _document(width, height, title, window, body):
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(width)}" height="{_n(height)}" viewBox="0 0 {_n(width)} {_n(height)}">',
        f"<title>{escape(title)}</title>",
        f"<desc>{escape(window)}</desc>",
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    return "\n".join(head + body + ["</svg>", ""])


def _skip_plot(report, method):
    rows = [r for r in report.rows if r.get("method") == method and r.get("status") == "ok" and r.get("pp_u") is not None]
    if not rows:
        raise EmptySelection(f"no successful {method!r} rows in the {report.experiment!r} report")
    true_pp = None
    for key, value in report.config_items:
        if key == "principal_point":
            true_pp = tuple(float(v) for v in value.strip("[]").split(","))
    settings = sorted({(r["tx"], r["ty"]) for r in rows}, key=lambda t: (t[1], t[0]))
    ref = true_pp if true_pp is not None else tuple(np.mean([[r["pp_u"], r["pp_v"]] for r in rows], axis=0))
    du = np.array([r["pp_u"] - ref[0] for r in rows])
    dv = np.array([r["pp_v"] - ref[1] for r in rows])
    half = float(max(np.abs(du).max(), np.abs(dv).max(), 1e-6)) * 1.1
    # skip reports colour by n; reports without n (pairs, calibrate) colour by label
    if all(r.get("n") is not None for r in rows):
        key = lambda r: r["n"]  # noqa: E731
        groups = sorted({key(r) for r in rows})
        colors = {g: _color(g) for g in groups}
        names = {g: f"n={g}" for g in groups}
    else:
        key = lambda r: r.get("label") or ""  # noqa: E731
        groups = list(dict.fromkeys(key(r) for r in rows))
        colors = {g: SERIES_COLORS[k % len(SERIES_COLORS)] for k, g in enumerate(groups)}
        names = {g: g for g in groups}
    body = []
    for k, (tx, ty) in enumerate(settings):
        x0 = MARGIN + k * (PANEL + MARGIN)
        y0 = MARGIN
        body += _axes(x0, y0, PANEL, PANEL, f"u - u0 (px), t=({_n(tx)}, {_n(ty)})", "v - v0 (px)", (-half, half), (-half, half))
        for r in rows:
            if (r["tx"], r["ty"]) != (tx, ty):
                continue
            x = x0 + (r["pp_u"] - ref[0] + half) / (2 * half) * PANEL
            y = y0 + (r["pp_v"] - ref[1] + half) / (2 * half) * PANEL
            body.append(f'<circle cx="{_n(x)}" cy="{_n(y)}" r="3" fill="{colors[key(r)]}" fill-opacity="0.8"/>')
    width = MARGIN + len(settings) * (PANEL + MARGIN) + 110
    body += _legend(width - 100, MARGIN + 8, [(names[g], colors[g]) for g in groups])
    window = f"window: +/-{_n(half)} px around ({_n(ref[0])}, {_n(ref[1])}); method={method}"
    return _document(width, PANEL + 2 * MARGIN + 20, f"{report.experiment} principal points ({method})", window, body)


def _sweep_plot(report):
    rows = [r for r in report.rows if r.get("status") == "ok" and r.get("defl_offset_px") is not None]
    if not rows:
        raise EmptySelection("no deflection rows in the report")
    series = sorted({(r["label"], r["alpha_deg"]) for r in rows})
    t = np.array([np.hypot(r["tx"], r["ty"]) for r in rows])
    tmax = float(max(t.max(), 1e-6))
    body = []
    for k, (column, ylabel) in enumerate((("defl_angle_deg", "deflection angle (deg)"), ("defl_offset_px", "offset at PP (px)"))):
        vals = np.array([r[column] for r in rows])
        vmax = float(max(vals.max(), 1e-9)) * 1.1
        x0 = MARGIN + k * (PANEL + MARGIN)
        body += _axes(x0, MARGIN, PANEL, PANEL, "shift magnitude (world units)", ylabel, (0.0, tmax), (0.0, vmax))
        for s, (label, alpha) in enumerate(series):
            pts = sorted((np.hypot(r["tx"], r["ty"]), r[column]) for r in rows if (r["label"], r["alpha_deg"]) == (label, alpha))
            coords = [(x0 + tt / tmax * PANEL, MARGIN + PANEL - v / vmax * PANEL) for tt, v in pts]
            color = SERIES_COLORS[s % len(SERIES_COLORS)]
            body.append(
                f'<polyline points="{" ".join(f"{_n(x)},{_n(y)}" for x, y in coords)}" fill="none" stroke="{color}" stroke-width="1"/>'
            )
            body += [f'<circle cx="{_n(x)}" cy="{_n(y)}" r="2.5" fill="{color}"/>' for x, y in coords]
    width = MARGIN + 2 * (PANEL + MARGIN) + 150
    body += _legend(width - 140, MARGIN + 8, [(f"{lab}, a={_n(a)}", SERIES_COLORS[s % len(SERIES_COLORS)]) for s, (lab, a) in enumerate(series)])
    window = f"window: shift 0..{_n(tmax)}"
    return _document(width, PANEL + 2 * MARGIN + 20, "principal line deflection", window, body)


def render_svg(report, kind: str = "skip", method: str = "pl") -> str:
    """SVG text for ``kind`` in ``{'skip', 'pairs', 'calibrate', 'sweep'}``."""
    if kind == "sweep":
        return _sweep_plot(report)
    if kind in ("skip", "pairs", "calibrate"):
        if kind == "pairs" and method == "pl":
            method = "pl_pairs"
        return _skip_plot(report, method)
    raise ValueError(f"unknown plot kind {kind!r}")


def emit_svg_plot(report, kind: str, path, method: str = "pl") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(report, kind, method), newline="\n")
    return path
