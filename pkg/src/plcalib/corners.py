"""Corner CSV files: ``pose_id, corner_row, corner_col, board_x, board_y, u, v``.

One row per detected corner. Floats are written with ``repr`` so a
write/read round trip is exact. Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import InconsistentBoard, ParseError, TooFewPoints
from .scene import ObservationSet

HEADER = ("pose_id", "corner_row", "corner_col", "board_x", "board_y", "u", "v")


def export_corner_file(observations, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for obs in observations:
            ids = obs.corner_ids if obs.corner_ids is not None else np.column_stack([np.arange(len(obs)), np.zeros(len(obs), int)])
            for (i, j), (x, y), (u, v) in zip(ids, obs.board_points, obs.pixels):
                w.writerow([obs.pose_id, int(i), int(j), repr(float(x)), repr(float(y)), repr(float(u)), repr(float(v))])
    return path


def ingest_corner_file(path) -> list[ObservationSet]:
    """Read a corner file into observation sets, in order of first appearance."""
    path = Path(path)
    poses: dict[str, list] = {}
    board_of: dict[tuple[int, int], tuple[float, float, int]] = {}
    with path.open(newline="") as fh:
        lines = [(k, line) for k, line in enumerate(fh, start=1) if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        raise ParseError(f"{path}: no data")
    first_no, first = lines[0]
    header = [c.strip() for c in next(csv.reader([first]))]
    if tuple(header) != HEADER:
        raise ParseError(f"expected header {','.join(HEADER)}", line=first_no)
    for lineno, line in lines[1:]:
        cells = [c.strip() for c in next(csv.reader([line]))]
        if len(cells) != len(HEADER):
            raise ParseError(f"expected {len(HEADER)} fields, got {len(cells)}", line=lineno)
        pose_id = cells[0]
        try:
            i, j = int(cells[1]), int(cells[2])
            x, y, u, v = (float(c) for c in cells[3:])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        if not all(np.isfinite([x, y, u, v])):
            raise ParseError("non-finite coordinate", line=lineno)
        prev = board_of.setdefault((i, j), (x, y, lineno))
        if (prev[0], prev[1]) != (x, y):
            raise InconsistentBoard(
                f"corner ({i}, {j}) at line {lineno} has board point ({x}, {y}), "
                f"but ({prev[0]}, {prev[1]}) at line {prev[2]}"
            )
        poses.setdefault(pose_id, []).append((i, j, x, y, u, v, lineno))

    out = []
    for pose_id, rows in poses.items():
        if len(rows) < 4:
            raise ParseError(f"pose {pose_id!r} has {len(rows)} corners, need at least 4", line=rows[-1][-1])
        a = np.array([r[:6] for r in rows], dtype=float)
        if len({(r[0], r[1]) for r in rows}) != len(rows):
            raise InconsistentBoard(f"pose {pose_id!r} lists a corner id twice")
        try:
            out.append(
                ObservationSet(
                    pose_id=pose_id,
                    board_points=a[:, 2:4],
                    pixels=a[:, 4:6],
                    noise_sigma=None,
                    seed=None,
                    corner_ids=a[:, :2].astype(int),
                )
            )
        except TooFewPoints as exc:
            raise ParseError(str(exc), line=rows[0][-1]) from exc
    return out
