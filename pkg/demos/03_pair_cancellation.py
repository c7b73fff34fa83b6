"""
Cancelling distortion with half-turned pairs
============================================

A view and its 180 degree partner produce principal lines bent by equal and
opposite amounts. Intersecting two or more such pairs puts the estimate back
on the true principal point, even though every single line is off.
"""

import itertools

import numpy as np

from plcalib import (
    ExperimentConfig,
    paired_poses,
    principal_line_of,
    principal_point_from_lines,
    principal_point_from_pairs,
    render_corners,
)

config = ExperimentConfig()
cam, dist, board = config.camera(), config.distortion(), config.board()
base = config.base_recipe((50.0, 0.0))

pairs = []
for a, b in paired_poses([0, 45, 90, 135], base):
    la = principal_line_of(render_corners(cam, dist, a, board))
    lb = principal_line_of(render_corners(cam, dist, b, board))
    pairs.append((la, lb))
    print(f"alpha {a.alpha_deg:5.1f}/{b.alpha_deg:5.1f}: each line misses the PP by {la.distance(cam.pp):.3f} / {lb.distance(cam.pp):.3f} px")

###############################################################################
# Two lines from different pairs miss the PP; two whole pairs do not.
only_first = principal_point_from_lines([pairs[0][0], pairs[2][0]])
print("two single lines :", np.round(only_first.pp, 6))
for i, j in itertools.combinations(range(4), 2):
    est = principal_point_from_pairs([pairs[i], pairs[j]])
    print(f"pairs {i}+{j}       :", np.round(est.pp, 9))

###############################################################################
# Moving the rotation axis off the optical axis breaks the cancellation.
off_axis = config.replace(rotation_center=(100.0, 60.0)).base_recipe((50.0, 0.0))
shifted = [
    tuple(principal_line_of(render_corners(cam, dist, r, board)) for r in p) for p in paired_poses([0, 90], off_axis)
]
print("off-axis rotation:", np.round(principal_point_from_pairs(shifted).pp, 3))
