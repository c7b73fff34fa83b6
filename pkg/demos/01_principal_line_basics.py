"""
Principal lines of single board views
=====================================

A tilted board seen by a pinhole camera defines one line through the
principal point. We recover that line from the board-to-image homography
alone and compare it with the geometric ground truth.
"""

import numpy as np

from plcalib import (
    CameraIntrinsics,
    Checkerboard,
    PoseRecipe,
    RadialDistortion,
    ground_truth_principal_line,
    principal_line_of,
    principal_point_from_lines,
    pose_ring,
    realize_pose,
    render_corners,
)

cam = CameraIntrinsics(1600.0, (960.0, 540.0), (1920, 1080))
board = Checkerboard(9, 6, 160.0)
no_dist = RadialDistortion()

###############################################################################
# The reference pose: board tilted 45 degrees about the camera x-axis,
# centred on the optical axis at depth 2600. Its principal line is vertical.
recipe = PoseRecipe(dihedral_deg=45.0, depth=2600.0)
obs = render_corners(cam, no_dist, recipe, board)
line = principal_line_of(obs)
truth = ground_truth_principal_line(cam, realize_pose(recipe))
print("estimated  a, b, c:", np.round(line.coefficients, 9) + 0.0)
print("true       a, b, c:", np.round(truth.coefficients, 9) + 0.0)
print("distance of the true PP from the estimated line:", line.distance(cam.pp))

###############################################################################
# Turn the board about the optical axis in 45 degree steps. Every view adds a
# line through the same point.
lines = []
for r in pose_ring(recipe, count=8, delta_alpha_deg=45.0):
    l = principal_line_of(render_corners(cam, no_dist, r, board))
    lines.append(l)
    print(f"alpha={r.alpha_deg:5.1f}  line angle {l.angle_deg:6.2f} deg")

est = principal_point_from_lines(lines)
print("principal point:", est.pp, " rms line distance:", est.rms_distance)
