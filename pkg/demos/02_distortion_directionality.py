"""
How lens distortion bends a principal line
==========================================

Shifting the board along its own principal line keeps the image symmetric
about that line, so radial distortion cannot bend it. Shifting across the
line breaks the symmetry, and the further the shift the larger the bend.
"""

from plcalib import ExperimentConfig, run_translation_sweep

config = ExperimentConfig()  # f = 1600 px, (k1, k2) = (-0.1, -0.02), depth 2600
report = run_translation_sweep(config)

print(f"{'shift':>6} {'along (deg)':>12} {'across (deg)':>13} {'across (px)':>12}")
for t in config.sweep_steps:
    (along,) = report.select(label="radial", ty=t, alpha_deg=0.0)
    (across,) = report.select(label="perpendicular", tx=t, alpha_deg=0.0)
    print(f"{t:6.0f} {along['defl_angle_deg']:12.2e} {across['defl_angle_deg']:13.4f} {across['defl_offset_px']:12.3f}")

###############################################################################
# The half-turned view (alpha = 180) is bent by the same amount, the other way.
for alpha in (0.0, 180.0):
    (row,) = report.select(label="perpendicular", tx=200.0, alpha_deg=alpha)
    print(f"alpha={alpha:5.1f}: {row['defl_angle_deg']:.4f} deg, {row['defl_offset_px']:.3f} px at the principal point")
