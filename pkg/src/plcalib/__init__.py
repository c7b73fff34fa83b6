"""Principal point estimation from principal lines of a rotated planar target."""
from .camera import (
    BoardPose,
    CameraIntrinsics,
    RadialDistortion,
    distort_normalized,
    ground_truth_principal_line,
    project,
    undistort_normalized,
)
from .config import ExperimentConfig, config_from_mapping, dump_config, load_config
from .corners import export_corner_file, ingest_corner_file
from .errors import *  # noqa: F401,F403
from .experiments import (
    drift_by_n,
    render_ring,
    run_calibration,
    run_pair_evaluation,
    run_skip_experiment,
    run_translation_sweep,
    skip_report_from_observations,
    spread_by_n,
)
from .homography import estimate_homography, estimate_homography_from_points, reprojection_error
from .linalg import gauss_newton, smallest_right_singular_vector, solve_least_squares
from .principal_line import (
    DeflectionMeasure,
    ImageLine,
    PrincipalPointEstimate,
    line_deflection,
    principal_line_from_homography,
    principal_line_of,
    principal_point_from_lines,
    principal_point_from_pairs,
    reject_outlier_lines,
    vanishing_line,
)
from .report import ExperimentReport, group_statistics, verify_summary
from .scene import (
    Checkerboard,
    ObservationSet,
    PoseRecipe,
    make_checkerboard,
    paired_poses,
    pose_ring,
    realize_pose,
    render_corners,
    skip_sets,
)
from .svgplot import emit_svg_plot, render_svg
from .zhang import CalibrationResult, baseline_pp_for_subset, calibrate_zhang, refine_calibration

__version__ = "0.1.0"
