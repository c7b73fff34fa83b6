import numpy as np
import pytest

from plcalib import CameraIntrinsics, Checkerboard, PoseRecipe, RadialDistortion

PP = (960.0, 540.0)


@pytest.fixture(scope="session")
def cam():
    return CameraIntrinsics(1600.0, PP, (1920, 1080))


@pytest.fixture(scope="session")
def dist(cam):
    return RadialDistortion.for_camera(cam, -0.1, -0.02)


@pytest.fixture(scope="session")
def no_dist():
    return RadialDistortion()


@pytest.fixture(scope="session")
def board():
    return Checkerboard(9, 6, 160.0)


@pytest.fixture(scope="session")
def base_recipe():
    return PoseRecipe(dihedral_deg=45.0, depth=2600.0)


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
