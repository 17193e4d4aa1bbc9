import numpy as np
import pytest

from switchbeam import AngleGrid, BeamParams, default_catalog, synthesize_beam


@pytest.fixture(scope="session")
def default_grid():
    return AngleGrid.regular()


@pytest.fixture(scope="session")
def coarse_grid():
    return AngleGrid.regular(1.0, 2.0)


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def ref_params():
    # single-element reference beam: 9.6 dBi boresight, 36.7/56 deg HPBW
    return BeamParams(9.6, 0.0, 36.7, 56.0, -9.2, 6.5)


@pytest.fixture(scope="session")
def ref_pattern(ref_params, default_grid):
    return synthesize_beam(ref_params, default_grid, 28.0)
