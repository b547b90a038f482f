import os
import sys
import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tilewigner import (
    BumpProfile,
    FieldState,
    LocalModeSet,
    SpacetimeSpec,
    assemble_modes,
    build_tiling,
    covariance,
    reference_grid,
)
from tilewigner.errors import BandwidthWarning
from tilewigner.quadrature import MomentumGrid

settings.register_profile(
    "repo", deadline=None, max_examples=25, derandomize=True, suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


@pytest.fixture(autouse=True)
def _quiet_bandwidth():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BandwidthWarning)
        yield


@pytest.fixture(scope="session")
def spec():
    return SpacetimeSpec(n=1, m=1.0, hbar=1.0, t0=0.0)


@pytest.fixture(scope="session")
def grid():
    return reference_grid(1)


@pytest.fixture(scope="session")
def ccr_grid():
    """k_max = 40 with 2048 nodes."""
    return MomentumGrid.cartesian(1, 40.0, 32, 64)


@pytest.fixture(scope="session")
def profile():
    return BumpProfile()


@pytest.fixture(scope="session")
def layout(spec):
    return build_tiling(spec, 4, 1.0, 0.05, 0.3)


@pytest.fixture(scope="session")
def modes(layout, profile, spec, grid):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BandwidthWarning)
        return assemble_modes(layout, profile, spec, grid)


@pytest.fixture(scope="session")
def single(modes, spec):
    """Mode of tile 1 (centre -0.65) on its own."""
    return LocalModeSet(modes.pairs[1:2], spec, None)


@pytest.fixture(scope="session")
def pair(modes, spec):
    return LocalModeSet(modes.pairs[1:3], spec, None)


@pytest.fixture(scope="session")
def vacuum_cov(modes, grid):
    return covariance(modes, FieldState.vacuum(), grid)


@pytest.fixture(scope="session")
def thermal_cov(modes, grid):
    return covariance(modes, FieldState.thermal(1.0), grid)


def random_smearing(rng, derivative=None):
    from tilewigner.smearing import SmearingFunction

    prof = BumpProfile("smooth_bump", 0.3)
    order = int(rng.integers(0, 2)) if derivative is None else derivative
    return SmearingFunction(
        prof,
        float(rng.uniform(0.03, 0.1)),
        float(rng.uniform(-0.2, 0.2)),
        prof,
        (float(rng.uniform(-2.0, 2.0)),),
        (float(rng.uniform(0.4, 0.8)),),
        float(rng.uniform(0.5, 2.0)),
        order,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
