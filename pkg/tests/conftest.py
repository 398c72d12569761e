"""Shared fixtures: the grids and profiles most tests run on."""

import numpy as np
import pytest

from gevrey_nls.solver import InitialDataSpec, make_initial_data
from gevrey_nls.spectral import GridSpec


@pytest.fixture(scope="session")
def grid256():
    return GridSpec(256, 32.0, 2.0)


@pytest.fixture(scope="session")
def grid512():
    return GridSpec(512, 32.0, 2.0)


@pytest.fixture(scope="session")
def grid1024():
    return GridSpec(1024, 32.0, 2.0)


@pytest.fixture(scope="session")
def sech512(grid512):
    return make_initial_data(InitialDataSpec("sech"), grid512)


@pytest.fixture(scope="session")
def sech1024(grid1024):
    return make_initial_data(InitialDataSpec("sech"), grid1024)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260822)
