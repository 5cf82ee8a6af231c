"""Shared fixtures: the 100 kg / Rb-87 benchmark in natural units."""

import pytest

from gravamp import units
from gravamp.analytic import EnsembleParams
from gravamp.gravity import PointMass

RB87_U = 86.909180531


@pytest.fixture(scope="session")
def benchmark_params():
    return EnsembleParams(n_atoms=1e15, m1=RB87_U * units.U_EV, dm=1e-5,
                          d=1e-3 * units.M_INV_EV)


@pytest.fixture(scope="session")
def benchmark_source():
    return PointMass(100.0 * units.KG_EV)


@pytest.fixture(scope="session")
def benchmark_r():
    # 10 cm stand-off
    return 0.10 * units.M_INV_EV


@pytest.fixture(scope="session")
def benchmark(benchmark_params, benchmark_source, benchmark_r):
    return benchmark_params, benchmark_source, benchmark_r
