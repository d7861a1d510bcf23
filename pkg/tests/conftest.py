"""Shared fixtures; the expensive sweeps are session-scoped and reused."""

import time

import numpy as np
import pytest

from xyzbethe.baesolver import SolverConfig, multi_start_solve
from xyzbethe.lattice import ModelParams, exact_spectrum

#: wall-clock seconds spent in multi_start_solve, keyed by (N, tau, eta)
SOLVE_SECONDS = {}

PROBES = [0.2371 + 0.0193j, 0.3139 - 0.0271j, 0.11 + 0.07j,
          0.41 - 0.13j, 0.533 + 0.0j]

HERMITIAN_N4 = dict(N=4, tau=0.6j, eta=np.pi / 10)
TAU18_N4 = dict(N=4, tau=1.8j, eta=np.pi / 10)
NONHERM_N4 = dict(N=4, tau=0.4 + 0.6j, eta=1 / np.e + 1j * np.pi / 10)
HERMITIAN_N6 = dict(N=6, tau=1.8j, eta=np.pi / (5 * np.e))
NONHERM_N6 = dict(N=6, tau=0.4 + 0.6j, eta=1 / np.e + 1j * np.pi / 10)

FAST_CONFIG = SolverConfig(n_starts=100, n_deflation_starts=60)
HEAVY_CONFIG = SolverConfig(n_starts=400, n_deflation_starts=300)


def _bundle(params_kwargs, config):
    params = ModelParams(**params_kwargs)
    start = time.perf_counter()
    solutions = multi_start_solve(params, config)
    SOLVE_SECONDS[(params.N, params.tau, params.eta)] = (
        time.perf_counter() - start)
    spectrum = exact_spectrum(params, PROBES)
    return params, solutions, spectrum


@pytest.fixture(scope="session")
def n2_hermitian():
    return _bundle(dict(N=2, tau=0.6j, eta=np.pi / 10), FAST_CONFIG)


@pytest.fixture(scope="session")
def n2_nonhermitian():
    return _bundle(dict(N=2, tau=0.4 + 0.6j, eta=1 / np.e + 1j * np.pi / 10),
                   FAST_CONFIG)


@pytest.fixture(scope="session")
def n4_hermitian():
    return _bundle(HERMITIAN_N4, FAST_CONFIG)


@pytest.fixture(scope="session")
def n4_tau18():
    return _bundle(TAU18_N4, FAST_CONFIG)


@pytest.fixture(scope="session")
def n4_eta_imag():
    return _bundle(dict(N=4, tau=0.6j, eta=1j * np.pi / 10), FAST_CONFIG)


@pytest.fixture(scope="session")
def n4_nonhermitian():
    return _bundle(NONHERM_N4, FAST_CONFIG)


@pytest.fixture(scope="session")
def n6_hermitian():
    return _bundle(HERMITIAN_N6, HEAVY_CONFIG)


@pytest.fixture(scope="session")
def n6_nonhermitian():
    return _bundle(NONHERM_N6, HEAVY_CONFIG)
