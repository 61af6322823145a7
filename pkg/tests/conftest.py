import dataclasses

import pytest

from ptgrating import AtomFieldParams, CouplingProfile, LatticeGeometry, RunConfig


@pytest.fixture
def base_params() -> AtomFieldParams:
    """Weak probe / standing-wave point used throughout, phi left at 0."""
    return AtomFieldParams(omega_p=0.05, omega_s=0.051, omega_c=2.0, omega_d=2.0)


@pytest.fixture
def base_coupling() -> CouplingProfile:
    return CouplingProfile(omega_s0=0.001, delta_omega_s=0.05, dims=1)


@pytest.fixture
def base_geometry() -> LatticeGeometry:
    return LatticeGeometry(sigma_x=0.2, sigma_y=0.2)


@pytest.fixture
def base_config() -> RunConfig:
    """Library defaults: the standard operating point with phi = 3*pi/2."""
    return RunConfig()


def with_phi(params: AtomFieldParams, phi: float) -> AtomFieldParams:
    return dataclasses.replace(params, phi=phi)
