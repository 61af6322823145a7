"""Normalized probe susceptibility sampled over one lattice period.

The per-trap atomic density is Gaussian, so the dimensionless local response
is chi(u) = (rho_41 * gamma_41 / omega_p) * exp(-u^2 / sigma^2) with
u = (x - x_j) / Lambda the scaled coordinate in [-1/2, 1/2) and sigma in
units of the lattice period.  In 2D the envelope is the separable Gaussian
exp(-u^2/sigma_x^2 - v^2/sigma_y^2) and the coupling carries one standing
wave per axis.  Im[chi] > 0 means probe loss, Im[chi] < 0 gain.

Everything is sampled per trap; the number of illuminated periods enters
only through the far-field array factor (see `diffraction`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density_matrix import AtomFieldParams, rho41_analytic_batch, steady_rho41_batch

__all__ = [
    "CouplingProfile",
    "LatticeGeometry",
    "SusceptibilityProfile",
    "coupling_at",
    "chi_normalized",
    "sample_chi_1d",
    "sample_chi_2d",
    "grid_1d",
]

BACKENDS = ("analytic", "numeric")


@dataclass(frozen=True)
class CouplingProfile:
    """Traveling-wave offset plus standing-wave modulation of the coupling.

    The sampled value omega_s0 + delta_omega_s*sin(2*pi*u) may be negative
    whenever delta_omega_s > omega_s0 (the usual operating regime); consumers
    must accept signed Rabi values.
    """

    omega_s0: float = 0.001
    delta_omega_s: float = 0.05
    dims: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega_s0) and self.omega_s0 >= 0):
            raise ValueError(f"omega_s0 must be finite and >= 0, got {self.omega_s0!r}")
        if not (math.isfinite(self.delta_omega_s) and self.delta_omega_s >= 0):
            raise ValueError(
                f"delta_omega_s must be finite and >= 0, got {self.delta_omega_s!r}"
            )
        if self.dims not in (1, 2):
            raise ValueError(f"dims must be 1 or 2, got {self.dims!r}")


@dataclass(frozen=True)
class LatticeGeometry:
    """Gaussian half-widths of the trap density, in units of the period."""

    sigma_x: float = 0.2
    sigma_y: float = 0.2

    def __post_init__(self) -> None:
        for name in ("sigma_x", "sigma_y"):
            v = getattr(self, name)
            if not (0 < v <= 1):
                raise ValueError(f"{name} must satisfy 0 < sigma <= 1, got {v!r}")


@dataclass
class SusceptibilityProfile:
    """Sampled chi over one period: 1D shape (n,), 2D shape (n_u, n_v)."""

    u: np.ndarray
    chi: np.ndarray
    params: AtomFieldParams
    coupling: CouplingProfile
    geometry: LatticeGeometry
    backend: str
    v: np.ndarray | None = None

    @property
    def is_2d(self) -> bool:
        return self.v is not None


def coupling_at(profile: CouplingProfile, u, v=None):
    """Signed coupling value at scaled coordinate u (and v for 2D)."""
    u = np.asarray(u, dtype=float)
    if profile.dims == 2:
        if v is None:
            raise ValueError("2D coupling profile needs both u and v")
        v = np.asarray(v, dtype=float)
        out = profile.omega_s0 + profile.delta_omega_s * (
            np.sin(2 * np.pi * u) + np.sin(2 * np.pi * v)
        )
    else:
        if v is not None:
            raise ValueError("1D coupling profile takes no v coordinate")
        out = profile.omega_s0 + profile.delta_omega_s * np.sin(2 * np.pi * u)
    return out if out.shape else float(out)


def _rho41(params: AtomFieldParams, omega_s_values: np.ndarray, backend: str) -> np.ndarray:
    if backend == "analytic":
        return rho41_analytic_batch(params, omega_s_values)
    if backend == "numeric":
        return steady_rho41_batch(params, omega_s_values)
    raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")


def chi_normalized(params: AtomFieldParams, backend: str = "numeric") -> complex:
    """Local susceptibility factor rho_41 * gamma_41 / omega_p (no envelope)."""
    if params.omega_p <= 0:
        raise ValueError("chi_normalized requires omega_p > 0")
    r = _rho41(params, np.asarray(params.omega_s), backend)
    return complex(r * params.gamma_41 / params.omega_p)


def grid_1d(n: int) -> np.ndarray:
    """Uniform samples of u over [-1/2, 1/2), endpoint excluded.

    The excluded u = +1/2 sample equals the u = -1/2 one by periodicity of
    both the coupling and the envelope, which the quadrature in
    `diffraction` exploits.
    """
    _check_grid(n, "n")
    return -0.5 + np.arange(n) / n


def _check_grid(n: int, name: str) -> None:
    if n < 64 or (n & (n - 1)) != 0:
        raise ValueError(f"{name} must be a power of two >= 64, got {n!r}")


def sample_chi_1d(
    params: AtomFieldParams,
    coupling: CouplingProfile,
    geometry: LatticeGeometry,
    n: int = 2048,
    backend: str = "analytic",
) -> SusceptibilityProfile:
    """chi[k] = chi_normalized(omega_s -> coupling(u_k)) * exp(-u_k^2/sigma^2)."""
    if params.omega_p <= 0:
        raise ValueError("sampling requires omega_p > 0")
    u = grid_1d(n)
    omega_s = coupling_at(CouplingProfile(coupling.omega_s0, coupling.delta_omega_s, 1), u)
    r = _rho41(params, omega_s, backend)
    chi = (r * params.gamma_41 / params.omega_p) * np.exp(-(u**2) / geometry.sigma_x**2)
    if not np.all(np.isfinite(chi)):
        raise ValueError("susceptibility profile contains non-finite values")
    return SusceptibilityProfile(
        u=u, chi=chi, params=params, coupling=coupling, geometry=geometry, backend=backend
    )


def sample_chi_2d(
    params: AtomFieldParams,
    coupling: CouplingProfile,
    geometry: LatticeGeometry,
    n_x: int = 256,
    n_y: int = 256,
    backend: str = "analytic",
) -> SusceptibilityProfile:
    """2D sample with one standing wave per axis and a separable envelope."""
    if params.omega_p <= 0:
        raise ValueError("sampling requires omega_p > 0")
    u = grid_1d(n_x)
    v = grid_1d(n_y)
    U, V = np.meshgrid(u, v, indexing="ij")
    omega_s = coupling_at(CouplingProfile(coupling.omega_s0, coupling.delta_omega_s, 2), U, V)
    r = _rho41(params, omega_s, backend)
    env = np.exp(-(U**2) / geometry.sigma_x**2 - (V**2) / geometry.sigma_y**2)
    chi = (r * params.gamma_41 / params.omega_p) * env
    if not np.all(np.isfinite(chi)):
        raise ValueError("susceptibility profile contains non-finite values")
    return SusceptibilityProfile(
        u=u, chi=chi, params=params, coupling=coupling, geometry=geometry,
        backend=backend, v=v,
    )
