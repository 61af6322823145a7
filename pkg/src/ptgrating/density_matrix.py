"""Steady state and dynamics of the driven four-level double-lambda system.

Level scheme (indices 0..3 for levels 1..4): |1> and |2> are ground states,
|3> and |4> are excited states.  The probe (Rabi frequency omega_p) drives
1<->4, the position-dependent standing-wave coupling (omega_s, signed) drives
1<->3, and two strong control fields drive 2<->3 (omega_c) and 2<->4
(omega_d).  The four fields form a closed loop, so only the combined relative
phase phi is physical.  All rates, Rabi frequencies and detunings are in
units of the spontaneous-decay scale gamma; time is in units of 1/gamma.

Phase convention: the closed-loop phase enters through the probe coupling as
omega_p * exp(-i*phi) while omega_s, omega_c, omega_d stay real.  The sign of
the exponent was fixed empirically: with exp(-i*phi) the direct linear solve
agrees with the closed-form coherence `rho41_analytic` in the weak-probe
regime (relative error falling as the square of the field scale), and phi =
pi/2 vs 3*pi/2 produces the mirror-inverted dispersion profiles.  With the
opposite sign the two backends disagree at order unity.

Overall coherence-decay rates used by the equations of motion (written in
terms of the four spontaneous rates gamma_ij from level i to level j):

    Gamma_31 = Gamma_32 = gamma_31 + gamma_32
    Gamma_41 = gamma_41 + gamma_42
    Gamma_42 = gamma_31 + gamma_41 + gamma_42
    Gamma_43 = gamma_31 + gamma_32 + gamma_41 + gamma_42

Gamma_42 carries a gamma_31 contribution on purpose; these are the
phenomenological rates the closed-form solution was derived with, and the
cross-validation in `validate_analytic` holds only with them.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDenominator,
    NonConvergent,
    SingularSystem,
    StepUnstable,
)

__all__ = [
    "AtomFieldParams",
    "DensityMatrix",
    "SteadyStateReport",
    "steady_state",
    "steady_rho41_batch",
    "evolve",
    "rho41_analytic",
    "rho41_analytic_batch",
    "validate_analytic",
]

# index of rho_ij in the flattened 16-component state vector
_IDX = {(i, j): 4 * i + j for i in range(4) for j in range(4)}
_DIAG = [_IDX[(k, k)] for k in range(4)]

_RESIDUAL_TOL = 1e-9
_SINGULAR_TOL = 1e-12
_HERM_TOL = 1e-12
_TRACE_TOL = 1e-10
# The equations of motion are not a completely positive (Lindblad) map: the
# overall dephasing rates are coherence-selective and the rho_24 drive term
# is taken literally, so stationary populations can undershoot zero by up to
# ~1e-6 at strong four-wave-mixing points (worst measured over the supported
# operating ranges: -8.6e-7).  The population bound reflects that.
_POP_TOL = 1e-5


@dataclass(frozen=True)
class AtomFieldParams:
    """Field amplitudes, detunings, decay rates and the closed-loop phase.

    omega_s is the local, signed value of the standing-wave coupling: where
    the standing wave dominates the traveling-wave offset the coupling flips
    sign, which is physically a pi phase jump of that field.  Clamping it to
    be nonnegative would destroy the gain/loss alternation, so only omega_p,
    omega_c and omega_d are required to be >= 0.
    """

    omega_p: float = 0.05
    omega_s: float = 0.001
    omega_c: float = 2.0
    omega_d: float = 2.0
    phi: float = 0.0
    delta_s: float = 0.0
    delta_p: float = 0.0
    delta_c: float = 0.0
    delta_d: float = 0.0
    gamma_31: float = 1.0
    gamma_32: float = 1.0
    gamma_41: float = 1.0
    gamma_42: float = 1.0

    def __post_init__(self) -> None:
        errs = []
        for name in ("omega_p", "omega_c", "omega_d"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                errs.append(f"{name} must be finite and >= 0, got {v!r}")
        for name in ("omega_s", "phi", "delta_s", "delta_p", "delta_c", "delta_d"):
            if not math.isfinite(getattr(self, name)):
                errs.append(f"{name} must be finite, got {getattr(self, name)!r}")
        for name in ("gamma_31", "gamma_32", "gamma_41", "gamma_42"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                errs.append(f"{name} must be finite and > 0, got {v!r}")
        if errs:
            raise ValueError("; ".join(errs))

    @property
    def multiphoton_detuning(self) -> float:
        """(delta_p + delta_c) - (delta_s + delta_d); must vanish for a
        time-independent rotating frame."""
        return (self.delta_p + self.delta_c) - (self.delta_s + self.delta_d)

    def dephasings(self) -> dict[str, float]:
        g31, g32, g41, g42 = self.gamma_31, self.gamma_32, self.gamma_41, self.gamma_42
        return {
            "Gamma_31": g31 + g32,
            "Gamma_32": g31 + g32,
            "Gamma_41": g41 + g42,
            "Gamma_42": g31 + g41 + g42,
            "Gamma_43": g31 + g32 + g41 + g42,
        }

    def with_omega_s(self, omega_s: float) -> "AtomFieldParams":
        return dataclasses.replace(self, omega_s=float(omega_s))

    def require_multiphoton_resonance(self) -> None:
        # tolerance admits detunings that compensate up to float rounding
        d = self.multiphoton_detuning
        if abs(d) > 1e-12:
            raise ValueError(
                "multiphoton detuning (delta_p + delta_c) - (delta_s + delta_d) "
                f"= {d!r} != 0; the rotating-frame equations are time-dependent "
                "off resonance and steady-state operations are not defined"
            )


@dataclass
class DensityMatrix:
    """4x4 complex density matrix, levels 1..4."""

    rho: np.ndarray

    def __post_init__(self) -> None:
        self.rho = np.asarray(self.rho, dtype=complex)
        if self.rho.shape != (4, 4):
            raise ValueError(f"rho must be 4x4, got shape {self.rho.shape}")

    def validate(self) -> None:
        r = self.rho
        herm = np.max(np.abs(r - r.conj().T))
        if herm > _HERM_TOL:
            raise ValueError(f"rho not Hermitian: max |rho - rho^dagger| = {herm:.3e}")
        tr = np.trace(r)
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace(rho) = {tr!r} differs from 1 beyond {_TRACE_TOL}")
        d = np.diag(r)
        if np.max(np.abs(d.imag)) > _HERM_TOL:
            raise ValueError("diagonal entries not real")
        if np.any(d.real < -_POP_TOL) or np.any(d.real > 1.0 + _POP_TOL):
            raise ValueError(f"populations outside [0, 1]: {d.real}")

    @classmethod
    def ground_state(cls, level: int = 1) -> "DensityMatrix":
        """Pure state |level><level| (level in 1..4)."""
        r = np.zeros((4, 4), dtype=complex)
        r[level - 1, level - 1] = 1.0
        return cls(r)

    @property
    def rho41(self) -> complex:
        return complex(self.rho[3, 0])


@dataclass(frozen=True)
class SteadyStateReport:
    rho: DensityMatrix
    residual_norm: float
    backend: str = "numeric"


def _generator(params: AtomFieldParams, omega_s_values: np.ndarray) -> np.ndarray:
    """Time-evolution generator L with d/dt vec(rho) = L vec(rho).

    omega_s_values has any broadcastable shape; the result has that shape plus
    trailing (16, 16).  Rows for the six upper-triangle coherences and the
    first three populations are written explicitly, lower-triangle rows are
    their elementwise conjugates (transposed element indices), and the
    rho_44 row is minus the sum of the other population rows so that the
    trace is conserved identically.
    """
    os_ = np.asarray(omega_s_values, dtype=float)
    shape = os_.shape
    oc, od = params.omega_c, params.omega_d
    # delta_p enters only through the resonance combinations below
    ds, dc, dd = params.delta_s, params.delta_c, params.delta_d
    g31, g32, g41, g42 = params.gamma_31, params.gamma_32, params.gamma_41, params.gamma_42
    G = params.dephasings()
    # complex probe coupling; see module docstring for the sign choice
    p = params.omega_p * np.exp(-1j * params.phi)
    pc = np.conj(p)

    L = np.zeros(shape + (16, 16), dtype=complex)

    def add(row, col, val):
        L[..., _IDX[row], _IDX[col]] += val

    # populations
    add((0, 0), (3, 3), 2 * g41)
    add((0, 0), (2, 2), 2 * g31)
    add((0, 0), (2, 0), 1j * os_)
    add((0, 0), (0, 2), -1j * os_)
    add((0, 0), (3, 0), 1j * pc)
    add((0, 0), (0, 3), -1j * p)

    add((1, 1), (2, 2), 2 * g32)
    add((1, 1), (3, 3), 2 * g42)
    add((1, 1), (2, 1), 1j * oc)
    add((1, 1), (1, 2), -1j * oc)
    add((1, 1), (3, 1), 1j * od)
    add((1, 1), (1, 3), -1j * od)

    add((2, 2), (2, 2), -2 * (g31 + g32))
    add((2, 2), (0, 2), 1j * os_)
    add((2, 2), (2, 0), -1j * os_)
    add((2, 2), (1, 2), 1j * oc)
    add((2, 2), (2, 1), -1j * oc)

    # coherences (upper triangle)
    add((0, 1), (0, 1), 1j * (dc - ds))
    add((0, 1), (2, 1), 1j * os_)
    add((0, 1), (0, 2), -1j * oc)
    add((0, 1), (3, 1), 1j * pc)
    add((0, 1), (0, 3), -1j * od)

    add((0, 2), (0, 2), -(G["Gamma_31"] + 1j * ds))
    add((0, 2), (2, 2), 1j * os_)
    add((0, 2), (0, 0), -1j * os_)
    add((0, 2), (0, 1), -1j * oc)
    add((0, 2), (3, 2), 1j * pc)

    add((0, 3), (0, 3), -(G["Gamma_41"] - 1j * (dc - ds - dd)))
    add((0, 3), (3, 3), 1j * pc)
    add((0, 3), (0, 0), -1j * pc)
    add((0, 3), (2, 3), 1j * os_)
    add((0, 3), (0, 1), -1j * od)

    add((1, 2), (1, 2), -(G["Gamma_32"] + 1j * dc))
    add((1, 2), (2, 2), 1j * oc)
    add((1, 2), (1, 1), -1j * oc)
    add((1, 2), (3, 2), 1j * od)
    add((1, 2), (1, 0), -1j * os_)

    add((1, 3), (1, 3), -(G["Gamma_42"] + 1j * dd))
    add((1, 3), (3, 3), 1j * oc)
    add((1, 3), (1, 1), -1j * oc)
    add((1, 3), (1, 0), -1j * pc)
    add((1, 3), (2, 3), 1j * oc)

    add((2, 3), (2, 3), -(G["Gamma_43"] + 1j * (dd - dc)))
    add((2, 3), (0, 3), 1j * os_)
    add((2, 3), (1, 3), 1j * oc)
    add((2, 3), (2, 0), -1j * pc)
    add((2, 3), (2, 1), -1j * od)

    # lower-triangle rows are conjugates with transposed element indices
    for (i, j) in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        src = _IDX[(i, j)]
        dst = _IDX[(j, i)]
        for (k, l), col in _IDX.items():
            L[..., dst, _IDX[(l, k)]] = np.conj(L[..., src, col])

    # trace conservation fixes the rho_44 row
    L[..., _IDX[(3, 3)], :] = -(
        L[..., _IDX[(0, 0)], :] + L[..., _IDX[(1, 1)], :] + L[..., _IDX[(2, 2)], :]
    )
    return L


def _constrained_system(L: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Replace the (redundant) rho_44 row by the trace constraint."""
    A = L.copy()
    r = _IDX[(3, 3)]
    A[..., r, :] = 0.0
    for k in _DIAG:
        A[..., r, k] = 1.0
    b = np.zeros(L.shape[:-2] + (16,), dtype=complex)
    b[..., r] = 1.0
    return A, b


def steady_state(params: AtomFieldParams) -> SteadyStateReport:
    """Stationary density matrix by direct solve of the vectorized equations.

    Raises SingularSystem when the constrained linear system is rank
    deficient (the stationary state is not unique; reported rather than
    silently resolved) and NonConvergent when the residual tolerance of
    1e-9 (units of gamma) is not met.
    """
    params.require_multiphoton_resonance()
    L = _generator(params, np.asarray(params.omega_s))
    A, b = _constrained_system(L)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] < _SINGULAR_TOL * sv[0]:
        raise SingularSystem(
            "steady state is not unique for these fields "
            f"(singular-value ratio {sv[-1] / sv[0]:.2e}); "
            f"omega_p={params.omega_p}, omega_s={params.omega_s}, "
            f"omega_c={params.omega_c}, omega_d={params.omega_d}"
        )
    try:
        v = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - caught by SVD first
        raise SingularSystem(str(exc)) from exc
    residual = float(np.max(np.abs(L @ v)))
    if residual > _RESIDUAL_TOL:
        raise NonConvergent(
            f"steady-state residual {residual:.3e} exceeds {_RESIDUAL_TOL}"
        )
    rho = v.reshape(4, 4)
    rho = 0.5 * (rho + rho.conj().T)
    dm = DensityMatrix(rho)
    dm.validate()
    return SteadyStateReport(rho=dm, residual_norm=residual, backend="numeric")


def steady_rho41_batch(params: AtomFieldParams, omega_s_values: np.ndarray) -> np.ndarray:
    """Probe coherence rho_41 of the stationary state for many couplings.

    Vectorized over an array of signed omega_s samples; all other parameters
    are shared.  Used by the susceptibility samplers, which would otherwise
    pay thousands of individual 16x16 solves.
    """
    params.require_multiphoton_resonance()
    os_ = np.asarray(omega_s_values, dtype=float)
    flat = os_.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    chunk = 8192
    for start in range(0, flat.size, chunk):
        sel = flat[start:start + chunk]
        L = _generator(params, sel)
        A, b = _constrained_system(L)
        try:
            v = np.linalg.solve(A, b[..., None])[..., 0]
        except np.linalg.LinAlgError:
            # isolate the offending sample for a useful report
            for osv in sel:
                sv = np.linalg.svd(_constrained_system(_generator(params, np.asarray(osv)))[0],
                                   compute_uv=False)
                if sv[-1] < _SINGULAR_TOL * sv[0]:
                    raise SingularSystem(
                        f"steady state is not unique at omega_s={osv!r}"
                    ) from None
            raise
        residual = float(np.max(np.abs(np.einsum("...ij,...j->...i", L, v))))
        if residual > _RESIDUAL_TOL:
            raise NonConvergent(
                f"steady-state residual {residual:.3e} exceeds {_RESIDUAL_TOL} "
                "within a batched solve"
            )
        out[start:start + chunk] = v[..., _IDX[(3, 0)]]
    return out.reshape(os_.shape)


def evolve(
    params: AtomFieldParams,
    rho0: DensityMatrix,
    t_end: float,
    dt: float = 0.01,
) -> DensityMatrix:
    """Propagate rho(0) -> rho(t_end) with a classical fixed-step RK4 scheme.

    Serves as the independent oracle for `steady_state`: for the operating
    points used throughout (all rates of order gamma) the state is stationary
    to < 1e-10 once t_end >= 200.  Raises StepUnstable if any population
    leaves [-0.01, 1.01] during the integration.
    """
    params.require_multiphoton_resonance()
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    steps = int(round(t_end / dt))
    L = _generator(params, np.asarray(params.omega_s))
    y = rho0.rho.reshape(16).astype(complex)
    sixth = dt / 6.0
    half = dt / 2.0
    for step in range(steps):
        k1 = L @ y
        k2 = L @ (y + half * k1)
        k3 = L @ (y + half * k2)
        k4 = L @ (y + dt * k3)
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        pops = y[_DIAG].real
        if pops.min() < -0.01 or pops.max() > 1.01:
            raise StepUnstable(
                f"population left [-0.01, 1.01] at t={(step + 1) * dt:.4f} "
                f"(diagonals {pops})"
            )
    return DensityMatrix(y.reshape(4, 4))


def _analytic_terms(op, os_, oc, od, phi):
    e1 = np.exp(1j * np.asarray(phi, dtype=float))
    e2 = e1 * e1
    e3 = e2 * e1
    A = 1j * e2 * oc * od**2 * (-(oc**2) * op + e1 * oc * od * os_ + 2 * op * os_**2)
    B = -2 * oc**3 * op**2 + 5 * e1 * oc**2 * od * op * os_
    C = e3 * oc * od * (oc**2 * od + od**3 + oc * op * os_ + 2 * od * os_**2)
    D = -2 * e2 * (oc**3 * op**2 - 2 * od**3 * op * os_ + oc * od**2 * os_**2)
    return A, B + C + D


def _require_analytic_regime(params: AtomFieldParams) -> float:
    if any(d != 0.0 for d in (params.delta_s, params.delta_p, params.delta_c, params.delta_d)):
        raise ValueError("closed-form coherence requires all detunings = 0")
    gam = (params.gamma_31, params.gamma_32, params.gamma_41, params.gamma_42)
    if max(gam) - min(gam) > 1e-12:
        raise ValueError("closed-form coherence requires equal decay rates")
    return gam[0]


def rho41_analytic(params: AtomFieldParams) -> complex:
    """Closed-form stationary probe coherence, valid at zero detunings and
    equal decay rates, perturbative in the weak probe and standing wave."""
    gamma = _require_analytic_regime(params)
    A, S = _analytic_terms(params.omega_p, params.omega_s, params.omega_c,
                           params.omega_d, params.phi)
    if abs(S) < 1e-14:
        raise DegenerateDenominator(
            f"|denominator| = {abs(S):.3e} (units gamma^5) below 1e-14; "
            "this happens when omega_c or omega_d vanish"
        )
    return complex(-A / (2.0 * gamma * S))


def rho41_analytic_batch(params: AtomFieldParams, omega_s_values: np.ndarray) -> np.ndarray:
    """Vectorized `rho41_analytic` over an array of signed omega_s samples."""
    gamma = _require_analytic_regime(params)
    os_ = np.asarray(omega_s_values, dtype=float)
    A, S = _analytic_terms(params.omega_p, os_, params.omega_c, params.omega_d, params.phi)
    bad = np.abs(S) < 1e-14
    if np.any(bad):
        osv = os_[bad].flat[0] if os_.shape else float(os_)
        raise DegenerateDenominator(
            f"|denominator| below 1e-14 at omega_s={osv!r}; "
            "this happens when omega_c or omega_d vanish"
        )
    return -A / (2.0 * gamma * S)


def validate_analytic(params: AtomFieldParams) -> dict:
    """Cross-check the closed form against the direct solve at one point."""
    num = steady_state(params).rho.rho41
    ana = rho41_analytic(params)
    rel = abs(num - ana) / max(abs(num), 1e-15)
    return {"rho41_numeric": num, "rho41_analytic": ana, "rel_error": rel}
