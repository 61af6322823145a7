"""PT-symmetry metrics, grating classification and parameter sweeps.

A complex refractive profile is PT symmetric when n(r) = n*(-r): even real
part, odd imaginary part, i.e. spatially balanced gain and loss.  The
metrics quantify how far a sampled susceptibility is from that condition;
in 2D the reflection is the full inversion (u, v) -> (-u, -v), with
single-axis reflections reported as supplementary numbers.

Classification gates run amplitude -> phase -> pt_symmetric -> mixed.  The
amplitude/phase ratio tests come first on purpose: a strongly lopsided
profile (say Im-dominated with the odd standing-wave pattern) still has an
antisymmetric imaginary part, so a PT-first chain could never classify the
large-coupling-ratio regime as an amplitude grating, which it is for every
practical purpose (the dispersion modulation is negligible and the
diffraction pattern is symmetric).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .diffraction import (
    FarFieldPattern,
    OrderTable,
    TransmissionProfile,
    far_field_1d,
    order_intensities,
    symmetric_sgrid,
    transmission,
)
from .errors import DegenerateProfile, SimulationError
from .susceptibility import SusceptibilityProfile, sample_chi_1d

__all__ = [
    "PTMetrics",
    "Thresholds",
    "GratingClass",
    "SweepRow",
    "SweepTable",
    "PointResult",
    "pt_metrics",
    "re_im_ratio",
    "classify_grating",
    "asymmetry_metric",
    "thresholds_from",
    "evaluate_point",
    "sweep",
    "SWEEP_PARAMETERS",
]

SWEEP_PARAMETERS = ("coupling_both", "ratio_d_over_c", "phase")

_FLOOR = 1e-15


@dataclass(frozen=True)
class PTMetrics:
    """Deviation of Im[chi] from odd, Re[chi] from even, and the net
    gain/loss imbalance; all zero for a perfectly PT-symmetric profile."""

    d_im_antisym: float
    d_re_sym: float
    gain_loss_balance: float
    supplementary: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Thresholds:
    """Classification thresholds; configuration, never hard-coded in logic."""

    tau: float = 0.1           # PT gates on d_im_antisym and d_re_sym
    tau_b: float = 0.2         # PT gate on gain_loss_balance
    tau_a: float = 0.1         # amplitude/phase gate on max|Re|/max|Im|
    asymmetry: float = 0.85    # |asymmetry| level counted as asymmetric diffraction

    def __post_init__(self) -> None:
        for name in ("tau", "tau_b", "tau_a", "asymmetry"):
            if not getattr(self, name) > 0:
                raise ValueError(f"threshold {name} must be positive")


@dataclass(frozen=True)
class GratingClass:
    kind: str  # pt_symmetric | amplitude | phase | mixed
    metrics: PTMetrics
    re_im_ratio: float


def _reflect(arr: np.ndarray) -> np.ndarray:
    """Map samples at u_k to samples at -u_k on the half-open grid
    [-1/2, 1/2); the u = -1/2 sample pairs with itself via periodicity."""
    out = arr[::-1]
    return np.roll(out, 1, axis=0)


def _reflect2(arr: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    out = arr
    for ax in axes:
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


def pt_metrics(chi: SusceptibilityProfile) -> PTMetrics:
    """Pairwise u <-> -u (and full-inversion in 2D) symmetry defects."""
    c = chi.chi
    im, re = c.imag, c.real
    max_im = float(np.max(np.abs(im)))
    if max_im < _FLOOR:
        raise DegenerateProfile(
            f"max |Im chi| = {max_im:.2e} below {_FLOOR}; no gain/loss structure"
        )
    max_re = float(np.max(np.abs(re)))
    if chi.is_2d:
        inv = _reflect2(c, (0, 1))
        supplementary = {}
        for name, axes in (("axis_u", (0,)), ("axis_v", (1,))):
            r = _reflect2(c, axes)
            supplementary[f"d_im_antisym_{name}"] = float(
                np.max(np.abs(im + r.imag)) / max_im
            )
            supplementary[f"d_re_sym_{name}"] = float(
                np.max(np.abs(re - r.real)) / max(max_re, _FLOOR)
            )
    else:
        inv = _reflect(c)
        supplementary = {}
    d_im = float(np.max(np.abs(im + inv.imag)) / max_im)
    d_re = float(np.max(np.abs(re - inv.real)) / max(max_re, _FLOOR))
    balance = float(abs(im.mean()) / np.abs(im).mean())
    return PTMetrics(
        d_im_antisym=d_im,
        d_re_sym=d_re,
        gain_loss_balance=balance,
        supplementary=supplementary,
    )


def re_im_ratio(chi: SusceptibilityProfile) -> float:
    """max|Re chi| / max|Im chi| with a floor on the denominator."""
    return float(np.max(np.abs(chi.chi.real)) / max(np.max(np.abs(chi.chi.imag)), _FLOOR))


def classify_grating(
    metrics: PTMetrics, ratio: float, thresholds: Thresholds = Thresholds()
) -> GratingClass:
    """Pure function of the metrics: amplitude / phase / pt_symmetric / mixed."""
    if ratio < thresholds.tau_a:
        kind = "amplitude"
    elif ratio > 0 and 1.0 / ratio < thresholds.tau_a:
        kind = "phase"
    elif (
        metrics.d_im_antisym < thresholds.tau
        and metrics.d_re_sym < thresholds.tau
        and metrics.gain_loss_balance < thresholds.tau_b
    ):
        kind = "pt_symmetric"
    else:
        kind = "mixed"
    return GratingClass(kind=kind, metrics=metrics, re_im_ratio=ratio)


def asymmetry_metric(orders: OrderTable) -> float:
    """Signed imbalance between inversion-related order pairs, in [-1, 1].

    1D: (sum of positive-order intensities - sum of negative) / total
    non-zero-order intensity.  2D: the same with orders paired under
    (n_x, n_y) -> (-n_x, -n_y), counting (n_x, n_y) > (0, 0) in
    lexicographic sense as positive.
    """
    pos = neg = off = 0.0
    for key, val in orders.orders.items():
        k = key if isinstance(key, tuple) else (key,)
        if all(x == 0 for x in k):
            continue
        off += val
        # lexicographic sign of the order index
        lead = next(x for x in k if x != 0)
        if lead > 0:
            pos += val
        else:
            neg += val
    return (pos - neg) / max(off, 1e-30)


@dataclass
class PointResult:
    chi: SusceptibilityProfile
    transmission: TransmissionProfile
    pattern: FarFieldPattern
    orders: OrderTable
    metrics: PTMetrics
    grating_class: GratingClass
    asymmetry: float


def thresholds_from(cfg: RunConfig) -> Thresholds:
    return Thresholds(tau=cfg.tau, tau_b=cfg.tau_b, tau_a=cfg.tau_a,
                      asymmetry=cfg.asym_threshold)


def evaluate_point(cfg: RunConfig, with_pattern: bool = True) -> PointResult:
    """One full 1D pipeline pass: sample -> transmit -> diffract -> classify."""
    chi = sample_chi_1d(
        cfg.atom_params(),
        cfg.coupling_profile(),
        cfg.lattice_geometry(),
        n=cfg.n,
        backend=cfg.backend,
    )
    t = transmission(chi, cfg.grating_config())
    pattern = far_field_1d(t, symmetric_sgrid(cfg.s_points)) if with_pattern else None
    orders = order_intensities(t)
    metrics = pt_metrics(chi)
    cls = classify_grating(metrics, re_im_ratio(chi), thresholds_from(cfg))
    return PointResult(
        chi=chi,
        transmission=t,
        pattern=pattern,
        orders=orders,
        metrics=metrics,
        grating_class=cls,
        asymmetry=asymmetry_metric(orders),
    )


@dataclass
class SweepRow:
    value: float
    orders: OrderTable | None
    asymmetry: float | None
    metrics: PTMetrics | None
    grating_class: GratingClass | None
    error: str | None = None


@dataclass
class SweepTable:
    parameter: str
    rows: list[SweepRow]
    config: RunConfig


def _apply_sweep_value(cfg: RunConfig, parameter: str, value: float) -> RunConfig:
    if parameter == "coupling_both":
        return dataclasses.replace(cfg, omega_c=value, omega_d=value)
    if parameter == "ratio_d_over_c":
        return dataclasses.replace(cfg, omega_d=value * cfg.omega_c)
    if parameter == "phase":
        return dataclasses.replace(cfg, phi=value)
    raise ValueError(f"unknown sweep parameter {parameter!r}; use one of {SWEEP_PARAMETERS}")


def sweep(cfg: RunConfig, parameter: str, values) -> SweepTable:
    """One pipeline evaluation per value; numerical failures are recorded in
    the affected row and the sweep continues."""
    values = [float(v) for v in values]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("sweep values must be strictly increasing")
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"unknown sweep parameter {parameter!r}; use one of {SWEEP_PARAMETERS}")
    rows = []
    for v in values:
        point_cfg = _apply_sweep_value(cfg, parameter, v)
        try:
            res = evaluate_point(point_cfg, with_pattern=False)
        except SimulationError as exc:
            rows.append(SweepRow(value=v, orders=None, asymmetry=None,
                                 metrics=None, grating_class=None,
                                 error=type(exc).__name__))
            continue
        rows.append(SweepRow(
            value=v,
            orders=res.orders,
            asymmetry=res.asymmetry,
            metrics=res.metrics,
            grating_class=res.grating_class,
        ))
    return SweepTable(parameter=parameter, rows=rows, config=cfg)
