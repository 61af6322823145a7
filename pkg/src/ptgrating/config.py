"""Run configuration for the command-line pipeline.

Configuration comes from three layers, later ones winning: built-in defaults
(the base operating point used throughout: weak probe 0.05, standing-wave
modulation 0.05 on a 0.001 offset, both controls at 2, depth L/xi = 20,
sigma = 0.2, M = 5, R = 4, equal unit decay rates, zero detunings,
phi = 3*pi/2), a flat key = value config file, and repeatable
``--param key=value`` overrides.  Phases accept plain radians or multiples
of pi via suffix (``phi = 1.5pi``); they are stored in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .density_matrix import AtomFieldParams
from .diffraction import GratingConfig
from .susceptibility import CouplingProfile, LatticeGeometry

__all__ = ["RunConfig", "ConfigError", "parse_phase", "parse_config_file", "resolve_config"]


class ConfigError(Exception):
    """Invalid configuration; carries one message per offending key."""

    def __init__(self, messages: list[str]):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


@dataclass(frozen=True)
class RunConfig:
    # atom-field parameters (units of gamma; phases in radians)
    omega_p: float = 0.05
    omega_s0: float = 0.001
    delta_omega_s: float = 0.05
    omega_c: float = 2.0
    omega_d: float = 2.0
    phi: float = 3 * math.pi / 2
    delta_s: float = 0.0
    delta_p: float = 0.0
    delta_c: float = 0.0
    delta_d: float = 0.0
    gamma_31: float = 1.0
    gamma_32: float = 1.0
    gamma_41: float = 1.0
    gamma_42: float = 1.0
    # trap geometry (units of the lattice period)
    sigma: float = 0.2
    sigma_x: float | None = None
    sigma_y: float | None = None
    # grating
    L_over_xi: float = 20.0
    R: float = 4.0
    M: int = 5
    R_x: float | None = None
    R_y: float | None = None
    M_x: int | None = None
    M_y: int | None = None
    # grids
    n: int = 2048
    n_x: int = 256
    n_y: int = 256
    s_points: int = 1001
    s_points_2d: int = 161
    dims: int = 1
    # backend and thresholds
    backend: str = "analytic"
    tau: float = 0.1
    tau_b: float = 0.2
    tau_a: float = 0.1
    asym_threshold: float = 0.85
    # output
    out: str = "."
    format: str = "csv"

    # builders for the domain objects ------------------------------------

    def atom_params(self) -> AtomFieldParams:
        return AtomFieldParams(
            omega_p=self.omega_p,
            omega_s=self.omega_s0,
            omega_c=self.omega_c,
            omega_d=self.omega_d,
            phi=self.phi,
            delta_s=self.delta_s,
            delta_p=self.delta_p,
            delta_c=self.delta_c,
            delta_d=self.delta_d,
            gamma_31=self.gamma_31,
            gamma_32=self.gamma_32,
            gamma_41=self.gamma_41,
            gamma_42=self.gamma_42,
        )

    def coupling_profile(self, dims: int | None = None) -> CouplingProfile:
        return CouplingProfile(
            omega_s0=self.omega_s0,
            delta_omega_s=self.delta_omega_s,
            dims=self.dims if dims is None else dims,
        )

    def lattice_geometry(self) -> LatticeGeometry:
        sx = self.sigma if self.sigma_x is None else self.sigma_x
        sy = self.sigma if self.sigma_y is None else self.sigma_y
        return LatticeGeometry(sigma_x=sx, sigma_y=sy)

    def grating_config(self) -> GratingConfig:
        return GratingConfig(
            L_over_xi=self.L_over_xi,
            R=self.R,
            M=self.M,
            R_x=self.R_x,
            R_y=self.R_y,
            M_x=self.M_x,
            M_y=self.M_y,
        )

    # validation and serialization ----------------------------------------

    def validate(self) -> None:
        errs: list[str] = []
        for build in (
            self.atom_params,
            self.coupling_profile,
            self.lattice_geometry,
            self.grating_config,
        ):
            try:
                build()
            except ValueError as exc:
                errs.append(str(exc))
        for name in ("tau", "tau_b", "tau_a", "asym_threshold"):
            if not getattr(self, name) > 0:
                errs.append(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("n", "n_x", "n_y"):
            v = getattr(self, name)
            if v < 64 or (v & (v - 1)) != 0:
                errs.append(f"{name} must be a power of two >= 64, got {v!r}")
        for name in ("s_points", "s_points_2d"):
            if getattr(self, name) < 3:
                errs.append(f"{name} must be >= 3, got {getattr(self, name)!r}")
        if self.backend not in ("analytic", "numeric"):
            errs.append(f"backend must be 'analytic' or 'numeric', got {self.backend!r}")
        if self.format not in ("csv", "json", "both"):
            errs.append(f"format must be 'csv', 'json' or 'both', got {self.format!r}")
        if self.dims not in (1, 2):
            errs.append(f"dims must be 1 or 2, got {self.dims!r}")
        if errs:
            raise ConfigError(errs)

    def to_dict(self) -> dict:
        """Fully resolved configuration for embedding in output files."""
        d = {}
        for f in fields(self):
            d[f.name] = getattr(self, f.name)
        d["sigma_x"] = self.sigma if self.sigma_x is None else self.sigma_x
        d["sigma_y"] = self.sigma if self.sigma_y is None else self.sigma_y
        d["R_x"] = self.R if self.R_x is None else self.R_x
        d["R_y"] = self.R if self.R_y is None else self.R_y
        d["M_x"] = self.M if self.M_x is None else self.M_x
        d["M_y"] = self.M if self.M_y is None else self.M_y
        return d


def parse_phase(text: str) -> float:
    """Radians, or multiples of pi via suffix: '1.5pi', '-pi', '0.75 pi'."""
    s = text.strip().lower()
    if s.endswith("pi"):
        head = s[:-2].strip()
        if head in ("", "+"):
            factor = 1.0
        elif head == "-":
            factor = -1.0
        else:
            factor = float(head)
        return factor * math.pi
    return float(s)


_INT_FIELDS = {"M", "M_x", "M_y", "n", "n_x", "n_y", "s_points", "s_points_2d", "dims"}
_STR_FIELDS = {"backend", "format", "out"}
_PHASE_FIELDS = {"phi"}


def _convert(name: str, raw: str):
    if name in _STR_FIELDS:
        return raw.strip()
    if name in _PHASE_FIELDS:
        return parse_phase(raw)
    if name in _INT_FIELDS:
        return int(raw.strip())
    return float(raw.strip())


def parse_config_file(path: str) -> dict[str, str]:
    """Flat 'key = value' text; blank lines and '#' comments ignored."""
    entries: dict[str, str] = {}
    errs: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                errs.append(f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
                continue
            key, value = stripped.split("=", 1)
            entries[key.strip()] = value.strip()
    if errs:
        raise ConfigError(errs)
    return entries


def resolve_config(
    config_path: str | None = None, param_overrides: list[str] | None = None, **extra
) -> RunConfig:
    """Defaults -> config file -> --param overrides; every offending key is
    reported, not just the first."""
    known = {f.name for f in fields(RunConfig)}
    raw: dict[str, str] = {}
    errs: list[str] = []
    if config_path is not None:
        raw.update(parse_config_file(config_path))
    for item in param_overrides or []:
        if "=" not in item:
            errs.append(f"--param needs key=value, got {item!r}")
            continue
        key, value = item.split("=", 1)
        raw[key.strip()] = value.strip()
    values: dict = dict(extra)
    for key, text in raw.items():
        if key not in known:
            errs.append(f"unknown config key {key!r}")
            continue
        try:
            values[key] = _convert(key, text)
        except ValueError:
            errs.append(f"config key {key!r}: cannot parse value {text!r}")
    if errs:
        raise ConfigError(errs)
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg
