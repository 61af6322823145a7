"""Deterministic CSV/JSON serialization of profiles, patterns and sweeps.

Every file embeds the complete resolved run configuration: CSV files carry
it as a single '#'-prefixed JSON header line, JSON files as a "params"
object.  Floats are written with shortest round-trip precision (repr), so
identical configurations produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .analysis import SweepTable
from .diffraction import FarFieldPattern, OrderTable
from .susceptibility import SusceptibilityProfile

__all__ = [
    "profile_to_csv",
    "profile_to_json",
    "pattern_to_csv",
    "pattern_to_json",
    "orders_to_json",
    "orders_to_csv",
    "sweep_to_csv",
    "sweep_to_json",
    "validate_report_to_json",
    "write_text",
]


def _fmt(x) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(x))


def _params_header(params: dict) -> str:
    return "# " + json.dumps(params, sort_keys=True)


def _dump_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_text(path: str | Path, content: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")
    return path


def profile_to_csv(profile: SusceptibilityProfile, params: dict) -> str:
    lines = [_params_header(params)]
    if profile.is_2d:
        lines.append("u,v,re_chi,im_chi")
        for i, u in enumerate(profile.u):
            for j, v in enumerate(profile.v):
                c = profile.chi[i, j]
                lines.append(f"{_fmt(u)},{_fmt(v)},{_fmt(c.real)},{_fmt(c.imag)}")
    else:
        lines.append("u,re_chi,im_chi")
        for u, c in zip(profile.u, profile.chi):
            lines.append(f"{_fmt(u)},{_fmt(c.real)},{_fmt(c.imag)}")
    return "\n".join(lines) + "\n"


def profile_to_json(profile: SusceptibilityProfile, params: dict) -> str:
    obj = {
        "params": params,
        "backend": profile.backend,
        "u": [float(x) for x in profile.u],
        "re_chi": np.asarray(profile.chi.real).ravel().tolist(),
        "im_chi": np.asarray(profile.chi.imag).ravel().tolist(),
    }
    if profile.is_2d:
        obj["v"] = [float(x) for x in profile.v]
        obj["shape"] = list(profile.chi.shape)
    return _dump_json(obj)


def pattern_to_csv(pattern: FarFieldPattern, params: dict) -> str:
    lines = [_params_header(params)]
    if pattern.is_2d:
        lines.append("sx,sy,intensity")
        for i, sx in enumerate(pattern.s):
            for j, sy in enumerate(pattern.s_y):
                lines.append(f"{_fmt(sx)},{_fmt(sy)},{_fmt(pattern.intensity[i, j])}")
    else:
        lines.append("s,intensity")
        for s, val in zip(pattern.s, pattern.intensity):
            lines.append(f"{_fmt(s)},{_fmt(val)}")
    return "\n".join(lines) + "\n"


def pattern_to_json(pattern: FarFieldPattern, params: dict) -> str:
    obj = {
        "params": params,
        "s": [float(x) for x in pattern.s],
        "intensity": np.asarray(pattern.intensity).ravel().tolist(),
    }
    if pattern.is_2d:
        obj["s_y"] = [float(x) for x in pattern.s_y]
        obj["shape"] = list(pattern.intensity.shape)
    return _dump_json(obj)


def _sorted_orders(table: OrderTable) -> list:
    return sorted(table.orders.items())


def orders_to_json(table: OrderTable, params: dict) -> str:
    entries = []
    for key, val in _sorted_orders(table):
        if isinstance(key, tuple):
            entries.append({"nx": key[0], "ny": key[1], "intensity": val})
        else:
            entries.append({"n": key, "intensity": val})
    return _dump_json({"params": params, "orders": entries})


def orders_to_csv(table: OrderTable, params: dict) -> str:
    lines = [_params_header(params)]
    first = next(iter(table.orders))
    if isinstance(first, tuple):
        lines.append("nx,ny,intensity")
        for key, val in _sorted_orders(table):
            lines.append(f"{key[0]},{key[1]},{_fmt(val)}")
    else:
        lines.append("n,intensity")
        for key, val in _sorted_orders(table):
            lines.append(f"{key},{_fmt(val)}")
    return "\n".join(lines) + "\n"


def _order_range(table: SweepTable) -> list[int]:
    nmax = int(math.floor(table.config.R))
    return list(range(-nmax, nmax + 1))


def sweep_to_csv(table: SweepTable, params: dict) -> str:
    ns = _order_range(table)
    header = ["param"] + [f"I_{n}" for n in ns] + [
        "asymmetry", "d_im", "d_re", "balance", "class",
    ]
    lines = [_params_header(params), ",".join(header)]
    for row in table.rows:
        cells = [_fmt(row.value)]
        if row.error is not None:
            cells += ["nan"] * (len(ns) + 4) + [f"error:{row.error}"]
        else:
            cells += [_fmt(row.orders.orders[n]) for n in ns]
            cells += [
                _fmt(row.asymmetry),
                _fmt(row.metrics.d_im_antisym),
                _fmt(row.metrics.d_re_sym),
                _fmt(row.metrics.gain_loss_balance),
                row.grating_class.kind,
            ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def sweep_to_json(table: SweepTable, params: dict) -> str:
    ns = _order_range(table)
    rows = []
    for row in table.rows:
        if row.error is not None:
            rows.append({"param": row.value, "error": row.error})
            continue
        rows.append({
            "param": row.value,
            "orders": {str(n): row.orders.orders[n] for n in ns},
            "asymmetry": row.asymmetry,
            "d_im": row.metrics.d_im_antisym,
            "d_re": row.metrics.d_re_sym,
            "balance": row.metrics.gain_loss_balance,
            "class": row.grating_class.kind,
        })
    return _dump_json({"params": params, "parameter": table.parameter, "rows": rows})


def validate_report_to_json(rows: list[dict], summary: dict, params: dict) -> str:
    out_rows = []
    for row in rows:
        out_rows.append({
            "omega_s": row["omega_s"],
            "phi": row["phi"],
            "rho41_numeric": {"re": row["rho41_numeric"].real,
                              "im": row["rho41_numeric"].imag},
            "rho41_analytic": {"re": row["rho41_analytic"].real,
                               "im": row["rho41_analytic"].imag},
            "rel_error": row["rel_error"],
        })
    return _dump_json({"params": params, "rows": out_rows, **summary})
