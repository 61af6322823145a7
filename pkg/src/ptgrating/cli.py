"""Command-line interface: chi, diffract1d, diffract2d, orders, sweep, validate.

Exit codes: 0 on success, 1 on configuration errors (every offending key is
listed), 2 on numerical errors (the error class name is echoed).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import analysis, io
from .config import ConfigError, parse_phase, resolve_config
from .density_matrix import validate_analytic
from .diffraction import far_field_2d, order_intensities, symmetric_sgrid, transmission
from .errors import SimulationError
from .susceptibility import coupling_at, sample_chi_1d, sample_chi_2d

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptgrating",
        description=(
            "Steady-state susceptibility, transmission gratings and far-field "
            "diffraction of a driven four-level atomic lattice"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH", default=None,
                       help="flat key = value config file")
        p.add_argument("--param", metavar="K=V", action="append", default=[],
                       help="override any config key (repeatable)")
        p.add_argument("--out", metavar="DIR", default=None,
                       help="output directory (default '.')")
        p.add_argument("--format", choices=("csv", "json", "both"), default=None,
                       help="output format (default csv)")

    common(sub.add_parser("chi", help="sample the susceptibility profile (dims=1 or 2)"))
    common(sub.add_parser("diffract1d", help="1D far-field pattern"))
    common(sub.add_parser("diffract2d", help="2D far-field pattern"))
    common(sub.add_parser("orders", help="diffraction-order intensities"))
    p_sweep = sub.add_parser("sweep", help="sweep a parameter through the pipeline")
    common(p_sweep)
    p_sweep.add_argument("--parameter", choices=analysis.SWEEP_PARAMETERS,
                         default="coupling_both")
    p_sweep.add_argument("--from", dest="sweep_from", default="0.01",
                         help="first swept value (phases accept a 'pi' suffix)")
    p_sweep.add_argument("--to", dest="sweep_to", default="3.0",
                         help="last swept value")
    p_sweep.add_argument("--points", type=int, default=60)
    common(sub.add_parser("validate", help="cross-check the two steady-state backends"))
    return parser


def _formats(cfg) -> tuple[bool, bool]:
    want_csv = cfg.format in ("csv", "both")
    want_json = cfg.format in ("json", "both")
    return want_csv, want_json


def _write(cfg, stem: str, csv_text: str | None, json_text: str | None) -> list[Path]:
    want_csv, want_json = _formats(cfg)
    written = []
    outdir = Path(cfg.out)
    if csv_text is not None and want_csv:
        written.append(io.write_text(outdir / f"{stem}.csv", csv_text))
    if json_text is not None and want_json:
        written.append(io.write_text(outdir / f"{stem}.json", json_text))
    return written


def _classify_and_summarize(cfg, prof) -> str:
    t = transmission(prof, cfg.grating_config())
    orders = order_intensities(t)
    metrics = analysis.pt_metrics(prof)
    cls = analysis.classify_grating(metrics, analysis.re_im_ratio(prof),
                                    analysis.thresholds_from(cfg))
    asym = analysis.asymmetry_metric(orders)
    return f"class={cls.kind} asymmetry={asym!r}"


def _cmd_chi(cfg) -> str:
    params = cfg.to_dict()
    if cfg.dims == 2:
        prof = sample_chi_2d(cfg.atom_params(), cfg.coupling_profile(2),
                             cfg.lattice_geometry(), n_x=cfg.n_x, n_y=cfg.n_y,
                             backend=cfg.backend)
        stem = "chi2d"
    else:
        prof = sample_chi_1d(cfg.atom_params(), cfg.coupling_profile(1),
                             cfg.lattice_geometry(), n=cfg.n, backend=cfg.backend)
        stem = "chi"
    _write(cfg, stem, io.profile_to_csv(prof, params), io.profile_to_json(prof, params))
    return _classify_and_summarize(cfg, prof)


def _cmd_diffract1d(cfg) -> str:
    params = cfg.to_dict()
    res = analysis.evaluate_point(cfg, with_pattern=True)
    _write(cfg, "pattern1d", io.pattern_to_csv(res.pattern, params),
           io.pattern_to_json(res.pattern, params))
    return f"class={res.grating_class.kind} asymmetry={res.asymmetry!r}"


def _cmd_diffract2d(cfg) -> str:
    params = cfg.to_dict()
    prof = sample_chi_2d(cfg.atom_params(), cfg.coupling_profile(2),
                         cfg.lattice_geometry(), n_x=cfg.n_x, n_y=cfg.n_y,
                         backend=cfg.backend)
    t = transmission(prof, cfg.grating_config())
    s = symmetric_sgrid(cfg.s_points_2d)
    pattern = far_field_2d(t, s, s)
    _write(cfg, "pattern2d", io.pattern_to_csv(pattern, params),
           io.pattern_to_json(pattern, params))
    return _classify_and_summarize(cfg, prof)


def _cmd_orders(cfg) -> str:
    params = cfg.to_dict()
    res = analysis.evaluate_point(cfg, with_pattern=False)
    want_csv, _ = _formats(cfg)
    outdir = Path(cfg.out)
    io.write_text(outdir / "orders.json", io.orders_to_json(res.orders, params))
    if want_csv:
        io.write_text(outdir / "orders.csv", io.orders_to_csv(res.orders, params))
    return f"class={res.grating_class.kind} asymmetry={res.asymmetry!r}"


def _cmd_sweep(cfg, args) -> str:
    params = cfg.to_dict()
    lo = parse_phase(str(args.sweep_from))
    hi = parse_phase(str(args.sweep_to))
    if args.points < 2:
        raise ConfigError(["--points must be >= 2"])
    if not hi > lo:
        raise ConfigError(["--to must be greater than --from"])
    values = np.linspace(lo, hi, args.points)
    table = analysis.sweep(cfg, args.parameter, values)
    params["sweep_parameter"] = args.parameter
    params["sweep_from"] = lo
    params["sweep_to"] = hi
    params["sweep_points"] = args.points
    _write(cfg, "sweep", io.sweep_to_csv(table, params), io.sweep_to_json(table, params))
    last = table.rows[-1]
    if last.error is not None:
        return f"rows={len(table.rows)} last=error:{last.error}"
    return (f"rows={len(table.rows)} class={last.grating_class.kind} "
            f"asymmetry={last.asymmetry!r}")


def _cmd_validate(cfg) -> str:
    params = cfg.to_dict()
    rows = []
    base = cfg.atom_params()
    coupling = cfg.coupling_profile(1)
    for phi in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
        for u in np.arange(-4, 5) / 8.0:
            omega_s = coupling_at(coupling, u)
            p = dataclasses.replace(base, phi=float(phi), omega_s=float(omega_s))
            rep = validate_analytic(p)
            rows.append({"omega_s": float(omega_s), "phi": float(phi), **rep})
    rel = np.array([r["rel_error"] for r in rows])
    num = np.array([r["rho41_numeric"] for r in rows])
    ana = np.array([r["rho41_analytic"] for r in rows])
    l2 = float(np.linalg.norm(num - ana) / max(np.linalg.norm(num), 1e-300))
    summary = {"max_rel_error": float(rel.max()), "l2_rel_error": l2}
    io.write_text(Path(cfg.out) / "validate.json",
                  io.validate_report_to_json(rows, summary, params))
    return f"max_rel_error={summary['max_rel_error']!r} l2_rel_error={l2!r}"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flag_overrides = {}
    if args.out is not None:
        flag_overrides["out"] = args.out
    if args.format is not None:
        flag_overrides["format"] = args.format
    try:
        cfg = resolve_config(args.config, args.param, **flag_overrides)
        if args.command == "chi":
            summary = _cmd_chi(cfg)
        elif args.command == "diffract1d":
            summary = _cmd_diffract1d(cfg)
        elif args.command == "diffract2d":
            summary = _cmd_diffract2d(cfg)
        elif args.command == "orders":
            summary = _cmd_orders(cfg)
        elif args.command == "sweep":
            summary = _cmd_sweep(cfg, args)
        elif args.command == "validate":
            summary = _cmd_validate(cfg)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError([f"unknown command {args.command!r}"])
    except ConfigError as exc:
        for msg in exc.messages:
            print(f"config error: {msg}", file=sys.stderr)
        return 1
    except SimulationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(f"{args.command}: {summary}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
