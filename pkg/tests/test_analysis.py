import dataclasses

import numpy as np
import pytest

from ptgrating import (
    AtomFieldParams,
    CouplingProfile,
    DegenerateProfile,
    GratingConfig,
    LatticeGeometry,
    OrderTable,
    SusceptibilityProfile,
    Thresholds,
    asymmetry_metric,
    classify_grating,
    evaluate_point,
    pt_metrics,
    re_im_ratio,
    sweep,
    sample_chi_2d,
)
from ptgrating.io import sweep_to_csv
from ptgrating.susceptibility import grid_1d


def profile_from(chi, v=None):
    n = len(chi)
    return SusceptibilityProfile(
        u=grid_1d(n), chi=np.asarray(chi, dtype=complex),
        params=AtomFieldParams(), coupling=CouplingProfile(),
        geometry=LatticeGeometry(), backend="analytic", v=v,
    )


def test_pt_metrics_odd_imaginary():
    # the u = -1/2 sample pairs with itself, where sin is zero only to
    # machine precision, so the defect is ~1e-16 rather than exactly 0
    u = grid_1d(256)
    m = pt_metrics(profile_from(1j * np.sin(2 * np.pi * u)))
    assert m.d_im_antisym < 1e-12
    assert m.gain_loss_balance < 1e-12


def test_pt_metrics_ideal_profile():
    u = grid_1d(256)
    chi = np.cos(2 * np.pi * u) + 1j * np.sin(2 * np.pi * u)
    m = pt_metrics(profile_from(chi))
    assert m.d_im_antisym < 1e-12
    assert m.d_re_sym < 1e-12
    assert m.gain_loss_balance < 1e-12


def test_pt_metrics_degenerate():
    with pytest.raises(DegenerateProfile):
        pt_metrics(profile_from(np.ones(64)))


def test_pt_metrics_2d_inversion():
    u = grid_1d(64)
    U, V = np.meshgrid(u, u, indexing="ij")
    chi = np.cos(2 * np.pi * U) * np.cos(2 * np.pi * V) + 1j * (
        np.sin(2 * np.pi * U) + np.sin(2 * np.pi * V)
    )
    m = pt_metrics(profile_from(chi, v=u.copy()))
    assert m.d_im_antisym < 1e-12
    assert m.d_re_sym < 1e-12
    # axis-wise reflections reported as supplementary diagnostics
    assert "d_im_antisym_axis_u" in m.supplementary
    assert m.supplementary["d_im_antisym_axis_u"] > 0.5  # only fully odd under inversion


def test_classification_gates():
    u = grid_1d(256)
    thr = Thresholds()
    ideal = profile_from(np.cos(2 * np.pi * u) + 1j * np.sin(2 * np.pi * u))
    assert classify_grating(pt_metrics(ideal), re_im_ratio(ideal), thr).kind == "pt_symmetric"

    absorption = profile_from(1j * (1.5 + np.sin(2 * np.pi * u)))
    assert classify_grating(pt_metrics(absorption), re_im_ratio(absorption), thr).kind == "amplitude"

    phase = profile_from(np.cos(2 * np.pi * u) + 1e-4j * np.sin(2 * np.pi * u))
    assert classify_grating(pt_metrics(phase), re_im_ratio(phase), thr).kind == "phase"

    lopsided = profile_from((1.0 + np.cos(2 * np.pi * u)) + 1j * (1.0 + np.sin(2 * np.pi * u)))
    assert classify_grating(pt_metrics(lopsided), re_im_ratio(lopsided), thr).kind == "mixed"


def test_thresholds_validation():
    with pytest.raises(ValueError):
        Thresholds(tau=0.0)


def test_asymmetry_trivial_tables():
    cfg = GratingConfig()
    sym = OrderTable({n: 1.0 / (1 + abs(n)) for n in range(-4, 5)}, cfg)
    assert asymmetry_metric(sym) == 0.0
    pos = OrderTable({n: (1.0 if n > 0 else 0.0) for n in range(-4, 5)}, cfg)
    assert asymmetry_metric(pos) == 1.0


def test_asymmetry_reflection_antisymmetry():
    cfg = GratingConfig()
    rng = np.random.default_rng(3)
    table = {n: float(rng.uniform(0, 2)) for n in range(-4, 5)}
    flipped = {-n: v for n, v in table.items()}
    a = asymmetry_metric(OrderTable(table, cfg))
    b = asymmetry_metric(OrderTable(flipped, cfg))
    assert a == -b


def test_asymmetry_2d_table():
    cfg = GratingConfig()
    table = {(nx, ny): 0.0 for nx in range(-2, 3) for ny in range(-2, 3)}
    table[(1, -2)] = 1.0
    a = asymmetry_metric(OrderTable(table, cfg))
    assert a == 1.0  # lexicographically positive order
    table[(-1, 2)] = 1.0
    assert asymmetry_metric(OrderTable(table, cfg)) == 0.0


def test_evaluate_point_runs_both_backends(base_config):
    res_a = evaluate_point(dataclasses.replace(base_config, n=256))
    res_n = evaluate_point(dataclasses.replace(base_config, n=256, backend="numeric"))
    assert res_a.grating_class.kind == res_n.grating_class.kind == "pt_symmetric"
    assert abs(res_a.asymmetry - res_n.asymmetry) < 1e-3
    assert res_a.pattern is not None and np.all(res_a.pattern.intensity >= 0)


def test_sweep_deterministic(base_config):
    cfg = dataclasses.replace(base_config, n=256)
    values = np.linspace(0.5, 2.0, 5)
    t1 = sweep(cfg, "coupling_both", values)
    t2 = sweep(cfg, "coupling_both", values)
    params = cfg.to_dict()
    assert sweep_to_csv(t1, params) == sweep_to_csv(t2, params)


def test_sweep_records_row_errors(base_config):
    cfg = dataclasses.replace(base_config, n=256)
    # omega_c = omega_d = 0 makes the closed-form denominator vanish
    table = sweep(cfg, "coupling_both", [0.0, 2.0])
    assert table.rows[0].error == "DegenerateDenominator"
    assert table.rows[0].orders is None
    assert table.rows[1].error is None
    assert table.rows[1].grating_class.kind == "pt_symmetric"
    csv_text = sweep_to_csv(table, cfg.to_dict())
    assert "error:DegenerateDenominator" in csv_text


def test_sweep_rejects_bad_input(base_config):
    with pytest.raises(ValueError, match="strictly increasing"):
        sweep(base_config, "coupling_both", [1.0, 1.0])
    with pytest.raises(ValueError, match="unknown sweep parameter"):
        sweep(base_config, "omega_p", [0.1, 0.2])


def test_sweep_parameter_application(base_config):
    cfg = dataclasses.replace(base_config, n=256)
    t = sweep(cfg, "ratio_d_over_c", [0.5, 1.0])
    assert t.rows[0].error is None
    t2 = sweep(cfg, "phase", [0.0, np.pi / 2])
    kinds = [r.grating_class.kind for r in t2.rows]
    assert kinds == ["amplitude", "pt_symmetric"]


def test_phase_sweep_antisymmetry_pattern(base_config):
    # gain/loss antisymmetry appears at the quadrature phases only
    cfg = dataclasses.replace(base_config, n=256)
    table = sweep(cfg, "phase", [0.0, np.pi / 2, np.pi, 3 * np.pi / 2])
    d_im = [r.metrics.d_im_antisym for r in table.rows]
    assert max(d_im[1], d_im[3]) < 0.1
    assert min(d_im[0], d_im[2]) > 1.0


def test_asymmetry_mirror_identity_at_quadrature(base_config):
    # analytic pipelines at phi and 2*pi - phi give opposite asymmetries
    a = evaluate_point(dataclasses.replace(base_config, phi=np.pi / 2),
                       with_pattern=False).asymmetry
    b = evaluate_point(dataclasses.replace(base_config, phi=3 * np.pi / 2),
                       with_pattern=False).asymmetry
    assert abs(a + b) < 1e-10
    assert b > 0  # amplified positive orders at 3*pi/2


def test_2d_point_metrics_match_1d_structure(base_config):
    p = dataclasses.replace(base_config.atom_params(), phi=np.pi / 2)
    prof = sample_chi_2d(p, base_config.coupling_profile(2),
                         base_config.lattice_geometry(), n_x=64, n_y=64)
    m = pt_metrics(prof)
    assert m.d_im_antisym < 0.1
    assert m.gain_loss_balance < 0.2
