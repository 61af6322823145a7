"""Acceptance suite: end-to-end checks at the standard operating point.

Each test prints one PASS line with the measured number next to its pinned
tolerance (run pytest with -s or -rA to see them).  Thresholds marked
"committed" were frozen from the first oracle runs of the direct solver and
the closed form.
"""

import dataclasses

import numpy as np

import ptgrating as pg

# the standard operating point (library defaults, phi = 3*pi/2)
BASE = pg.RunConfig()

PHASES = (0.0, np.pi / 2, np.pi, 3 * np.pi / 2)
COUPLING_SAMPLES = (-0.049, 0.001, 0.051)

# committed after the first oracle run: worst pointwise and aggregate
# disagreement between the closed form and the direct solve on the
# validation grid at the base field scale
MAX_REL_ERROR_COMMITTED = 0.15   # measured 0.081
L2_REL_ERROR_COMMITTED = 0.01    # measured 0.0046


def report(num: int, name: str, detail: str) -> None:
    print(f"criterion {num:02d} {name}: PASS ({detail})")


def test_criterion_01_oracle_agreement():
    """Time propagation from |1><1| agrees with the direct linear solve."""
    worst = 0.0
    base = BASE.atom_params()
    for phi in PHASES:
        for omega_s in COUPLING_SAMPLES:
            p = dataclasses.replace(base, phi=phi, omega_s=omega_s)
            ss = pg.steady_state(p).rho.rho
            ev = pg.evolve(p, pg.DensityMatrix.ground_state(1), 200.0).rho
            worst = max(worst, float(np.max(np.abs(ss - ev))))
    assert worst < 1e-6
    report(1, "oracle-agreement", f"max elementwise diff {worst:.3e} < 1e-6")


def _validation_grid(scale: float):
    base = BASE.atom_params()
    nums, anas = [], []
    for phi in (0.0, np.pi / 2, 3 * np.pi / 2):
        for u in np.linspace(-0.5, 0.5, 17, endpoint=False):
            omega_s = 0.001 + 0.05 * scale * np.sin(2 * np.pi * u)
            p = dataclasses.replace(base, phi=phi, omega_s=float(omega_s),
                                    omega_p=0.05 * scale)
            rep = pg.validate_analytic(p)
            nums.append(rep["rho41_numeric"])
            anas.append(rep["rho41_analytic"])
    nums = np.array(nums)
    anas = np.array(anas)
    ptwise = np.abs(nums - anas) / np.maximum(np.abs(nums), 1e-15)
    l2 = float(np.linalg.norm(nums - anas) / np.linalg.norm(nums))
    return float(ptwise.max()), l2


def test_criterion_02_analytic_vs_numeric_perturbative():
    """Closed form vs direct solve: committed threshold and improvement
    under halving of the weak fields (aggregate over the grid; pointwise
    ratios are dominated by isolated near-zeros of the coherence)."""
    max_base, l2_base = _validation_grid(1.0)
    _, l2_half = _validation_grid(0.5)
    assert max_base < MAX_REL_ERROR_COMMITTED
    assert l2_base < L2_REL_ERROR_COMMITTED
    assert l2_half <= l2_base
    report(2, "analytic-vs-numeric",
           f"max {max_base:.3e} < {MAX_REL_ERROR_COMMITTED}, "
           f"rms {l2_base:.3e} -> halved {l2_half:.3e}")


def test_criterion_03_exact_symmetries():
    """(a) zero dispersion at phi = 0; (b) phase-reversal conjugation."""
    rng = np.random.default_rng(2024)
    worst_re = 0.0
    worst_conj = 0.0
    for _ in range(100):
        p = pg.AtomFieldParams(
            omega_p=float(rng.uniform(0.0, 0.5)),
            omega_s=float(rng.uniform(-0.5, 0.5)),
            omega_c=float(rng.uniform(0.5, 3.0)),
            omega_d=float(rng.uniform(0.5, 3.0)),
            phi=float(rng.uniform(0.0, 2 * np.pi)),
        )
        worst_re = max(worst_re, abs(pg.rho41_analytic(
            dataclasses.replace(p, phi=0.0)).real))
        a = pg.rho41_analytic(p)
        b = pg.rho41_analytic(dataclasses.replace(p, phi=2 * np.pi - p.phi))
        worst_conj = max(worst_conj, abs(b + np.conj(a)))
    assert worst_re <= 1e-14
    assert worst_conj < 1e-12
    report(3, "exact-symmetries",
           f"Re at phi=0 {worst_re:.1e} <= 1e-14, conjugation {worst_conj:.3e} < 1e-12")


def _pattern_1d(phi: float) -> np.ndarray:
    cfg = dataclasses.replace(BASE, phi=phi)
    return pg.evaluate_point(cfg).pattern.intensity


def _pattern_2d(phi: float) -> np.ndarray:
    p = dataclasses.replace(BASE.atom_params(), phi=phi)
    prof = pg.sample_chi_2d(p, BASE.coupling_profile(2), BASE.lattice_geometry(),
                            n_x=BASE.n_x, n_y=BASE.n_y, backend="analytic")
    t = pg.transmission(prof, BASE.grating_config())
    s = pg.symmetric_sgrid(BASE.s_points_2d)
    return pg.far_field_2d(t, s, s).intensity


def test_criterion_04_mirror_inversion():
    """Patterns at phi = pi/2 and 3*pi/2 are mirror images, 1D and 2D."""
    a = _pattern_1d(np.pi / 2)
    b = _pattern_1d(3 * np.pi / 2)[::-1]
    rel_1d = float(np.max(np.abs(a - b) / np.maximum(np.maximum(a, b), 1e-300)))
    assert rel_1d < 1e-10

    a2 = _pattern_2d(np.pi / 2)
    b2 = _pattern_2d(3 * np.pi / 2)[::-1, ::-1]
    rel_2d = float(np.max(np.abs(a2 - b2) / np.maximum(np.maximum(a2, b2), 1e-300)))
    assert rel_2d < 1e-10
    report(4, "mirror-inversion", f"1D {rel_1d:.3e}, 2D {rel_2d:.3e} < 1e-10")


def test_criterion_05_symmetric_pattern_at_phi_zero():
    """phi = 0: even pattern and amplitude-grating classification."""
    cfg = dataclasses.replace(BASE, phi=0.0)
    res = pg.evaluate_point(cfg)
    I = res.pattern.intensity
    rel = float(np.max(np.abs(I - I[::-1]) / np.maximum(np.maximum(I, I[::-1]), 1e-300)))
    assert rel < 1e-12
    assert res.grating_class.kind == "amplitude"
    report(5, "phi0-symmetry", f"max rel asymmetry {rel:.1e} < 1e-12, class=amplitude")


def test_criterion_06_pt_induction():
    """Gain/loss antisymmetry appears at phi = pi/2 but not at phi = 0."""
    base = BASE.atom_params()

    def d_im_1d(phi):
        prof = pg.sample_chi_1d(dataclasses.replace(base, phi=phi),
                                BASE.coupling_profile(1), BASE.lattice_geometry(),
                                n=256, backend="numeric")
        return pg.pt_metrics(prof).d_im_antisym, prof

    d0, _ = d_im_1d(0.0)
    dq, prof_q = d_im_1d(np.pi / 2)
    gap_1d = d0 / dq  # measured 19.4 on first run
    assert gap_1d >= 5.0
    assert prof_q.chi.imag.min() < 0 < prof_q.chi.imag.max()

    def d_im_2d(phi):
        prof = pg.sample_chi_2d(dataclasses.replace(base, phi=phi),
                                BASE.coupling_profile(2), BASE.lattice_geometry(),
                                n_x=64, n_y=64, backend="numeric")
        return pg.pt_metrics(prof).d_im_antisym

    gap_2d = d_im_2d(0.0) / d_im_2d(np.pi / 2)  # measured 24.9 on first run
    assert gap_2d >= 5.0
    report(6, "pt-induction",
           f"antisymmetry-defect gap 1D {gap_1d:.1f}x, 2D {gap_2d:.1f}x >= 5x; "
           "gain and loss both present")


def test_criterion_07_coupling_sweep_threshold_and_flattening():
    """Sweeping both controls together: the diffraction asymmetry switches on
    between 0.05 and 0.2, and the zeroth order falls then flattens."""
    values = np.linspace(0.01, 3.0, 400)
    table = pg.sweep(BASE, "coupling_both", values)
    asym = np.array([row.asymmetry for row in table.rows])
    I0 = np.array([row.orders.orders[0] for row in table.rows])

    above = np.abs(asym) >= BASE.asym_threshold
    assert above.any()
    crossing = float(values[int(np.argmax(above))])
    assert 0.05 <= crossing <= 0.2
    assert not above[values < 0.05].any()

    diffs = np.diff(I0)
    peak = float(I0.max())
    k = int(np.argmax(diffs >= 0)) if (diffs >= 0).any() else len(diffs)
    assert k >= 5, "no initial decreasing stretch"
    assert I0[k] < 0.2 * peak, "decrease did not reach a low level before flattening"
    tail = float(np.abs(diffs[k:]).max())
    assert tail < 0.01 * peak
    report(7, "coupling-sweep",
           f"|asymmetry| crosses {BASE.asym_threshold} at {crossing:.4f} in [0.05, 0.2]; "
           f"I0 decreases then stays within {tail:.3e} < 1% of peak {peak:.3f}")


def test_criterion_08_ratio_sweep_degrades_towards_amplitude():
    """Raising omega_d/omega_c past its optimum kills the asymmetry and turns
    the lattice into an amplitude grating."""
    values = np.linspace(0.25, 25.0, 100)
    table = pg.sweep(BASE, "ratio_d_over_c", values)
    asym = np.array([row.asymmetry for row in table.rows])
    kinds = [row.grating_class.kind for row in table.rows]
    peak_at = float(values[int(np.argmax(np.abs(asym)))])
    assert peak_at <= 3.0
    assert abs(asym[-1]) < 0.25 * np.abs(asym).max()
    assert kinds[-1] == "amplitude"
    report(8, "ratio-sweep",
           f"|asymmetry| peaks {np.abs(asym).max():.3f} at ratio {peak_at:.2f}, "
           f"falls to {abs(asym[-1]):.3f}; final class=amplitude")


def test_criterion_09_numerics_hygiene():
    """Quadrature self-checks at the gain-grating operating point."""
    res = pg.evaluate_point(BASE, with_pattern=False)
    residual = pg.parseval_residual(res.transmission)
    assert residual < 1e-8

    doubled = pg.evaluate_point(dataclasses.replace(BASE, n=2 * BASE.n),
                                with_pattern=False)
    worst = max(
        abs(res.orders.orders[n] - doubled.orders.orders[n]) / doubled.orders.orders[n]
        for n in res.orders.orders
    )
    assert worst < 1e-8

    for R, M in ((4.0, 5), (2.5, 3)):
        for n in range(-int(np.floor(R)), int(np.floor(R)) + 1):
            assert pg.array_factor(n / R, R, M) == 1.0
    report(9, "numerics-hygiene",
           f"parseval {residual:.3e} < 1e-8, grid-doubling {worst:.3e} < 1e-8, "
           "array factor exactly 1 at all order positions")


def test_criterion_10_trivial_aperture():
    """Unit transmission concentrates everything in the zeroth order."""
    from ptgrating.susceptibility import grid_1d

    n = 256
    prof = pg.SusceptibilityProfile(
        u=grid_1d(n), chi=np.zeros(n, dtype=complex), params=BASE.atom_params(),
        coupling=BASE.coupling_profile(1), geometry=BASE.lattice_geometry(),
        backend="analytic",
    )
    t1 = pg.transmission(prof, BASE.grating_config())
    table1 = pg.order_intensities(t1)
    assert abs(table1.orders[0] - 1.0) < 1e-12
    worst1 = max(v for k, v in table1.orders.items() if k != 0)

    prof2 = pg.SusceptibilityProfile(
        u=grid_1d(n), chi=np.zeros((n, n), dtype=complex), params=BASE.atom_params(),
        coupling=BASE.coupling_profile(2), geometry=BASE.lattice_geometry(),
        backend="analytic", v=grid_1d(n),
    )
    t2 = pg.transmission(prof2, BASE.grating_config())
    table2 = pg.order_intensities(t2)
    assert abs(table2.orders[(0, 0)] - 1.0) < 1e-12
    worst2 = max(v for k, v in table2.orders.items() if k != (0, 0))
    assert worst1 < 1e-12 and worst2 < 1e-12
    report(10, "trivial-aperture",
           f"I_0 = 1 within 1e-12; stray orders {max(worst1, worst2):.1e} < 1e-12")
