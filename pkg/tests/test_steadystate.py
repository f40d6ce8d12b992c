import math

import numpy as np
import pytest

from libration.dynamics import mean_field_rhs
from libration.steadystate import (
    MeanFieldParams,
    Stability,
    beta_from_n,
    bistability_condition,
    classify_stability,
    effective_detuning,
    minimum_drive,
    solve_branches,
    stability_matrix,
    steady_occupations,
    sweep_diagram,
    turning_points,
)
from oracles import draw_mean_field, drive_curve_folds, fold_extrema_scan, scan_roots

SQRT3 = math.sqrt(3.0)

# fitted working point used by the hysteresis benchmark (see calibration.py)
REF_DELTA_ML = -34283.6799057411
REF_GAMMA_B = 8012.985643210628
REF_ETA = 0.021209365972552064


def ref_params(Omega: float) -> MeanFieldParams:
    return MeanFieldParams(delta_ml=REF_DELTA_ML, Omega=Omega,
                           gamma_b=REF_GAMMA_B, eta=REF_ETA)


def residual(p: MeanFieldParams, n: float) -> float:
    u = p.delta_ml + 12.0 * p.eta
    return n * (p.gamma_b**2 / 4.0 + (u + 12.0 * p.eta * n) ** 2) - p.Omega**2 / 4.0


def test_undriven_mode_is_vacuum():
    p = ref_params(0.0)
    assert steady_occupations(p) == [0.0]
    (branch,) = solve_branches(p)
    assert branch.beta0 == 0.0
    assert branch.verdict is Stability.STABLE


def test_three_roots_inside_window():
    p = ref_params(6.0e6)
    ns = steady_occupations(p)
    assert len(ns) == 3
    oracle = scan_roots(p.delta_ml, p.Omega, p.gamma_b, p.eta)
    np.testing.assert_allclose(ns, oracle, rtol=1e-10)


def test_roots_match_scan_oracle_random():
    rng = np.random.default_rng(42)
    checked_three = 0
    for _ in range(150):
        delta_ml, Omega, gamma_b, eta = draw_mean_field(rng)
        p = MeanFieldParams(delta_ml=delta_ml, Omega=Omega, gamma_b=gamma_b, eta=eta)
        ns = steady_occupations(p)
        oracle = scan_roots(delta_ml, Omega, gamma_b, eta, n_grid=200_000)
        assert len(ns) == len(oracle)
        np.testing.assert_allclose(ns, oracle, rtol=1e-8)
        checked_three += len(ns) == 3
    assert checked_three > 30  # the sampler must actually exercise the window


def test_root_residual_contract():
    rng = np.random.default_rng(11)
    for _ in range(60):
        delta_ml, Omega, gamma_b, eta = draw_mean_field(rng)
        p = MeanFieldParams(delta_ml=delta_ml, Omega=Omega, gamma_b=gamma_b, eta=eta)
        for n in steady_occupations(p):
            assert abs(residual(p, n)) <= 1e-9 * p.Omega**2 / 4.0


def test_steady_amplitude_consistency():
    rng = np.random.default_rng(5)
    for _ in range(40):
        delta_ml, Omega, gamma_b, eta = draw_mean_field(rng)
        p = MeanFieldParams(delta_ml=delta_ml, Omega=Omega, gamma_b=gamma_b, eta=eta)
        for n in steady_occupations(p):
            beta0 = beta_from_n(p, n)
            np.testing.assert_allclose(abs(beta0) ** 2, n, rtol=1e-9)
            # a fixed point of the flow, at drive scale
            assert abs(mean_field_rhs(beta0, p)) <= 1e-9 * max(p.Omega, 1.0)
            # energy balance: dissipation equals drive input
            np.testing.assert_allclose(
                gamma_b * n, -Omega * beta0.imag, rtol=1e-9, atol=1e-30
            )


def test_beta_from_n_rejects_non_roots():
    p = ref_params(6.0e6)
    ns = steady_occupations(p)
    with pytest.raises(ValueError):
        beta_from_n(p, 1.7 * ns[-1] + 1.0)


def test_trace_equals_damping_exactly():
    rng = np.random.default_rng(17)
    for _ in range(40):
        delta_ml, Omega, gamma_b, eta = draw_mean_field(rng)
        p = MeanFieldParams(delta_ml=delta_ml, Omega=Omega, gamma_b=gamma_b, eta=eta)
        for n in steady_occupations(p):
            a = stability_matrix(p, n)
            tr = a[0, 0] + a[1, 1]
            assert tr.real == gamma_b
            assert tr.imag == 0.0


def test_three_root_stability_pattern():
    rng = np.random.default_rng(23)
    seen = 0
    while seen < 40:
        delta_ml, Omega, gamma_b, eta = draw_mean_field(rng)
        p = MeanFieldParams(delta_ml=delta_ml, Omega=Omega, gamma_b=gamma_b, eta=eta)
        branches = solve_branches(p)
        if len(branches) != 3:
            continue
        seen += 1
        verdicts = tuple(b.verdict for b in branches)
        assert verdicts == (Stability.STABLE, Stability.UNSTABLE, Stability.STABLE)
        for b in branches:
            re1, re2 = b.eigenvalues[0].real, b.eigenvalues[1].real
            if b.stable:
                assert re1 < 0.0 and re2 < 0.0
            else:
                assert max(re1, re2) > 0.0
            np.testing.assert_allclose(re1 + re2, -gamma_b, rtol=1e-9)


def test_determinant_is_curve_slope():
    # det(A) = d(Omega^2/4)/dn along the S-curve: central difference check
    p = ref_params(6.0e6)
    for n in steady_occupations(p):
        a = stability_matrix(p, n)
        det = float(np.real(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]))
        h = 1e-6 * n
        slope = (residual(p, n + h) - residual(p, n - h)) / (2.0 * h)
        np.testing.assert_allclose(det, slope, rtol=1e-5)


def test_classify_stability_edge_cases():
    assert classify_stability(np.diag([1.0 + 0j, 1.0])) is Stability.STABLE
    assert classify_stability(np.array([[1.0, 2.0], [2.0, 1.0]])) is Stability.UNSTABLE
    assert classify_stability(np.diag([1j, -1j])) is Stability.MARGINAL  # undamped
    assert classify_stability(np.array([[1.0, 1.0], [1.0, 1.0]])) is Stability.MARGINAL


def test_bistability_edge_formula():
    omega_t = 2.0 * math.pi * 2.93e6
    flag, omega_c = bistability_condition(omega_t - 5e4, omega_t, REF_ETA, REF_GAMMA_B)
    np.testing.assert_allclose(
        omega_c, omega_t - 12.0 * REF_ETA - SQRT3 * REF_GAMMA_B / 2.0, rtol=1e-15
    )
    assert flag
    assert not bistability_condition(omega_c, omega_t, REF_ETA, REF_GAMMA_B)[0]
    assert not bistability_condition(omega_t + 1e3, omega_t, REF_ETA, REF_GAMMA_B)[0]


def test_edge_agrees_with_fold_scan():
    # straddle the edge and ask the brute-force curve scan on each side
    rng = np.random.default_rng(31)
    for _ in range(30):
        eta = 10.0 ** rng.uniform(-3.0, -1.0)
        gamma_b = 10.0 ** rng.uniform(2.5, 4.5)
        eps = 10.0 ** rng.uniform(-3.0, -0.5)
        omega_t = 10.0 ** rng.uniform(6.5, 7.5)
        _, omega_c = bistability_condition(omega_t, omega_t, eta, gamma_b)
        for side, expect in ((-1.0, True), (+1.0, False)):
            omega_ml = omega_c + side * eps * SQRT3 * gamma_b
            delta_ml = omega_ml - omega_t
            assert drive_curve_folds(delta_ml, gamma_b, eta) is expect


def test_turning_points_frozen_benchmark():
    omega_t = 2.0 * math.pi * 2929656.97817988
    _, omega_c = bistability_condition(omega_t + REF_DELTA_ML, omega_t, REF_ETA, REF_GAMMA_B)
    tp = turning_points(omega_t + REF_DELTA_ML - omega_c, REF_ETA, REF_GAMMA_B)
    assert tp.physical
    np.testing.assert_allclose(tp.drive_low, 9835328.67756706, rtol=1e-10)
    np.testing.assert_allclose(tp.drive_high, 2935852.0807849653, rtol=1e-10)
    np.testing.assert_allclose(tp.delta_eff_low, -10954.952138514087, rtol=1e-9)
    np.testing.assert_allclose(tp.delta_eff_high, 33810.06004263037, rtol=1e-9)
    np.testing.assert_allclose(tp.width, tp.delta_eff_high - tp.delta_eff_low, rtol=1e-12)


def test_turning_points_match_extremum_scan():
    rng = np.random.default_rng(19)
    done = 0
    while done < 20:
        eta = 10.0 ** rng.uniform(-3.0, -1.0)
        gamma_b = 10.0 ** rng.uniform(2.5, 4.5)
        delta = -gamma_b * 10.0 ** rng.uniform(0.3, 1.5)
        tp = turning_points(delta, eta, gamma_b)
        delta_ml = delta - SQRT3 * gamma_b / 2.0 - 12.0 * eta
        folds = fold_extrema_scan(delta_ml, gamma_b, eta)
        if folds is None:
            continue
        (n_up, om_up), (n_down, om_down) = folds
        # the curve is flat at an extremum: its location is only good to
        # ~sqrt(eps), the drive value there to full precision
        np.testing.assert_allclose(tp.n_low, n_up, rtol=1e-6)
        np.testing.assert_allclose(tp.n_high, n_down, rtol=1e-6)
        np.testing.assert_allclose(tp.drive_low, om_up, rtol=1e-9)
        np.testing.assert_allclose(tp.drive_high, om_down, rtol=1e-9)
        done += 1
    assert done == 20


def test_turning_points_window_closures():
    gamma_b, eta = 4.0e3, 0.02
    # width -> 0 as delta -> 0-
    for eps in (1e-2, 1e-4, 1e-6):
        tp = turning_points(-eps * SQRT3 * gamma_b, eta, gamma_b)
        assert tp.physical
        np.testing.assert_allclose(
            tp.width, (4.0 / 3.0) * SQRT3 * gamma_b * eps * math.sqrt(1.0 + 1.0 / eps),
            rtol=1e-9,
        )
    widths = [turning_points(-e * SQRT3 * gamma_b, eta, gamma_b).width
              for e in (1e-2, 1e-4, 1e-6)]
    assert widths[0] > widths[1] > widths[2]
    # closed window between the surd's real branches
    tp = turning_points(0.5 * SQRT3 * gamma_b, eta, gamma_b)
    assert not tp.physical and tp.width == 0.0 and tp.drive_low is None
    # real surd again past sqrt(3) gamma, but occupations negative: not physical
    tp = turning_points(1.5 * SQRT3 * gamma_b, eta, gamma_b)
    assert not tp.physical
    assert tp.drive_low is None and tp.n_low < 0.0


def test_minimum_drive_against_scan():
    eta = 0.02
    gamma_b = 5.0e3
    for ratio in (1e3, 1e2, 1e1):
        K = ratio * gamma_b
        delta_eff = K - 12.0 * eta
        om_f, d0_f = minimum_drive(delta_eff, eta, gamma_b)
        deltas = np.concatenate([
            np.linspace(-4.0 * K, 0.99 * K, 400_000),
            np.linspace(-1.2 * K, -0.8 * K, 400_000),
        ])
        u = deltas - SQRT3 * gamma_b / 2.0
        x = 0.5 * (K - u)
        keep = x > 0
        om2 = x[keep] * (gamma_b**2 / 4.0 + (u[keep] + x[keep]) ** 2) / (3.0 * eta)
        k = int(np.argmin(om2))
        om_s, d0_s = math.sqrt(om2[k]), float(deltas[keep][k])
        tol = 0.1 * (gamma_b / K) ** 2 + 1e-7
        np.testing.assert_allclose(om_f, om_s, rtol=tol)
        np.testing.assert_allclose(d0_f, d0_s, rtol=(gamma_b / K) ** 2 + 1e-4)
    with pytest.raises(ValueError):
        minimum_drive(-13.0 * eta, eta, gamma_b)


def test_sweep_diagram_regimes():
    omega_t = 2.0 * math.pi * 2929656.97817988
    grid = np.linspace(1.0e6, 1.2e7, 121)
    diagram = sweep_diagram(grid, REF_DELTA_ML, REF_GAMMA_B, REF_ETA, omega_t)
    assert diagram.regime == "bistable"
    assert diagram.turning is not None and diagram.turning.physical
    by_drive: dict[float, int] = {}
    for w, branch in diagram.branches:
        by_drive[w] = by_drive.get(w, 0) + 1
        assert branch.n >= 0.0
    lo, hi = diagram.turning.drive_high, diagram.turning.drive_low
    for w, count in by_drive.items():
        assert count == (3 if lo < w < hi else 1)

    mono = sweep_diagram(grid, +2000.0, REF_GAMMA_B, REF_ETA, omega_t)
    assert mono.regime == "monostable"
    assert mono.turning is None
    assert all(count == 1 for count in
               np.unique([w for w, _ in mono.branches], return_counts=True)[1])

    _, omega_c = bistability_condition(omega_t, omega_t, REF_ETA, REF_GAMMA_B)
    edge = sweep_diagram(grid, omega_c - omega_t, REF_GAMMA_B, REF_ETA, omega_t)
    assert edge.regime == "platform"

    with pytest.raises(ValueError):
        sweep_diagram([2.0e6, 1.0e6], REF_DELTA_ML, REF_GAMMA_B, REF_ETA, omega_t)
    with pytest.raises(ValueError):
        sweep_diagram([], REF_DELTA_ML, REF_GAMMA_B, REF_ETA, omega_t)


def test_solve_at_exact_fold_drive():
    omega_t = 2.0 * math.pi * 2929656.97817988
    _, omega_c = bistability_condition(omega_t + REF_DELTA_ML, omega_t, REF_ETA, REF_GAMMA_B)
    tp = turning_points(omega_t + REF_DELTA_ML - omega_c, REF_ETA, REF_GAMMA_B)
    for drive in (tp.drive_low, tp.drive_high):
        branches = solve_branches(ref_params(drive))
        assert len(branches) in (1, 3)
        tangents = [b for b in branches if b.tangent]
        if tangents:
            ns = [b.n for b in branches if b.tangent]
            assert ns[0] == ns[1]


def test_effective_detuning_shift():
    p = ref_params(6.0e6)
    np.testing.assert_allclose(
        effective_detuning(p, 100.0), REF_DELTA_ML + 2400.0 * REF_ETA, rtol=1e-14
    )


def test_params_validation():
    with pytest.raises(ValueError):
        MeanFieldParams(delta_ml=0.0, Omega=-1.0, gamma_b=1.0, eta=0.01)
    with pytest.raises(ValueError):
        MeanFieldParams(delta_ml=0.0, Omega=1.0, gamma_b=-1.0, eta=0.01)
    with pytest.raises(ValueError):
        MeanFieldParams(delta_ml=0.0, Omega=1.0, gamma_b=1.0, eta=0.0)
