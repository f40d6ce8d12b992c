"""Independent numerical routes used by the tests to cross-check results.

Nothing in here reuses the package's closed-form algebra: depolarization
factors come from the defining ellipsoid integral, inertia from Monte-Carlo
volume sampling, steady-state occupations from a dense scan with bisection
refinement, and fold coordinates from bounded scalar optimization of the
drive curve.  The only shared ingredient is the fixed-point polynomial
itself, which *is* the model.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

SQRT3 = math.sqrt(3.0)


def depolarization_quad(eccentricity: float) -> tuple[float, float]:
    """(L_a, L_b) from the ellipsoid integrals, semi-axes (1, b, b), b^2 = 1-e^2.

    L_a = (b^2/2) Int_0^inf ds / ((s+1)^{3/2} (s+b^2))
    L_b = (b^2/2) Int_0^inf ds / ((s+b^2)^2 (s+1)^{1/2})
    """
    b2 = 1.0 - eccentricity**2
    la, _ = quad(lambda s: 1.0 / ((s + 1.0) ** 1.5 * (s + b2)), 0.0, np.inf, limit=400)
    lb, _ = quad(lambda s: 1.0 / ((s + b2) ** 2 * math.sqrt(s + 1.0)), 0.0, np.inf, limit=400)
    return 0.5 * b2 * la, 0.5 * b2 * lb


def inertia_monte_carlo(
    r_a: float, r_b: float, density: float,
    n_samples: int = 2_000_000, seed: int = 20260825,
) -> float:
    """Transverse moment of inertia by uniform rejection sampling in the box.

    The long axis lies along x; the libration axis is y, so the integrand is
    rho (x^2 + z^2) over the spheroid volume.
    """
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.0, 1.0, size=(n_samples, 3))
    inside = (pts**2).sum(axis=1) <= 1.0
    u = pts[inside]
    volume = 4.0 * math.pi * r_a * r_b**2 / 3.0
    x = r_a * u[:, 0]
    z = r_b * u[:, 2]
    return density * volume * float(np.mean(x**2 + z**2))


def _drive_curve(n, u: float, gamma_b: float, eta: float):
    """Omega^2 needed to hold occupation n: 4 n (gamma^2/4 + (u + 12 eta n)^2)."""
    return 4.0 * n * (gamma_b**2 / 4.0 + (u + 12.0 * eta * n) ** 2)


def scan_roots(
    delta_ml: float, Omega: float, gamma_b: float, eta: float,
    n_grid: int = 1_000_000,
) -> list[float]:
    """Steady occupations located by dense sign-change scan + bisection."""
    u = delta_ml + 12.0 * eta
    target = Omega * Omega

    def f(n: float) -> float:
        return _drive_curve(n, u, gamma_b, eta) - target

    # Cauchy-style bound on the monic cubic in x = 12 eta n keeps the scan finite.
    xmax = 2.0 * max(
        abs(2.0 * u),
        math.sqrt(gamma_b**2 / 4.0 + u * u),
        (3.0 * eta * Omega * Omega) ** (1.0 / 3.0),
    )
    n_hi = 1.1 * xmax / (12.0 * eta) + 1.0
    grid = np.linspace(0.0, n_hi, n_grid)
    vals = _drive_curve(grid, u, gamma_b, eta) - target
    sign = np.sign(vals)
    roots = [float(grid[k]) for k in np.flatnonzero(vals == 0.0) if grid[k] > 0.0 or Omega == 0.0]
    for k in np.flatnonzero(sign[:-1] * sign[1:] < 0):
        roots.append(brentq(f, float(grid[k]), float(grid[k + 1]), xtol=1e-30, rtol=1e-14))
    return sorted(roots)


def fold_extrema_scan(
    delta_ml: float, gamma_b: float, eta: float, n_grid: int = 200_000
) -> tuple[tuple[float, float], tuple[float, float]] | None:
    """Interior (local max, local min) of the drive curve, or None if monotone.

    Returns ((n_at_max, Omega_at_max), (n_at_min, Omega_at_min)); the local
    max is the fold a rising sweep jumps at, the local min the falling one.
    """
    u = delta_ml + 12.0 * eta
    n_hi = max(1.5 * abs(u) / (12.0 * eta), 1.0)
    grid = np.linspace(0.0, n_hi, n_grid)
    w = _drive_curve(grid, u, gamma_b, eta)
    interior = np.arange(1, n_grid - 1)
    is_max = (w[interior] > w[interior - 1]) & (w[interior] > w[interior + 1])
    is_min = (w[interior] < w[interior - 1]) & (w[interior] < w[interior + 1])
    max_idx = interior[is_max]
    min_idx = interior[is_min]
    if len(max_idx) != 1 or len(min_idx) != 1:
        return None

    def refine(k: int, sign: float) -> tuple[float, float]:
        res = minimize_scalar(
            lambda n: sign * _drive_curve(n, u, gamma_b, eta),
            bounds=(float(grid[k - 1]), float(grid[k + 1])),
            method="bounded",
            options={"xatol": 1e-12 * max(float(grid[k]), 1.0)},
        )
        return float(res.x), math.sqrt(sign * res.fun if sign > 0 else -res.fun)

    n_max, om_max = refine(int(max_idx[0]), -1.0)
    n_min, om_min = refine(int(min_idx[0]), +1.0)
    return (n_max, om_max), (n_min, om_min)


def drive_curve_folds(
    delta_ml: float, gamma_b: float, eta: float, n_grid: int = 400_000
) -> bool:
    """Whether the steady drive curve decreases anywhere, i.e. the S folds back.

    A strict interior decrease of Omega^2(n) is exactly the condition for some
    drive amplitude to meet three occupations.  The threshold sits ~3 decades
    above float noise on the curve values.
    """
    u = delta_ml + 12.0 * eta
    n_hi = max(1.5 * abs(u) / (12.0 * eta), 1.0)
    grid = np.linspace(0.0, n_hi, n_grid)
    w = _drive_curve(grid, u, gamma_b, eta)
    return bool((np.diff(w) < -1e-12 * float(np.max(w))).any())


def draw_mean_field(rng: np.random.Generator) -> tuple[float, float, float, float]:
    """One random (delta_ml, Omega, gamma_b, eta) set, half forced bistable.

    The bistable half places the drive strictly inside the fold window (3%
    margins) so three-root cases are exercised as often as one-root cases.
    """
    eta = 10.0 ** rng.uniform(-3.0, -1.0)
    gamma_b = 10.0 ** rng.uniform(2.5, 4.5)
    edge = 12.0 * eta + SQRT3 * gamma_b / 2.0
    if rng.uniform() < 0.5:
        delta = -gamma_b * 10.0 ** rng.uniform(0.3, 1.5)
        delta_ml = delta - edge
        u = delta - SQRT3 * gamma_b / 2.0
        s = math.sqrt(delta * (delta - SQRT3 * gamma_b))
        x_lo, x_hi = (-2.0 * u - s) / 3.0, (-2.0 * u + s) / 3.0
        om_up = math.sqrt(_drive_curve(x_lo / (12.0 * eta), u, gamma_b, eta))
        om_down = math.sqrt(_drive_curve(x_hi / (12.0 * eta), u, gamma_b, eta))
        lo, hi = om_down * 1.03, om_up * 0.97
        if lo < hi:
            return delta_ml, rng.uniform(lo, hi), gamma_b, eta
        # window narrower than the margins; fall through to a generic draw
    delta_ml = rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(2.0, 5.0)
    Omega = 10.0 ** rng.uniform(4.0, 7.0)
    return delta_ml, Omega, gamma_b, eta
