"""Mean-field steady states of the driven nonlinear librational mode.

In a frame rotating at the drive frequency the mode amplitude beta obeys

    d(beta)/dt = (i*delta_ml - gamma_b/2 + 12i*eta*(|beta|^2 + 1)) * beta - i*Omega/2,

with detuning delta_ml = omega_ml - omega_t, damping gamma_b, nonlinearity eta
(negative Kerr shift per phonon enters as +12*eta*(n+1) on the detuning), and
coherent drive amplitude Omega.  Setting the time derivative to zero and taking
the modulus square gives a cubic in the occupation n = |beta_0|^2,

    n * [ gamma_b^2/4 + (u + 12*eta*n)^2 ] = Omega^2 / 4,     u = delta_ml + 12*eta,

whose one or three positive roots are the steady branches.  Linearizing about a
root gives a 2x2 fluctuation matrix whose Routh-Hurwitz conditions (trace and
determinant positive) decide stability; the determinant equals d(Omega^2/4)/dn,
so the middle branch of an S-curve is always the unstable one.

The cubic is solved in the scaled variable x = 12*eta*n (units rad/s), where
the monic form  x^3 + 2u x^2 + (gamma_b^2/4 + u^2) x - 3*eta*Omega^2 = 0  is
well conditioned, using the closed-form trigonometric/Cardano expressions plus
a couple of Newton steps.  All frequencies are angular (rad/s).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

__all__ = [
    "MeanFieldParams",
    "Stability",
    "SteadyBranch",
    "TurningPoints",
    "BistabilityDiagram",
    "steady_occupations",
    "beta_from_n",
    "stability_matrix",
    "classify_stability",
    "solve_branches",
    "effective_detuning",
    "bistability_condition",
    "turning_points",
    "minimum_drive",
    "sweep_diagram",
]

#: Two roots closer than this (relative to max(1, n)) are treated as a tangency.
TANGENCY_RTOL = 1e-8

#: Residual bound enforced on returned roots: |cubic(n)| <= RESIDUAL_RTOL * Omega^2/4.
RESIDUAL_RTOL = 1e-9


@dataclass(frozen=True)
class MeanFieldParams:
    """Rotating-frame parameters of the driven mode (all rad/s).

    delta_ml : drive detuning omega_ml - omega_t (signed).
    Omega    : coherent drive amplitude, >= 0.
    gamma_b  : energy damping rate, >= 0.
    eta      : nonlinear shift per phonon, > 0.
    """

    delta_ml: float
    Omega: float
    gamma_b: float
    eta: float

    def __post_init__(self) -> None:
        if not self.Omega >= 0.0:
            raise ValueError(f"Omega must be >= 0, got {self.Omega!r}")
        if not self.gamma_b >= 0.0:
            raise ValueError(f"gamma_b must be >= 0, got {self.gamma_b!r}")
        if not self.eta > 0.0:
            raise ValueError(f"eta must be > 0, got {self.eta!r}")

    @property
    def u(self) -> float:
        """Shifted detuning u = delta_ml + 12*eta (absorbs the +1 in n+1)."""
        return self.delta_ml + 12.0 * self.eta


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class SteadyBranch:
    """One steady-state solution of the driven mode.

    eigenvalues are those of the linearized fluctuation dynamics
    d(dbeta)/dt = -A dbeta; negative real parts mean a decaying perturbation.
    """

    n: float
    beta0: complex
    delta_eff: float
    eigenvalues: tuple[complex, complex]
    verdict: Stability
    tangent: bool = False

    @property
    def stable(self) -> bool:
        return self.verdict is Stability.STABLE


@dataclass(frozen=True)
class TurningPoints:
    """Saddle-node (fold) points of the steady-state S-curve.

    delta_eff_low/high are the effective detunings delta_ml + 24*eta*n at the
    two folds; width = delta_eff_high - delta_eff_low.  drive_low/high are the
    drive amplitudes at which the folds sit (the up-jump happens at drive_low's
    fold, the down-jump at drive_high's).  ``physical`` is False when the
    closed-form fold occupations come out negative, i.e. the formula has a real
    branch but the S-curve does not actually fold at positive occupation.
    """

    delta_eff_low: float | None
    delta_eff_high: float | None
    width: float
    drive_low: float | None
    drive_high: float | None
    n_low: float | None
    n_high: float | None
    physical: bool


@dataclass(frozen=True)
class BistabilityDiagram:
    """Steady branches sampled over a drive-amplitude grid at fixed detuning."""

    branches: tuple[tuple[float, SteadyBranch], ...]
    omega_ml: float
    omega_c: float
    regime: str  # "bistable" | "monostable" | "platform"
    turning: TurningPoints | None
    window_width: float


def _real_cubic_roots(b: float, c: float, d: float) -> list[float]:
    """Real roots of the monic cubic x^3 + b x^2 + c x + d, closed form.

    Depressed via x = y - b/3; one real root through the numerically stable
    Cardano branch, three through the trigonometric form.  Roots are not
    polished here.
    """
    p = c - b * b / 3.0
    q = d + (2.0 * b**3 - 9.0 * b * c) / 27.0
    shift = -b / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        s = math.sqrt(disc)
        if q >= 0.0:
            t = -((q / 2.0 + s) ** (1.0 / 3.0))
        else:
            t = (-q / 2.0 + s) ** (1.0 / 3.0)
        if t == 0.0:
            return [shift]
        return [t - p / (3.0 * t) + shift]
    if p == 0.0:  # disc <= 0 forces p <= 0; p == 0 means triple root
        return [shift] * 3
    m = 2.0 * math.sqrt(-p / 3.0)
    cos_arg = 3.0 * q / (p * m)
    cos_arg = min(1.0, max(-1.0, cos_arg))
    theta = math.acos(cos_arg)
    return [m * math.cos((theta - 2.0 * math.pi * k) / 3.0) + shift for k in range(3)]


def _cubic_n(params: MeanFieldParams, n: float) -> float:
    """Residual  n*(gamma^2/4 + (u + 12 eta n)^2) - Omega^2/4  at occupation n."""
    u = params.u
    g = params.gamma_b
    return n * (g * g / 4.0 + (u + 12.0 * params.eta * n) ** 2) - params.Omega**2 / 4.0


def _cubic_n_derivative(params: MeanFieldParams, n: float) -> float:
    u = params.u
    g = params.gamma_b
    x = 12.0 * params.eta * n
    return g * g / 4.0 + (u + x) ** 2 + 2.0 * x * (u + x)


def steady_occupations(params: MeanFieldParams) -> list[float]:
    """Steady-state occupations n = |beta_0|^2, sorted ascending.

    Returns one or three roots of the steady-state cubic.  A tangency (fold
    touching) is reported as three roots with two equal entries.  An undriven
    mode (Omega = 0) returns [0.0]: with damping the vacuum is the unique
    fixed point, and the undamped degenerate circle of fixed points at
    u + 12*eta*n = 0 collapses to the same reported state.
    """
    if params.Omega == 0.0:
        return [0.0]
    u = params.u
    g = params.gamma_b
    eta = params.eta
    # monic cubic in x = 12*eta*n  (see module docstring)
    roots_x = _real_cubic_roots(
        2.0 * u, g * g / 4.0 + u * u, -3.0 * eta * params.Omega**2
    )
    target = params.Omega**2 / 4.0
    roots: list[float] = []
    for x in roots_x:
        if x <= 0.0:
            continue
        n = x / (12.0 * eta)
        # Newton polish until the contract residual holds
        for _ in range(8):
            f = _cubic_n(params, n)
            if abs(f) <= 1e-13 * target:
                break
            fp = _cubic_n_derivative(params, n)
            if fp == 0.0:
                break
            step = f / fp
            if n - step <= 0.0:
                break
            n -= step
        roots.append(n)
    roots.sort()
    if len(roots) == 3:
        # snap near-coincident fold roots to their midpoint (tangency)
        for i in (1, 0):
            if roots[i + 1] - roots[i] <= TANGENCY_RTOL * max(1.0, roots[i + 1]):
                mid = 0.5 * (roots[i] + roots[i + 1])
                roots[i] = roots[i + 1] = mid
    if len(roots) not in (1, 3):
        raise RuntimeError(
            f"cubic solver returned {len(roots)} positive roots; parameters {params}"
        )
    bad = [n for n in roots if abs(_cubic_n(params, n)) > RESIDUAL_RTOL * target]
    if bad:
        raise RuntimeError(f"root polishing failed residual check at n={bad}")
    return roots


def beta_from_n(params: MeanFieldParams, n: float) -> complex:
    """Steady amplitude beta_0 on the branch with occupation n.

    beta_0 = (i Omega/2) / (i (u + 12 eta n) - gamma_b/2); for an undamped mode
    the amplitude is purely real in this phase convention.  Raises ValueError
    if n is not actually a root of the steady-state cubic.
    """
    if n < 0.0:
        raise ValueError(f"occupation must be >= 0, got {n!r}")
    if params.Omega == 0.0:
        if n != 0.0:
            raise ValueError("undriven mode has only the vacuum steady state")
        return 0.0 + 0.0j
    target = params.Omega**2 / 4.0
    if abs(_cubic_n(params, n)) > 1e-6 * target:
        raise ValueError(f"n={n!r} is not a steady-state occupation for {params}")
    denom = 1j * (params.u + 12.0 * params.eta * n) - params.gamma_b / 2.0
    return (1j * params.Omega / 2.0) / denom


def stability_matrix(
    params: MeanFieldParams, n: float, beta0: complex | None = None
) -> np.ndarray:
    """Fluctuation matrix A of d(dbeta)/dt = -A dbeta about a steady state.

    A = [[kappa + 2 chi n,        chi beta_0^2       ],
         [conj(chi beta_0^2),     conj(kappa + 2 chi n)]]

    with kappa = gamma_b/2 - i u and chi = -12i eta.  Its trace is exactly
    gamma_b and its determinant equals d(Omega^2/4)/dn on the S-curve.
    """
    if beta0 is None:
        beta0 = beta_from_n(params, n)
    kappa = params.gamma_b / 2.0 - 1j * params.u
    chi = -12j * params.eta
    a00 = kappa + 2.0 * chi * n
    a01 = chi * beta0 * beta0
    return np.array([[a00, a01], [np.conj(a01), np.conj(a00)]])


def classify_stability(matrix: np.ndarray) -> Stability:
    """Routh-Hurwitz verdict for the 2x2 fluctuation matrix.

    Stable needs trace > 0 and determinant > 0 (both eigenvalues of -A in the
    left half-plane).  An undamped mode (trace == 0) with positive determinant
    only precesses: marginal.  A vanishing determinant (fold point) is
    marginal as well.
    """
    tr = float(np.real(matrix[0, 0] + matrix[1, 1]))
    det = float(np.real(matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]))
    if det < 0.0:
        return Stability.UNSTABLE
    if det == 0.0 or tr == 0.0:
        return Stability.MARGINAL
    return Stability.STABLE if tr > 0.0 else Stability.UNSTABLE


def effective_detuning(params: MeanFieldParams, n: float) -> float:
    """Occupation-shifted detuning delta_eff = delta_ml + 24 eta n."""
    return params.delta_ml + 24.0 * params.eta * n


def _branch_from_n(params: MeanFieldParams, n: float, tangent: bool) -> SteadyBranch:
    beta0 = beta_from_n(params, n)
    a = stability_matrix(params, n, beta0)
    tr = complex(a[0, 0] + a[1, 1])
    det = complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    # eigenvalues of -A, closed form for a 2x2
    s = np.sqrt(tr * tr - 4.0 * det)
    lam1, lam2 = sorted(
        (-(tr + s) / 2.0, -(tr - s) / 2.0), key=lambda z: (z.real, z.imag)
    )
    return SteadyBranch(
        n=n,
        beta0=beta0,
        delta_eff=effective_detuning(params, n),
        eigenvalues=(complex(lam1), complex(lam2)),
        verdict=classify_stability(a),
        tangent=tangent,
    )


def solve_branches(params: MeanFieldParams) -> tuple[SteadyBranch, ...]:
    """All steady branches (ascending n) with stability and eigenvalues."""
    ns = steady_occupations(params)
    tangent_pairs = set()
    if len(ns) == 3:
        if ns[0] == ns[1]:
            tangent_pairs |= {0, 1}
        if ns[1] == ns[2]:
            tangent_pairs |= {1, 2}
    return tuple(
        _branch_from_n(params, n, tangent=(i in tangent_pairs))
        for i, n in enumerate(ns)
    )


def bistability_condition(
    omega_ml: float, omega_t: float, eta: float, gamma_b: float
) -> tuple[bool, float]:
    """Whether a drive at omega_ml can produce bistability, and the edge omega_c.

    omega_c = omega_t - 12 eta (zeta + 1),  zeta = sqrt(3) gamma_b / (24 eta);
    three steady roots exist for some drive amplitude iff omega_ml < omega_c
    (drive red-detuned beyond the fold edge).  Blue-detuned drives never give
    three positive roots.
    """
    if not eta > 0.0:
        raise ValueError(f"eta must be > 0, got {eta!r}")
    if gamma_b < 0.0:
        raise ValueError(f"gamma_b must be >= 0, got {gamma_b!r}")
    omega_c = omega_t - 12.0 * eta - math.sqrt(3.0) * gamma_b / 2.0
    return (0.0 <= omega_ml < omega_c), omega_c


def _fold_drive(u: float, gamma_b: float, eta: float, x: float) -> float:
    """Drive amplitude whose S-curve folds at x = 12 eta n."""
    return math.sqrt(x / (3.0 * eta) * (gamma_b**2 / 4.0 + (u + x) ** 2))


def turning_points(delta: float, eta: float, gamma_b: float) -> TurningPoints:
    """Fold coordinates of the S-curve versus drive frequency.

    ``delta = omega_ml - omega_c`` measures how far past the bistability edge
    the drive sits.  The fold occupations solve d(Omega^2)/dn = 0:

        12 eta n_pm = (-2u +/- sqrt(u^2 - 3 gamma_b^2/4)) / 3,   u = delta - sqrt(3) gamma_b/2,

    real iff delta <= 0 or delta >= sqrt(3) gamma_b.  Only delta < 0 puts both
    folds at positive occupation (``physical``); the delta >= sqrt(3) gamma_b
    branch of the surd is reported with physical=False and no drive values.
    For 0 < delta < sqrt(3) gamma_b the window is closed: zero width, no folds.
    The window width (4/3) sqrt(delta^2 - sqrt(3) gamma_b delta) shrinks to
    zero at both ends of its domain, delta -> 0 and delta -> sqrt(3) gamma_b.
    """
    if not eta > 0.0:
        raise ValueError(f"eta must be > 0, got {eta!r}")
    if gamma_b < 0.0:
        raise ValueError(f"gamma_b must be >= 0, got {gamma_b!r}")
    s_sq = delta * (delta - math.sqrt(3.0) * gamma_b)
    if s_sq < 0.0:
        return TurningPoints(
            delta_eff_low=None,
            delta_eff_high=None,
            width=0.0,
            drive_low=None,
            drive_high=None,
            n_low=None,
            n_high=None,
            physical=False,
        )
    s = math.sqrt(s_sq)
    u = delta - math.sqrt(3.0) * gamma_b / 2.0
    x_low = (-2.0 * u - s) / 3.0  # fold closer to the lower branch (local max of Omega^2)
    x_high = (-2.0 * u + s) / 3.0
    n_low = x_low / (12.0 * eta)
    n_high = x_high / (12.0 * eta)
    delta_ml = u - 12.0 * eta
    d_low = delta_ml + 2.0 * x_low
    d_high = delta_ml + 2.0 * x_high
    physical = x_low > 0.0 or (x_low == 0.0 and x_high == 0.0)
    if x_low > 0.0:
        drive_low = _fold_drive(u, gamma_b, eta, x_low)
        drive_high = _fold_drive(u, gamma_b, eta, x_high)
    elif physical:  # degenerate fold exactly at n = 0 is impossible for delta < 0
        drive_low = drive_high = _fold_drive(u, gamma_b, eta, max(x_low, 0.0))
    else:
        drive_low = drive_high = None
    return TurningPoints(
        delta_eff_low=d_low,
        delta_eff_high=d_high,
        width=d_high - d_low,
        drive_low=drive_low,
        drive_high=drive_high,
        n_low=n_low,
        n_high=n_high,
        physical=physical,
    )


def minimum_drive(delta_eff: float, eta: float, gamma_b: float) -> tuple[float, float]:
    """Smallest drive amplitude that reaches a target effective detuning.

    Minimizing the required Omega over the drive detuning at fixed
    delta_eff = delta_ml + 24 eta n gives, to leading order in
    gamma_b / (delta_eff + 12 eta),

        Omega_min = gamma_b * sqrt((delta_eff + 12 eta) / (12 eta))

    attained at delta_0 = sqrt(3) gamma_b / 2 - 12 eta - delta_eff (measured,
    like ``delta`` in :func:`turning_points`, from the bistability edge).
    Requires delta_eff > -12 eta; below that the target is reached at
    vanishing drive in the detuning limit and no interior minimum exists.
    """
    k = delta_eff + 12.0 * eta
    if not k > 0.0:
        raise ValueError(
            f"target delta_eff must exceed -12*eta = {-12.0 * eta!r}, got {delta_eff!r}"
        )
    if not eta > 0.0:
        raise ValueError(f"eta must be > 0, got {eta!r}")
    if gamma_b < 0.0:
        raise ValueError(f"gamma_b must be >= 0, got {gamma_b!r}")
    omega_min = gamma_b * math.sqrt(k / (12.0 * eta))
    delta0 = math.sqrt(3.0) * gamma_b / 2.0 - k
    return omega_min, delta0


def sweep_diagram(
    drive_amplitudes: Sequence[float],
    delta_ml: float,
    gamma_b: float,
    eta: float,
    omega_t: float,
) -> BistabilityDiagram:
    """Solve the steady branches over a monotone drive-amplitude grid.

    The diagram regime is decided by delta = omega_ml - omega_c: "bistable"
    below the edge, "monostable" above, and "platform" on the edge itself
    (within floating-point resolution of the input frequencies), where the
    S-curve degenerates to a monotone curve with an inflection.
    """
    grid = [float(w) for w in drive_amplitudes]
    if not grid:
        raise ValueError("drive amplitude grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("drive amplitude grid must be strictly increasing")
    omega_ml = omega_t + delta_ml
    _, omega_c = bistability_condition(omega_ml, omega_t, eta, gamma_b)
    delta = omega_ml - omega_c
    edge_tol = 32.0 * np.finfo(float).eps * max(abs(omega_t), abs(omega_ml), 1.0)
    if abs(delta) <= edge_tol:
        regime = "platform"
        delta = 0.0
    elif delta < 0.0:
        regime = "bistable"
    else:
        regime = "monostable"
    turning = turning_points(delta, eta, gamma_b)
    if not turning.physical:
        turning = None
    rows: list[tuple[float, SteadyBranch]] = []
    for w in grid:
        p = MeanFieldParams(delta_ml=delta_ml, Omega=w, gamma_b=gamma_b, eta=eta)
        for branch in solve_branches(p):
            rows.append((w, branch))
    return BistabilityDiagram(
        branches=tuple(rows),
        omega_ml=omega_ml,
        omega_c=omega_c,
        regime=regime,
        turning=turning,
        window_width=turning.width if turning is not None else 0.0,
    )
