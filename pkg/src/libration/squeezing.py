"""Variance dynamics of the linearized fluctuations about a steady amplitude.

Writing beta = r e^{i phi} + b for the fluctuation operator b, the quadratic
part of the rotating-frame Hamiltonian is

    H / hbar = -lam b'b - (xi/2) (e^{2i phi} b'^2 + e^{-2i phi} b^2),

with lam = delta_ml + 24 eta r^2 and xi = 12 eta r^2, so b evolves as
db/dt = i lam b + i xi e^{2i phi} b'.  The quadrature variances
S_theta = Var(theta)/theta0^2 and S_J = Var(J)/J0^2 of an initial thermal
state (occupation nbar, no initial correlations) evolve as

    S_theta(t) = (2 nbar + 1)/4 * [1 + xi (xi - lam cos 2phi) g1(t) - xi sin(2phi) g2(t)]
    S_J(t)     = (2 nbar + 1)/4 * [1 + xi (xi + lam cos 2phi) g1(t) + xi sin(2phi) g2(t)]

where g1 = (cosh(2 lam_p t) - 1)/lam_p^2 and g2 = sinh(2 lam_p t)/lam_p are
entire functions of lam_p^2 = xi^2 - lam^2.  Three regimes follow from the
sign of lam_p^2, equivalently from the drive frequency relative to the
characteristic points omega_ml1 = omega_t - 36 eta r^2 and
omega_ml2 = omega_t - 12 eta r^2:

    hyperbolic   (omega_ml1 < omega_ml < omega_ml2): lam_p real, exponential
                 squeezing/antisqueezing; pure e^{-+2 lam_p t} decay at
                 phi = +-(1/2) arctan(lam_p / lam).
    oscillatory  (outside that window): lam_p = i lam_p', variances breathe
                 periodically with period pi / lam_p'.
    degenerate   (lam_p^2 ~ 0): power-series limit of g1, g2.

The closed forms are cross-checked against :func:`moment_oracle`, which
integrates the second-moment equations directly (optionally with damping) and
serves as the ground truth for the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "SqueezeParams",
    "VarianceTrace",
    "squeeze_params",
    "characteristic_frequencies",
    "exponential_angle",
    "variance_theta_closed",
    "variance_J_closed",
    "moment_oracle",
    "thermal_squeezing_check",
]

#: |lam_p^2| below this fraction of xi^2 switches g1, g2 to their series form.
DEGENERATE_BAND = 1e-9


@dataclass(frozen=True)
class SqueezeParams:
    """Linearized-fluctuation parameters (all rad/s except the dimensionless nbar).

    lam  : effective detuning of the fluctuation mode, delta_ml + 24 eta r^2.
    xi   : parametric (down-conversion) strength, 12 eta r^2.
    phi  : phase angle of the steady amplitude; sets the squeezing direction.
    r    : modulus of the steady amplitude (dimensionless).
    nbar : initial thermal occupation of the fluctuation mode.
    """

    lam: float
    xi: float
    phi: float
    r: float
    nbar: float = 0.0

    def __post_init__(self) -> None:
        if self.xi < 0.0:
            raise ValueError(f"xi must be >= 0, got {self.xi!r}")
        if self.r < 0.0:
            raise ValueError(f"r must be >= 0, got {self.r!r}")
        if self.nbar < 0.0:
            raise ValueError(f"nbar must be >= 0, got {self.nbar!r}")

    @property
    def lambda_p_sq(self) -> float:
        """lam_p^2 = xi^2 - lam^2 (signed; negative in the oscillatory regime)."""
        return self.xi**2 - self.lam**2

    @property
    def lambda_p(self) -> complex:
        """Principal square root of lam_p^2 (imaginary when oscillatory)."""
        return complex(np.sqrt(complex(self.lambda_p_sq)))

    @property
    def regime(self) -> str:
        lps = self.lambda_p_sq
        if abs(lps) <= DEGENERATE_BAND * max(self.xi**2, 1e-300):
            return "degenerate"
        return "hyperbolic" if lps > 0.0 else "oscillatory"


def squeeze_params(
    delta_ml: float, eta: float, r: float, phi: float, nbar: float = 0.0
) -> SqueezeParams:
    """Fluctuation parameters about a steady amplitude r e^{i phi}."""
    if not eta > 0.0:
        raise ValueError(f"eta must be > 0, got {eta!r}")
    return SqueezeParams(
        lam=delta_ml + 24.0 * eta * r * r,
        xi=12.0 * eta * r * r,
        phi=phi,
        r=r,
        nbar=nbar,
    )


def characteristic_frequencies(omega_t: float, eta: float, r: float) -> tuple[float, float]:
    """Regime boundaries (omega_ml1, omega_ml2) = omega_t - (36, 12) eta r^2."""
    return omega_t - 36.0 * eta * r * r, omega_t - 12.0 * eta * r * r


def exponential_angle(params: SqueezeParams) -> float:
    """Angle phi* = (1/2) arctan(lam_p / lam) of pure exponential theta decay.

    Only meaningful in the hyperbolic regime, where S_theta at phi* is exactly
    ((2 nbar + 1)/4) e^{-2 lam_p t}; at -phi* it grows as e^{+2 lam_p t}.
    """
    if params.regime != "hyperbolic":
        raise ValueError("pure exponential decay needs the hyperbolic regime")
    lam_p = math.sqrt(params.lambda_p_sq)
    return 0.5 * math.atan2(lam_p, params.lam)


def _g1_g2(lps: float, t: np.ndarray, degenerate: bool) -> tuple[np.ndarray, np.ndarray]:
    """g1 = (cosh(2 lam_p t) - 1)/lam_p^2 and g2 = sinh(2 lam_p t)/lam_p.

    Both are entire in lam_p^2; evaluated per regime to stay real, with the
    4th-order series in lam_p^2 t^2 inside the degenerate band.
    """
    if degenerate:
        t2 = t * t
        g1 = 2.0 * t2 * (1.0 + lps * t2 / 3.0 + 2.0 * (lps * t2) ** 2 / 45.0)
        g2 = 2.0 * t * (1.0 + 2.0 * lps * t2 / 3.0 + 2.0 * (lps * t2) ** 2 / 15.0)
        return g1, g2
    if lps > 0.0:
        lp = math.sqrt(lps)
        return (np.cosh(2.0 * lp * t) - 1.0) / lps, np.sinh(2.0 * lp * t) / lp
    lq = math.sqrt(-lps)
    return (1.0 - np.cos(2.0 * lq * t)) / (-lps), np.sin(2.0 * lq * t) / lq


def _variances(t, params: SqueezeParams) -> tuple[np.ndarray, np.ndarray]:
    tt = np.asarray(t, dtype=float)
    g1, g2 = _g1_g2(params.lambda_p_sq, tt, params.regime == "degenerate")
    pref = (2.0 * params.nbar + 1.0) / 4.0
    c2 = math.cos(2.0 * params.phi)
    s2 = math.sin(2.0 * params.phi)
    xi, lam = params.xi, params.lam
    s_theta = pref * (1.0 + xi * (xi - lam * c2) * g1 - xi * s2 * g2)
    s_j = pref * (1.0 + xi * (xi + lam * c2) * g1 + xi * s2 * g2)
    return s_theta, s_j


def variance_theta_closed(t, params: SqueezeParams):
    """Angle variance S_theta(t) (in units of theta0^2), closed form."""
    out = _variances(t, params)[0]
    return float(out) if np.isscalar(t) else out


def variance_J_closed(t, params: SqueezeParams):
    """Angular-momentum variance S_J(t) (in units of J0^2), closed form."""
    out = _variances(t, params)[1]
    return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class VarianceTrace:
    """Sampled variance evolution, with the regime the parameters fall in."""

    t: np.ndarray
    S_theta: np.ndarray
    S_J: np.ndarray
    regime: str
    nbar: float


def moment_oracle(
    params: SqueezeParams,
    t_grid: np.ndarray,
    gamma_b: float = 0.0,
    nbar_bath: float | None = None,
    rtol: float = 1e-11,
) -> VarianceTrace:
    """Ground-truth variances from direct integration of the moment equations.

    The second moments z = <b^2> and m = <b'b> of the quadratic model obey

        dz/dt = (2 i lam - gamma_b) z + i xi e^{2 i phi} (2 m + 1)
        dm/dt = 2 xi Im(e^{-2 i phi} z) - gamma_b (m - nbar_bath)

    with thermal initial conditions z(0) = 0, m(0) = nbar.  The variances are
    S_theta = (2 Re z + 2 m + 1)/4 and S_J = (-2 Re z + 2 m + 1)/4.  With
    gamma_b = 0 this is an independent check of the closed forms; with damping
    it is the reference the closed (undamped) forms are compared against.
    """
    if gamma_b < 0.0:
        raise ValueError(f"gamma_b must be >= 0, got {gamma_b!r}")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise ValueError("t_grid must be a 1-d array with at least 2 samples")
    if nbar_bath is None:
        nbar_bath = params.nbar
    lam, xi = params.lam, params.xi
    e2 = complex(math.cos(2.0 * params.phi), math.sin(2.0 * params.phi))

    def rhs(t, y):
        z = complex(y[0], y[1])
        m = y[2]
        dz = (2j * lam - gamma_b) * z + 1j * xi * e2 * (2.0 * m + 1.0)
        dm = 2.0 * xi * (np.conj(e2) * z).imag - gamma_b * (m - nbar_bath)
        return [dz.real, dz.imag, dm]

    scale = 2.0 * params.nbar + 1.0
    sol = solve_ivp(
        rhs,
        (t_grid[0], t_grid[-1]),
        [0.0, 0.0, params.nbar],
        method="DOP853",
        rtol=rtol,
        atol=rtol * scale * 1e-2,
        t_eval=t_grid,
    )
    if sol.status != 0:
        raise RuntimeError(f"moment integration failed: {sol.message}")
    re_z, m = sol.y[0], sol.y[2]
    return VarianceTrace(
        t=sol.t,
        S_theta=(2.0 * re_z + 2.0 * m + 1.0) / 4.0,
        S_J=(-2.0 * re_z + 2.0 * m + 1.0) / 4.0,
        regime=params.regime,
        nbar=params.nbar,
    )


def thermal_squeezing_check(
    trace: VarianceTrace, nbar: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks where S_theta / S_J beat the thermal floor (2 nbar + 1)/4.

    For a vacuum initial state this reduces to the usual 1/4 criterion.
    """
    if nbar is None:
        nbar = trace.nbar
    floor = (2.0 * nbar + 1.0) / 4.0
    return trace.S_theta < floor, trace.S_J < floor
