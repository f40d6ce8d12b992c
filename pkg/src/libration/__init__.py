"""Toolkit for the nonlinear librational mode of a levitated anisotropic nanoparticle.

Modules
-------
model       particle/trap geometry -> mode frequency, nonlinearity, zero-point scales
steadystate driven-mode mean-field steady states, stability, bistability diagrams
dynamics    time integration and quasi-static hysteresis sweeps
squeezing   variance evolution of the linearized fluctuations, closed forms + oracle
calibration fitting detuning/damping to measured hysteresis jump coordinates
audit       transcribed legacy variance formulas cross-checked against the oracle
cli         ``libration`` command-line entry point (derive/bistability/hysteresis/squeeze)
"""

from libration.model import (
    MATERIALS,
    DriveEnvironment,
    Material,
    ModeParameters,
    NanoparticleSpec,
    NoConfinementError,
    TrapConfig,
    depolarization_factors,
    drive_amplitude,
    gas_damping,
    mode_parameters,
    rotational_inertia,
    susceptibilities,
    thermal_occupancy,
)

__version__ = "0.1.0"
