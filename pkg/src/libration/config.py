"""JSON run-configuration loading and validation for the command line.

Configs are plain JSON objects with ``particle``, ``trap`` and ``environment``
sections plus optional ``drive``, ``sweep``, ``ramp``, ``squeeze`` and
``derive`` sections, depending on the subcommand.  Two conventions are
enforced here so they hold everywhere downstream:

* every frequency-valued key carries an explicit unit suffix, ``_hz`` or
  ``_rad_s`` (the loader multiplies ``_hz`` values by 2 pi, and the rest of
  the package speaks rad/s only);
* material presets ("diamond", "silica") are expanded before validation, so
  explicit ``density_kg_m3`` / ``eps_r`` values may override preset fields.

Validation failures raise :class:`ConfigError` with the dotted path of the
offending key.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from libration.model import MATERIALS, DriveEnvironment, NanoparticleSpec, TrapConfig
from libration.model import DEFAULT_DAMPING_PER_PASCAL

__all__ = [
    "ConfigError",
    "DriveSettings",
    "SweepSettings",
    "RampSettings",
    "SqueezeSettings",
    "ScanSettings",
    "RunConfig",
    "load_config",
]

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def _fail(path: str, message: str) -> None:
    raise ConfigError(f"config error at {path}: {message}")


def _require_mapping(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    return obj


def _check_known(section: dict, path: str, known: set[str]) -> None:
    unknown = set(section) - known
    if unknown:
        _fail(path, f"unknown key(s) {sorted(unknown)}; known keys: {sorted(known)}")


def _number(section: dict, path: str, key: str, *, required: bool = True,
            minimum: float | None = None, strict: bool = False) -> float | None:
    if key not in section:
        if required:
            _fail(path, f"missing required key '{key}'")
        return None
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"{path}.{key}", f"expected a number, got {value!r}")
    value = float(value)
    if minimum is not None:
        if strict and not value > minimum:
            _fail(f"{path}.{key}", f"must be > {minimum}, got {value}")
        if not strict and not value >= minimum:
            _fail(f"{path}.{key}", f"must be >= {minimum}, got {value}")
    return value


def _integer(section: dict, path: str, key: str, *, required: bool = True,
             minimum: int = 1) -> int | None:
    if key not in section:
        if required:
            _fail(path, f"missing required key '{key}'")
        return None
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(f"{path}.{key}", f"expected an integer, got {value!r}")
    if value < minimum:
        _fail(f"{path}.{key}", f"must be >= {minimum}, got {value}")
    return value


def _frequency(section: dict, path: str, base: str, *, required: bool = True,
               minimum: float | None = None, strict: bool = False) -> float | None:
    """Fetch a frequency given as either <base>_hz or <base>_rad_s, in rad/s."""
    key_hz, key_rad = f"{base}_hz", f"{base}_rad_s"
    if key_hz in section and key_rad in section:
        _fail(path, f"give exactly one of '{key_hz}' or '{key_rad}', not both")
    if key_hz in section:
        value = _number(section, path, key_hz)
        value *= TWO_PI
    elif key_rad in section:
        value = _number(section, path, key_rad)
    else:
        if required:
            _fail(path, f"missing frequency key '{key_hz}' or '{key_rad}'")
        return None
    if minimum is not None:
        if strict and not value > minimum:
            _fail(path, f"'{base}' must be > {minimum} rad/s, got {value}")
        if not strict and not value >= minimum:
            _fail(path, f"'{base}' must be >= {minimum} rad/s, got {value}")
    return value


@dataclass(frozen=True)
class DriveSettings:
    """Drive specification; the frequency is either absolute or a detuning."""

    mode: str  # "frequency" | "detuning"
    value: float  # rad/s
    power_w: float | None = None
    amplitude: float | None = None  # rad/s, direct Omega override


@dataclass(frozen=True)
class SweepSettings:
    amplitude_min: float
    amplitude_max: float
    points: int


@dataclass(frozen=True)
class RampSettings:
    amplitude_start: float
    amplitude_stop: float
    steps: int
    dwell_s: float | None
    tolerance: float


@dataclass(frozen=True)
class SqueezeSettings:
    from_drive: bool
    r: float | None
    phi_rad: tuple[float, ...]
    nbar: float | None
    thermal: bool
    t_max_s: float
    points: int
    include_damping: bool
    branch: str


@dataclass(frozen=True)
class ScanSettings:
    axis: str  # "r_a_m" | "eccentricity"
    lo: float
    hi: float
    points: int


@dataclass(frozen=True)
class RunConfig:
    particle: NanoparticleSpec
    trap: TrapConfig
    pressure: float
    temperature: float
    gamma_b_override: float | None
    damping_per_pascal: float
    drive: DriveSettings | None = None
    sweep: SweepSettings | None = None
    ramp: RampSettings | None = None
    squeeze: SqueezeSettings | None = None
    scan: ScanSettings | None = None
    seed: int | None = None

    def environment(self, omega_ml: float) -> DriveEnvironment:
        """Assemble the environment once the drive frequency is known."""
        return DriveEnvironment(
            power_ml=self.drive.power_w if self.drive and self.drive.power_w else 0.0,
            omega_ml=omega_ml,
            pressure=self.pressure,
            temperature=self.temperature,
            gamma_b_override=self.gamma_b_override,
        )


def _parse_particle(section: dict) -> NanoparticleSpec:
    path = "particle"
    _check_known(
        section, path,
        {"material", "density_kg_m3", "eps_r", "r_a_m", "r_b_m", "eccentricity"},
    )
    density = eps_r = None
    if "material" in section:
        name = section["material"]
        if name not in MATERIALS:
            _fail(f"{path}.material", f"unknown material {name!r}; presets: {sorted(MATERIALS)}")
        density = MATERIALS[name].density
        eps_r = MATERIALS[name].eps_r
    explicit_density = _number(section, path, "density_kg_m3", required=density is None,
                               minimum=0.0, strict=True)
    if explicit_density is not None:
        density = explicit_density
    explicit_eps = _number(section, path, "eps_r", required=eps_r is None)
    if explicit_eps is not None:
        eps_r = explicit_eps
    r_a = _number(section, path, "r_a_m", minimum=0.0, strict=True)
    if ("r_b_m" in section) == ("eccentricity" in section):
        _fail(path, "give exactly one of 'r_b_m' or 'eccentricity'")
    try:
        if "r_b_m" in section:
            r_b = _number(section, path, "r_b_m", minimum=0.0, strict=True)
            return NanoparticleSpec(r_a=r_a, r_b=r_b, density=density, eps_r=eps_r)
        ecc = _number(section, path, "eccentricity", minimum=0.0)
        return NanoparticleSpec.from_eccentricity(r_a, ecc, density, eps_r)
    except ValueError as exc:
        raise ConfigError(f"config error at {path}: {exc}") from exc


def _parse_trap(section: dict) -> TrapConfig:
    _check_known(section, "trap", {"power_w", "waist_m"})
    return TrapConfig(
        power=_number(section, "trap", "power_w", minimum=0.0, strict=True),
        waist=_number(section, "trap", "waist_m", minimum=0.0, strict=True),
    )


def _parse_drive(section: dict) -> DriveSettings:
    path = "drive"
    _check_known(section, path, {
        "frequency_hz", "frequency_rad_s", "detuning_hz", "detuning_rad_s",
        "power_w", "amplitude_hz", "amplitude_rad_s",
    })
    freq = _frequency(section, path, "frequency", required=False, minimum=0.0, strict=True)
    det = _frequency(section, path, "detuning", required=False)
    if (freq is None) == (det is None):
        _fail(path, "give exactly one of a drive 'frequency' or a 'detuning'")
    power = _number(section, path, "power_w", required=False, minimum=0.0)
    amplitude = _frequency(section, path, "amplitude", required=False, minimum=0.0)
    if power is not None and amplitude is not None:
        _fail(path, "give at most one of 'power_w' or a direct 'amplitude'")
    return DriveSettings(
        mode="frequency" if freq is not None else "detuning",
        value=freq if freq is not None else det,
        power_w=power,
        amplitude=amplitude,
    )


def _parse_sweep(section: dict) -> SweepSettings:
    path = "sweep"
    _check_known(section, path, {
        "amplitude_min_hz", "amplitude_min_rad_s",
        "amplitude_max_hz", "amplitude_max_rad_s", "points",
    })
    lo = _frequency(section, path, "amplitude_min", minimum=0.0)
    hi = _frequency(section, path, "amplitude_max", minimum=0.0)
    if not hi > lo:
        _fail(path, f"amplitude_max must exceed amplitude_min, got [{lo}, {hi}] rad/s")
    return SweepSettings(lo, hi, _integer(section, path, "points", minimum=2))


def _parse_ramp(section: dict) -> RampSettings:
    path = "ramp"
    _check_known(section, path, {
        "amplitude_start_hz", "amplitude_start_rad_s",
        "amplitude_stop_hz", "amplitude_stop_rad_s",
        "steps", "dwell_s", "tolerance",
    })
    start = _frequency(section, path, "amplitude_start", minimum=0.0)
    stop = _frequency(section, path, "amplitude_stop", minimum=0.0)
    if not stop > start:
        _fail(path, "amplitude_stop must exceed amplitude_start (the ramp runs up, then back down)")
    steps = _integer(section, path, "steps", minimum=3)
    dwell = _number(section, path, "dwell_s", required=False, minimum=0.0, strict=True)
    tol = _number(section, path, "tolerance", required=False, minimum=0.0, strict=True)
    return RampSettings(start, stop, steps, dwell, tol if tol is not None else 1e-8)


def _parse_squeeze(section: dict) -> SqueezeSettings:
    path = "squeeze"
    _check_known(section, path, {
        "r", "from_drive", "phi_rad", "nbar", "thermal",
        "t_max_s", "points", "include_damping", "branch",
    })
    from_drive = section.get("from_drive", False)
    if not isinstance(from_drive, bool):
        _fail(f"{path}.from_drive", f"expected true/false, got {from_drive!r}")
    r = _number(section, path, "r", required=not from_drive, minimum=0.0)
    if from_drive and r is not None:
        _fail(path, "give either 'r' or 'from_drive', not both")
    phi_raw = section.get("phi_rad")
    if phi_raw is None:
        if not from_drive:
            _fail(path, "missing 'phi_rad' (a number or list of numbers)")
        phis: tuple[float, ...] = ()
    elif isinstance(phi_raw, (int, float)) and not isinstance(phi_raw, bool):
        phis = (float(phi_raw),)
    elif isinstance(phi_raw, list) and phi_raw and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in phi_raw
    ):
        phis = tuple(float(v) for v in phi_raw)
    else:
        _fail(f"{path}.phi_rad", f"expected a number or non-empty list, got {phi_raw!r}")
    thermal = section.get("thermal", False)
    if not isinstance(thermal, bool):
        _fail(f"{path}.thermal", f"expected true/false, got {thermal!r}")
    nbar = _number(section, path, "nbar", required=False, minimum=0.0)
    if thermal and nbar is not None:
        _fail(path, "give either 'nbar' or 'thermal', not both")
    include_damping = section.get("include_damping", False)
    if not isinstance(include_damping, bool):
        _fail(f"{path}.include_damping", f"expected true/false, got {include_damping!r}")
    branch = section.get("branch", "upper")
    if branch not in ("upper", "lower"):
        _fail(f"{path}.branch", f"expected 'upper' or 'lower', got {branch!r}")
    return SqueezeSettings(
        from_drive=from_drive,
        r=r,
        phi_rad=phis,
        nbar=nbar,
        thermal=thermal,
        t_max_s=_number(section, path, "t_max_s", minimum=0.0, strict=True),
        points=_integer(section, path, "points", required=False, minimum=2) or 400,
        include_damping=include_damping,
        branch=branch,
    )


def _parse_scan(section: dict) -> ScanSettings:
    path = "derive"
    _check_known(section, path, {"scan", "min", "max", "points"})
    axis = section.get("scan")
    if axis not in ("r_a_m", "eccentricity"):
        _fail(f"{path}.scan", f"expected 'r_a_m' or 'eccentricity', got {axis!r}")
    lo = _number(section, path, "min", minimum=0.0)
    hi = _number(section, path, "max")
    if not hi > lo:
        _fail(path, f"max must exceed min, got [{lo}, {hi}]")
    if axis == "eccentricity" and hi >= 1.0:
        _fail(f"{path}.max", f"eccentricity scan must stay below 1, got {hi}")
    return ScanSettings(axis, lo, hi, _integer(section, path, "points", minimum=2))


def load_config(path: str | Path, seed: int | None = None) -> RunConfig:
    """Load, validate, and resolve a JSON run configuration."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config error: {p} is not valid JSON ({exc})") from exc
    root = _require_mapping(raw, "(root)")
    _check_known(root, "(root)", {
        "particle", "trap", "environment", "drive", "sweep", "ramp", "squeeze", "derive",
    })
    for name in ("particle", "trap", "environment"):
        if name not in root:
            _fail("(root)", f"missing required section '{name}'")
    env = _require_mapping(root["environment"], "environment")
    _check_known(env, "environment", {
        "pressure_pa", "temperature_k", "gamma_b_hz", "gamma_b_rad_s",
        "damping_per_pascal_rad_s",
    })
    damping = _number(env, "environment", "damping_per_pascal_rad_s",
                      required=False, minimum=0.0)
    return RunConfig(
        particle=_parse_particle(_require_mapping(root["particle"], "particle")),
        trap=_parse_trap(_require_mapping(root["trap"], "trap")),
        pressure=_number(env, "environment", "pressure_pa", minimum=0.0),
        temperature=_number(env, "environment", "temperature_k", minimum=0.0, strict=True),
        gamma_b_override=_frequency(env, "environment", "gamma_b", required=False, minimum=0.0),
        damping_per_pascal=damping if damping is not None else DEFAULT_DAMPING_PER_PASCAL,
        drive=_parse_drive(_require_mapping(root["drive"], "drive")) if "drive" in root else None,
        sweep=_parse_sweep(_require_mapping(root["sweep"], "sweep")) if "sweep" in root else None,
        ramp=_parse_ramp(_require_mapping(root["ramp"], "ramp")) if "ramp" in root else None,
        squeeze=_parse_squeeze(_require_mapping(root["squeeze"], "squeeze"))
        if "squeeze" in root else None,
        scan=_parse_scan(_require_mapping(root["derive"], "derive")) if "derive" in root else None,
        seed=seed,
    )
