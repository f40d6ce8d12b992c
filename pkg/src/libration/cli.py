"""Command-line entry point.

Subcommands: ``derive`` (mode numbers from a particle/trap config),
``bistability`` (steady branches over a drive-amplitude grid), ``hysteresis``
(quasi-static up/down ramp pair), ``squeeze`` (variance traces, closed form
next to the moment-equation reference).  Exit codes: 0 success, 1 config
error, 2 numerical failure.  All outputs are deterministic for a fixed
config; frequency columns are emitted in rad/s with an ``_hz`` twin where a
summary value is reported.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from libration import __version__
from libration.config import ConfigError, RunConfig, load_config
from libration.model import (
    NanoparticleSpec,
    NoConfinementError,
    drive_amplitude,
    gas_damping,
    mode_parameters,
    thermal_occupancy,
)
from libration.steadystate import (
    MeanFieldParams,
    bistability_condition,
    solve_branches,
    sweep_diagram,
    turning_points,
)
from libration.dynamics import RampProtocol, hysteresis_sweep
from libration.squeezing import (
    exponential_angle,
    moment_oracle,
    squeeze_params,
    variance_J_closed,
    variance_theta_closed,
)
from libration.output import svg_line_chart, write_csv

TWO_PI = 2.0 * math.pi


class NumericalError(RuntimeError):
    """A solver or integrator failed to produce a usable result."""


def _need(cfg: RunConfig, section: str, command: str) -> None:
    if getattr(cfg, section) is None:
        raise ConfigError(
            f"config error: the '{command}' command needs a '{section}' section"
        )


def _drive_frequencies(cfg: RunConfig, omega_t: float) -> tuple[float, float]:
    """(omega_ml, delta_ml) in rad/s from an absolute frequency or a detuning."""
    if cfg.drive.mode == "frequency":
        omega_ml = cfg.drive.value
        return omega_ml, omega_ml - omega_t
    return omega_t + cfg.drive.value, cfg.drive.value


def _drive_strength(cfg: RunConfig, mode, omega_ml: float) -> float | None:
    """Resolve the drive amplitude Omega (rad/s), if the config defines one."""
    if cfg.drive.amplitude is not None:
        return cfg.drive.amplitude
    if cfg.drive.power_w:
        return drive_amplitude(cfg.particle, cfg.trap, cfg.environment(omega_ml), mode)
    return None


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def _report_freq(lines: list[str], name: str, value: float) -> None:
    lines.append(f"{name:28s} {_fmt(value)} rad/s  ({_fmt(value / TWO_PI)} Hz)")


def cmd_derive(cfg: RunConfig, out: Path, fmt: str) -> None:
    spec = cfg.particle
    mode = mode_parameters(spec, cfg.trap)
    omega_ml = mode.omega_t
    delta_ml = None
    if cfg.drive is not None:
        omega_ml, delta_ml = _drive_frequencies(cfg, mode.omega_t)
    env = cfg.environment(omega_ml)
    gamma_b = gas_damping(env, cfg.damping_per_pascal)
    nbar = thermal_occupancy(cfg.temperature, mode.omega_t)

    lines: list[str] = []
    lines.append(f"{'r_a, r_b':28s} {_fmt(spec.r_a)} m, {_fmt(spec.r_b)} m "
                 f"(eccentricity {_fmt(spec.eccentricity)})")
    lines.append(f"{'inertia':28s} {_fmt(mode.inertia)} kg m^2")
    lines.append(f"{'kappa_x, kappa_y':28s} {_fmt(mode.kappa_x)}, {_fmt(mode.kappa_y)}")
    _report_freq(lines, "omega_t", mode.omega_t)
    lines.append(f"{'period':28s} {_fmt(TWO_PI / mode.omega_t)} s")
    _report_freq(lines, "eta", mode.eta)
    lines.append(f"{'eta / omega_t':28s} {_fmt(mode.eta / mode.omega_t)}")
    lines.append(f"{'theta0':28s} {_fmt(mode.theta0)} rad")
    lines.append(f"{'J0':28s} {_fmt(mode.J0)} J s")
    _report_freq(lines, "gamma_b", gamma_b)
    lines.append(f"{'thermal occupancy':28s} {_fmt(nbar)}")

    rows: list[tuple[str, float, str]] = [
        ("r_a", spec.r_a, "m"),
        ("r_b", spec.r_b, "m"),
        ("eccentricity", spec.eccentricity, "1"),
        ("inertia", mode.inertia, "kg m^2"),
        ("kappa_x", mode.kappa_x, "1"),
        ("kappa_y", mode.kappa_y, "1"),
        ("omega_t", mode.omega_t, "rad/s"),
        ("omega_t_over_2pi", mode.omega_t / TWO_PI, "Hz"),
        ("period", TWO_PI / mode.omega_t, "s"),
        ("eta", mode.eta, "rad/s"),
        ("eta_over_2pi", mode.eta / TWO_PI, "Hz"),
        ("eta_over_omega_t", mode.eta / mode.omega_t, "1"),
        ("theta0", mode.theta0, "rad"),
        ("J0", mode.J0, "J s"),
        ("gamma_b", gamma_b, "rad/s"),
        ("gamma_b_over_2pi", gamma_b / TWO_PI, "Hz"),
        ("thermal_occupancy", nbar, "1"),
    ]
    if delta_ml is not None:
        _report_freq(lines, "omega_ml", omega_ml)
        _report_freq(lines, "delta_ml", delta_ml)
        rows.append(("omega_ml", omega_ml, "rad/s"))
        rows.append(("omega_ml_over_2pi", omega_ml / TWO_PI, "Hz"))
        rows.append(("delta_ml", delta_ml, "rad/s"))
        rows.append(("delta_ml_over_2pi", delta_ml / TWO_PI, "Hz"))
        bistable, omega_c = bistability_condition(
            omega_ml, mode.omega_t, mode.eta, gamma_b
        )
        _report_freq(lines, "omega_c", omega_c)
        lines.append(f"{'bistable at this drive freq':28s} {'yes' if bistable else 'no'}")
        rows.append(("omega_c", omega_c, "rad/s"))
        rows.append(("omega_c_over_2pi", omega_c / TWO_PI, "Hz"))
        rows.append(("bistable", float(bistable), "bool"))
        strength = _drive_strength(cfg, mode, omega_ml)
        if strength is not None:
            _report_freq(lines, "drive amplitude", strength)
            rows.append(("drive_amplitude", strength, "rad/s"))
            rows.append(("drive_amplitude_over_2pi", strength / TWO_PI, "Hz"))
    print("\n".join(lines))

    write_csv(out / "derive.csv", {
        "quantity": [r[0] for r in rows],
        "value": [r[1] for r in rows],
        "unit": [r[2] for r in rows],
    })

    if cfg.scan is not None:
        axis = np.linspace(cfg.scan.lo, cfg.scan.hi, cfg.scan.points)
        scan_rows = {k: [] for k in (
            "axis", "inertia", "omega_t", "omega_t_over_2pi", "eta", "eta_over_omega_t",
        )}
        for value in axis:
            if cfg.scan.axis == "r_a_m":
                scaled = NanoparticleSpec.from_eccentricity(
                    float(value), spec.eccentricity, spec.density, spec.eps_r
                )
            else:
                scaled = NanoparticleSpec.from_eccentricity(
                    spec.r_a, float(value), spec.density, spec.eps_r
                )
            m = mode_parameters(scaled, cfg.trap)
            scan_rows["axis"].append(float(value))
            scan_rows["inertia"].append(m.inertia)
            scan_rows["omega_t"].append(m.omega_t)
            scan_rows["omega_t_over_2pi"].append(m.omega_t / TWO_PI)
            scan_rows["eta"].append(m.eta)
            scan_rows["eta_over_omega_t"].append(m.eta / m.omega_t)
        scan_rows[cfg.scan.axis] = scan_rows.pop("axis")
        scan_rows = {cfg.scan.axis: scan_rows[cfg.scan.axis],
                     **{k: v for k, v in scan_rows.items() if k != cfg.scan.axis}}
        write_csv(out / "derive_scan.csv", scan_rows)
        if fmt == "csv+svg":
            svg_line_chart(
                out / "derive_scan.svg",
                [("eta (rad/s)", scan_rows[cfg.scan.axis], scan_rows["eta"])],
                title="Kerr shift per phonon vs " + cfg.scan.axis,
                x_label=cfg.scan.axis,
                y_label="eta (rad/s)",
                markers=True,
            )


def _diagram_series(diagram) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """S-curve plus unstable markers; the curve is monotone in occupation."""
    pts = sorted(
        ((branch.n, w, branch.stable) for w, branch in diagram.branches),
        key=lambda p: p[0],
    )
    n_sorted = np.array([p[0] for p in pts])
    w_sorted = np.array([p[1] for p in pts])
    series = [("steady branch", w_sorted, n_sorted)]
    unstable = [(w, n) for n, w, stable in pts if not stable]
    if unstable:
        # NaN separators render these as isolated markers, not a polyline.
        xs, ys = [], []
        for w, n in unstable:
            xs.extend([w, math.nan])
            ys.extend([n, math.nan])
        series.append(("unstable", np.array(xs), np.array(ys)))
    return series


def cmd_bistability(cfg: RunConfig, out: Path, fmt: str) -> None:
    _need(cfg, "drive", "bistability")
    _need(cfg, "sweep", "bistability")
    mode = mode_parameters(cfg.particle, cfg.trap)
    omega_ml, delta_ml = _drive_frequencies(cfg, mode.omega_t)
    gamma_b = gas_damping(cfg.environment(omega_ml), cfg.damping_per_pascal)
    grid = np.linspace(cfg.sweep.amplitude_min, cfg.sweep.amplitude_max, cfg.sweep.points)
    try:
        diagram = sweep_diagram(grid, delta_ml, gamma_b, mode.eta, mode.omega_t)
    except RuntimeError as exc:
        raise NumericalError(str(exc)) from exc

    drives, ns, deffs, stables = [], [], [], []
    eig = [[], [], [], []]
    for w, branch in diagram.branches:
        drives.append(w)
        ns.append(branch.n)
        deffs.append(branch.delta_eff)
        stables.append(int(branch.stable))
        e1, e2 = branch.eigenvalues
        eig[0].append(e1.real)
        eig[1].append(e1.imag)
        eig[2].append(e2.real)
        eig[3].append(e2.imag)
    write_csv(out / "bistability.csv", {
        "omega_drive": drives,
        "n": ns,
        "delta_eff": deffs,
        "stable": stables,
        "re_eig1": eig[0],
        "im_eig1": eig[1],
        "re_eig2": eig[2],
        "im_eig2": eig[3],
    })

    tp = diagram.turning
    nan = math.nan
    write_csv(out / "bistability_summary.csv", {
        "regime": [diagram.regime],
        "omega_ml_rad_s": [diagram.omega_ml],
        "omega_ml_hz": [diagram.omega_ml / TWO_PI],
        "omega_c_rad_s": [diagram.omega_c],
        "omega_c_hz": [diagram.omega_c / TWO_PI],
        "window_width_rad_s": [diagram.window_width],
        "window_width_hz": [diagram.window_width / TWO_PI],
        "drive_up_fold_rad_s": [tp.drive_low if tp else nan],
        "drive_up_fold_hz": [tp.drive_low / TWO_PI if tp else nan],
        "drive_down_fold_rad_s": [tp.drive_high if tp else nan],
        "drive_down_fold_hz": [tp.drive_high / TWO_PI if tp else nan],
        "delta_eff_up_fold_rad_s": [tp.delta_eff_low if tp else nan],
        "delta_eff_up_fold_hz": [tp.delta_eff_low / TWO_PI if tp else nan],
        "delta_eff_down_fold_rad_s": [tp.delta_eff_high if tp else nan],
        "delta_eff_down_fold_hz": [tp.delta_eff_high / TWO_PI if tp else nan],
        "n_up_fold": [tp.n_low if tp else nan],
        "n_down_fold": [tp.n_high if tp else nan],
    })
    print(f"regime: {diagram.regime}")
    print(f"omega_c: {_fmt(diagram.omega_c)} rad/s ({_fmt(diagram.omega_c / TWO_PI)} Hz)")
    if tp is not None:
        print(f"up-jump fold:   Omega = {_fmt(tp.drive_low)} rad/s, "
              f"delta_eff = {_fmt(tp.delta_eff_low)} rad/s")
        print(f"down-jump fold: Omega = {_fmt(tp.drive_high)} rad/s, "
              f"delta_eff = {_fmt(tp.delta_eff_high)} rad/s")
        print(f"window width: {_fmt(diagram.window_width)} rad/s")
    if fmt == "csv+svg":
        svg_line_chart(
            out / "bistability.svg",
            _diagram_series(diagram),
            title="Steady occupation vs drive amplitude",
            x_label="drive amplitude (rad/s)",
            y_label="occupation n",
        )


def cmd_hysteresis(cfg: RunConfig, out: Path, fmt: str) -> None:
    _need(cfg, "drive", "hysteresis")
    _need(cfg, "ramp", "hysteresis")
    mode = mode_parameters(cfg.particle, cfg.trap)
    omega_ml, delta_ml = _drive_frequencies(cfg, mode.omega_t)
    gamma_b = gas_damping(cfg.environment(omega_ml), cfg.damping_per_pascal)
    if cfg.ramp.dwell_s is not None:
        protocol = RampProtocol(
            cfg.ramp.amplitude_start, cfg.ramp.amplitude_stop,
            cfg.ramp.steps, cfg.ramp.dwell_s,
        )
    else:
        if not gamma_b > 0.0:
            raise ConfigError(
                "config error: ramp.dwell_s is required when gamma_b is zero "
                "(no damping time to set the quasi-static dwell)"
            )
        protocol = RampProtocol.quasi_static(
            cfg.ramp.amplitude_start, cfg.ramp.amplitude_stop, gamma_b, cfg.ramp.steps
        )
    result = hysteresis_sweep(
        delta_ml, gamma_b, mode.eta, protocol, tol=cfg.ramp.tolerance
    )
    for sweep in (result.up, result.down):
        if not sweep.trajectory.complete:
            raise NumericalError(f"{sweep.direction}-sweep integration failed")
        tr = sweep.trajectory
        write_csv(out / f"hysteresis_{sweep.direction}.csv", {
            "t": tr.t,
            "re_beta": tr.beta.real,
            "im_beta": tr.beta.imag,
            "n": tr.n,
            "omega_applied": tr.omega_applied,
        })

    bistable, omega_c = bistability_condition(omega_ml, mode.omega_t, mode.eta, gamma_b)
    tp = turning_points(omega_ml - omega_c, mode.eta, gamma_b)
    static = {
        "up": (tp.drive_low, tp.delta_eff_low),
        "down": (tp.drive_high, tp.delta_eff_high),
    } if tp.physical else {"up": (None, None), "down": (None, None)}

    nan = math.nan
    cols = {k: [] for k in (
        "direction", "jump_detected", "jump_drive_rad_s", "jump_drive_hz",
        "jump_delta_eff_rad_s", "jump_delta_eff_hz", "jump_n_before", "jump_n_after",
        "static_fold_drive_rad_s", "static_fold_delta_eff_rad_s", "loop_area",
    )}
    for direction, jump in (("up", result.jump_up), ("down", result.jump_down)):
        fold_drive, fold_deff = static[direction]
        cols["direction"].append(direction)
        cols["jump_detected"].append(int(jump is not None))
        cols["jump_drive_rad_s"].append(jump.drive if jump else nan)
        cols["jump_drive_hz"].append(jump.drive / TWO_PI if jump else nan)
        cols["jump_delta_eff_rad_s"].append(jump.delta_eff_before if jump else nan)
        cols["jump_delta_eff_hz"].append(jump.delta_eff_before / TWO_PI if jump else nan)
        cols["jump_n_before"].append(jump.n_before if jump else nan)
        cols["jump_n_after"].append(jump.n_after if jump else nan)
        cols["static_fold_drive_rad_s"].append(fold_drive if fold_drive is not None else nan)
        cols["static_fold_delta_eff_rad_s"].append(fold_deff if fold_deff is not None else nan)
        cols["loop_area"].append(result.loop_area)
    write_csv(out / "hysteresis_summary.csv", cols)

    for direction, jump in (("up", result.jump_up), ("down", result.jump_down)):
        if jump is None:
            print(f"{direction}-sweep: no jump detected")
        else:
            print(f"{direction}-sweep jump: Omega = {_fmt(jump.drive)} rad/s "
                  f"({_fmt(jump.drive / TWO_PI)} Hz), "
                  f"delta_eff(before) = {_fmt(jump.delta_eff_before)} rad/s")
    print(f"loop area: {_fmt(result.loop_area)}")
    if fmt == "csv+svg":
        svg_line_chart(
            out / "hysteresis.svg",
            [
                ("up sweep", result.up.drives, result.up.n),
                ("down sweep", result.down.drives, result.down.n),
            ],
            title="Quasi-static amplitude ramp",
            x_label="drive amplitude (rad/s)",
            y_label="occupation n",
        )


def _squeeze_reference(cfg: RunConfig, mode, delta_ml: float, gamma_b: float):
    """(r, default_phi) from the chosen steady branch of the driven mode."""
    omega_ml = mode.omega_t + delta_ml
    strength = _drive_strength(cfg, mode, omega_ml)
    if strength is None:
        raise ConfigError(
            "config error: squeeze.from_drive needs a drive amplitude "
            "('power_w' or 'amplitude_*') in the drive section"
        )
    try:
        branches = solve_branches(
            MeanFieldParams(delta_ml=delta_ml, Omega=strength,
                            gamma_b=gamma_b, eta=mode.eta)
        )
    except RuntimeError as exc:
        raise NumericalError(str(exc)) from exc
    stable = [b for b in branches if b.stable]
    if not stable:
        raise NumericalError("no stable steady branch at the configured drive")
    branch = max(stable, key=lambda b: b.n) if cfg.squeeze.branch == "upper" \
        else min(stable, key=lambda b: b.n)
    return math.sqrt(branch.n), math.atan2(branch.beta0.imag, branch.beta0.real)


def cmd_squeeze(cfg: RunConfig, out: Path, fmt: str) -> None:
    _need(cfg, "drive", "squeeze")
    _need(cfg, "squeeze", "squeeze")
    sq = cfg.squeeze
    mode = mode_parameters(cfg.particle, cfg.trap)
    omega_ml, delta_ml = _drive_frequencies(cfg, mode.omega_t)
    gamma_b = gas_damping(cfg.environment(omega_ml), cfg.damping_per_pascal)
    if sq.thermal:
        nbar = thermal_occupancy(cfg.temperature, mode.omega_t)
    else:
        nbar = sq.nbar if sq.nbar is not None else 0.0
    if sq.from_drive:
        r, phi_default = _squeeze_reference(cfg, mode, delta_ml, gamma_b)
        phis = sq.phi_rad if sq.phi_rad else (phi_default,)
    else:
        r, phis = sq.r, sq.phi_rad
    t = np.linspace(0.0, sq.t_max_s, sq.points)
    oracle_gamma = gamma_b if sq.include_damping else 0.0

    svg_series = []
    for idx, phi in enumerate(phis):
        params = squeeze_params(delta_ml, mode.eta, r, phi, nbar)
        floor = (2.0 * nbar + 1.0) / 4.0
        suffix = "" if len(phis) == 1 else f"_{idx}"
        s_th = np.asarray(variance_theta_closed(t, params))
        s_j = np.asarray(variance_J_closed(t, params))
        write_csv(out / f"squeeze_closed{suffix}.csv", {
            "t": t,
            "S_theta": s_th,
            "S_J": s_j,
            "squeezed_theta": (s_th < floor).astype(int),
            "squeezed_J": (s_j < floor).astype(int),
            "regime": [params.regime] * len(t),
        })
        try:
            trace = moment_oracle(params, t, gamma_b=oracle_gamma, nbar_bath=nbar)
        except RuntimeError as exc:
            raise NumericalError(str(exc)) from exc
        write_csv(out / f"squeeze_oracle{suffix}.csv", {
            "t": trace.t,
            "S_theta": trace.S_theta,
            "S_J": trace.S_J,
            "squeezed_theta": (trace.S_theta < floor).astype(int),
            "squeezed_J": (trace.S_J < floor).astype(int),
            "regime": [trace.regime] * len(trace.t),
        })
        k = int(np.argmin(s_th))
        line = (f"phi = {_fmt(phi)}: regime {params.regime}, "
                f"min S_theta = {_fmt(float(s_th[k]))} at t = {_fmt(float(t[k]))} s")
        if params.regime == "hyperbolic":
            line += f", pure-decay angle = {_fmt(exponential_angle(params))} rad"
        print(line)
        svg_series.append((f"phi={phi:.4g}", t, s_th))
    print(f"r = {_fmt(r)}, nbar = {_fmt(nbar)}, "
          f"oracle damping = {_fmt(oracle_gamma)} rad/s")
    if fmt == "csv+svg":
        floor = (2.0 * nbar + 1.0) / 4.0
        svg_series.append(("thermal floor", t, np.full_like(t, floor)))
        svg_line_chart(
            out / "squeeze.svg",
            svg_series,
            title="Angle variance vs time (closed form)",
            x_label="t (s)",
            y_label="S_theta",
        )


_COMMANDS = {
    "derive": cmd_derive,
    "bistability": cmd_bistability,
    "hysteresis": cmd_hysteresis,
    "squeeze": cmd_squeeze,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="libration",
        description="Nonlinear torsional-mode toolkit for levitated anisotropic nanoparticles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("derive", "derived mode parameters for a particle/trap config"),
        ("bistability", "steady-state branches over a drive-amplitude grid"),
        ("hysteresis", "quasi-static up/down amplitude ramps with jump detection"),
        ("squeeze", "variance traces: closed form next to the moment-equation reference"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory (created if missing)")
        p.add_argument("--format", choices=("csv", "csv+svg"), default="csv",
                       help="artifact set to write")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved for stochastic extensions; outputs do not depend on it")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, seed=args.seed)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.command](cfg, out, args.format)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (NumericalError, NoConfinementError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
