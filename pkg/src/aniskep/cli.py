"""Command-line front end: presets, sweeps, predictions, verification.

Exit codes: 0 success, 1 tolerance breach, 2 usage/config error,
3 runtime failure (guard hit, unbound orbit, IO trouble).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import theory
from .diagnostics import runge_lenz
from .errors import ConfigError, DomainError, SimulationError
from .geometry import FrameAngles
from .hamiltonians import (
    PhaseState,
    Variant,
    fixed_anisotropy,
    pure_kepler,
    total_energy,
)
from .harness import (
    ExperimentConfig,
    emit_svg,
    make_inplane_state,
    run_fig1,
    run_fig2,
    run_fig3_point,
    sweep_theta,
    write_csv,
    write_trajectory_csv,
)
from .integrator import IntegratorConfig, Scheme, integrate, kepler_period, measure_order

DEFAULT_SEED = 20260822
_STRONG = (5.0, 50.0, 0.05)   # (omega0, tau*omega0, tolerance)
_WEAK = (0.5, 10.0, 0.10)


def _print_kv(key: str, value) -> None:
    print(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")


def _verdict(name: str, measured: float, limit: float, ok: bool) -> bool:
    print(f"{name}: measured={measured:.6e} limit={limit:.6e} "
          f"{'PASS' if ok else 'FAIL'}")
    return ok


# ---------------------------------------------------------------- predict

def _cmd_predict(args) -> int:
    if args.loop is not None:
        doc = _load_json(args.loop)
        for key in ("t", "theta", "phi"):
            if key not in doc:
                raise ConfigError(f"loop file {args.loop} lacks key '{key}'")
        from .protocols import AnisotropyProtocol

        proto = AnisotropyProtocol.knot_loop(doc["t"], doc["theta"], doc["phi"])
        loop = theory.LoopOnSphere.from_protocol(proto)
        omega_sa = theory.predicted_rotation(loop)
        hannay = theory.hannay_shift(loop)
        _print_kv("winding", loop.winding_number)
    else:
        if args.theta is None:
            raise ConfigError("give --theta or --loop")
        FrameAngles(args.theta, 0.0)  # domain check: theta in [0, pi]
        omega_sa = theory.solid_angle_const_theta(args.theta)
        hannay = 2.0 * math.pi - omega_sa
        _print_kv("theta", float(args.theta))
    _print_kv("omega_sa", float(omega_sa))
    _print_kv("hannay_shift", float(hannay))
    _print_kv("predicted_phi", float(omega_sa))
    _print_kv("predicted_cos_phi", float(math.cos(omega_sa)))
    return 0


def _load_json(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"cannot read {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return doc


# --------------------------------------------------------------- simulate

def _cmd_simulate(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    out_csv = args.out or cfg.out_csv
    out_svg = args.svg or cfg.out_svg
    keep = out_csv is not None
    if cfg.variant is Variant.ROTATING_ANISOTROPY:
        rec = run_fig3_point(cfg.theta, cfg.omega0, cfg.tau, cfg, keep_trajectory=keep)
    elif cfg.variant is Variant.FIXED_ANISOTROPY:
        rec = run_fig2(cfg, n_cycles=args.cycles, keep_trajectory=keep)
    else:
        rec = run_fig1(cfg, keep_trajectory=keep)
    for line in rec.summary_lines():
        print(line)
    if out_csv:
        write_trajectory_csv(rec.details["_trajectory"], rec.details["_spec"], out_csv)
        print(f"trajectory_csv={out_csv}")
    if out_svg:
        emit_svg([rec], out_svg)
        print(f"svg={out_svg}")
    return 0


# ----------------------------------------------------------- fig presets

def _cmd_fig1(args) -> int:
    cfg = ExperimentConfig(
        variant=Variant.MOVING_NUCLEUS, omega0=0.0,
        nucleus_rho=args.rho, nucleus_t_loop_orbits=args.t_loop_orbits,
        steps_per_orbit=args.steps_per_orbit, settle_orbits=args.settle_orbits,
    )
    rec = run_fig1(cfg)
    for line in rec.summary_lines():
        print(line)
    _emit_records([rec], args)
    angle = rec.details["dipole_angle_change_rad"]
    ok = _verdict("dipole_direction_change_rad", angle, args.tol, angle <= args.tol)
    return 0 if ok else 1


def _cmd_fig2(args) -> int:
    cfg = ExperimentConfig(
        variant=Variant.FIXED_ANISOTROPY, omega0=args.omega0,
        r0=np.array([1.0, 0.0, 0.01]), v0=np.array([0.0, 0.75, 0.0]),
        steps_per_orbit=args.steps_per_orbit,
    )
    rec = run_fig2(cfg, n_cycles=args.cycles)
    for line in rec.summary_lines():
        print(line)
    _emit_records([rec], args)
    d = rec.details
    apsis = abs(d["apsis_rotation_rad"])
    ratio = d["z_env_last_decile"] / d["z_env_first_decile"]
    ok = _verdict("apsis_rotation_rad", apsis, args.tol_apsis, apsis <= args.tol_apsis)
    ok &= _verdict("stroboscopic_z_mean", abs(d["z_mean"]), args.tol_z_mean,
                   abs(d["z_mean"]) <= args.tol_z_mean)
    ok &= _verdict("z_envelope_ratio", ratio, args.tol_env_ratio,
                   ratio <= args.tol_env_ratio)
    return 0 if ok else 1


def _cmd_fig3(args) -> int:
    if (args.omega0 is None) != (args.tau_omega0 is None):
        raise ConfigError("give --omega0 and --tau-omega0 together, or neither")
    if args.omega0 is not None:
        series = [(args.omega0, args.tau_omega0,
                   args.tol if args.tol is not None else _STRONG[2])]
    else:
        series = [
            (_STRONG[0], _STRONG[1], args.tol if args.tol is not None else _STRONG[2]),
            (_WEAK[0], _WEAK[1], args.tol if args.tol is not None else _WEAK[2]),
        ]
    grid = _theta_grid(args)
    cfg = ExperimentConfig(steps_per_orbit=args.steps_per_orbit,
                           settle_orbits=args.settle_orbits)
    all_records, ok = [], True
    for omega0, tau_omega0, tol in series:
        tau = _tau_from(omega0, tau_omega0)
        records = sweep_theta(grid, omega0, tau, cfg, workers=args.workers)
        all_records.extend(records)
        ok &= _report_sweep(records, tol, label=f"omega0={omega0:g} tau={tau:g}")
    _emit_records(all_records, args)
    return 0 if ok else 1


def _emit_records(records, args) -> None:
    if getattr(args, "out", None):
        write_csv(records, args.out)
        print(f"csv={args.out}")
    if getattr(args, "svg", None):
        emit_svg(records, args.svg)
        print(f"svg={args.svg}")


def _theta_grid(args) -> np.ndarray:
    if args.points < 1:
        raise ConfigError(f"--points must be >= 1, got {args.points}")
    if not (0.0 <= args.theta_min <= args.theta_max <= math.pi):
        raise ConfigError("need 0 <= --theta-min <= --theta-max <= pi")
    return np.linspace(args.theta_min, args.theta_max, args.points)


def _tau_from(omega0: float, tau_omega0: float) -> float:
    if omega0 <= 0.0:
        raise ConfigError("--omega0 must be > 0 to set tau via --tau-omega0")
    if tau_omega0 <= 0.0:
        raise ConfigError("--tau-omega0 must be > 0")
    return tau_omega0 / omega0


def _report_sweep(records, tol: float, label: str) -> bool:
    errs = []
    for rec in records:
        line = (f"theta={rec.theta:.6f} cos_phi_3d={rec.cos_phi_3d!r} "
                f"pred={rec.cos_phi_pred!r} abs_err={rec.abs_err_3d!r}")
        if rec.error_code:
            line += f" error={rec.error_code}"
        print(line)
        errs.append(math.inf if rec.error_code or math.isnan(rec.abs_err_3d)
                    else rec.abs_err_3d)
    worst = max(errs)
    return _verdict(f"max_abs_err_3d [{label}]", worst, tol, worst <= tol)


# ------------------------------------------------------------------ sweep

def _cmd_sweep(args) -> int:
    tau = _tau_from(args.omega0, args.tau_omega0)
    grid = _theta_grid(args)
    cfg = ExperimentConfig(steps_per_orbit=args.steps_per_orbit,
                           settle_orbits=args.settle_orbits)
    records = sweep_theta(grid, args.omega0, tau, cfg, workers=args.workers)
    write_csv(records, args.out)
    print(f"csv={args.out}")
    if args.svg:
        emit_svg(records, args.svg)
        print(f"svg={args.svg}")
    ok = _report_sweep(records, args.tol,
                       label=f"omega0={args.omega0:g} tau={tau:g}")
    return 0 if ok else 1


# ------------------------------------------------------------ convergence

def _cmd_convergence(args) -> int:
    schemes = ([Scheme[args.scheme]] if args.scheme != "both"
               else [Scheme.VERLET2, Scheme.YOSHIDA3])
    state0 = make_inplane_state(1.0, 0.75, 0.0)
    spec = pure_kepler()
    t_orb = kepler_period(spec, state0)
    h_list = [t_orb / (args.base_steps * 2 ** k) for k in range(args.sizes)]
    for scheme in schemes:
        meas = measure_order(spec, state0, scheme, h_list)
        print(f"scheme={scheme.name}")
        for h, err in zip(meas.step_sizes, meas.errors):
            print(f"  h={h!r} error={err!r}")
        _print_kv("measured_order", float(meas.order))
    return 0


# ----------------------------------------------------------------- verify

def _run_conservation() -> list[tuple[str, float, float]]:
    spec = pure_kepler()
    state0 = make_inplane_state(1.0, 0.75, 0.0)
    t_orb = kepler_period(spec, state0)
    dt = t_orb / 1000.0
    n_orbits = 100
    traj = integrate(spec, state0, 0.0, n_orbits * t_orb,
                     IntegratorConfig(dt=dt), sampling=n_orbits * 1000)
    s0, s1 = traj.initial, traj.final
    e0 = total_energy(spec, s0, 0.0)
    e1 = total_energy(spec, s1, traj.times[-1])
    l0 = np.cross(s0.r, s0.p)
    l1 = np.cross(s1.r, s1.p)
    a0 = runge_lenz(s0, spec.kepler)
    a1 = runge_lenz(s1, spec.kepler)
    checks = [
        ("energy_drift_rel", abs((e1 - e0) / e0), 1e-7),
        ("angular_momentum_drift_rel", float(np.linalg.norm(l1 - l0) / np.linalg.norm(l0)), 1e-8),
        ("apsis_vector_magnitude_drift_rel",
         abs(np.linalg.norm(a1) - np.linalg.norm(a0)) / np.linalg.norm(a0), 1e-7),
    ]

    spec2 = fixed_anisotropy(0.2)
    state2 = PhaseState(np.array([1.0, 0.0, 0.01]), np.array([0.0, 0.75, 0.0]))
    traj2 = integrate(spec2, state2, 0.0, n_orbits * t_orb,
                      IntegratorConfig(dt=dt), sampling=n_orbits * 1000)
    lz0 = float(np.cross(traj2.initial.r, traj2.initial.p)[2])
    lz1 = float(np.cross(traj2.final.r, traj2.final.p)[2])
    checks.append(("anisotropic_lz_drift_rel", abs((lz1 - lz0) / lz0), 1e-7))
    return checks


def _run_order() -> list[tuple[str, float, float, bool]]:
    state0 = make_inplane_state(1.0, 0.75, 0.0)
    spec = pure_kepler()
    t_orb = kepler_period(spec, state0)
    h_list = [t_orb / (200 * 2 ** k) for k in range(3)]
    rows = []
    for scheme, check in ((Scheme.VERLET2, lambda o: abs(o - 2.0) <= 0.2),
                          (Scheme.YOSHIDA3, lambda o: o >= 3.0)):
        order = measure_order(spec, state0, scheme, h_list).order
        rows.append((f"measured_order_{scheme.name}", order,
                     2.0 if scheme is Scheme.VERLET2 else 3.0, check(order)))
    return rows


def _run_coriolis(seed: int) -> list[tuple[str, float, float]]:
    from .geometry import (
        coriolis_correction,
        coriolis_correction_trig,
        rotation_matrix,
        rotation_matrix_dphi,
    )

    rng = np.random.default_rng(seed)
    worst_pair = worst_anti = worst_orth = worst_det = 0.0
    for _ in range(100):
        ang = FrameAngles(rng.uniform(0.0, math.pi), rng.uniform(0.0, 2.0 * math.pi))
        phi_dot = float(rng.normal())
        r = rng.normal(size=3)
        p = rng.normal(size=3)
        dh_mat = coriolis_correction(r, p, ang, phi_dot)
        dh_trig = coriolis_correction_trig(r, p, ang, phi_dot)
        worst_pair = max(worst_pair, abs(abs(dh_mat) - abs(dh_trig)))
        rot = rotation_matrix(ang)
        gen = rot.T @ rotation_matrix_dphi(ang)
        worst_anti = max(worst_anti, float(np.max(np.abs(gen + gen.T))))
        worst_orth = max(worst_orth, float(np.max(np.abs(rot.T @ rot - np.eye(3)))))
        worst_det = max(worst_det, abs(float(np.linalg.det(rot)) - 1.0))
    return [
        ("coriolis_matrix_vs_trig", worst_pair, 1e-12),
        ("rotation_generator_antisymmetry", worst_anti, 1e-12),
        ("rotation_orthogonality", worst_orth, 1e-12),
        ("rotation_determinant", worst_det, 1e-12),
    ]


def _run_reversibility() -> list[tuple[str, float, float]]:
    rows = []
    for name, spec, state0 in (
        ("reversibility_kepler", pure_kepler(), make_inplane_state(1.0, 0.75, 0.0)),
        ("reversibility_anisotropic", fixed_anisotropy(0.2),
         PhaseState(np.array([1.0, 0.0, 0.01]), np.array([0.0, 0.75, 0.0]))),
    ):
        t_orb = kepler_period(spec, state0)
        dt = t_orb / 1000.0
        span = 10_000 * dt
        fwd = integrate(spec, state0, 0.0, span, IntegratorConfig(dt=dt),
                        sampling=10_000)
        flipped = PhaseState(fwd.final.r.copy(), -fwd.final.p)
        back = integrate(spec, flipped, 0.0, span, IntegratorConfig(dt=dt),
                         sampling=10_000)
        dev = max(float(np.max(np.abs(back.final.r - state0.r))),
                  float(np.max(np.abs(-back.final.p - state0.p))))
        rows.append((name, dev, 1e-9))
    return rows


def _cmd_verify(args) -> int:
    failures = 0

    def table(rows):
        nonlocal failures
        for row in rows:
            if len(row) == 4:
                name, measured, limit, ok = row
            else:
                name, measured, limit = row
                ok = measured <= limit
            _verdict(name, measured, limit, ok)
            failures += 0 if ok else 1

    if args.suite in ("conservation", "all"):
        table(_run_conservation())
    if args.suite in ("order", "all"):
        table(_run_order())
    if args.suite in ("coriolis", "all"):
        table(_run_coriolis(args.seed))
    if args.suite == "all":
        table(_run_reversibility())
    print(f"verify: suite={args.suite} failures={failures}")
    return 0 if failures == 0 else 1


# ----------------------------------------------------------------- parser

def _add_grid_flags(sub, points_default: int) -> None:
    sub.add_argument("--theta-min", type=float, default=0.1,
                     help="smallest colatitude of the axis, radians (default 0.1)")
    sub.add_argument("--theta-max", type=float, default=math.pi / 2.0,
                     help="largest colatitude, radians (default pi/2)")
    sub.add_argument("--points", type=int, default=points_default,
                     help=f"number of grid points (default {points_default})")
    sub.add_argument("--workers", type=int, default=1,
                     help="parallel workers; results are byte-identical "
                          "for any value (default 1)")


def _add_output_flags(sub) -> None:
    sub.add_argument("--out", help="write run records as CSV to this path")
    sub.add_argument("--svg", help="write a cos(phi) vs cos(theta) plot to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aniskep",
        description="Kepler orbits under a slowly steered uniaxial anisotropy: "
                    "integrate, measure the apsis-line rotation, and compare "
                    "with the solid-angle prediction.  All quantities are in "
                    "simulation units with m = Q = 1; angles in radians.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "predict",
        help="closed-form geometric prediction for an axis loop",
        description="Print the swept solid angle, the anholonomy shift, and "
                    "the predicted apsis rotation for a constant-colatitude "
                    "turn (--theta) or a knotted loop file (--loop).")
    p.add_argument("--theta", type=float,
                   help="constant colatitude of the axis loop, radians in [0, pi]")
    p.add_argument("--loop",
                   help="JSON file with keys t, theta, phi: closed knot samples "
                        "of the axis path")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser(
        "simulate",
        help="run one experiment from a JSON config",
        description="Run the experiment described by a JSON config and print "
                    "its summary.  --out writes the sampled trajectory CSV "
                    "(t,x,y,z,px,py,pz,energy,ax,ay,az,lz).")
    p.add_argument("--config", required=True, help="path to the JSON config")
    p.add_argument("--out", help="trajectory CSV path (overrides config output.csv)")
    p.add_argument("--svg", help="SVG path (overrides config output.svg)")
    p.add_argument("--cycles", type=int, default=3000,
                   help="orbit cycles for the static-anisotropy variant "
                        "(default 3000)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser(
        "fig1",
        help="closed nucleus loop: dipole direction must come back unchanged",
        description="Carry the nucleus once around a closed circle over many "
                    "orbital periods and check that the orbit's dipole "
                    "direction returns to its initial value.")
    p.add_argument("--rho", type=float, default=0.3,
                   help="circle radius in units of the orbit scale (default 0.3)")
    p.add_argument("--t-loop-orbits", type=float, default=200.0,
                   help="loop duration in orbital periods (default 200)")
    p.add_argument("--steps-per-orbit", type=int, default=2000,
                   help="integrator steps per orbital period (default 2000)")
    p.add_argument("--settle-orbits", type=float, default=10.0,
                   help="static settle segments before/after, in periods "
                        "(default 10)")
    p.add_argument("--tol", type=float, default=0.02,
                   help="allowed dipole direction change, radians (default 0.02)")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_fig1)

    p = sub.add_parser(
        "fig2",
        help="static tilted start: no apsis rotation, bounded z oscillation",
        description="Integrate a slightly tilted orbit in a static easy plane "
                    "for many cycles; the apsis direction must not rotate and "
                    "the out-of-plane oscillation must stay bounded with zero "
                    "mean.")
    p.add_argument("--omega0", type=float, default=0.2,
                   help="anisotropy frequency (default 0.2)")
    p.add_argument("--cycles", type=int, default=3000,
                   help="orbit cycles to integrate (default 3000)")
    p.add_argument("--steps-per-orbit", type=int, default=2000,
                   help="integrator steps per orbital period (default 2000)")
    p.add_argument("--tol-apsis", type=float, default=0.05,
                   help="allowed in-plane apsis rotation, radians (default 0.05)")
    p.add_argument("--tol-z-mean", type=float, default=1e-3,
                   help="allowed stroboscopic z mean (default 1e-3)")
    p.add_argument("--tol-env-ratio", type=float, default=2.0,
                   help="allowed last/first decile z-envelope ratio (default 2)")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_fig2)

    p = sub.add_parser(
        "fig3",
        help="slow azimuthal turn sweeps: apsis rotation vs solid angle",
        description="Sweep the axis colatitude, turn the azimuth through a "
                    "full slow cycle at each point, and compare the measured "
                    "apsis rotation with the solid-angle prediction.  By "
                    "default both canonical series run (omega0=5 with "
                    "tau*omega0=50, and omega0=0.5 with tau*omega0=10).")
    p.add_argument("--omega0", type=float,
                   help="anisotropy frequency for a single custom series")
    p.add_argument("--tau-omega0", type=float,
                   help="turn timescale times omega0 for the custom series "
                        "(tau = value / omega0)")
    _add_grid_flags(p, points_default=9)
    p.add_argument("--steps-per-orbit", type=int, default=2000,
                   help="integrator steps per orbital period (default 2000)")
    p.add_argument("--settle-orbits", type=float, default=10.0,
                   help="static settle segments, in periods (default 10)")
    p.add_argument("--tol", type=float,
                   help="allowed |cos_phi - predicted| (default 0.05 strong "
                        "series, 0.10 weak series)")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_fig3)

    p = sub.add_parser(
        "sweep",
        help="colatitude sweep at one drive setting, CSV out",
        description="Run the slow-turn experiment over a colatitude grid and "
                    "write one CSV row per point (columns: theta, cos_theta, "
                    "omega0, tau, cos_phi_3d, cos_phi_projected, cos_phi_pred, "
                    "abs_err_3d, z_residual, energy_initial, energy_final, "
                    "steps, error_code).")
    p.add_argument("--omega0", type=float, required=True,
                   help="anisotropy frequency")
    p.add_argument("--tau-omega0", type=float, required=True,
                   help="turn timescale times omega0 (tau = value / omega0)")
    _add_grid_flags(p, points_default=9)
    p.add_argument("--steps-per-orbit", type=int, default=2000,
                   help="integrator steps per orbital period (default 2000)")
    p.add_argument("--settle-orbits", type=float, default=10.0,
                   help="static settle segments, in periods (default 10)")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", help="optional SVG plot path")
    p.add_argument("--tol", type=float, default=0.05,
                   help="exit 1 if any |cos_phi - predicted| exceeds this "
                        "(default 0.05)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser(
        "convergence",
        help="measure integrator convergence orders",
        description="Integrate one orbit at a ladder of halved step sizes "
                    "against a fine-step reference and print the fitted "
                    "global order per scheme.")
    p.add_argument("--scheme", choices=["VERLET2", "YOSHIDA3", "both"],
                   default="both", help="which scheme(s) to measure")
    p.add_argument("--base-steps", type=int, default=200,
                   help="coarsest resolution, steps per orbit (default 200)")
    p.add_argument("--sizes", type=int, default=4,
                   help="number of halved step sizes (default 4)")
    p.set_defaults(func=_cmd_convergence)

    p = sub.add_parser(
        "verify",
        help="run the built-in property suites",
        description="Conservation drifts over 100 orbits, measured integrator "
                    "orders, the dual-form rotating-frame correction identity "
                    "on random inputs, and (in 'all') time reversibility.  "
                    "Exit 1 on any failed check.")
    p.add_argument("--suite", choices=["conservation", "order", "coriolis", "all"],
                   default="all", help="which suite to run (default all)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"seed for randomized inputs (default {DEFAULT_SEED})")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help and usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
