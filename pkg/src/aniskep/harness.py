"""Experiment configs, preset runners, parallel sweeps, and CSV/SVG output.

Each preset runs one complete numerical experiment and condenses it into a
`RunRecord`:

  * `run_fig1`: electron bound to a nucleus dragged around a closed loop --
    the dipole direction must come back unchanged (null result);
  * `run_fig2`: static easy plane with a small out-of-plane kick -- the
    orbit stays put, the stroboscopic z-series oscillates about zero;
  * `run_fig3_point` / `sweep_theta`: slow azimuthal turn of the easy
    plane at colatitude theta -- the dipole rotates by the solid angle
    2*pi*(1 - cos theta) traced by the axis.

Every run brackets the drive with static settle segments (the protocols
clamp outside their window), measures the dipole direction as a window
average of the eccentricity-vector direction, and always derives the
predicted value from the `theory` module.  Sweep points are independent
and run on a thread pool; the compiled kernel releases the GIL, so worker
count changes wall time but never the bytes of the output.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import theory
from .diagnostics import OrbitElements, dipole_rotation, orbit_elements, runge_lenz
from .errors import ConfigError, DomainError, EmptyResult, SimulationError
from .geometry import FrameAngles, anisotropy_axis, angle_between, unit
from .hamiltonians import (
    HamiltonianSpec,
    KeplerParams,
    PhaseState,
    Variant,
    fixed_anisotropy,
    moving_nucleus,
    pure_kepler,
    rotating_anisotropy,
    total_energy,
)
from .integrator import (
    IntegratorConfig,
    Scheme,
    Trajectory,
    integrate,
    plan_steps,
)
from .protocols import AnisotropyProtocol, NucleusPath

MIN_STEPS_PER_ORBIT = 200
AVERAGE_ORBITS = 10  # dipole direction is averaged over this many end orbits

SWEEP_COLUMNS = [
    "theta", "cos_theta", "omega0", "tau", "cos_phi_3d", "cos_phi_projected",
    "cos_phi_pred", "abs_err_3d", "z_residual", "energy_initial",
    "energy_final", "steps", "error_code",
]

TRAJECTORY_COLUMNS = ["t", "x", "y", "z", "px", "py", "pz", "energy",
                      "ax", "ay", "az", "lz"]


def make_inplane_state(r0: float, v0: float, theta: float, m: float = 1.0) -> PhaseState:
    """Initial state lying in the plane normal to the axis at (theta, phi=0).

    Position (r0, 0, 0), momentum m*v0*(0, cos theta, -sin theta); both are
    orthogonal to the axis direction (0, sin theta, cos theta).
    """
    if not r0 > 0.0:
        raise DomainError(f"initial radius must be positive, got {r0}")
    if not v0 > 0.0:
        raise DomainError(f"initial speed must be positive, got {v0}")
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"colatitude must lie in [0, pi], got {theta}")
    return PhaseState(
        np.array([r0, 0.0, 0.0]),
        m * v0 * np.array([0.0, math.cos(theta), -math.sin(theta)]),
    )


_NUCLEUS_KEYS = {"rho", "t_loop_orbits"}
_OUTPUT_KEYS = {"csv", "svg"}
_TOP_KEYS = {"variant", "m", "q", "omega0", "r0", "v0", "theta", "tau",
             "settle_orbits", "steps_per_orbit", "scheme", "nucleus", "output"}


def _vec_or_scalar(name: str, value):
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, (list, tuple)) and len(value) == 3:
        return np.asarray(value, dtype=float)
    raise ConfigError(f"config key '{name}' must be a number or a 3-vector")


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment (JSON-loadable).

    ``r0``/``v0`` may be scalars (in-plane construction at colatitude
    ``theta``) or explicit 3-vectors; ``v0`` is a velocity, momentum is
    m*v0.  Unknown config keys are a hard error.
    """

    variant: Variant = Variant.ROTATING_ANISOTROPY
    m: float = 1.0
    q: float = 1.0
    omega0: float = 5.0
    r0: object = 1.0
    v0: object = 0.75
    theta: float = math.pi / 3.0
    tau: float = 10.0
    settle_orbits: float = 10.0
    steps_per_orbit: int = 2000
    scheme: Scheme = Scheme.YOSHIDA3
    nucleus_rho: float = 0.3
    nucleus_t_loop_orbits: float = 200.0
    out_csv: str | None = None
    out_svg: str | None = None

    def __post_init__(self):
        if self.settle_orbits < 0:
            raise ConfigError(f"settle_orbits must be >= 0, got {self.settle_orbits}")
        if self.steps_per_orbit < 1:
            raise ConfigError(f"steps_per_orbit must be >= 1, got {self.steps_per_orbit}")
        if self.steps_per_orbit < MIN_STEPS_PER_ORBIT:
            warnings.warn(
                f"steps_per_orbit={self.steps_per_orbit} is below "
                f"{MIN_STEPS_PER_ORBIT}; accuracy will suffer",
                stacklevel=2,
            )

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        unknown = set(d) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        kw = {}
        if "variant" in d:
            try:
                kw["variant"] = Variant[str(d["variant"])]
            except KeyError:
                raise ConfigError(
                    f"unknown variant '{d['variant']}'; expected one of "
                    f"{[v.name for v in Variant]}"
                ) from None
        if "scheme" in d:
            try:
                kw["scheme"] = Scheme[str(d["scheme"])]
            except KeyError:
                raise ConfigError(
                    f"unknown scheme '{d['scheme']}'; expected one of "
                    f"{[s.name for s in Scheme]}"
                ) from None
        for key in ("m", "q", "omega0", "theta", "tau", "settle_orbits"):
            if key in d:
                kw[key] = float(d[key])
        if "steps_per_orbit" in d:
            kw["steps_per_orbit"] = int(d["steps_per_orbit"])
        for key in ("r0", "v0"):
            if key in d:
                kw[key] = _vec_or_scalar(key, d[key])
        if "nucleus" in d:
            sub = d["nucleus"]
            unknown = set(sub) - _NUCLEUS_KEYS
            if unknown:
                raise ConfigError(
                    f"unknown config key(s) under 'nucleus': {', '.join(sorted(unknown))}"
                )
            if "rho" in sub:
                kw["nucleus_rho"] = float(sub["rho"])
            if "t_loop_orbits" in sub:
                kw["nucleus_t_loop_orbits"] = float(sub["t_loop_orbits"])
        if "output" in d:
            sub = d["output"]
            unknown = set(sub) - _OUTPUT_KEYS
            if unknown:
                raise ConfigError(
                    f"unknown config key(s) under 'output': {', '.join(sorted(unknown))}"
                )
            kw["out_csv"] = sub.get("csv")
            kw["out_svg"] = sub.get("svg")
        return cls(**kw)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"config {path} must be a JSON object")
        return cls.from_dict(doc)

    def initial_state(self, theta: float | None = None) -> PhaseState:
        """Explicit vectors if given, else the in-plane construction."""
        if isinstance(self.r0, np.ndarray) or isinstance(self.v0, np.ndarray):
            if not (isinstance(self.r0, np.ndarray) and isinstance(self.v0, np.ndarray)):
                raise ConfigError("give r0 and v0 both as vectors or both as scalars")
            return PhaseState(self.r0.copy(), self.m * self.v0)
        return make_inplane_state(self.r0, self.v0, self.theta if theta is None else theta,
                                  self.m)


@dataclass
class RunRecord:
    """Condensed outcome of one experiment run.

    The sweep CSV columns are the first thirteen fields in order; presets
    that have no azimuthal drive store NaN for ``tau`` and their extra
    measurements under ``details``.
    """

    theta: float
    cos_theta: float
    omega0: float
    tau: float
    cos_phi_3d: float
    cos_phi_projected: float
    cos_phi_pred: float
    abs_err_3d: float
    z_residual: float
    energy_initial: float
    energy_final: float
    steps: int
    error_code: str = ""
    wall_time: float = 0.0
    elements_initial: OrbitElements | None = None
    elements_final: OrbitElements | None = None
    details: dict = field(default_factory=dict)

    def summary_lines(self) -> list[str]:
        out = [
            f"theta={self.theta!r}",
            f"cos_phi_3d={self.cos_phi_3d!r}",
            f"cos_phi_projected={self.cos_phi_projected!r}",
            f"cos_phi_pred={self.cos_phi_pred!r}",
            f"abs_err_3d={self.abs_err_3d!r}",
            f"z_residual={self.z_residual!r}",
            f"energy_initial={self.energy_initial!r}",
            f"energy_final={self.energy_final!r}",
            f"steps={self.steps}",
            f"wall_time_s={self.wall_time:.3f}",
        ]
        for key in sorted(self.details):
            if not key.startswith("_"):
                out.append(f"{key}={self.details[key]!r}")
        if self.error_code:
            out.append(f"error_code={self.error_code}")
        return out


def _mean_direction(vectors: np.ndarray) -> np.ndarray:
    """Average of unit vectors, renormalized."""
    units = vectors / np.linalg.norm(vectors, axis=1)[:, None]
    return unit(units.mean(axis=0))


def _runge_lenz_series(r: np.ndarray, p: np.ndarray, params: KeplerParams) -> np.ndarray:
    ell = np.cross(r, p)
    radii = np.linalg.norm(r, axis=1)
    return np.cross(p, ell) - params.m * params.q * r / radii[:, None]


def _window_dipole(traj: Trajectory, mask: np.ndarray, params: KeplerParams) -> np.ndarray:
    """Window-averaged unit eccentricity vector over masked samples."""
    r = traj.positions[mask]
    p = traj.momenta[mask]
    if r.shape[0] == 0:
        raise SimulationError("empty averaging window for the dipole direction")
    return _mean_direction(_runge_lenz_series(r, p, params))


def _steps_per_orbit_effective(t_orb: float, omega0: float, requested: int) -> int:
    """Steps per orbital period honoring the anisotropy timescale too."""
    fast = t_orb if omega0 <= 0.0 else min(t_orb, 2.0 * math.pi / omega0)
    return int(math.ceil(requested * t_orb / fast))


def run_fig3_point(theta: float, omega0: float, tau: float,
                   config: ExperimentConfig | None = None,
                   keep_trajectory: bool = False) -> RunRecord:
    """One slow azimuthal turn of the easy plane at colatitude theta.

    Integrates settle + tanh turn + settle, measures the dipole rotation
    between the window-averaged pre- and post-drive directions, and
    compares with the enclosed solid angle.  With ``keep_trajectory`` the
    sampled trajectory and Hamiltonian land in ``details`` under
    underscore keys (excluded from summaries and CSV).
    """
    cfg = config or ExperimentConfig()
    protocol = AnisotropyProtocol.tanh_ramp(theta, tau)
    spec = rotating_anisotropy(omega0, protocol, cfg.m, cfg.q)
    state0 = cfg.initial_state(theta=theta)
    elements0 = orbit_elements(state0, spec.kepler)
    t_orb = elements0.period
    n_per_orbit = _steps_per_orbit_effective(t_orb, omega0, cfg.steps_per_orbit)
    dt = t_orb / n_per_orbit
    settle = cfg.settle_orbits * t_orb
    t0 = -5.0 * tau - settle
    t1 = 5.0 * tau + settle
    avg = min(cfg.settle_orbits, AVERAGE_ORBITS) * t_orb
    if avg <= 0.0:
        raise ConfigError("settle_orbits must be > 0 to measure settled dipoles")

    start = time.perf_counter()
    traj = integrate(spec, state0, t0, t1, IntegratorConfig(dt=dt, scheme=cfg.scheme))
    wall = time.perf_counter() - start

    times = traj.times
    eps = 0.5 * dt
    pre = (times >= -5.0 * tau - avg - eps) & (times <= -5.0 * tau + eps)
    post = times >= t1 - avg - eps
    a_i = _window_dipole(traj, pre, spec.kepler)
    a_f = _window_dipole(traj, post, spec.kepler)

    th_end, ph_end, _ = protocol.eval(t1)
    axis_end = anisotropy_axis(FrameAngles(th_end, ph_end))
    rot = dipole_rotation(a_i, a_f, plane_normal=axis_end)
    z_res = float(np.max(np.abs(traj.positions[post] @ axis_end)))
    pred = theory.predicted_cos_phi(theta)

    details = {"signed_phi_in_plane": rot.signed_phi_in_plane,
               "phi_unsigned": rot.phi_unsigned}
    if keep_trajectory:
        details["_trajectory"] = traj
        details["_spec"] = spec
    return RunRecord(
        theta=theta,
        cos_theta=math.cos(theta),
        omega0=omega0,
        tau=tau,
        cos_phi_3d=rot.cos_phi,
        cos_phi_projected=math.cos(rot.signed_phi_in_plane),
        cos_phi_pred=pred,
        abs_err_3d=abs(rot.cos_phi - pred),
        z_residual=z_res,
        energy_initial=total_energy(spec, traj.initial, t0),
        energy_final=total_energy(spec, traj.final, t1),
        steps=plan_steps(t0, t1, dt),
        wall_time=wall,
        elements_initial=elements0,
        elements_final=orbit_elements(traj.final, spec.kepler),
        details=details,
    )


def run_fig2(config: ExperimentConfig | None = None, n_cycles: int = 3000,
             keep_trajectory: bool = False) -> RunRecord:
    """Static easy plane, slightly tilted start: nothing should rotate.

    The orbit is sampled once per period; the record carries the in-plane
    apsis rotation and the stroboscopic z-series statistics.
    """
    cfg = config or ExperimentConfig(variant=Variant.FIXED_ANISOTROPY, omega0=0.2,
                                     r0=np.array([1.0, 0.0, 0.01]),
                                     v0=np.array([0.0, 0.75, 0.0]))
    if cfg.variant is not Variant.FIXED_ANISOTROPY:
        raise ConfigError("this preset needs variant=FIXED_ANISOTROPY")
    spec = fixed_anisotropy(cfg.omega0, cfg.m, cfg.q)
    state0 = cfg.initial_state()
    elements0 = orbit_elements(state0, spec.kepler)
    t_orb = elements0.period
    n_per_orbit = _steps_per_orbit_effective(t_orb, cfg.omega0, cfg.steps_per_orbit)
    dt = t_orb / n_per_orbit
    t1 = n_cycles * t_orb

    start = time.perf_counter()
    traj = integrate(spec, state0, 0.0, t1,
                     IntegratorConfig(dt=dt, scheme=cfg.scheme), sampling=n_per_orbit)
    wall = time.perf_counter() - start

    a_series = _runge_lenz_series(traj.positions, traj.momenta, spec.kepler)
    rot = dipole_rotation(a_series[0], a_series[-1], plane_normal=np.array([0.0, 0.0, 1.0]))
    z = traj.positions[:, 2]
    decile = max(1, len(z) // 10)
    env_first = float(np.max(np.abs(z[:decile])))
    env_last = float(np.max(np.abs(z[-decile:])))

    details = {
        "apsis_rotation_rad": rot.signed_phi_in_plane,
        "z_mean": float(np.mean(z)),
        "z_env_first_decile": env_first,
        "z_env_last_decile": env_last,
    }
    if keep_trajectory:
        details["_trajectory"] = traj
        details["_spec"] = spec
    return RunRecord(
        theta=0.0,
        cos_theta=1.0,
        omega0=cfg.omega0,
        tau=math.nan,
        cos_phi_3d=rot.cos_phi,
        cos_phi_projected=math.cos(rot.signed_phi_in_plane),
        cos_phi_pred=1.0,
        abs_err_3d=abs(rot.cos_phi - 1.0),
        z_residual=env_last,
        energy_initial=total_energy(spec, traj.initial, 0.0),
        energy_final=total_energy(spec, traj.final, t1),
        steps=plan_steps(0.0, t1, dt),
        wall_time=wall,
        elements_initial=elements0,
        elements_final=orbit_elements(traj.final, spec.kepler),
        details=details,
    )


def run_fig1(config: ExperimentConfig | None = None,
             keep_trajectory: bool = False) -> RunRecord:
    """Closed nucleus loop: the dipole direction must return unchanged.

    The electron starts on a bound orbit around the nucleus's initial
    position; the nucleus is carried once around a circle over
    ``t_loop_orbits`` periods with settle segments on both sides.  The
    dipole is always measured relative to the instantaneous nucleus
    position.
    """
    cfg = config or ExperimentConfig(variant=Variant.MOVING_NUCLEUS, omega0=0.0)
    if cfg.variant is not Variant.MOVING_NUCLEUS:
        raise ConfigError("this preset needs variant=MOVING_NUCLEUS")
    rel_state = cfg.initial_state(theta=0.0)
    elements0 = orbit_elements(rel_state, KeplerParams(cfg.m, cfg.q))
    t_orb = elements0.period
    t_loop = cfg.nucleus_t_loop_orbits * t_orb
    if cfg.nucleus_rho > 0.0:
        path = NucleusPath.circle((0.0, 0.0, 0.0), cfg.nucleus_rho, t_loop)
        path.warn_if_not_adiabatic(t_orb)
    else:
        path = NucleusPath.static((0.0, 0.0, 0.0))
    spec = moving_nucleus(path, cfg.m, cfg.q)
    state0 = PhaseState(rel_state.r + path.position(0.0), rel_state.p)
    dt = t_orb / cfg.steps_per_orbit
    settle = cfg.settle_orbits * t_orb
    t0 = -settle
    t1 = t_loop + settle
    avg = min(cfg.settle_orbits, AVERAGE_ORBITS) * t_orb
    if avg <= 0.0:
        raise ConfigError("settle_orbits must be > 0 to measure settled dipoles")

    start = time.perf_counter()
    traj = integrate(spec, state0, t0, t1, IntegratorConfig(dt=dt, scheme=cfg.scheme))
    wall = time.perf_counter() - start

    rel_r = traj.positions - path.positions_at(traj.times)
    a_series = _runge_lenz_series(rel_r, traj.momenta, spec.kepler)
    times = traj.times
    eps = 0.5 * dt
    pre = (times >= -avg - eps) & (times <= eps)
    post = times >= t1 - avg - eps
    a_i = _mean_direction(a_series[pre])
    a_f = _mean_direction(a_series[post])
    angle = angle_between(a_i, a_f)
    z_res = float(np.max(np.abs(rel_r[post][:, 2])))

    details = {"dipole_angle_change_rad": angle,
               "nucleus_rho": cfg.nucleus_rho,
               "t_loop_orbits": cfg.nucleus_t_loop_orbits}
    if keep_trajectory:
        details["_trajectory"] = traj
        details["_spec"] = spec
    return RunRecord(
        theta=0.0,
        cos_theta=1.0,
        omega0=0.0,
        tau=math.nan,
        cos_phi_3d=float(np.clip(a_i @ a_f, -1.0, 1.0)),
        cos_phi_projected=float(np.clip(a_i @ a_f, -1.0, 1.0)),
        cos_phi_pred=1.0,
        abs_err_3d=abs(float(np.clip(a_i @ a_f, -1.0, 1.0)) - 1.0),
        z_residual=z_res,
        energy_initial=total_energy(spec, traj.initial, t0),
        energy_final=total_energy(spec, traj.final, t1),
        steps=plan_steps(t0, t1, dt),
        wall_time=wall,
        elements_initial=elements0,
        elements_final=orbit_elements(
            PhaseState(rel_r[-1].copy(), traj.momenta[-1].copy()),
            KeplerParams(cfg.m, cfg.q)),
        details=details,
    )


def sweep_theta(theta_grid, omega0: float, tau: float,
                config: ExperimentConfig | None = None, workers: int = 1) -> list[RunRecord]:
    """Run `run_fig3_point` over a colatitude grid, in parallel, in order.

    A failing point becomes a row with its error class recorded; the sweep
    continues.  Results are ordered by the grid regardless of scheduling,
    and their values do not depend on the worker count.
    """
    grid = [float(t) for t in np.atleast_1d(np.asarray(theta_grid, dtype=float))]
    if not grid:
        raise DomainError("sweep grid must be non-empty")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")

    def one(theta: float) -> RunRecord:
        try:
            return run_fig3_point(theta, omega0, tau, config)
        except (SimulationError, DomainError, ConfigError) as exc:
            return RunRecord(
                theta=theta, cos_theta=math.cos(theta), omega0=omega0, tau=tau,
                cos_phi_3d=math.nan, cos_phi_projected=math.nan,
                cos_phi_pred=theory.predicted_cos_phi(theta),
                abs_err_3d=math.nan, z_residual=math.nan,
                energy_initial=math.nan, energy_final=math.nan,
                steps=0, error_code=type(exc).__name__,
            )

    if workers == 1:
        return [one(t) for t in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, grid))


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(records: list[RunRecord], path) -> None:
    """Sweep CSV: fixed column order, repr floats (exact round-trip)."""
    if not records:
        raise EmptyResult("no records to write")
    lines = [",".join(SWEEP_COLUMNS)]
    for rec in records:
        row = [_fmt(getattr(rec, col)) for col in SWEEP_COLUMNS[:-1]]
        row.append(rec.error_code)
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path) -> list[dict]:
    """Inverse of `write_csv` for the numeric fields (used by round-trip tests)."""
    text = Path(path).read_text().strip().split("\n")
    header = text[0].split(",")
    out = []
    for line in text[1:]:
        cells = line.split(",")
        row: dict = {}
        for key, cell in zip(header, cells):
            if key == "error_code":
                row[key] = cell
            elif key == "steps":
                row[key] = int(cell)
            else:
                row[key] = float(cell)
        out.append(row)
    return out


def write_trajectory_csv(traj: Trajectory, spec: HamiltonianSpec, path) -> None:
    """Time series dump: state, energy, eccentricity vector, L_z per sample.

    For a moving nucleus the eccentricity vector is computed relative to
    the instantaneous nucleus position (that is the conserved quantity).
    """
    if len(traj) == 0:
        raise EmptyResult("no trajectory samples to write")
    r = traj.positions
    p = traj.momenta
    if spec.variant is Variant.MOVING_NUCLEUS:
        r_rel = r - spec.nucleus_path.positions_at(traj.times)
    else:
        r_rel = r
    a_series = _runge_lenz_series(r_rel, p, spec.kepler)
    lz = np.cross(r, p)[:, 2]
    energy = 0.5 * np.einsum("ij,ij->i", p, p) / spec.kepler.m
    energy -= spec.kepler.q / np.linalg.norm(r_rel, axis=1)
    if spec.variant is Variant.FIXED_ANISOTROPY and spec.omega0 > 0.0:
        energy += 0.5 * spec.kepler.m * spec.omega0**2 * r[:, 2] ** 2
    elif spec.variant is Variant.ROTATING_ANISOTROPY:
        half_mw2 = 0.5 * spec.kepler.m * spec.omega0**2
        for i, t in enumerate(traj.times):
            th, ph, _ = spec.protocol.eval(t)
            axis = anisotropy_axis(FrameAngles(th, ph))
            energy[i] += half_mw2 * float(r[i] @ axis) ** 2
    lines = [",".join(TRAJECTORY_COLUMNS)]
    for i in range(len(traj)):
        cells = [traj.times[i], r[i, 0], r[i, 1], r[i, 2], p[i, 0], p[i, 1], p[i, 2],
                 energy[i], a_series[i, 0], a_series[i, 1], a_series[i, 2], lz[i]]
        lines.append(",".join(_fmt(c) for c in cells))
    Path(path).write_text("\n".join(lines) + "\n")


def _svg_coords(x: float, y: float, box: tuple[float, float, float, float],
                lim: tuple[float, float, float, float]) -> tuple[float, float]:
    x0, y0, w, h = box
    xmin, xmax, ymin, ymax = lim
    sx = x0 + (x - xmin) / (xmax - xmin) * w
    sy = y0 + h - (y - ymin) / (ymax - ymin) * h
    return sx, sy


def emit_svg(records: list[RunRecord], path) -> None:
    """Static scatter of measured and predicted cos(phi) against cos(theta)."""
    if not records:
        raise EmptyResult("no records to plot")
    width, height = 640, 440
    box = (70.0, 20.0, width - 90.0, height - 80.0)
    xs = [rec.cos_theta for rec in records]
    lim = (min(min(xs), 0.0) - 0.05, max(max(xs), 1.0) + 0.05, -1.15, 1.15)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    x0, y0, w, h = box
    parts.append(f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" '
                 'fill="none" stroke="black"/>')
    for tick in (-1.0, -0.5, 0.0, 0.5, 1.0):
        sx, sy = _svg_coords(0.0, tick, box, lim)
        parts.append(f'<line x1="{x0 - 4:.1f}" y1="{sy:.1f}" x2="{x0:.1f}" y2="{sy:.1f}" '
                     'stroke="black"/>')
        parts.append(f'<text x="{x0 - 8:.1f}" y="{sy + 4:.1f}" font-size="12" '
                     f'text-anchor="end">{tick:g}</text>')
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        if lim[0] <= tick <= lim[1]:
            sx, _ = _svg_coords(tick, 0.0, box, lim)
            parts.append(f'<line x1="{sx:.1f}" y1="{y0 + h:.1f}" x2="{sx:.1f}" '
                         f'y2="{y0 + h + 4:.1f}" stroke="black"/>')
            parts.append(f'<text x="{sx:.1f}" y="{y0 + h + 18:.1f}" font-size="12" '
                         f'text-anchor="middle">{tick:g}</text>')
    parts.append(f'<text x="{x0 + w / 2:.1f}" y="{height - 12}" font-size="14" '
                 'text-anchor="middle">cos(theta)</text>')
    parts.append(f'<text x="18" y="{y0 + h / 2:.1f}" font-size="14" text-anchor="middle" '
                 f'transform="rotate(-90 18 {y0 + h / 2:.1f})">cos(phi)</text>')

    curve = []
    for c in np.linspace(max(lim[0], 0.0), min(lim[1], 1.0), 200):
        theta = math.acos(float(np.clip(c, -1.0, 1.0)))
        sx, sy = _svg_coords(c, theory.predicted_cos_phi(theta), box, lim)
        curve.append(f"{sx:.2f},{sy:.2f}")
    parts.append(f'<polyline points="{" ".join(curve)}" fill="none" stroke="#888888"/>')

    for rec in records:
        if math.isnan(rec.cos_phi_3d):
            continue
        sx, sy = _svg_coords(rec.cos_theta, rec.cos_phi_3d, box, lim)
        parts.append(f'<circle cx="{sx:.2f}" cy="{sy:.2f}" r="4" fill="#1f5fbf"/>')
        sx, sy = _svg_coords(rec.cos_theta, rec.cos_phi_pred, box, lim)
        parts.append(f'<path d="M {sx - 4:.2f} {sy - 4:.2f} L {sx + 4:.2f} {sy + 4:.2f} '
                     f'M {sx - 4:.2f} {sy + 4:.2f} L {sx + 4:.2f} {sy - 4:.2f}" '
                     'stroke="#bf3f1f" fill="none"/>')

    lx, ly = x0 + w - 180.0, y0 + 16.0
    parts.append(f'<circle cx="{lx:.1f}" cy="{ly:.1f}" r="4" fill="#1f5fbf"/>')
    parts.append(f'<text x="{lx + 10:.1f}" y="{ly + 4:.1f}" font-size="12">measured</text>')
    parts.append(f'<path d="M {lx - 4:.1f} {ly + 12:.1f} L {lx + 4:.1f} {ly + 20:.1f} '
                 f'M {lx - 4:.1f} {ly + 20:.1f} L {lx + 4:.1f} {ly + 12:.1f}" '
                 'stroke="#bf3f1f" fill="none"/>')
    parts.append(f'<text x="{lx + 10:.1f}" y="{ly + 20:.1f}" font-size="12">'
                 'predicted</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
