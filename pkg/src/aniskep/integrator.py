"""Symplectic time stepping: velocity Verlet and its triple-jump composition.

Both schemes are splittings of kick/drift maps.  One Verlet step of size h
from time t is

    kick(h/2, force at t) -> drift(h) -> kick(h/2, force at t + h)

with the closing force reused as the opening force of the next step, so a
march costs one force evaluation per sub-step.  The composed scheme
applies three Verlet sub-steps of sizes (a1 h, a2 h, a1 h) with

    a1 = 1 / (2 - 2**(1/3)),   a2 = 1 - 2 a1 = -2**(1/3) / (2 - 2**(1/3)),

which cancels the leading error term; the middle sub-step runs backward.
For time-dependent systems the sub-step forces are evaluated at the
cumulative intermediate times, so the same code covers driven runs.

`integrate` marches a fixed grid from t0 toward t1 (the final step is
shortened to land exactly on t1; backward spans are allowed) and records
samples either every ``stride`` steps or stroboscopically at multiples of
a period.  The heavy lifting runs in a compiled kernel when available;
``use_kernel=False`` forces the plain-Python path, which follows the same
splitting and is cross-checked against the kernel in the test suite.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, StepBudgetExceeded
from .hamiltonians import HamiltonianSpec, PhaseState, Variant, force
from .protocols import ProtocolKind

try:
    from . import _kernels
except ImportError:  # pragma: no cover - exercised only without numba
    _kernels = None

_CBRT2 = 2.0 ** (1.0 / 3.0)
YOSHIDA_A1 = 1.0 / (2.0 - _CBRT2)
YOSHIDA_A2 = 1.0 - 2.0 * YOSHIDA_A1  # == -2**(1/3)/(2 - 2**(1/3)), and the sum stays exactly 1

DEFAULT_STEPS_PER_PERIOD = 2000
_COARSE_FACTOR = 100.0  # warn when dt exceeds (shortest timescale)/100


class Scheme(Enum):
    VERLET2 = "VERLET2"
    YOSHIDA3 = "YOSHIDA3"

    @property
    def coefficients(self) -> np.ndarray:
        if self is Scheme.VERLET2:
            return np.array([1.0])
        return np.array([YOSHIDA_A1, YOSHIDA_A2, YOSHIDA_A1])


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    scheme: Scheme = Scheme.YOSHIDA3
    max_steps: int = 50_000_000

    def __post_init__(self):
        if not self.dt > 0.0:
            raise DomainError(f"step size must be positive, got {self.dt}")
        if not self.max_steps > 0:
            raise DomainError(f"step budget must be positive, got {self.max_steps}")


@dataclass(frozen=True)
class Stroboscopic:
    """Sampling descriptor: record the grid point nearest each n*period."""

    period: float

    def __post_init__(self):
        if not self.period > 0.0:
            raise DomainError(f"stroboscopic period must be positive, got {self.period}")


@dataclass(frozen=True)
class Trajectory:
    """Sampled states of one run; times are strictly monotonic."""

    times: np.ndarray
    positions: np.ndarray
    momenta: np.ndarray
    sampling: object = 1

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        r = np.asarray(self.positions, dtype=float)
        p = np.asarray(self.momenta, dtype=float)
        n = t.shape[0]
        if t.ndim != 1 or r.shape != (n, 3) or p.shape != (n, 3) or n < 1:
            raise DomainError("trajectory arrays must be (n,), (n,3), (n,3) with n >= 1")
        dt = np.diff(t)
        if dt.size and not (np.all(dt > 0.0) or np.all(dt < 0.0)):
            raise DomainError("trajectory times must be strictly monotonic")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", r)
        object.__setattr__(self, "momenta", p)

    def __len__(self) -> int:
        return self.times.shape[0]

    def state(self, i: int) -> PhaseState:
        return PhaseState(self.positions[i].copy(), self.momenta[i].copy())

    @property
    def initial(self) -> PhaseState:
        return self.state(0)

    @property
    def final(self) -> PhaseState:
        return self.state(len(self) - 1)


def _substep_times(t_base: float, h: float, coeffs: np.ndarray, t_close: float) -> list[float]:
    """End times of each sub-step; the last one is pinned to t_close."""
    out = []
    local = 0.0
    for j in range(len(coeffs)):
        local += coeffs[j] * h
        out.append(t_close if j == len(coeffs) - 1 else t_base + local)
    return out


def _compose_step(spec: HamiltonianSpec, r: np.ndarray, p: np.ndarray, f: np.ndarray,
                  t_base: float, h: float, coeffs: np.ndarray, t_close: float):
    """One composed step in place; returns the closing force (cache)."""
    inv_m = 1.0 / spec.kepler.m
    ends = _substep_times(t_base, h, coeffs, t_close)
    for c, te in zip(coeffs, ends):
        hs = c * h
        p += 0.5 * hs * f
        r += hs * inv_m * p
        f = force(spec, r, te)
        p += 0.5 * hs * f
    return f


def _single_step(spec: HamiltonianSpec, state: PhaseState, t: float, h: float,
                 coeffs: np.ndarray) -> PhaseState:
    if h == 0.0:
        raise DomainError("step size must be nonzero")
    r = state.r.copy()
    p = state.p.copy()
    f = force(spec, r, t)
    _compose_step(spec, r, p, f, t, h, coeffs, t + h)
    return PhaseState(r, p)


def verlet_step(spec: HamiltonianSpec, state: PhaseState, t: float, h: float) -> PhaseState:
    """One velocity-Verlet step of (possibly negative) size h from time t."""
    return _single_step(spec, state, t, h, Scheme.VERLET2.coefficients)


def yoshida3_step(spec: HamiltonianSpec, state: PhaseState, t: float, h: float) -> PhaseState:
    """One triple-jump composed step of (possibly negative) size h from time t."""
    return _single_step(spec, state, t, h, Scheme.YOSHIDA3.coefficients)


def kepler_period(spec: HamiltonianSpec, state: PhaseState, t: float = 0.0) -> float:
    """Orbital period from the Coulomb-only energy; NaN for unbound states."""
    m, q = spec.kepler.m, spec.kepler.q
    sep = state.r
    if spec.variant is Variant.MOVING_NUCLEUS:
        sep = state.r - spec.nucleus_path.position(t)
    e = float(state.p @ state.p) / (2.0 * m) - q / math.sqrt(float(sep @ sep))
    if e >= 0.0:
        return math.nan
    a = -q / (2.0 * e)
    return 2.0 * math.pi * math.sqrt(m * a**3 / q)


def default_dt(spec: HamiltonianSpec, state: PhaseState, t: float = 0.0,
               steps_per_period: int = DEFAULT_STEPS_PER_PERIOD) -> float:
    """min(orbital period, anisotropy period) / steps_per_period."""
    scale = kepler_period(spec, state, t)
    if math.isnan(scale):
        raise DomainError("cannot pick a default step size for an unbound state")
    if spec.omega0 > 0.0:
        scale = min(scale, 2.0 * math.pi / spec.omega0)
    return scale / steps_per_period


def _warn_if_coarse(spec: HamiltonianSpec, state: PhaseState, t0: float, dt: float) -> None:
    scales = []
    t_orb = kepler_period(spec, state, t0)
    if not math.isnan(t_orb):
        scales.append(t_orb)
    if spec.omega0 > 0.0:
        scales.append(2.0 * math.pi / spec.omega0)
    if scales and dt > min(scales) / _COARSE_FACTOR:
        warnings.warn(
            f"dt={dt:.4g} resolves the shortest timescale {min(scales):.4g} with fewer "
            f"than {_COARSE_FACTOR:.0f} steps; expect degraded accuracy",
            stacklevel=3,
        )


def _sample_indices(n_steps: int, sampling, dt: float) -> np.ndarray:
    if isinstance(sampling, Stroboscopic):
        per = sampling.period / dt
        count = int(math.floor(n_steps / per + 1e-9)) + 1
        idx = np.rint(np.arange(count) * per).astype(np.int64)
        idx = idx[idx <= n_steps]
        if idx.size == 0 or idx[-1] != n_steps:
            idx = np.append(idx, n_steps)
        return np.unique(idx)
    stride = int(sampling)
    if stride < 1:
        raise DomainError(f"sampling stride must be >= 1, got {sampling}")
    idx = np.arange(0, n_steps + 1, stride, dtype=np.int64)
    if idx[-1] != n_steps:
        idx = np.append(idx, n_steps)
    return idx


def _pack_protocol(spec: HamiltonianSpec):
    proto = spec.protocol
    empty = (np.zeros(0), np.zeros((4, 0)), np.zeros((4, 0)))
    if proto is None or spec.variant is not Variant.ROTATING_ANISOTROPY:
        return 0, np.zeros(2), *empty
    if proto.kind is ProtocolKind.CONSTANT:
        return 0, np.array([proto.theta, proto.phi]), *empty
    if proto.kind is ProtocolKind.TANH_RAMP:
        return 1, np.array([proto.theta, proto.tau]), *empty
    kx = np.ascontiguousarray(proto._theta_pp.x, dtype=float)
    kct = np.ascontiguousarray(proto._theta_pp.c, dtype=float)
    kcp = np.ascontiguousarray(proto._phi_pp.c, dtype=float)
    return 2, np.zeros(2), kx, kct, kcp


def _pack_path(spec: HamiltonianSpec):
    path = spec.nucleus_path
    if path is None or spec.variant is not Variant.MOVING_NUCLEUS:
        return 0, np.zeros(3)
    if path.kind.value == 0:
        return 0, path.r0.astype(float)
    e1, e2 = path._basis
    params = np.concatenate([path.center, [path.rho, path.t_loop], e1, e2])
    return 1, params


def _integrate_python(spec, r, p, t0, t_end, dts, n_steps, h_last, coeffs,
                      sample_idx, out_t, out_r, out_p):
    f = force(spec, r, t0)
    k = 0
    nrec = sample_idx.shape[0]
    for i in range(n_steps):
        if k < nrec and sample_idx[k] == i:
            out_t[k] = t0 + i * dts
            out_r[k] = r
            out_p[k] = p
            k += 1
        last = i == n_steps - 1
        h = h_last if last else dts
        t_base = t0 + i * dts
        f = _compose_step(spec, r, p, f, t_base, h, coeffs,
                          t_end if last else t_base + h)
    if k < nrec and sample_idx[k] == n_steps:
        out_t[k] = t_end
        out_r[k] = r
        out_p[k] = p
        k += 1
    return k


def plan_steps(t0: float, t1: float, dt: float) -> int:
    """Number of fixed steps covering [t0, t1] (the last one may be short)."""
    return max(1, int(math.ceil(abs(t1 - t0) / dt - 1e-9)))


def integrate(spec: HamiltonianSpec, state0: PhaseState, t0: float, t1: float,
              config: IntegratorConfig, sampling=1, use_kernel: bool | None = None) -> Trajectory:
    """March from t0 to t1 on a fixed grid and return the sampled trajectory.

    ``sampling`` is either an integer stride (record every n-th step) or a
    `Stroboscopic` period; initial and final states are always included.
    Spans running backward (t1 < t0) use negative steps of the same size.
    """
    span = t1 - t0
    if span == 0.0:
        one = np.array([t0])
        return Trajectory(one, state0.r[None, :].copy(), state0.p[None, :].copy(), sampling)
    dt = config.dt
    n_steps = plan_steps(t0, t1, dt)
    if n_steps > config.max_steps:
        raise StepBudgetExceeded(
            f"span {abs(span):.6g} at dt={dt:.6g} needs {n_steps} steps "
            f"(budget {config.max_steps})"
        )
    _warn_if_coarse(spec, state0, t0, dt)
    sign = 1.0 if span > 0 else -1.0
    dts = sign * dt
    h_last = span - (n_steps - 1) * dts
    sample_idx = _sample_indices(n_steps, sampling, dt)
    coeffs = config.scheme.coefficients
    n_out = sample_idx.shape[0]
    out_t = np.empty(n_out)
    out_r = np.empty((n_out, 3))
    out_p = np.empty((n_out, 3))

    if use_kernel is None:
        use_kernel = _kernels is not None
    if use_kernel and _kernels is not None:
        pkind, pparams, kx, kct, kcp = _pack_protocol(spec)
        nkind, nparams = _pack_path(spec)
        status, k, fail_t, fail_r = _kernels.integrate_kernel(
            int(spec.variant), spec.kepler.m, spec.kepler.q, spec.omega0,
            spec.r_min_guard, pkind, pparams, kx, kct, kcp, nkind, nparams,
            state0.r, state0.p, t0, t1, dts, n_steps, h_last,
            coeffs, sample_idx, out_t, out_r, out_p)
        if status == _kernels.STATUS_MIN_RADIUS:
            from .errors import MinRadiusViolation

            raise MinRadiusViolation(fail_t, fail_r, spec.r_min_guard)
    else:
        k = _integrate_python(spec, state0.r.copy(), state0.p.copy(), t0, t1,
                              dts, n_steps, h_last, coeffs, sample_idx,
                              out_t, out_r, out_p)
    return Trajectory(out_t[:k], out_r[:k], out_p[:k], sampling)


@dataclass(frozen=True)
class OrderMeasurement:
    """Result of a step-size convergence study."""

    order: float
    step_sizes: np.ndarray
    errors: np.ndarray
    exact: bool = False


def measure_order(spec: HamiltonianSpec, state0: PhaseState, scheme: Scheme,
                  h_list, t_span: float | None = None, t0: float = 0.0,
                  ref_refine: int = 100) -> OrderMeasurement:
    """Global-error convergence order over a fixed span (default: one period).

    Each step size is integrated over [t0, t0 + t_span] and compared, at
    the final time, against the same scheme refined ``ref_refine``-fold.
    Needs at least three step sizes, each half the previous.  When every
    error sits at rounding level the slope is meaningless; the measurement
    reports ``exact=True`` and an infinite order instead.
    """
    hs = np.asarray(h_list, dtype=float)
    if hs.size < 3:
        raise DomainError("order measurement needs at least 3 step sizes")
    if np.any(hs <= 0.0):
        raise DomainError("step sizes must be positive")
    if np.any(np.abs(hs[1:] / hs[:-1] - 0.5) > 1e-9):
        raise DomainError("each step size must halve the previous one")
    if t_span is None:
        t_span = kepler_period(spec, state0, t0)
        if math.isnan(t_span):
            raise DomainError("give t_span explicitly for an unbound state")
    errors = np.empty(hs.size)
    for i, h in enumerate(hs):
        final = integrate(spec, state0, t0, t0 + t_span,
                          IntegratorConfig(dt=h, scheme=scheme),
                          sampling=10**9).final
        ref = integrate(spec, state0, t0, t0 + t_span,
                        IntegratorConfig(dt=h / ref_refine, scheme=scheme),
                        sampling=10**9).final
        errors[i] = float(np.linalg.norm(final.r - ref.r))
    if np.all(errors < 1e-12):
        return OrderMeasurement(math.inf, hs, errors, exact=True)
    slope = float(np.polyfit(np.log(hs), np.log(np.maximum(errors, 1e-300)), 1)[0])
    return OrderMeasurement(slope, hs, errors)
