"""Time-dependent driving: anisotropy-axis schedules and nucleus paths.

An `AnisotropyProtocol` maps time to frame angles (theta, phi) and the
azimuthal rate phi_dot.  Outside its window the protocol is clamped to the
endpoint angles with phi_dot = 0, which lets a driver integrate static
settle-in/settle-out segments on either side of the drive.

A `NucleusPath` maps time to the nucleus position R(t).  The CIRCLE
variant traverses one full circle over [0, T_loop] and holds the start
point outside that interval (same clamping idea), so its endpoints close
exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, OpenLoop
from .geometry import Vec3, unit

KNOT_CLOSURE_TOL = 1e-9
ADIABATIC_RATIO = 50.0


class ProtocolKind(IntEnum):
    CONSTANT = 0
    TANH_RAMP = 1
    KNOT_LOOP = 2


@dataclass(frozen=True)
class AnisotropyProtocol:
    """Schedule for the easy-plane axis, evaluated as (theta, phi, phi_dot)."""

    kind: ProtocolKind
    theta: float = 0.0
    phi: float = 0.0
    tau: float = 0.0
    t_knots: np.ndarray | None = field(default=None, repr=False)
    theta_knots: np.ndarray | None = field(default=None, repr=False)
    phi_knots: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def constant(cls, theta: float, phi: float = 0.0) -> "AnisotropyProtocol":
        """Fixed axis; infinite window, phi_dot identically zero."""
        if not 0.0 <= theta <= math.pi:
            raise DomainError(f"colatitude must lie in [0, pi], got {theta}")
        return cls(ProtocolKind.CONSTANT, theta=theta, phi=phi)

    @classmethod
    def tanh_ramp(cls, theta: float, tau: float) -> "AnisotropyProtocol":
        """One smooth azimuthal turn, phi(t) = pi*(1 + tanh(t/tau)).

        The window is (-5 tau, +5 tau); the residual from a whole turn at
        the window edges is pi*(1 - tanh 5) < 3e-4.
        """
        if not 0.0 <= theta <= math.pi:
            raise DomainError(f"colatitude must lie in [0, pi], got {theta}")
        if not tau > 0.0:
            raise DomainError(f"ramp timescale must be positive, got {tau}")
        return cls(ProtocolKind.TANH_RAMP, theta=theta, tau=tau)

    @classmethod
    def knot_loop(cls, t_knots, theta_knots, phi_knots) -> "AnisotropyProtocol":
        """Closed loop through (t, theta, phi) knots, C1 monotone-cubic in t.

        The endpoints must agree in theta and in phi modulo full turns;
        phi knots are interpolated as given (unwrap them for net winding).
        """
        t = np.asarray(t_knots, dtype=float)
        th = np.asarray(theta_knots, dtype=float)
        ph = np.asarray(phi_knots, dtype=float)
        if t.ndim != 1 or t.shape != th.shape or t.shape != ph.shape or t.size < 2:
            raise DomainError("knot arrays must be matching 1-d arrays, length >= 2")
        if np.any(np.diff(t) <= 0.0):
            raise DomainError("knot times must be strictly increasing")
        if np.any(th < 0.0) or np.any(th > math.pi):
            raise DomainError("knot colatitudes must lie in [0, pi]")
        dphi = ph[-1] - ph[0]
        turn_err = abs(dphi - 2.0 * math.pi * round(dphi / (2.0 * math.pi)))
        if abs(th[-1] - th[0]) > KNOT_CLOSURE_TOL or turn_err > KNOT_CLOSURE_TOL:
            raise OpenLoop(
                "knot loop endpoints must agree in theta and phi modulo full turns "
                f"(theta residual {abs(th[-1] - th[0]):.3g}, phi residual {turn_err:.3g})"
            )
        return cls(ProtocolKind.KNOT_LOOP, t_knots=t, theta_knots=th, phi_knots=ph)

    @property
    def window(self) -> tuple[float, float]:
        if self.kind is ProtocolKind.CONSTANT:
            return (-math.inf, math.inf)
        if self.kind is ProtocolKind.TANH_RAMP:
            return (-5.0 * self.tau, 5.0 * self.tau)
        return (float(self.t_knots[0]), float(self.t_knots[-1]))

    @cached_property
    def _theta_pp(self) -> PchipInterpolator:
        return PchipInterpolator(self.t_knots, self.theta_knots)

    @cached_property
    def _phi_pp(self) -> PchipInterpolator:
        return PchipInterpolator(self.t_knots, self.phi_knots)

    def eval(self, t: float) -> tuple[float, float, float]:
        """Angles and azimuthal rate at time t, clamped outside the window."""
        if self.kind is ProtocolKind.CONSTANT:
            return self.theta, self.phi, 0.0
        t0, t1 = self.window
        if self.kind is ProtocolKind.TANH_RAMP:
            if t <= t0 or t >= t1:
                tc = t0 if t <= t0 else t1
                return self.theta, math.pi * (1.0 + math.tanh(tc / self.tau)), 0.0
            s = t / self.tau
            return (
                self.theta,
                math.pi * (1.0 + math.tanh(s)),
                (math.pi / self.tau) / math.cosh(s) ** 2,
            )
        if t <= t0 or t >= t1:
            tc = t0 if t <= t0 else t1
            return float(self._theta_pp(tc)), float(self._phi_pp(tc)), 0.0
        return (
            float(self._theta_pp(t)),
            float(self._phi_pp(t)),
            float(self._phi_pp(t, nu=1)),
        )


class PathKind(IntEnum):
    STATIC = 0
    CIRCLE = 1


def _circle_basis(axis: Vec3) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (e1, e2) spanning the plane normal to axis.

    Deterministic convention: seed with y-hat unless the axis is nearly
    parallel to it, then z-hat; for axis = z-hat this gives (x-hat, y-hat).
    """
    n = unit(axis)
    seed = np.array([0.0, 1.0, 0.0]) if abs(n[1]) <= 0.9 else np.array([0.0, 0.0, 1.0])
    e1 = unit(np.cross(seed, n))
    e2 = np.cross(n, e1)
    return e1, e2


@dataclass(frozen=True)
class NucleusPath:
    """Prescribed nucleus trajectory R(t)."""

    kind: PathKind
    r0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rho: float = 0.0
    t_loop: float = 0.0
    axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    @classmethod
    def static(cls, r0=(0.0, 0.0, 0.0)) -> "NucleusPath":
        return cls(PathKind.STATIC, r0=np.asarray(r0, dtype=float))

    @classmethod
    def circle(cls, center, rho: float, t_loop: float, axis=(0.0, 0.0, 1.0)) -> "NucleusPath":
        """Circle of radius rho about center, normal to axis, traversed over [0, t_loop]."""
        if not rho > 0.0:
            raise DomainError(f"circle radius must be positive, got {rho}")
        if not t_loop > 0.0:
            raise DomainError(f"loop period must be positive, got {t_loop}")
        return cls(
            PathKind.CIRCLE,
            center=np.asarray(center, dtype=float),
            rho=rho,
            t_loop=t_loop,
            axis=np.asarray(axis, dtype=float),
        )

    @cached_property
    def _basis(self) -> tuple[np.ndarray, np.ndarray]:
        return _circle_basis(self.axis)

    def position(self, t: float) -> Vec3:
        if self.kind is PathKind.STATIC:
            return self.r0.copy()
        tc = min(max(t, 0.0), self.t_loop)
        e1, e2 = self._basis
        ang = 2.0 * math.pi * tc / self.t_loop
        return self.center + self.rho * (math.cos(ang) * e1 + math.sin(ang) * e2)

    def positions_at(self, times: np.ndarray) -> np.ndarray:
        """Vectorized `position` over an array of times; returns (n, 3)."""
        times = np.asarray(times, dtype=float)
        if self.kind is PathKind.STATIC:
            return np.broadcast_to(self.r0, (times.shape[0], 3)).copy()
        tc = np.clip(times, 0.0, self.t_loop)
        e1, e2 = self._basis
        ang = 2.0 * math.pi * tc / self.t_loop
        return (self.center
                + self.rho * (np.cos(ang)[:, None] * e1 + np.sin(ang)[:, None] * e2))

    def warn_if_not_adiabatic(self, t_orb: float) -> None:
        """Warn when the loop is traversed fewer than ~50 orbits slow."""
        if self.kind is PathKind.CIRCLE and self.t_loop < ADIABATIC_RATIO * t_orb:
            warnings.warn(
                f"nucleus loop period {self.t_loop:.4g} is under {ADIABATIC_RATIO:g} "
                f"orbital periods ({t_orb:.4g}); the loop is not adiabatic",
                stacklevel=2,
            )
