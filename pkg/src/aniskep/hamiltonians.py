"""Potential, force, and energy evaluators for the three model systems.

All three share a Coulomb attraction of strength Q on an electron of mass
m; they differ in how the environment enters:

  MOVING_NUCLEUS      V = -Q / |r - R(t)|            (prescribed nucleus path)
  FIXED_ANISOTROPY    V = -Q / |r| + m w0^2 z^2 / 2  (static easy plane z = 0)
  ROTATING_ANISOTROPY V = -Q / |r| + m w0^2 (r . Z(t))^2 / 2

where Z(t) is the unit anisotropy axis at angles (theta, phi) given by the
attached protocol.  Pure Kepler is FIXED_ANISOTROPY with w0 = 0.

Evaluations guard against near-collisions: any Coulomb denominator at or
below ``r_min_guard`` raises `MinRadiusViolation` instead of silently
degrading the symplectic accuracy.  No softening is applied anywhere -- it
would bias the orbital period and the eccentricity vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import ConfigError, DomainError, MinRadiusViolation
from .geometry import Vec3, anisotropy_axis, FrameAngles
from .protocols import AnisotropyProtocol, NucleusPath

DEFAULT_R_MIN_GUARD = 1e-3


@dataclass(frozen=True)
class PhaseState:
    """Instantaneous (r, p) pair; components must be finite."""

    r: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if r.shape != (3,) or p.shape != (3,):
            raise DomainError("phase state needs 3-vectors for position and momentum")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(p))):
            raise DomainError("phase state components must be finite")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class KeplerParams:
    """Electron mass and Coulomb strength, both strictly positive."""

    m: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        if not self.m > 0.0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if not self.q > 0.0:
            raise DomainError(f"Coulomb strength must be positive, got {self.q}")


class Variant(IntEnum):
    MOVING_NUCLEUS = 0
    FIXED_ANISOTROPY = 1
    ROTATING_ANISOTROPY = 2


@dataclass(frozen=True)
class HamiltonianSpec:
    """Immutable description of one of the three systems.

    Use the factory helpers below; the constructor validates the
    variant-specific requirements (MOVING_NUCLEUS needs a nucleus path and
    no anisotropy, ROTATING_ANISOTROPY needs an axis protocol).
    """

    variant: Variant
    kepler: KeplerParams = KeplerParams()
    omega0: float = 0.0
    protocol: AnisotropyProtocol | None = None
    nucleus_path: NucleusPath | None = None
    r_min_guard: float = DEFAULT_R_MIN_GUARD

    def __post_init__(self):
        if self.omega0 < 0.0:
            raise ConfigError(f"anisotropy frequency must be >= 0, got {self.omega0}")
        if not self.r_min_guard > 0.0:
            raise ConfigError(f"minimum-radius guard must be positive, got {self.r_min_guard}")
        if self.variant is Variant.MOVING_NUCLEUS:
            if self.nucleus_path is None:
                raise ConfigError("MOVING_NUCLEUS requires a nucleus path")
            if self.omega0 != 0.0:
                raise ConfigError("MOVING_NUCLEUS has no anisotropy; omega0 must be 0")
        elif self.variant is Variant.ROTATING_ANISOTROPY and self.protocol is None:
            raise ConfigError("ROTATING_ANISOTROPY requires an axis protocol")


def pure_kepler(m: float = 1.0, q: float = 1.0, r_min_guard: float = DEFAULT_R_MIN_GUARD) -> HamiltonianSpec:
    return HamiltonianSpec(Variant.FIXED_ANISOTROPY, KeplerParams(m, q), 0.0,
                           r_min_guard=r_min_guard)


def moving_nucleus(path: NucleusPath, m: float = 1.0, q: float = 1.0,
                   r_min_guard: float = DEFAULT_R_MIN_GUARD) -> HamiltonianSpec:
    return HamiltonianSpec(Variant.MOVING_NUCLEUS, KeplerParams(m, q), 0.0,
                           nucleus_path=path, r_min_guard=r_min_guard)


def fixed_anisotropy(omega0: float, m: float = 1.0, q: float = 1.0,
                     r_min_guard: float = DEFAULT_R_MIN_GUARD) -> HamiltonianSpec:
    return HamiltonianSpec(Variant.FIXED_ANISOTROPY, KeplerParams(m, q), omega0,
                           r_min_guard=r_min_guard)


def rotating_anisotropy(omega0: float, protocol: AnisotropyProtocol,
                        m: float = 1.0, q: float = 1.0,
                        r_min_guard: float = DEFAULT_R_MIN_GUARD) -> HamiltonianSpec:
    return HamiltonianSpec(Variant.ROTATING_ANISOTROPY, KeplerParams(m, q), omega0,
                           protocol=protocol, r_min_guard=r_min_guard)


def _coulomb_radius(spec: HamiltonianSpec, r: Vec3, t: float) -> tuple[np.ndarray, float]:
    """Separation vector entering the Coulomb term, with guard check."""
    if spec.variant is Variant.MOVING_NUCLEUS:
        sep = r - spec.nucleus_path.position(t)
    else:
        sep = r
    dist = math.sqrt(float(sep @ sep))
    if dist <= spec.r_min_guard:
        raise MinRadiusViolation(t, dist, spec.r_min_guard)
    return sep, dist


def potential_energy(spec: HamiltonianSpec, r: Vec3, t: float) -> float:
    sep, dist = _coulomb_radius(spec, r, t)
    v = -spec.kepler.q / dist
    if spec.variant is Variant.FIXED_ANISOTROPY:
        v += 0.5 * spec.kepler.m * spec.omega0**2 * r[2] ** 2
    elif spec.variant is Variant.ROTATING_ANISOTROPY:
        theta, phi, _ = spec.protocol.eval(t)
        proj = float(r @ anisotropy_axis(FrameAngles(theta, phi)))
        v += 0.5 * spec.kepler.m * spec.omega0**2 * proj**2
    return v


def force(spec: HamiltonianSpec, r: Vec3, t: float) -> Vec3:
    """Analytic -grad V; matches finite differences of `potential_energy`."""
    sep, dist = _coulomb_radius(spec, r, t)
    f = -spec.kepler.q * sep / dist**3
    if spec.variant is Variant.FIXED_ANISOTROPY:
        f[2] -= spec.kepler.m * spec.omega0**2 * r[2]
    elif spec.variant is Variant.ROTATING_ANISOTROPY:
        theta, phi, _ = spec.protocol.eval(t)
        axis = anisotropy_axis(FrameAngles(theta, phi))
        f -= spec.kepler.m * spec.omega0**2 * float(r @ axis) * axis
    return f


def total_energy(spec: HamiltonianSpec, state: PhaseState, t: float) -> float:
    return float(state.p @ state.p) / (2.0 * spec.kepler.m) + potential_energy(spec, state.r, t)
