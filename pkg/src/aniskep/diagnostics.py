"""Orbit descriptors: conserved vectors, elements, apsis and dipole angles.

For a bound Coulomb orbit the eccentricity (Runge-Lenz) vector

    A = p x (r x p) - m Q r/|r|

is conserved, has magnitude m*Q*e, and points from the focus toward the
perigee, so its unit vector tracks the orientation of the orbit's long
axis.  The dipole-rotation diagnostic compares that direction before and
after a driving protocol; the stroboscopic view samples a trajectory once
per orbital period so the fast Kepler motion drops out of plots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateApsis,
    DomainError,
    UnboundOrbit,
    ZeroAngularMomentum,
    ZeroRadius,
)
from .geometry import Vec3, norm, unit
from .hamiltonians import KeplerParams, PhaseState
from .integrator import Trajectory

APSIS_DEGENERACY_TOL = 1e-9


def runge_lenz(state: PhaseState, params: KeplerParams) -> Vec3:
    """Eccentricity vector p x (r x p) - m Q r/|r| (points toward perigee)."""
    r, p = state.r, state.p
    nr = norm(r)
    if nr == 0.0:
        raise ZeroRadius("Runge-Lenz vector undefined at zero radius")
    return np.cross(p, np.cross(r, p)) - params.m * params.q * r / nr


def plane_normal(state: PhaseState) -> Vec3:
    """Unit normal L/|L| of the instantaneous orbit plane."""
    ell = np.cross(state.r, state.p)
    n = norm(ell)
    if n < 1e-12:
        raise ZeroAngularMomentum("orbit plane undefined for a radial state")
    return ell / n


@dataclass(frozen=True)
class OrbitElements:
    """Instantaneous Kepler elements of a bound orbit.

    Apsis directions are derived lazily from the eccentricity vector and
    raise `DegenerateApsis` when the orbit is circular to within
    ``APSIS_DEGENERACY_TOL``.
    """

    energy: float
    angular_momentum: np.ndarray
    runge_lenz: np.ndarray
    eccentricity: float
    semi_major: float
    period: float

    @property
    def perigee_dir(self) -> Vec3:
        a_mag = norm(self.runge_lenz)
        if a_mag < APSIS_DEGENERACY_TOL:
            raise DegenerateApsis(
                f"apsis direction undefined: |A|={a_mag:.3g} (circular orbit)"
            )
        return self.runge_lenz / a_mag

    @property
    def apogee_dir(self) -> Vec3:
        return -self.perigee_dir


def orbit_elements(state: PhaseState, params: KeplerParams) -> OrbitElements:
    """Elements from one phase-space point; the orbit must be bound."""
    m, q = params.m, params.q
    nr = norm(state.r)
    if nr == 0.0:
        raise ZeroRadius("orbital elements undefined at zero radius")
    energy = float(state.p @ state.p) / (2.0 * m) - q / nr
    if energy >= 0.0:
        raise UnboundOrbit(f"E={energy:.6g} >= 0: no closed orbit")
    ell = np.cross(state.r, state.p)
    a_vec = runge_lenz(state, params)
    semi_major = -q / (2.0 * energy)
    return OrbitElements(
        energy=energy,
        angular_momentum=ell,
        runge_lenz=a_vec,
        eccentricity=norm(a_vec) / (m * q),
        semi_major=semi_major,
        period=2.0 * math.pi * math.sqrt(m * semi_major**3 / q),
    )


@dataclass(frozen=True)
class DipoleRotation:
    """Angle between initial and final long-axis directions.

    ``cos_phi`` is the plain 3-d dot product of the unit vectors;
    ``signed_phi_in_plane`` resolves the sense of rotation about a given
    plane normal (it equals ``phi_unsigned`` when no normal was supplied).
    """

    cos_phi: float
    phi_unsigned: float
    signed_phi_in_plane: float


def dipole_rotation(a_initial: Vec3, a_final: Vec3,
                    plane_normal: Vec3 | None = None) -> DipoleRotation:
    """Rotation of the eccentricity direction between two snapshots.

    When ``plane_normal`` is given (normally the final orbit normal), both
    vectors are projected onto that plane to give the signed angle; the
    cosine itself stays the unprojected 3-d value.
    """
    u = unit(np.asarray(a_initial, dtype=float))
    v = unit(np.asarray(a_final, dtype=float))
    dot = float(np.clip(u @ v, -1.0, 1.0))
    phi = math.atan2(norm(np.cross(u, v)), dot)
    if plane_normal is None:
        signed = phi
    else:
        n = unit(np.asarray(plane_normal, dtype=float))
        up = unit(u - (u @ n) * n)
        vp = unit(v - (v @ n) * n)
        signed = math.atan2(float(n @ np.cross(up, vp)), float(up @ vp))
    return DipoleRotation(cos_phi=dot, phi_unsigned=phi, signed_phi_in_plane=signed)


def stroboscopic(traj: Trajectory, t_orb: float) -> list[tuple[int, PhaseState]]:
    """States at the stored samples nearest n*t_orb, n = 0, 1, ...

    Works on whatever sampling the trajectory retained (no interpolation);
    for a once-per-period view, sample the run with a stride matching the
    period.  Duplicate hits on the same sample are collapsed.
    """
    if not t_orb > 0.0:
        raise DomainError(f"stroboscopic period must be positive, got {t_orb}")
    times = traj.times
    if times[-1] < times[0]:
        raise DomainError("stroboscopic sampling expects forward-running time")
    span = times[-1] - times[0]
    count = int(math.floor(span / t_orb + 1e-9)) + 1
    out: list[tuple[int, PhaseState]] = []
    last_idx = -1
    for n in range(count):
        target = times[0] + n * t_orb
        i = int(np.searchsorted(times, target))
        if i >= len(times):
            i = len(times) - 1
        elif i > 0 and abs(times[i - 1] - target) <= abs(times[i] - target):
            i -= 1
        if i != last_idx:
            out.append((n, traj.state(i)))
            last_idx = i
    return out
