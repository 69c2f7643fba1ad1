"""Frame geometry of the rotating anisotropy axis.

The anisotropy (easy-axis) direction is a unit vector on the sphere,
parametrized by a colatitude ``theta`` and an azimuth ``phi``:

    Z_hat = (sin theta sin phi, sin theta cos phi, cos theta)

``rotation_matrix`` builds the body-to-lab rotation R(theta, phi) whose
columns are the co-rotating unit vectors (phi_hat, theta_hat, Z_hat), so
lab coordinates are r_lab = R r_body.  When phi is driven in time, the
co-rotating-frame Hamiltonian picks up the correction

    dH = -P . R^T (dR/dphi) r . phidot

evaluated here in matrix form (`coriolis_correction`) and as an expanded
trigonometric polynomial (`coriolis_correction_trig`).  The two agree
identically, including the overall sign, which is fixed by taking R as
body-to-lab; conventions built on the inverse transformation flip it.

Vectors are plain float64 numpy arrays of shape (3,).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ZeroVector

Vec3 = np.ndarray


def vec3(x: float, y: float, z: float) -> Vec3:
    """Build a 3-vector as a float64 array."""
    return np.array([float(x), float(y), float(z)])


def norm(v: Vec3) -> float:
    return math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


def unit(v: Vec3) -> Vec3:
    """v / |v|; raises on a zero vector rather than returning garbage."""
    n = norm(v)
    if n == 0.0:
        raise ZeroVector("cannot normalize a zero vector")
    return v / n


def angle_between(a: Vec3, b: Vec3) -> float:
    """Unsigned angle between two nonzero vectors, robust near 0 and pi."""
    ua, ub = unit(a), unit(b)
    c = np.cross(ua, ub)
    return math.atan2(norm(c), float(ua @ ub))


@dataclass(frozen=True)
class FrameAngles:
    """Spherical angles of the anisotropy axis.

    ``theta`` is the colatitude, restricted to [0, pi].  ``phi`` is the
    azimuth and is kept cumulative (never reduced mod 2*pi) so that loop
    windings and integrals over phi are well defined.
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise DomainError("frame angles must be finite")
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"colatitude must lie in [0, pi], got {self.theta}")


def rotation_matrix(angles: FrameAngles) -> np.ndarray:
    """Body-to-lab rotation whose third column is the anisotropy axis.

    Columns are phi_hat = (cos phi, -sin phi, 0),
    theta_hat = (cos theta sin phi, cos theta cos phi, -sin theta),
    and Z_hat.  Orthogonal with determinant +1.
    """
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    return np.array(
        [
            [cp, ct * sp, st * sp],
            [-sp, ct * cp, st * cp],
            [0.0, -st, ct],
        ]
    )


def rotation_matrix_dphi(angles: FrameAngles) -> np.ndarray:
    """Analytic d/dphi of `rotation_matrix` at the same angles.

    Kept analytic (entry-wise derivative) so the co-rotating correction is
    exact; finite differences belong in tests only.
    """
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    return np.array(
        [
            [-sp, ct * cp, st * cp],
            [-cp, -ct * sp, -st * sp],
            [0.0, 0.0, 0.0],
        ]
    )


def anisotropy_axis(angles: FrameAngles) -> Vec3:
    """Unit vector along the anisotropy axis for the given angles."""
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    return np.array([st * sp, st * cp, ct])


def coriolis_correction(P: Vec3, r: Vec3, angles: FrameAngles, phi_dot: float) -> float:
    """Co-rotating-frame energy correction, -P . R^T (dR/dphi) r . phidot.

    ``r`` and ``P`` are body-frame position and momentum.  Linear in each of
    P, r and phidot; vanishes for a static frame.
    """
    rot = rotation_matrix(angles)
    drot = rotation_matrix_dphi(angles)
    return -phi_dot * float(P @ (rot.T @ (drot @ r)))


def coriolis_correction_trig(P: Vec3, r: Vec3, angles: FrameAngles, phi_dot: float) -> float:
    """Expanded form of `coriolis_correction`, used as an independent check.

    R^T dR/dphi reduces to the antisymmetric generator
    [[0, cos theta, sin theta], [-cos theta, 0, 0], [-sin theta, 0, 0]],
    which expands to

        {cos theta (Py X - Px Y) - sin theta (Px Z - Pz X)} . phidot

    The cos-theta part is the in-plane (Coriolis) term; the sin-theta part
    couples in-plane and axis directions and averages out for adiabatic
    driving.
    """
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    x, y, z = r
    px, py, pz = P
    return (ct * (py * x - px * y) - st * (px * z - pz * x)) * phi_dot
