"""Closed-form predictions for the dipole rotation, plus unit helpers.

When the anisotropy axis traces a closed loop on the unit sphere, the
orbit's mean-dipole direction rotates by the solid angle enclosed by the
loop.  The building blocks:

  * solid angle of a constant-colatitude loop, 2*pi*(1 - cos theta);
  * the geometric (anholonomy) shift of the radial-vs-angular phase,
    integral of cos(theta) dphi around the loop;
  * the predicted lab-frame dipole rotation, integral of
    (1 - cos theta) dphi, which reduces to the solid angle above.

The two loop integrals always sum to 2*pi times the loop's winding
number.  Loop integrals use trapezoidal quadrature over the sampled
(theta, phi) path with phi unwrapped, so sample density is the caller's
responsibility; a warning fires for sparse loops.

The unit helpers convert a fast AC field into the effective transverse
confinement frequency omega0 used throughout the simulations: a standing
wave of amplitude profile E0(z) = sin(k z) time-averages to a quadratic
well m*omega0^2 z^2 / 2 near its minimum with omega0 = e*k/(sqrt(2)*m*omega).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, OpenLoop

CLOSURE_TOL = 1e-9
MIN_SAMPLES_PER_WINDING = 64


def _check_colatitude(theta: float) -> None:
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"colatitude must lie in [0, pi], got {theta}")


def solid_angle_const_theta(theta: float) -> float:
    """Solid angle swept by one full azimuthal turn at fixed colatitude."""
    _check_colatitude(theta)
    return 2.0 * math.pi * (1.0 - math.cos(theta))


def predicted_cos_phi(theta: float) -> float:
    """cos of the predicted dipole rotation after one turn at fixed theta."""
    return math.cos(solid_angle_const_theta(theta))


@dataclass(frozen=True)
class LoopOnSphere:
    """A sampled path of the anisotropy axis, (theta_i, phi_i) with phi unwrapped.

    ``closed`` is True when the endpoints coincide on the sphere: equal
    colatitudes and an azimuth difference that is a whole number of turns.
    """

    theta: np.ndarray
    phi: np.ndarray
    closed: bool = field(init=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        if theta.ndim != 1 or theta.shape != phi.shape or theta.size < 2:
            raise DomainError("loop needs matching 1-d theta/phi sample arrays, length >= 2")
        if np.any(theta < 0.0) or np.any(theta > math.pi):
            raise DomainError("loop colatitudes must lie in [0, pi]")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)
        dphi = phi[-1] - phi[0]
        windings = round(dphi / (2.0 * math.pi))
        closed = (
            abs(theta[-1] - theta[0]) <= CLOSURE_TOL
            and abs(dphi - 2.0 * math.pi * windings) <= CLOSURE_TOL
        )
        object.__setattr__(self, "closed", closed)
        total_winding = abs(dphi) / (2.0 * math.pi)
        if total_winding > 0 and theta.size < MIN_SAMPLES_PER_WINDING * total_winding:
            warnings.warn(
                f"loop has {theta.size} samples for {total_winding:.2f} windings; "
                f"quadrature may be inaccurate below {MIN_SAMPLES_PER_WINDING} per winding",
                stacklevel=2,
            )

    @property
    def winding_number(self) -> int:
        """Net number of azimuthal turns (signed)."""
        return round((self.phi[-1] - self.phi[0]) / (2.0 * math.pi))

    @classmethod
    def constant_theta(cls, theta: float, n_samples: int = 256, windings: int = 1) -> "LoopOnSphere":
        """Closed loop at fixed colatitude with the given number of turns."""
        _check_colatitude(theta)
        phi = np.linspace(0.0, 2.0 * math.pi * windings, n_samples)
        return cls(np.full_like(phi, theta), phi)

    @classmethod
    def from_protocol(cls, protocol, n_samples: int = 512, snap_tol: float = 1e-3) -> "LoopOnSphere":
        """Sample an axis protocol over its window and close the endpoints.

        Smooth ramps approach whole turns only asymptotically, so the final
        azimuth is snapped to the nearest whole number of turns when the
        residual is below ``snap_tol``; the residual before snapping is
        available from `closure_residual`.
        """
        t0, t1 = protocol.window
        if not (math.isfinite(t0) and math.isfinite(t1)):
            raise DomainError("protocol window must be finite to build a loop")
        ts = np.linspace(t0, t1, n_samples)
        theta = np.empty(n_samples)
        phi = np.empty(n_samples)
        for i, t in enumerate(ts):
            theta[i], phi[i], _ = protocol.eval(t)
        residual = closure_residual(theta, phi)
        if 0.0 < residual <= snap_tol:
            turns = round((phi[-1] - phi[0]) / (2.0 * math.pi))
            phi[-1] = phi[0] + 2.0 * math.pi * turns
            theta[-1] = theta[0]
        return cls(theta, phi)


def closure_residual(theta: np.ndarray, phi: np.ndarray) -> float:
    """Distance of a sampled path's endpoints from exact closure."""
    dphi = phi[-1] - phi[0]
    turns = round(dphi / (2.0 * math.pi))
    return max(abs(theta[-1] - theta[0]), abs(dphi - 2.0 * math.pi * turns))


def _require_closed(loop: LoopOnSphere) -> None:
    if not loop.closed:
        raise OpenLoop(
            f"loop is not closed (residual {closure_residual(loop.theta, loop.phi):.3g})"
        )


def hannay_shift(loop: LoopOnSphere) -> float:
    """Anholonomic shift of the radial-vs-angular phase: integral cos(theta) dphi."""
    _require_closed(loop)
    return float(np.trapezoid(np.cos(loop.theta), loop.phi))


def predicted_rotation(loop: LoopOnSphere) -> float:
    """Predicted lab-frame dipole rotation: integral (1 - cos theta) dphi.

    Equals the solid angle enclosed by the loop; for a constant-colatitude
    full turn this is `solid_angle_const_theta`.  Together with
    `hannay_shift` it always sums to 2*pi times the winding number.
    """
    _require_closed(loop)
    return float(np.trapezoid(1.0 - np.cos(loop.theta), loop.phi))


def ponderomotive_omega0(charge: float, wavenumber: float, mass: float, field_freq: float) -> float:
    """Transverse confinement frequency of a standing-wave AC field.

    omega0 = e*k / (sqrt(2)*m*omega) for field profile E0(z) = sin(k z).
    """
    for name, val in (("charge", charge), ("wavenumber", wavenumber),
                      ("mass", mass), ("field_freq", field_freq)):
        if not val > 0.0:
            raise DomainError(f"{name} must be positive, got {val}")
    return charge * wavenumber / (math.sqrt(2.0) * mass * field_freq)


def ponderomotive_potential(charge: float, mass: float, field_freq: float, e0: float) -> float:
    """Time-averaged potential e^2 E0^2 / (4 m omega^2) of a fast AC field."""
    for name, val in (("charge", charge), ("mass", mass), ("field_freq", field_freq)):
        if not val > 0.0:
            raise DomainError(f"{name} must be positive, got {val}")
    return charge**2 * e0**2 / (4.0 * mass * field_freq**2)
