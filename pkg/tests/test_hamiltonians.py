"""Potentials, forces, and the variant specs."""

import math

import numpy as np
import pytest

from aniskep.errors import ConfigError, DomainError, MinRadiusViolation
from aniskep.hamiltonians import (
    HamiltonianSpec,
    KeplerParams,
    PhaseState,
    Variant,
    fixed_anisotropy,
    force,
    moving_nucleus,
    potential_energy,
    pure_kepler,
    rotating_anisotropy,
    total_energy,
)
from aniskep.protocols import AnisotropyProtocol, NucleusPath

SEED = 20260822


def _reference_state() -> PhaseState:
    return PhaseState(np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.75, 0.0]))


def test_phase_state_validation():
    with pytest.raises(DomainError):
        PhaseState(np.zeros(2), np.zeros(3))
    with pytest.raises(DomainError):
        PhaseState(np.array([1.0, 0.0, math.nan]), np.zeros(3))


def test_kepler_params_positive():
    with pytest.raises(DomainError):
        KeplerParams(m=0.0)
    with pytest.raises(DomainError):
        KeplerParams(q=-1.0)


def test_variant_constraints():
    with pytest.raises(ConfigError):
        rotating_anisotropy(1.0, None)
    with pytest.raises(ConfigError):
        HamiltonianSpec(Variant.MOVING_NUCLEUS, KeplerParams(), omega0=1.0,
                        nucleus_path=NucleusPath.static())
    with pytest.raises(ConfigError):
        HamiltonianSpec(Variant.MOVING_NUCLEUS, KeplerParams(), omega0=0.0)
    with pytest.raises(ConfigError):
        fixed_anisotropy(-2.0)


def test_coulomb_potential_and_force():
    spec = pure_kepler()
    r = np.array([2.0, 0.0, 0.0])
    assert potential_energy(spec, r, 0.0) == pytest.approx(-0.5, rel=1e-15)
    assert np.allclose(force(spec, r, 0.0), [-0.25, 0.0, 0.0], atol=1e-15)


def test_total_energy_reference_state():
    # p^2/2m - q/|r| with the standard start: 0.28125 - 1 = -0.71875
    assert total_energy(pure_kepler(), _reference_state(), 0.0) == -0.71875


def test_static_anisotropy_adds_quadratic_well():
    spec = fixed_anisotropy(omega0=2.0)
    r = np.array([0.0, 0.0, 1.0])
    # -1/|r| + (1/2)*omega0^2*z^2 = -1 + 2
    assert potential_energy(spec, r, 0.0) == pytest.approx(1.0, rel=1e-15)
    # Coulomb pull plus restoring force: -1 - 4
    assert np.allclose(force(spec, r, 0.0), [0.0, 0.0, -5.0], atol=1e-14)
    # in-plane positions feel pure Coulomb
    r_in = np.array([0.0, 1.5, 0.0])
    assert np.allclose(force(spec, r_in, 0.0),
                       force(pure_kepler(), r_in, 0.0), atol=1e-15)


def test_rotating_axis_well_follows_protocol():
    theta = 0.8
    proto = AnisotropyProtocol.tanh_ramp(theta, tau=2.0)
    spec = rotating_anisotropy(omega0=3.0, protocol=proto)
    r = np.array([0.4, -0.7, 0.9])
    for t in (-20.0, -1.0, 0.0, 2.5, 20.0):
        th, ph, _ = proto.eval(t)
        axis = np.array([math.sin(th) * math.sin(ph),
                         math.sin(th) * math.cos(ph),
                         math.cos(th)])
        along = float(r @ axis)
        expected = -1.0 / np.linalg.norm(r) + 0.5 * 9.0 * along * along
        assert potential_energy(spec, r, t) == pytest.approx(expected, rel=1e-13)


def test_moving_nucleus_potential_tracks_path():
    path = NucleusPath.circle((0.0, 0.0, 0.0), rho=0.5, t_loop=8.0)
    spec = moving_nucleus(path)
    for t in (0.0, 2.0, 5.0):
        nucleus = path.position(t)
        r = nucleus + np.array([0.25, 0.0, 0.0])
        assert potential_energy(spec, r, t) == pytest.approx(-4.0, rel=1e-13)
        f = force(spec, r, t)
        assert np.allclose(f, [-16.0, 0.0, 0.0], atol=1e-12)


def test_forces_are_potential_gradients():
    proto = AnisotropyProtocol.tanh_ramp(0.7, tau=3.0)
    path = NucleusPath.circle((0.0, 0.0, 0.0), rho=0.3, t_loop=20.0)
    specs = [
        pure_kepler(),
        fixed_anisotropy(1.7),
        rotating_anisotropy(2.5, proto),
        moving_nucleus(path),
    ]
    rng = np.random.default_rng(SEED)
    h = 1e-6
    for spec in specs:
        for _ in range(25):
            r = rng.normal(size=3)
            r *= (0.8 + rng.uniform()) / np.linalg.norm(r)  # keep |r| in [0.8, 1.8]
            t = float(rng.uniform(-5.0, 5.0))
            f = force(spec, r, t)
            for k in range(3):
                dr = np.zeros(3)
                dr[k] = h
                grad = (potential_energy(spec, r + dr, t)
                        - potential_energy(spec, r - dr, t)) / (2 * h)
                assert f[k] == pytest.approx(-grad, rel=2e-7, abs=2e-7)


def test_min_radius_guard_trips_with_location():
    spec = pure_kepler()
    r = np.array([5e-4, 0.0, 0.0])
    with pytest.raises(MinRadiusViolation) as exc_info:
        force(spec, r, 1.25)
    err = exc_info.value
    assert err.t == 1.25
    assert err.radius == pytest.approx(5e-4, rel=1e-12)
    assert err.guard == pytest.approx(1e-3, rel=1e-12)
    assert "t=" in str(err) and "|r|=" in str(err)


def test_guard_radius_is_configurable():
    tight = HamiltonianSpec(Variant.FIXED_ANISOTROPY, KeplerParams(), omega0=0.0,
                            r_min_guard=1e-6)
    r = np.array([5e-4, 0.0, 0.0])
    assert potential_energy(tight, r, 0.0) == pytest.approx(-2000.0, rel=1e-12)


def test_pure_kepler_is_zero_frequency_fixed_anisotropy():
    spec = pure_kepler()
    assert spec.variant is Variant.FIXED_ANISOTROPY
    assert spec.omega0 == 0.0
    r = np.array([0.3, -0.2, 0.6])
    assert np.allclose(force(spec, r, 0.0),
                       force(fixed_anisotropy(0.0), r, 0.0), atol=1e-15)
