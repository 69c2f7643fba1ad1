"""Closed-form predictions: solid angles, anholonomy shift, confinement scales."""

import math

import numpy as np
import pytest

from aniskep.errors import DomainError, OpenLoop
from aniskep.protocols import AnisotropyProtocol
from aniskep.theory import (
    LoopOnSphere,
    closure_residual,
    hannay_shift,
    ponderomotive_omega0,
    ponderomotive_potential,
    predicted_cos_phi,
    predicted_rotation,
    solid_angle_const_theta,
)


def test_solid_angle_reference_values():
    assert solid_angle_const_theta(0.0) == 0.0
    assert solid_angle_const_theta(math.pi / 2) == pytest.approx(2 * math.pi, abs=1e-15)
    assert solid_angle_const_theta(math.pi) == pytest.approx(4 * math.pi, abs=1e-15)
    # cos(pi/3) is exactly 1/2 in floats, so the value is exactly pi
    assert solid_angle_const_theta(math.pi / 3) == pytest.approx(math.pi, abs=1e-15)


def test_predicted_cos_phi_is_cos_of_solid_angle():
    for theta in np.linspace(0.0, math.pi, 37):
        assert predicted_cos_phi(theta) == math.cos(solid_angle_const_theta(theta))


def test_predicted_cos_phi_landmarks():
    assert predicted_cos_phi(0.0) == 1.0
    assert predicted_cos_phi(math.pi / 3) == pytest.approx(-1.0, abs=1e-12)
    assert predicted_cos_phi(math.pi / 2) == pytest.approx(1.0, abs=1e-12)


def test_solid_angle_domain():
    with pytest.raises(DomainError):
        solid_angle_const_theta(-0.2)
    with pytest.raises(DomainError):
        solid_angle_const_theta(4.0)


def test_constant_theta_loop_shift():
    for theta in (0.2, 0.8, math.pi / 3, 1.4):
        loop = LoopOnSphere.constant_theta(theta)
        assert loop.closed
        assert loop.winding_number == 1
        assert hannay_shift(loop) == pytest.approx(2 * math.pi * math.cos(theta),
                                                   abs=1e-9)


def test_double_winding_doubles_both_integrals():
    theta = 0.9
    loop = LoopOnSphere.constant_theta(theta, windings=2)
    assert loop.winding_number == 2
    assert hannay_shift(loop) == pytest.approx(4 * math.pi * math.cos(theta), abs=1e-9)
    assert predicted_rotation(loop) == pytest.approx(
        2 * solid_angle_const_theta(theta), abs=1e-9)


def test_rotation_plus_shift_is_full_turns():
    for theta in (0.3, 1.0, 1.5):
        for windings in (1, 2, 3):
            loop = LoopOnSphere.constant_theta(theta, windings=windings)
            total = predicted_rotation(loop) + hannay_shift(loop)
            assert total == pytest.approx(2 * math.pi * windings, abs=1e-9)


def test_open_loop_is_rejected():
    theta = np.full(64, 0.7)
    phi = np.linspace(0.0, 4.0, 64)  # stops far from a whole turn
    loop = LoopOnSphere(theta, phi)
    assert not loop.closed
    with pytest.raises(OpenLoop):
        hannay_shift(loop)
    with pytest.raises(OpenLoop):
        predicted_rotation(loop)


def test_closure_residual_measures_endpoint_gap():
    phi = np.linspace(0.0, 2 * math.pi, 64)
    assert closure_residual(np.full(64, 0.5), phi) == pytest.approx(0.0, abs=1e-15)
    phi_short = np.linspace(0.0, 2 * math.pi - 1e-3, 64)
    assert closure_residual(np.full(64, 0.5), phi_short) == pytest.approx(1e-3,
                                                                          rel=1e-6)


def test_loop_from_smooth_ramp_snaps_closed():
    theta = 0.8
    proto = AnisotropyProtocol.tanh_ramp(theta, tau=3.0)
    loop = LoopOnSphere.from_protocol(proto)
    assert loop.closed
    assert loop.winding_number == 1
    # constant colatitude makes the quadrature exact regardless of sampling
    assert hannay_shift(loop) == pytest.approx(2 * math.pi * math.cos(theta), abs=1e-9)
    assert predicted_rotation(loop) == pytest.approx(solid_angle_const_theta(theta),
                                                     abs=1e-9)


def test_sparse_loop_warns():
    with pytest.warns(UserWarning):
        LoopOnSphere.constant_theta(0.5, n_samples=16)


def test_confinement_frequency_formula():
    # e*k/(sqrt(2)*m*omega) with e=2, k=3, m=4, omega=5
    value = ponderomotive_omega0(2.0, 3.0, 4.0, 5.0)
    assert value == pytest.approx(6.0 / (math.sqrt(2.0) * 20.0), rel=1e-15)


def test_confinement_potential_formula():
    # e^2 E0^2/(4 m omega^2) with e=2, m=4, omega=5, E0=3
    value = ponderomotive_potential(2.0, 4.0, 5.0, 3.0)
    assert value == pytest.approx(0.09, rel=1e-15)


def test_confinement_scales():
    base = ponderomotive_omega0(1.0, 1.0, 1.0, 1.0)
    assert ponderomotive_omega0(2.0, 1.0, 1.0, 1.0) == pytest.approx(2 * base)
    assert ponderomotive_omega0(1.0, 1.0, 1.0, 2.0) == pytest.approx(base / 2)
    pot = ponderomotive_potential(1.0, 1.0, 1.0, 1.0)
    assert ponderomotive_potential(1.0, 1.0, 1.0, 2.0) == pytest.approx(4 * pot)
    assert ponderomotive_potential(1.0, 1.0, 2.0, 1.0) == pytest.approx(pot / 4)
