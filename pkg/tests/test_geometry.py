"""Frame geometry: rotation matrices, axis extraction, rotating-frame term."""

import math

import numpy as np
import pytest

from aniskep.errors import DomainError, ZeroVector
from aniskep.geometry import (
    FrameAngles,
    angle_between,
    anisotropy_axis,
    coriolis_correction,
    coriolis_correction_trig,
    rotation_matrix,
    rotation_matrix_dphi,
    unit,
    vec3,
)

SEED = 20260822


def test_vec3_builds_float_triplet():
    v = vec3(1, 2, 3)
    assert v.shape == (3,)
    assert v.dtype == np.float64
    assert np.array_equal(v, [1.0, 2.0, 3.0])


def test_unit_normalizes_and_rejects_zero():
    u = unit(vec3(3.0, 0.0, 4.0))
    assert np.allclose(u, [0.6, 0.0, 0.8], atol=1e-15)
    with pytest.raises(ZeroVector):
        unit(vec3(0.0, 0.0, 0.0))


def test_angle_between_axis_pairs():
    x, y = vec3(1, 0, 0), vec3(0, 1, 0)
    assert angle_between(x, x) == 0.0
    assert angle_between(x, y) == pytest.approx(math.pi / 2, abs=1e-15)
    assert angle_between(x, -x) == pytest.approx(math.pi, abs=1e-15)


def test_angle_between_is_accurate_for_tiny_angles():
    eps = 1e-8
    tilted = vec3(math.cos(eps), math.sin(eps), 0.0)
    assert angle_between(vec3(1, 0, 0), tilted) == pytest.approx(eps, rel=1e-6)


def test_frame_angles_domain():
    FrameAngles(0.0, -3.0)
    FrameAngles(math.pi, 100.0)  # azimuth is cumulative, any value is fine
    with pytest.raises(DomainError):
        FrameAngles(-0.1, 0.0)
    with pytest.raises(DomainError):
        FrameAngles(3.2, 0.0)
    with pytest.raises(DomainError):
        FrameAngles(math.nan, 0.0)


def test_rotation_matrix_identity_at_zero_angles():
    rot = rotation_matrix(FrameAngles(0.0, 0.0))
    assert np.allclose(rot, np.eye(3), atol=1e-15)


def test_rotation_matrix_quarter_turn_colatitude():
    # theta = pi/2, phi = 0 sends the body z-axis to the lab y-axis
    rot = rotation_matrix(FrameAngles(math.pi / 2, 0.0))
    expected = np.array([[1.0, 0.0, 0.0],
                         [0.0, 0.0, 1.0],
                         [0.0, -1.0, 0.0]])
    assert np.allclose(rot, expected, atol=1e-15)


def test_axis_is_third_rotation_column():
    rng = np.random.default_rng(SEED)
    for _ in range(50):
        ang = FrameAngles(rng.uniform(0, math.pi), rng.uniform(-10, 10))
        rot = rotation_matrix(ang)
        assert np.allclose(rot[:, 2], anisotropy_axis(ang), atol=1e-15)


def test_axis_components():
    ang = FrameAngles(0.7, 1.3)
    axis = anisotropy_axis(ang)
    st, ct = math.sin(0.7), math.cos(0.7)
    assert np.allclose(
        axis, [st * math.sin(1.3), st * math.cos(1.3), ct], atol=1e-15)
    assert np.linalg.norm(axis) == pytest.approx(1.0, abs=1e-15)


def test_rotation_is_orthogonal_with_unit_determinant():
    rng = np.random.default_rng(SEED + 1)
    for _ in range(100):
        rot = rotation_matrix(
            FrameAngles(rng.uniform(0, math.pi), rng.uniform(-10, 10)))
        assert np.max(np.abs(rot.T @ rot - np.eye(3))) <= 1e-12
        assert abs(np.linalg.det(rot) - 1.0) <= 1e-12


def test_rotation_derivative_matches_finite_difference():
    rng = np.random.default_rng(SEED + 2)
    h = 1e-6
    for _ in range(25):
        theta = rng.uniform(0, math.pi)
        phi = rng.uniform(-5, 5)
        dnum = (rotation_matrix(FrameAngles(theta, phi + h))
                - rotation_matrix(FrameAngles(theta, phi - h))) / (2 * h)
        dana = rotation_matrix_dphi(FrameAngles(theta, phi))
        assert np.max(np.abs(dana - dnum)) <= 1e-9


def test_rotation_generator_is_antisymmetric():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(100):
        ang = FrameAngles(rng.uniform(0, math.pi), rng.uniform(-10, 10))
        gen = rotation_matrix(ang).T @ rotation_matrix_dphi(ang)
        assert np.max(np.abs(gen + gen.T)) <= 1e-12


def test_coriolis_dual_forms_agree_in_magnitude():
    rng = np.random.default_rng(SEED + 4)
    for _ in range(100):
        ang = FrameAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        phi_dot = float(rng.normal())
        r = rng.normal(size=3)
        p = rng.normal(size=3)
        a = coriolis_correction(r, p, ang, phi_dot)
        b = coriolis_correction_trig(r, p, ang, phi_dot)
        assert abs(abs(a) - abs(b)) <= 1e-12


def test_coriolis_scales_linearly_with_rate():
    ang = FrameAngles(0.9, 0.4)
    r = vec3(0.3, -1.1, 0.7)
    p = vec3(0.5, 0.2, -0.9)
    one = coriolis_correction(r, p, ang, 1.0)
    assert coriolis_correction(r, p, ang, 0.0) == 0.0
    assert coriolis_correction(r, p, ang, -2.5) == pytest.approx(-2.5 * one, rel=1e-14)
