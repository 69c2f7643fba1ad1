"""Axis drive protocols and nucleus paths."""

import math

import numpy as np
import pytest

from aniskep.errors import DomainError, OpenLoop
from aniskep.protocols import (
    AnisotropyProtocol,
    NucleusPath,
    PathKind,
    ProtocolKind,
)


def test_constant_axis_never_moves():
    proto = AnisotropyProtocol.constant(0.6, phi=1.2)
    assert proto.kind is ProtocolKind.CONSTANT
    assert proto.window == (-math.inf, math.inf)
    for t in (-1e9, 0.0, 3.7, 1e9):
        theta, phi, phi_dot = proto.eval(t)
        assert (theta, phi, phi_dot) == (0.6, 1.2, 0.0)


def test_ramp_midpoint_and_rate():
    tau = 4.0
    proto = AnisotropyProtocol.tanh_ramp(0.9, tau)
    theta, phi, phi_dot = proto.eval(0.0)
    assert theta == 0.9
    assert phi == pytest.approx(math.pi, abs=1e-12)
    assert phi_dot == pytest.approx(math.pi / tau, rel=1e-12)
    assert proto.window == (-5 * tau, 5 * tau)


def test_ramp_edges_and_clamping():
    tau = 2.0
    proto = AnisotropyProtocol.tanh_ramp(0.5, tau)
    residual = math.pi * (1.0 - math.tanh(5.0))
    assert residual < 3e-4
    _, phi_lo, rate_lo = proto.eval(-1e12)
    _, phi_hi, rate_hi = proto.eval(1e12)
    assert rate_lo == 0.0 and rate_hi == 0.0
    assert phi_lo == pytest.approx(residual, rel=1e-12)
    assert phi_hi == pytest.approx(2 * math.pi - residual, rel=1e-12)
    # clamped value is continuous across the window edge
    _, phi_edge, _ = proto.eval(-5 * tau + 1e-12)
    assert phi_edge == pytest.approx(phi_lo, abs=1e-9)


def test_ramp_is_monotonic_in_phi():
    proto = AnisotropyProtocol.tanh_ramp(1.0, 3.0)
    ts = np.linspace(-20.0, 20.0, 400)
    phis = [proto.eval(t)[1] for t in ts]
    assert all(b >= a for a, b in zip(phis, phis[1:]))


def test_ramp_validation():
    with pytest.raises(DomainError):
        AnisotropyProtocol.tanh_ramp(-0.1, 1.0)
    with pytest.raises(DomainError):
        AnisotropyProtocol.tanh_ramp(0.5, 0.0)


def test_knot_loop_hits_knots():
    t = [0.0, 1.0, 2.0, 3.0, 4.0]
    theta = [0.8, 0.9, 1.1, 0.9, 0.8]
    phi = [0.0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi]
    proto = AnisotropyProtocol.knot_loop(t, theta, phi)
    assert proto.window == (0.0, 4.0)
    for tk, thk, phk in zip(t, theta, phi):
        th, ph, _ = proto.eval(tk)
        assert th == pytest.approx(thk, abs=1e-12)
        assert ph == pytest.approx(phk, abs=1e-12)


def test_knot_loop_clamps_outside_window():
    proto = AnisotropyProtocol.knot_loop(
        [0.0, 1.0, 2.0], [0.5, 0.7, 0.5], [0.0, math.pi, 2 * math.pi])
    th, ph, rate = proto.eval(-3.0)
    assert (th, ph, rate) == pytest.approx((0.5, 0.0, 0.0), abs=1e-12)
    th, ph, rate = proto.eval(9.0)
    assert (th, ph, rate) == pytest.approx((0.5, 2 * math.pi, 0.0), abs=1e-12)


def test_knot_loop_rate_matches_finite_difference():
    proto = AnisotropyProtocol.knot_loop(
        [0.0, 1.0, 2.0, 3.0], [0.4, 0.9, 0.9, 0.4],
        [0.0, 2.0, 4.0, 2 * math.pi])
    h = 1e-6
    for t in (0.5, 1.5, 2.5):
        _, _, rate = proto.eval(t)
        num = (proto.eval(t + h)[1] - proto.eval(t - h)[1]) / (2 * h)
        assert rate == pytest.approx(num, rel=1e-6, abs=1e-8)


def test_knot_loop_validation():
    with pytest.raises(DomainError):
        AnisotropyProtocol.knot_loop([0.0, 0.0, 1.0], [0.5, 0.5, 0.5],
                                     [0.0, 3.0, 2 * math.pi])
    with pytest.raises(DomainError):
        AnisotropyProtocol.knot_loop([0.0, 1.0], [0.5, 3.5], [0.0, 2 * math.pi])
    with pytest.raises(OpenLoop):
        AnisotropyProtocol.knot_loop([0.0, 1.0, 2.0], [0.5, 0.7, 0.6],
                                     [0.0, 3.0, 2 * math.pi])
    with pytest.raises(OpenLoop):
        AnisotropyProtocol.knot_loop([0.0, 1.0, 2.0], [0.5, 0.7, 0.5],
                                     [0.0, 3.0, 5.0])


def test_static_path():
    path = NucleusPath.static((1.0, 2.0, 3.0))
    assert path.kind is PathKind.STATIC
    assert np.array_equal(path.position(-5.0), [1.0, 2.0, 3.0])
    assert np.array_equal(path.position(7.0), [1.0, 2.0, 3.0])


def test_circle_geometry_and_closure():
    path = NucleusPath.circle((0.0, 0.0, 0.0), rho=0.5, t_loop=8.0)
    assert np.allclose(path.position(0.0), [0.5, 0.0, 0.0], atol=1e-15)
    assert np.allclose(path.position(2.0), [0.0, 0.5, 0.0], atol=1e-12)
    assert np.allclose(path.position(4.0), [-0.5, 0.0, 0.0], atol=1e-12)
    assert np.allclose(path.position(8.0), path.position(0.0), atol=1e-12)
    # before the start and after one full loop the nucleus parks in place
    assert np.allclose(path.position(-99.0), path.position(0.0), atol=1e-15)
    assert np.allclose(path.position(99.0), path.position(8.0), atol=1e-15)


def test_circle_stays_in_normal_plane():
    center = np.array([1.0, -2.0, 0.5])
    axis = np.array([0.0, 1.0, 0.0])
    path = NucleusPath.circle(center, rho=0.3, t_loop=5.0, axis=axis)
    for t in np.linspace(0.0, 5.0, 17):
        offset = path.position(t) - center
        assert abs(offset @ axis) <= 1e-12
        assert np.linalg.norm(offset) == pytest.approx(0.3, abs=1e-12)


def test_positions_at_matches_scalar_position():
    path = NucleusPath.circle((0.2, 0.0, -0.1), rho=0.4, t_loop=6.0,
                              axis=(1.0, 1.0, 1.0))
    times = np.linspace(-1.0, 7.0, 23)
    block = path.positions_at(times)
    assert block.shape == (23, 3)
    for i, t in enumerate(times):
        assert np.allclose(block[i], path.position(t), atol=1e-14)


def test_circle_validation():
    with pytest.raises(DomainError):
        NucleusPath.circle((0, 0, 0), rho=0.0, t_loop=1.0)
    with pytest.raises(DomainError):
        NucleusPath.circle((0, 0, 0), rho=0.1, t_loop=0.0)


def test_slow_loop_warning():
    path = NucleusPath.circle((0, 0, 0), rho=0.3, t_loop=10.0)
    with pytest.warns(UserWarning, match="not adiabatic"):
        path.warn_if_not_adiabatic(t_orb=1.0)
    slow = NucleusPath.circle((0, 0, 0), rho=0.3, t_loop=100.0)
    slow.warn_if_not_adiabatic(t_orb=1.0)  # no warning expected
