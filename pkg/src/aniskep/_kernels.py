"""Compiled inner loops for the symplectic integrators.

Everything here mirrors the pure-Python semantics in `integrator` and
`hamiltonians` but runs as a single nopython-compiled march over the whole
time span, recording samples at precomputed step indices.  Protocols and
nucleus paths arrive flattened into ``(kind, params)`` scalars/arrays plus
piecewise-cubic breakpoint/coefficient arrays for knotted loops, so one
kernel signature covers every variant.

Kernels are compiled with ``nogil=True``: parameter sweeps run them from a
thread pool and get real parallelism while each individual trajectory
stays strictly sequential (and therefore bit-deterministic).
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_MIN_RADIUS = 1

# protocol kinds (must match protocols.ProtocolKind)
_P_CONSTANT = 0
_P_TANH = 1
_P_KNOT = 2

# nucleus-path kinds (must match protocols.PathKind)
_N_STATIC = 0
_N_CIRCLE = 1

# hamiltonian variants (must match hamiltonians.Variant)
_H_MOVING = 0
_H_FIXED = 1
_H_ROTATING = 2


@njit(cache=True, nogil=True)
def _ppoly_eval(xs, c, x):
    """Piecewise cubic in PPoly layout: value and derivative at x."""
    i = np.searchsorted(xs, x) - 1
    if i < 0:
        i = 0
    hi = xs.shape[0] - 2
    if i > hi:
        i = hi
    dx = x - xs[i]
    val = ((c[0, i] * dx + c[1, i]) * dx + c[2, i]) * dx + c[3, i]
    der = (3.0 * c[0, i] * dx + 2.0 * c[1, i]) * dx + c[2, i]
    return val, der


@njit(cache=True, nogil=True)
def _axis_angles(pkind, pparams, kx, kct, kcp, t):
    """(theta, phi, phi_dot) of the axis protocol, clamped outside the window."""
    if pkind == _P_CONSTANT:
        return pparams[0], pparams[1], 0.0
    if pkind == _P_TANH:
        theta = pparams[0]
        tau = pparams[1]
        t0 = -5.0 * tau
        t1 = 5.0 * tau
        if t <= t0 or t >= t1:
            tc = t0 if t <= t0 else t1
            return theta, np.pi * (1.0 + np.tanh(tc / tau)), 0.0
        s = t / tau
        ch = np.cosh(s)
        return theta, np.pi * (1.0 + np.tanh(s)), (np.pi / tau) / (ch * ch)
    t0 = kx[0]
    t1 = kx[kx.shape[0] - 1]
    if t <= t0 or t >= t1:
        tc = t0 if t <= t0 else t1
        th, _ = _ppoly_eval(kx, kct, tc)
        ph, _ = _ppoly_eval(kx, kcp, tc)
        return th, ph, 0.0
    th, _ = _ppoly_eval(kx, kct, t)
    ph, phd = _ppoly_eval(kx, kcp, t)
    return th, ph, phd


@njit(cache=True, nogil=True)
def _nucleus_position(nkind, nparams, t):
    if nkind == _N_STATIC:
        return nparams[0], nparams[1], nparams[2]
    rho = nparams[3]
    t_loop = nparams[4]
    tc = t
    if tc < 0.0:
        tc = 0.0
    if tc > t_loop:
        tc = t_loop
    ang = 2.0 * np.pi * tc / t_loop
    ca = np.cos(ang)
    sa = np.sin(ang)
    return (
        nparams[0] + rho * (ca * nparams[5] + sa * nparams[8]),
        nparams[1] + rho * (ca * nparams[6] + sa * nparams[9]),
        nparams[2] + rho * (ca * nparams[7] + sa * nparams[10]),
    )


@njit(cache=True, nogil=True)
def _force(variant, m, q, omega0, guard,
           pkind, pparams, kx, kct, kcp, nkind, nparams,
           x, y, z, t):
    """(-grad V, status, coulomb distance) at one point and time."""
    if variant == _H_MOVING:
        nx, ny, nz = _nucleus_position(nkind, nparams, t)
        sx = x - nx
        sy = y - ny
        sz = z - nz
    else:
        sx = x
        sy = y
        sz = z
    d2 = sx * sx + sy * sy + sz * sz
    dist = np.sqrt(d2)
    if dist <= guard:
        return 0.0, 0.0, 0.0, STATUS_MIN_RADIUS, dist
    w = q / (d2 * dist)
    fx = -w * sx
    fy = -w * sy
    fz = -w * sz
    if variant == _H_FIXED:
        fz -= m * omega0 * omega0 * z
    elif variant == _H_ROTATING:
        th, ph, _ = _axis_angles(pkind, pparams, kx, kct, kcp, t)
        st = np.sin(th)
        ct = np.cos(th)
        ax = st * np.sin(ph)
        ay = st * np.cos(ph)
        az = ct
        g = m * omega0 * omega0 * (x * ax + y * ay + z * az)
        fx -= g * ax
        fy -= g * ay
        fz -= g * az
    return fx, fy, fz, STATUS_OK, dist


@njit(cache=True, nogil=True)
def integrate_kernel(variant, m, q, omega0, guard,
                     pkind, pparams, kx, kct, kcp, nkind, nparams,
                     r0, p0, t0, t_end, dts, n_steps, h_last,
                     coeffs, sample_idx,
                     out_t, out_r, out_p):
    """Fixed-step composed-Verlet march from t0 over n_steps steps.

    ``dts`` and ``h_last`` are signed step sizes (h_last applies to the
    final step only, landing exactly on ``t_end``); ``coeffs`` holds the
    sub-step fractions of the composition (they sum to 1).  States are
    recorded at the step indices in ``sample_idx`` (sorted, ending with
    n_steps).  Returns (status, samples_recorded, fail_time, fail_radius).
    """
    nsub = coeffs.shape[0]
    inv_m = 1.0 / m
    rx = r0[0]
    ry = r0[1]
    rz = r0[2]
    px = p0[0]
    py = p0[1]
    pz = p0[2]
    fx, fy, fz, status, dist = _force(
        variant, m, q, omega0, guard,
        pkind, pparams, kx, kct, kcp, nkind, nparams, rx, ry, rz, t0)
    if status != STATUS_OK:
        return STATUS_MIN_RADIUS, 0, t0, dist
    k = 0
    nrec = sample_idx.shape[0]
    for i in range(n_steps):
        if k < nrec and sample_idx[k] == i:
            out_t[k] = t0 + i * dts
            out_r[k, 0] = rx
            out_r[k, 1] = ry
            out_r[k, 2] = rz
            out_p[k, 0] = px
            out_p[k, 1] = py
            out_p[k, 2] = pz
            k += 1
        last = i == n_steps - 1
        h = h_last if last else dts
        t_base = t0 + i * dts
        local = 0.0
        for j in range(nsub):
            hs = coeffs[j] * h
            local += hs
            if j == nsub - 1:
                te = t_end if last else t_base + h
            else:
                te = t_base + local
            half = 0.5 * hs
            px += half * fx
            py += half * fy
            pz += half * fz
            rx += hs * px * inv_m
            ry += hs * py * inv_m
            rz += hs * pz * inv_m
            fx, fy, fz, status, dist = _force(
                variant, m, q, omega0, guard,
                pkind, pparams, kx, kct, kcp, nkind, nparams, rx, ry, rz, te)
            if status != STATUS_OK:
                return STATUS_MIN_RADIUS, k, te, dist
            px += half * fx
            py += half * fy
            pz += half * fz
    if k < nrec and sample_idx[k] == n_steps:
        out_t[k] = t_end
        out_r[k, 0] = rx
        out_r[k, 1] = ry
        out_r[k, 2] = rz
        out_p[k, 0] = px
        out_p[k, 1] = py
        out_p[k, 2] = pz
        k += 1
    return STATUS_OK, k, 0.0, 0.0
