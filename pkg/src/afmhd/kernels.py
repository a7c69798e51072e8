"""Compiled per-point kernels for the stage pipeline.

Everything here is mechanical loop code over storage lattices; the formulas
mirror the vectorized reference algebra in physics.py. Kernels stay
sequential and avoid fastmath so runs are bit-reproducible.

Lattice conventions (G ghost layers on each side, cell slot s = index + G):

    cell lattice    (sx, sy)       averages, cell centers
    vface lattice   (sx + 1, sy)   x-normal face midpoints; slot k also
                                   addresses the x-edge between cells k-1, k
    hface lattice   (sx, sy + 1)   y-normal face midpoints / y-edges
    corner lattice  (sx + 1, sy + 1)
"""

from __future__ import annotations

import numpy as np
from numba import njit

_JIT = dict(cache=True, fastmath=False, nogil=True)

EPS_FLOOR = 1.0e-13     # admissibility floor scale for limited updates
RETRY_DELTA = 1.0e-8    # base blending shrink on round-off failures
RETRY_LEVELS = 10


# -- scalar helpers ----------------------------------------------------------

@njit(**_JIT)
def _pres(U, i, j, gamma):
    rho = U[0, i, j]
    kin = 0.5 * (U[1, i, j] ** 2 + U[2, i, j] ** 2 + U[3, i, j] ** 2) / rho
    mag = 0.5 * (U[4, i, j] ** 2 + U[5, i, j] ** 2 + U[6, i, j] ** 2)
    return (gamma - 1.0) * (U[7, i, j] - kin - mag)


@njit(**_JIT)
def _pres8(u, gamma):
    kin = 0.5 * (u[1] ** 2 + u[2] ** 2 + u[3] ** 2) / u[0]
    mag = 0.5 * (u[4] ** 2 + u[5] ** 2 + u[6] ** 2)
    return (gamma - 1.0) * (u[7] - kin - mag)


# pressure floors hold in exact arithmetic; recomputing p from a blended
# state carries cancellation noise ~ulp(kinetic+magnetic energy), so the
# verify loops allow this much shortfall instead of retrying forever.
# core's admissibility checks use a floor an order looser than this slack
# (physics.P_NOISE_REL), so every verified state passes them.
P_VERIFY_REL = 1.0e-12


@njit(**_JIT)
def _pnoise8(u):
    kin = 0.5 * (u[1] ** 2 + u[2] ** 2 + u[3] ** 2) / u[0]
    mag = 0.5 * (u[4] ** 2 + u[5] ** 2 + u[6] ** 2)
    return P_VERIFY_REL * (abs(u[7]) + kin + mag)


@njit(**_JIT)
def _alpha_pair(v, cf, sq, b1, b2, b3, vt, cft, sqt, b1t, b2t, b3t):
    """Dissipation speed keeping the two-state LLF flux inside the
    admissible set; dominates both spectral radii."""
    rr = max(abs(v) + cf, abs(vt) + cft)
    roe = abs(sq * v + sqt * vt) / (sq + sqt)
    vst = max(max(abs(v), abs(vt)), roe)
    db = np.sqrt((b1 - b1t) ** 2 + (b2 - b2t) ** 2 + (b3 - b3t) ** 2) / (sq + sqt)
    return max(rr, vst + max(cf, cft) + db)


# -- per-array tables --------------------------------------------------------

@njit(**_JIT)
def build_tables(U, gamma, p, v1, v2, sq, cf1, cf2, F1, F2):
    """Primitive pieces, directional fast speeds, and both fluxes."""
    sx, sy = U.shape[1], U.shape[2]
    for i in range(sx):
        for j in range(sy):
            rho = U[0, i, j]
            ir = 1.0 / rho
            m1 = U[1, i, j]; m2 = U[2, i, j]; m3 = U[3, i, j]
            B1 = U[4, i, j]; B2 = U[5, i, j]; B3 = U[6, i, j]
            E = U[7, i, j]
            w1 = m1 * ir; w2 = m2 * ir; w3 = m3 * ir
            kin = 0.5 * (m1 * w1 + m2 * w2 + m3 * w3)
            bb = B1 * B1 + B2 * B2 + B3 * B3
            pp = (gamma - 1.0) * (E - kin - 0.5 * bb)
            pt = pp + 0.5 * bb
            vdB = w1 * B1 + w2 * B2 + w3 * B3

            p[i, j] = pp
            v1[i, j] = w1
            v2[i, j] = w2
            sq[i, j] = np.sqrt(rho)
            a2 = gamma * pp * ir
            s = a2 + bb * ir
            d1 = s * s - 4.0 * a2 * B1 * B1 * ir
            d2 = s * s - 4.0 * a2 * B2 * B2 * ir
            cf1[i, j] = np.sqrt(0.5 * (s + np.sqrt(max(d1, 0.0))))
            cf2[i, j] = np.sqrt(0.5 * (s + np.sqrt(max(d2, 0.0))))

            F1[0, i, j] = m1
            F1[1, i, j] = w1 * m1 - B1 * B1 + pt
            F1[2, i, j] = w1 * m2 - B1 * B2
            F1[3, i, j] = w1 * m3 - B1 * B3
            F1[4, i, j] = 0.0
            F1[5, i, j] = w1 * B2 - B1 * w2
            F1[6, i, j] = w1 * B3 - B1 * w3
            F1[7, i, j] = (E + pt) * w1 - B1 * vdB

            F2[0, i, j] = m2
            F2[1, i, j] = w2 * m1 - B2 * B1
            F2[2, i, j] = w2 * m2 - B2 * B2 + pt
            F2[3, i, j] = w2 * m3 - B2 * B3
            F2[4, i, j] = w2 * B1 - B2 * w1
            F2[5, i, j] = 0.0
            F2[6, i, j] = w2 * B3 - B2 * w3
            F2[7, i, j] = (E + pt) * w2 - B2 * vdB


# -- first-order average pieces ----------------------------------------------

@njit(**_JIT)
def avg_llf_edges(U, v1, v2, sq, cf1, cf2, F1, F2, ax, Fx, ay, Fy):
    """Edge dissipation speeds and two-state LLF fluxes between averages."""
    sx, sy = U.shape[1], U.shape[2]
    for k in range(1, sx):
        for j in range(sy):
            i = k - 1
            a = _alpha_pair(v1[i, j], cf1[i, j], sq[i, j],
                            U[4, i, j], U[5, i, j], U[6, i, j],
                            v1[k, j], cf1[k, j], sq[k, j],
                            U[4, k, j], U[5, k, j], U[6, k, j])
            ax[k, j] = a
            for c in range(8):
                Fx[c, k, j] = 0.5 * (F1[c, i, j] + F1[c, k, j]
                                     - a * (U[c, k, j] - U[c, i, j]))
    for i in range(sx):
        for k in range(1, sy):
            j = k - 1
            a = _alpha_pair(v2[i, j], cf2[i, j], sq[i, j],
                            U[4, i, j], U[5, i, j], U[6, i, j],
                            v2[i, k], cf2[i, k], sq[i, k],
                            U[4, i, k], U[5, i, k], U[6, i, k])
            ay[i, k] = a
            for c in range(8):
                Fy[c, i, k] = 0.5 * (F2[c, i, j] + F2[c, i, k]
                                     - a * (U[c, i, k] - U[c, i, j]))


@njit(**_JIT)
def avg_llf_source(U, dx, dy, out):
    """Central-difference divergence times the source direction, per cell."""
    sx, sy = U.shape[1], U.shape[2]
    for i in range(1, sx - 1):
        for j in range(1, sy - 1):
            div = ((U[4, i + 1, j] - U[4, i - 1, j]) / (2.0 * dx)
                   + (U[5, i, j + 1] - U[5, i, j - 1]) / (2.0 * dy))
            ir = 1.0 / U[0, i, j]
            w1 = U[1, i, j] * ir; w2 = U[2, i, j] * ir; w3 = U[3, i, j] * ir
            out[0, i, j] = 0.0
            out[1, i, j] = div * U[4, i, j]
            out[2, i, j] = div * U[5, i, j]
            out[3, i, j] = div * U[6, i, j]
            out[4, i, j] = div * w1
            out[5, i, j] = div * w2
            out[6, i, j] = div * w3
            out[7, i, j] = div * (w1 * U[4, i, j] + w2 * U[5, i, j] + w3 * U[6, i, j])


# -- third-order average source ----------------------------------------------

@njit(**_JIT)
def avg_high_source(cn, vf, hf, ce, dx, dy, out):
    """Quadrature of (div B) Psi over the 3x3 in-cell node set.

    Node (l, m), l/m in {0,1,2}, uses the one-dimensional half-spaced
    derivative along its own row/column: sided at the boundary nodes,
    central at the middle.
    """
    sx, sy = ce.shape[1], ce.shape[2]
    w = np.empty(3)
    w[0] = 1.0 / 6.0
    w[1] = 2.0 / 3.0
    w[2] = 1.0 / 6.0
    u = np.empty((8, 3, 3))
    for i in range(sx):
        for j in range(sy):
            for c in range(8):
                u[c, 0, 0] = cn[c, i, j]
                u[c, 0, 1] = vf[c, i, j]
                u[c, 0, 2] = cn[c, i, j + 1]
                u[c, 1, 0] = hf[c, i, j]
                u[c, 1, 1] = ce[c, i, j]
                u[c, 1, 2] = hf[c, i, j + 1]
                u[c, 2, 0] = cn[c, i + 1, j]
                u[c, 2, 1] = vf[c, i + 1, j]
                u[c, 2, 2] = cn[c, i + 1, j + 1]
                out[c, i, j] = 0.0
            for l in range(3):
                for m in range(3):
                    if l == 0:
                        d1 = (4.0 * (u[4, 1, m] - u[4, 0, m])
                              + (u[4, 0, m] - u[4, 2, m])) / dx
                    elif l == 1:
                        d1 = (u[4, 2, m] - u[4, 0, m]) / dx
                    else:
                        d1 = (4.0 * (u[4, 2, m] - u[4, 1, m])
                              + (u[4, 0, m] - u[4, 2, m])) / dx
                    if m == 0:
                        d2 = (4.0 * (u[5, l, 1] - u[5, l, 0])
                              + (u[5, l, 0] - u[5, l, 2])) / dy
                    elif m == 1:
                        d2 = (u[5, l, 2] - u[5, l, 0]) / dy
                    else:
                        d2 = (4.0 * (u[5, l, 2] - u[5, l, 1])
                              + (u[5, l, 0] - u[5, l, 2])) / dy
                    wdiv = w[l] * w[m] * (d1 + d2)
                    ir = 1.0 / u[0, l, m]
                    w1 = u[1, l, m] * ir
                    w2 = u[2, l, m] * ir
                    w3 = u[3, l, m] * ir
                    B1 = u[4, l, m]; B2 = u[5, l, m]; B3 = u[6, l, m]
                    out[1, i, j] += wdiv * B1
                    out[2, i, j] += wdiv * B2
                    out[3, i, j] += wdiv * B3
                    out[4, i, j] += wdiv * w1
                    out[5, i, j] += wdiv * w2
                    out[6, i, j] += wdiv * w3
                    out[7, i, j] += wdiv * (w1 * B1 + w2 * B2 + w3 * B3)


# -- shock sensor --------------------------------------------------------------

@njit(**_JIT)
def sensor_phis(U, p, v1, v2, dx, dy, ph1x, ph1y, ph2, ph3):
    """Per-cell smoothness indicators from the averages."""
    sx, sy = U.shape[1], U.shape[2]
    for i in range(1, sx - 1):
        for j in range(1, sy - 1):
            ptc = p[i, j] + 0.5 * (U[4, i, j] ** 2 + U[5, i, j] ** 2 + U[6, i, j] ** 2)
            ptl = p[i - 1, j] + 0.5 * (U[4, i - 1, j] ** 2 + U[5, i - 1, j] ** 2 + U[6, i - 1, j] ** 2)
            ptr = p[i + 1, j] + 0.5 * (U[4, i + 1, j] ** 2 + U[5, i + 1, j] ** 2 + U[6, i + 1, j] ** 2)
            ptd = p[i, j - 1] + 0.5 * (U[4, i, j - 1] ** 2 + U[5, i, j - 1] ** 2 + U[6, i, j - 1] ** 2)
            ptu = p[i, j + 1] + 0.5 * (U[4, i, j + 1] ** 2 + U[5, i, j + 1] ** 2 + U[6, i, j + 1] ** 2)
            ph1x[i, j] = abs(ptr - 2.0 * ptc + ptl) / abs(ptr + 2.0 * ptc + ptl)
            ph1y[i, j] = abs(ptu - 2.0 * ptc + ptd) / abs(ptu + 2.0 * ptc + ptd)
            dv = ((v1[i + 1, j] - v1[i - 1, j]) / (2.0 * dx)
                  + (v2[i, j + 1] - v2[i, j - 1]) / (2.0 * dy))
            cv = ((v2[i + 1, j] - v2[i - 1, j]) / (2.0 * dx)
                  - (v1[i, j + 1] - v1[i, j - 1]) / (2.0 * dy))
            ph2[i, j] = max(-dv / np.sqrt(dv * dv + cv * cv + 1.0e-40), 0.0)
            num = abs(U[4, i + 1, j] - U[4, i - 1, j] + U[5, i, j + 1] - U[5, i, j - 1])
            ph3[i, j] = num / (abs(U[4, i, j] + U[5, i, j]) + 1.0e-40)


# -- third-order point updates -------------------------------------------------

@njit(**_JIT)
def corner_high_rhs(cn, hf, vf, v1c, cf1c, v1h, cf1h, v2c, cf2c, v2v, cf2v,
                    F1c, F1h, F2c, F2v, dx, dy, src_mode, out):
    """Semi-discrete update of corner values.

    Upwind flux splitting along each axis over the five-point line stencil
    of alternating corner and face values, plus the divergence source.
    src_mode: 0 central, 1 upwind by velocity sign, 2 off.
    """
    sx, sy = cn.shape[1], cn.shape[2]
    for i in range(1, sx - 1):
        for j in range(1, sy - 1):
            # x stencil: cn[i-1], hf[i-1], cn[i], hf[i], cn[i+1] at row j
            a1 = max(max(abs(v1c[i - 1, j]) + cf1c[i - 1, j],
                         abs(v1h[i - 1, j]) + cf1h[i - 1, j]),
                     max(abs(v1c[i, j]) + cf1c[i, j],
                         max(abs(v1h[i, j]) + cf1h[i, j],
                             abs(v1c[i + 1, j]) + cf1c[i + 1, j])))
            a2 = max(max(abs(v2c[i, j - 1]) + cf2c[i, j - 1],
                         abs(v2v[i, j - 1]) + cf2v[i, j - 1]),
                     max(abs(v2c[i, j]) + cf2c[i, j],
                         max(abs(v2v[i, j]) + cf2v[i, j],
                             abs(v2c[i, j + 1]) + cf2c[i, j + 1])))
            for c in range(8):
                fpl = 0.5 * (F1c[c, i - 1, j] + a1 * cn[c, i - 1, j])
                fpm = 0.5 * (F1h[c, i - 1, j] + a1 * hf[c, i - 1, j])
                fpr = 0.5 * (F1c[c, i, j] + a1 * cn[c, i, j])
                dxp = (4.0 * (fpr - fpm) + (fpl - fpr)) / dx
                fml = 0.5 * (F1c[c, i, j] - a1 * cn[c, i, j])
                fmm = 0.5 * (F1h[c, i, j] - a1 * hf[c, i, j])
                fmr = 0.5 * (F1c[c, i + 1, j] - a1 * cn[c, i + 1, j])
                dxm = (4.0 * (fmm - fml) + (fml - fmr)) / dx

                gpl = 0.5 * (F2c[c, i, j - 1] + a2 * cn[c, i, j - 1])
                gpm = 0.5 * (F2v[c, i, j - 1] + a2 * vf[c, i, j - 1])
                gpr = 0.5 * (F2c[c, i, j] + a2 * cn[c, i, j])
                dyp = (4.0 * (gpr - gpm) + (gpl - gpr)) / dy
                gml = 0.5 * (F2c[c, i, j] - a2 * cn[c, i, j])
                gmm = 0.5 * (F2v[c, i, j] - a2 * vf[c, i, j])
                gmr = 0.5 * (F2c[c, i, j + 1] - a2 * cn[c, i, j + 1])
                dym = (4.0 * (gmm - gml) + (gml - gmr)) / dy

                out[c, i, j] = -(dxp + dxm) - (dyp + dym)

            if src_mode != 2:
                d1p = (4.0 * (cn[4, i, j] - hf[4, i - 1, j])
                       + (cn[4, i - 1, j] - cn[4, i, j])) / dx
                d1m = (4.0 * (hf[4, i, j] - cn[4, i, j])
                       + (cn[4, i, j] - cn[4, i + 1, j])) / dx
                d2p = (4.0 * (cn[5, i, j] - vf[5, i, j - 1])
                       + (cn[5, i, j - 1] - cn[5, i, j])) / dy
                d2m = (4.0 * (vf[5, i, j] - cn[5, i, j])
                       + (cn[5, i, j] - cn[5, i, j + 1])) / dy
                if src_mode == 0:
                    div = 0.5 * (d1p + d1m) + 0.5 * (d2p + d2m)
                else:
                    div = (d1p if v1c[i, j] >= 0.0 else d1m) \
                        + (d2p if v2c[i, j] >= 0.0 else d2m)
                ir = 1.0 / cn[0, i, j]
                w1 = cn[1, i, j] * ir; w2 = cn[2, i, j] * ir; w3 = cn[3, i, j] * ir
                B1 = cn[4, i, j]; B2 = cn[5, i, j]; B3 = cn[6, i, j]
                out[1, i, j] -= div * B1
                out[2, i, j] -= div * B2
                out[3, i, j] -= div * B3
                out[4, i, j] -= div * w1
                out[5, i, j] -= div * w2
                out[6, i, j] -= div * w3
                out[7, i, j] -= div * (w1 * B1 + w2 * B2 + w3 * B3)


@njit(**_JIT)
def vface_high_rhs(vf, ce, cn, v1v, cf1v, v1e, cf1e, F1v, F1e, F2v, F2c,
                   dx, dy, src_mode, out):
    """Semi-discrete update of x-face values: split differences along x
    through the neighboring cell centers, central flux difference along y
    through the adjacent corners."""
    sx, sy = vf.shape[1], vf.shape[2]
    for i in range(1, sx - 1):
        for j in range(sy):
            a1 = max(max(abs(v1v[i - 1, j]) + cf1v[i - 1, j],
                         abs(v1e[i - 1, j]) + cf1e[i - 1, j]),
                     max(abs(v1v[i, j]) + cf1v[i, j],
                         max(abs(v1e[i, j]) + cf1e[i, j],
                             abs(v1v[i + 1, j]) + cf1v[i + 1, j])))
            for c in range(8):
                fpl = 0.5 * (F1v[c, i - 1, j] + a1 * vf[c, i - 1, j])
                fpm = 0.5 * (F1e[c, i - 1, j] + a1 * ce[c, i - 1, j])
                fpr = 0.5 * (F1v[c, i, j] + a1 * vf[c, i, j])
                dxp = (4.0 * (fpr - fpm) + (fpl - fpr)) / dx
                fml = 0.5 * (F1v[c, i, j] - a1 * vf[c, i, j])
                fmm = 0.5 * (F1e[c, i, j] - a1 * ce[c, i, j])
                fmr = 0.5 * (F1v[c, i + 1, j] - a1 * vf[c, i + 1, j])
                dxm = (4.0 * (fmm - fml) + (fml - fmr)) / dx
                dyc = (F2c[c, i, j + 1] - F2c[c, i, j]) / dy
                out[c, i, j] = -(dxp + dxm) - dyc

            if src_mode != 2:
                d1p = (4.0 * (vf[4, i, j] - ce[4, i - 1, j])
                       + (vf[4, i - 1, j] - vf[4, i, j])) / dx
                d1m = (4.0 * (ce[4, i, j] - vf[4, i, j])
                       + (vf[4, i, j] - vf[4, i + 1, j])) / dx
                if src_mode == 0:
                    div1 = 0.5 * (d1p + d1m)
                else:
                    div1 = d1p if v1v[i, j] >= 0.0 else d1m
                div = div1 + (cn[5, i, j + 1] - cn[5, i, j]) / dy
                ir = 1.0 / vf[0, i, j]
                w1 = vf[1, i, j] * ir; w2 = vf[2, i, j] * ir; w3 = vf[3, i, j] * ir
                B1 = vf[4, i, j]; B2 = vf[5, i, j]; B3 = vf[6, i, j]
                out[1, i, j] -= div * B1
                out[2, i, j] -= div * B2
                out[3, i, j] -= div * B3
                out[4, i, j] -= div * w1
                out[5, i, j] -= div * w2
                out[6, i, j] -= div * w3
                out[7, i, j] -= div * (w1 * B1 + w2 * B2 + w3 * B3)


@njit(**_JIT)
def hface_high_rhs(hf, ce, cn, v2h, cf2h, v2e, cf2e, F2h, F2e, F1h, F1c,
                   dx, dy, src_mode, out):
    """Mirror of the x-face update for y-faces."""
    sx, sy = hf.shape[1], hf.shape[2]
    for i in range(sx):
        for j in range(1, sy - 1):
            a2 = max(max(abs(v2h[i, j - 1]) + cf2h[i, j - 1],
                         abs(v2e[i, j - 1]) + cf2e[i, j - 1]),
                     max(abs(v2h[i, j]) + cf2h[i, j],
                         max(abs(v2e[i, j]) + cf2e[i, j],
                             abs(v2h[i, j + 1]) + cf2h[i, j + 1])))
            for c in range(8):
                gpl = 0.5 * (F2h[c, i, j - 1] + a2 * hf[c, i, j - 1])
                gpm = 0.5 * (F2e[c, i, j - 1] + a2 * ce[c, i, j - 1])
                gpr = 0.5 * (F2h[c, i, j] + a2 * hf[c, i, j])
                dyp = (4.0 * (gpr - gpm) + (gpl - gpr)) / dy
                gml = 0.5 * (F2h[c, i, j] - a2 * hf[c, i, j])
                gmm = 0.5 * (F2e[c, i, j] - a2 * ce[c, i, j])
                gmr = 0.5 * (F2h[c, i, j + 1] - a2 * hf[c, i, j + 1])
                dym = (4.0 * (gmm - gml) + (gml - gmr)) / dy
                dxc = (F1c[c, i + 1, j] - F1c[c, i, j]) / dx
                out[c, i, j] = -dxc - (dyp + dym)

            if src_mode != 2:
                d2p = (4.0 * (hf[5, i, j] - ce[5, i, j - 1])
                       + (hf[5, i, j - 1] - hf[5, i, j])) / dy
                d2m = (4.0 * (ce[5, i, j] - hf[5, i, j])
                       + (hf[5, i, j] - hf[5, i, j + 1])) / dy
                if src_mode == 0:
                    div2 = 0.5 * (d2p + d2m)
                else:
                    div2 = d2p if v2h[i, j] >= 0.0 else d2m
                div = (cn[4, i + 1, j] - cn[4, i, j]) / dx + div2
                ir = 1.0 / hf[0, i, j]
                w1 = hf[1, i, j] * ir; w2 = hf[2, i, j] * ir; w3 = hf[3, i, j] * ir
                B1 = hf[4, i, j]; B2 = hf[5, i, j]; B3 = hf[6, i, j]
                out[1, i, j] -= div * B1
                out[2, i, j] -= div * B2
                out[3, i, j] -= div * B3
                out[4, i, j] -= div * w1
                out[5, i, j] -= div * w2
                out[6, i, j] -= div * w3
                out[7, i, j] -= div * (w1 * B1 + w2 * B2 + w3 * B3)


# -- first-order point updates -------------------------------------------------

@njit(**_JIT)
def _llf8(FL, FR, UL, UR, a, c, iL, jL, iR, jR):
    return 0.5 * (FL[c, iL, jL] + FR[c, iR, jR]
                  - a * (UR[c, iR, jR] - UL[c, iL, jL]))


@njit(**_JIT)
def corner_llf_rhs(cn, v1, v2, sq, cf1, cf2, F1, F2, dx, dy, with_src, out):
    """Fallback corner update between like-kind neighbors one cell apart."""
    sx, sy = cn.shape[1], cn.shape[2]
    for i in range(1, sx - 1):
        for j in range(1, sy - 1):
            aR = _alpha_pair(v1[i, j], cf1[i, j], sq[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j],
                             v1[i + 1, j], cf1[i + 1, j], sq[i + 1, j],
                             cn[4, i + 1, j], cn[5, i + 1, j], cn[6, i + 1, j])
            aL = _alpha_pair(v1[i - 1, j], cf1[i - 1, j], sq[i - 1, j],
                             cn[4, i - 1, j], cn[5, i - 1, j], cn[6, i - 1, j],
                             v1[i, j], cf1[i, j], sq[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j])
            aU = _alpha_pair(v2[i, j], cf2[i, j], sq[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j],
                             v2[i, j + 1], cf2[i, j + 1], sq[i, j + 1],
                             cn[4, i, j + 1], cn[5, i, j + 1], cn[6, i, j + 1])
            aD = _alpha_pair(v2[i, j - 1], cf2[i, j - 1], sq[i, j - 1],
                             cn[4, i, j - 1], cn[5, i, j - 1], cn[6, i, j - 1],
                             v2[i, j], cf2[i, j], sq[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j])
            for c in range(8):
                fR = _llf8(F1, F1, cn, cn, aR, c, i, j, i + 1, j)
                fL = _llf8(F1, F1, cn, cn, aL, c, i - 1, j, i, j)
                gU = _llf8(F2, F2, cn, cn, aU, c, i, j, i, j + 1)
                gD = _llf8(F2, F2, cn, cn, aD, c, i, j - 1, i, j)
                out[c, i, j] = -(fR - fL) / dx - (gU - gD) / dy
            if with_src:
                div = ((cn[4, i + 1, j] - cn[4, i - 1, j]) / (2.0 * dx)
                       + (cn[5, i, j + 1] - cn[5, i, j - 1]) / (2.0 * dy))
                ir = 1.0 / cn[0, i, j]
                w1 = cn[1, i, j] * ir; w2 = cn[2, i, j] * ir; w3 = cn[3, i, j] * ir
                B1 = cn[4, i, j]; B2 = cn[5, i, j]; B3 = cn[6, i, j]
                out[1, i, j] -= div * B1
                out[2, i, j] -= div * B2
                out[3, i, j] -= div * B3
                out[4, i, j] -= div * w1
                out[5, i, j] -= div * w2
                out[6, i, j] -= div * w3
                out[7, i, j] -= div * (w1 * B1 + w2 * B2 + w3 * B3)


@njit(**_JIT)
def vface_llf_rhs(vf, cn, v1v, v2v, sqv, cf1v, cf2v, F1v, F2v,
                  v2c, sqc, cf2c, F2c, dx, dy, with_src, out):
    """Fallback x-face update: like-kind faces along x, adjacent corners
    along y with the flux difference taken over a single cell height."""
    sx, sy = vf.shape[1], vf.shape[2]
    for i in range(1, sx - 1):
        for j in range(sy):
            aR = _alpha_pair(v1v[i, j], cf1v[i, j], sqv[i, j],
                             vf[4, i, j], vf[5, i, j], vf[6, i, j],
                             v1v[i + 1, j], cf1v[i + 1, j], sqv[i + 1, j],
                             vf[4, i + 1, j], vf[5, i + 1, j], vf[6, i + 1, j])
            aL = _alpha_pair(v1v[i - 1, j], cf1v[i - 1, j], sqv[i - 1, j],
                             vf[4, i - 1, j], vf[5, i - 1, j], vf[6, i - 1, j],
                             v1v[i, j], cf1v[i, j], sqv[i, j],
                             vf[4, i, j], vf[5, i, j], vf[6, i, j])
            aU = _alpha_pair(v2v[i, j], cf2v[i, j], sqv[i, j],
                             vf[4, i, j], vf[5, i, j], vf[6, i, j],
                             v2c[i, j + 1], cf2c[i, j + 1], sqc[i, j + 1],
                             cn[4, i, j + 1], cn[5, i, j + 1], cn[6, i, j + 1])
            aD = _alpha_pair(v2c[i, j], cf2c[i, j], sqc[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j],
                             v2v[i, j], cf2v[i, j], sqv[i, j],
                             vf[4, i, j], vf[5, i, j], vf[6, i, j])
            for c in range(8):
                fR = _llf8(F1v, F1v, vf, vf, aR, c, i, j, i + 1, j)
                fL = _llf8(F1v, F1v, vf, vf, aL, c, i - 1, j, i, j)
                gU = _llf8(F2v, F2c, vf, cn, aU, c, i, j, i, j + 1)
                gD = _llf8(F2c, F2v, cn, vf, aD, c, i, j, i, j)
                out[c, i, j] = -(fR - fL) / dx - (gU - gD) / dy
            if with_src:
                div = ((vf[4, i + 1, j] - vf[4, i - 1, j]) / (2.0 * dx)
                       + (cn[5, i, j + 1] - cn[5, i, j]) / (2.0 * dy))
                ir = 1.0 / vf[0, i, j]
                w1 = vf[1, i, j] * ir; w2 = vf[2, i, j] * ir; w3 = vf[3, i, j] * ir
                B1 = vf[4, i, j]; B2 = vf[5, i, j]; B3 = vf[6, i, j]
                out[1, i, j] -= div * B1
                out[2, i, j] -= div * B2
                out[3, i, j] -= div * B3
                out[4, i, j] -= div * w1
                out[5, i, j] -= div * w2
                out[6, i, j] -= div * w3
                out[7, i, j] -= div * (w1 * B1 + w2 * B2 + w3 * B3)


@njit(**_JIT)
def hface_llf_rhs(hf, cn, v1h, v2h, sqh, cf1h, cf2h, F1h, F2h,
                  v1c, sqc, cf1c, F1c, dx, dy, with_src, out):
    """Mirror of the x-face fallback for y-faces."""
    sx, sy = hf.shape[1], hf.shape[2]
    for i in range(sx):
        for j in range(1, sy - 1):
            aU = _alpha_pair(v2h[i, j], cf2h[i, j], sqh[i, j],
                             hf[4, i, j], hf[5, i, j], hf[6, i, j],
                             v2h[i, j + 1], cf2h[i, j + 1], sqh[i, j + 1],
                             hf[4, i, j + 1], hf[5, i, j + 1], hf[6, i, j + 1])
            aD = _alpha_pair(v2h[i, j - 1], cf2h[i, j - 1], sqh[i, j - 1],
                             hf[4, i, j - 1], hf[5, i, j - 1], hf[6, i, j - 1],
                             v2h[i, j], cf2h[i, j], sqh[i, j],
                             hf[4, i, j], hf[5, i, j], hf[6, i, j])
            aR = _alpha_pair(v1h[i, j], cf1h[i, j], sqh[i, j],
                             hf[4, i, j], hf[5, i, j], hf[6, i, j],
                             v1c[i + 1, j], cf1c[i + 1, j], sqc[i + 1, j],
                             cn[4, i + 1, j], cn[5, i + 1, j], cn[6, i + 1, j])
            aL = _alpha_pair(v1c[i, j], cf1c[i, j], sqc[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j],
                             v1h[i, j], cf1h[i, j], sqh[i, j],
                             hf[4, i, j], hf[5, i, j], hf[6, i, j])
            for c in range(8):
                gU = _llf8(F2h, F2h, hf, hf, aU, c, i, j, i, j + 1)
                gD = _llf8(F2h, F2h, hf, hf, aD, c, i, j - 1, i, j)
                fR = _llf8(F1h, F1c, hf, cn, aR, c, i, j, i + 1, j)
                fL = _llf8(F1c, F1h, cn, hf, aL, c, i, j, i, j)
                out[c, i, j] = -(fR - fL) / dx - (gU - gD) / dy
            if with_src:
                div = ((cn[4, i + 1, j] - cn[4, i, j]) / (2.0 * dx)
                       + (hf[5, i, j + 1] - hf[5, i, j - 1]) / (2.0 * dy))
                ir = 1.0 / hf[0, i, j]
                w1 = hf[1, i, j] * ir; w2 = hf[2, i, j] * ir; w3 = hf[3, i, j] * ir
                B1 = hf[4, i, j]; B2 = hf[5, i, j]; B3 = hf[6, i, j]
                out[1, i, j] -= div * B1
                out[2, i, j] -= div * B2
                out[3, i, j] -= div * B3
                out[4, i, j] -= div * w1
                out[5, i, j] -= div * w2
                out[6, i, j] -= div * w3
                out[7, i, j] -= div * (w1 * B1 + w2 * B2 + w3 * B3)

# -- parametrized average limiter ----------------------------------------------

@njit(**_JIT)
def _cubic_q_dq(base, dlt, r, eps_term):
    """Value and derivative of the cubic whose positive part marks states
    with p >= eps_p along the ray base + r*dlt."""
    r0 = base[0] + r * dlt[0]
    e = base[7] + r * dlt[7]
    m1 = base[1] + r * dlt[1]
    m2 = base[2] + r * dlt[2]
    m3 = base[3] + r * dlt[3]
    b1 = base[4] + r * dlt[4]
    b2 = base[5] + r * dlt[5]
    b3 = base[6] + r * dlt[6]
    mm = m1 * m1 + m2 * m2 + m3 * m3
    bb = b1 * b1 + b2 * b2 + b3 * b3
    q = r0 * e - 0.5 * mm - 0.5 * r0 * bb - r0 * eps_term
    dq = (dlt[0] * e + r0 * dlt[7]
          - (m1 * dlt[1] + m2 * dlt[2] + m3 * dlt[3])
          - 0.5 * dlt[0] * bb
          - r0 * (b1 * dlt[4] + b2 * dlt[5] + b3 * dlt[6])
          - dlt[0] * eps_term)
    return q, dq


@njit(**_JIT)
def _shrink_root(base, dlt, eps_term):
    """Largest r in [0, 1] with admissible pressure all along [0, r].

    Newton from r = 1 with a guarded bracket, bisection fallback; returns
    the safe (lower) end of the bracket.
    """
    lo = 0.0
    hi = 1.0
    r = 1.0
    for _ in range(10):
        q, dq = _cubic_q_dq(base, dlt, r, eps_term)
        if q >= 0.0:
            lo = r
        else:
            hi = r
        if dq == 0.0:
            r = 0.5 * (lo + hi)
        else:
            rn = r - q / dq
            if rn <= lo or rn >= hi:
                rn = 0.5 * (lo + hi)
            r = rn
        if hi - lo < 1.0e-13:
            return lo
    for _ in range(60):
        if hi - lo < 1.0e-13:
            break
        mid = 0.5 * (lo + hi)
        q, _ = _cubic_q_dq(base, dlt, mid, eps_term)
        if q >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


@njit(**_JIT)
def avg_limiter_lambdas(avg, Ullf, FxA, FxB, FyA, FyB, SA, SB,
                        dt, dx, dy, gamma, th_src, Lam, eps_r, eps_p):
    """Per-cell blending bounds for the limited average update.

    Step 1 limits the source blend by pressure; step 2 bounds density for
    each of the four anti-diffusive edge contributions; step 3 shrinks any
    box vertex whose pressure dips below the floor. Lam rows are ordered
    (L, R, D, U).
    """
    sx, sy = avg.shape[1], avg.shape[2]
    lx = dt / dx
    ly = dt / dy
    usrc = np.empty(8)
    ul1 = np.empty(8)
    H = np.empty((4, 8))
    vert = np.empty(8)
    dlt = np.empty(8)
    for i in range(1, sx - 1):
        for j in range(1, sy - 1):
            rl = Ullf[0, i, j]
            pl = _pres(Ullf, i, j, gamma)
            er = min(EPS_FLOOR, rl)
            ep = min(EPS_FLOOR, pl)
            eps_r[i, j] = er
            eps_p[i, j] = ep

            # step 1: source blending by pressure
            for c in range(8):
                usrc[c] = Ullf[c, i, j] + dt * (SB[c, i, j] - SA[c, i, j])
            psrc = _pres8(usrc, gamma)
            if psrc >= ep:
                ths = 1.0
            else:
                ths = min(1.0, (pl - ep) / (pl - psrc))
            th_src[i, j] = ths
            ul1[0] = Ullf[0, i, j]  # source leaves density untouched
            for c in range(1, 8):
                ul1[c] = ths * usrc[c] + (1.0 - ths) * Ullf[c, i, j]

            # anti-diffusive edge contributions
            for c in range(8):
                H[0, c] = lx * (FxA[c, i, j] - FxB[c, i, j])
                H[1, c] = -lx * (FxA[c, i + 1, j] - FxB[c, i + 1, j])
                H[2, c] = ly * (FyA[c, i, j] - FyB[c, i, j])
                H[3, c] = -ly * (FyA[c, i, j + 1] - FyB[c, i, j + 1])

            # step 2: density bound
            negsum = 0.0
            for J in range(4):
                if H[J, 0] < 0.0:
                    negsum += H[J, 0]
            lam_rho = 1.0
            if negsum < 0.0:
                lam_rho = min(1.0, (ul1[0] - er) / (1.0e-12 - negsum))
            for J in range(4):
                Lam[J, i, j] = lam_rho if H[J, 0] < 0.0 else 1.0

            # step 3: pressure at the 15 nonzero box vertices
            rmin = np.ones(4)
            eps_term = ep / (gamma - 1.0)
            for k in range(1, 16):
                k0 = k & 1
                k1 = (k >> 1) & 1
                k2 = (k >> 2) & 1
                k3 = (k >> 3) & 1
                for c in range(8):
                    d = 0.0
                    if k0 == 1:
                        d += Lam[0, i, j] * H[0, c]
                    if k1 == 1:
                        d += Lam[1, i, j] * H[1, c]
                    if k2 == 1:
                        d += Lam[2, i, j] * H[2, c]
                    if k3 == 1:
                        d += Lam[3, i, j] * H[3, c]
                    dlt[c] = d
                    vert[c] = ul1[c] + d
                if _pres8(vert, gamma) < ep:
                    rk = _shrink_root(ul1, dlt, eps_term)
                    if k0 == 1 and rk < rmin[0]:
                        rmin[0] = rk
                    if k1 == 1 and rk < rmin[1]:
                        rmin[1] = rk
                    if k2 == 1 and rk < rmin[2]:
                        rmin[2] = rk
                    if k3 == 1 and rk < rmin[3]:
                        rmin[3] = rk
            for J in range(4):
                Lam[J, i, j] *= rmin[J]


@njit(**_JIT)
def avg_limited_update(avg, FxA, FxB, FyA, FyB, SA, SB, th_src, Lam,
                       eps_r, eps_p, dt, dx, dy, gamma, verify,
                       out, counts, loc):
    """Final average update with edge-shared blending coefficients.

    Edge coefficients take the min of the two adjacent cells' bounds, so
    both neighbors use identical flux values and mass telescopes exactly.
    On a round-off admissibility failure the cell's coefficients are shrunk
    by 2^m * 1e-8 until the floors hold; counts = (limited cells, retry
    events, aborts).
    """
    sx, sy = avg.shape[1], avg.shape[2]
    lx = dt / dx
    ly = dt / dy
    u = np.empty(8)
    for i in range(1, sx - 1):
        for j in range(1, sy - 1):
            thL = min(Lam[1, i - 1, j], Lam[0, i, j])
            thR = min(Lam[1, i, j], Lam[0, i + 1, j])
            thD = min(Lam[3, i, j - 1], Lam[2, i, j])
            thU = min(Lam[3, i, j], Lam[2, i, j + 1])
            ths = th_src[i, j]
            if ths < 1.0 or thL < 1.0 or thR < 1.0 or thD < 1.0 or thU < 1.0:
                counts[0] += 1
            tL, tR, tD, tU, ts = thL, thR, thD, thU, ths
            level = -1
            while True:
                for c in range(8):
                    fL = tL * FxA[c, i, j] + (1.0 - tL) * FxB[c, i, j]
                    fR = tR * FxA[c, i + 1, j] + (1.0 - tR) * FxB[c, i + 1, j]
                    fD = tD * FyA[c, i, j] + (1.0 - tD) * FyB[c, i, j]
                    fU = tU * FyA[c, i, j + 1] + (1.0 - tU) * FyB[c, i, j + 1]
                    s = ts * SA[c, i, j] + (1.0 - ts) * SB[c, i, j]
                    u[c] = avg[c, i, j] - lx * (fR - fL) - ly * (fU - fD) - dt * s
                if not verify:
                    break
                if u[0] >= eps_r[i, j] \
                        and _pres8(u, gamma) >= eps_p[i, j] - _pnoise8(u):
                    break
                level += 1
                if level == 0:
                    counts[1] += 1
                if level >= RETRY_LEVELS:
                    counts[2] += 1
                    loc[0] = i
                    loc[1] = j
                    break
                d = RETRY_DELTA * (2.0 ** level)
                tL = max(thL - d, 0.0)
                tR = max(thR - d, 0.0)
                tD = max(thD - d, 0.0)
                tU = max(thU - d, 0.0)
                ts = max(ths - d, 0.0)
            for c in range(8):
                out[c, i, j] = u[c]


# -- scaling limiter for point values ------------------------------------------

@njit(**_JIT)
def scale_limit_points(UH, ULLF, gamma, verify, out, counts, loc):
    """Blend a candidate point update toward its fallback.

    First the density row alone is pulled toward the fallback until the
    density floor holds, then the whole state is blended until the pressure
    floor holds; concavity of the pressure makes the second step safe.
    Same retry ladder as the average limiter. Operates on matching slices.
    """
    sx, sy = UH.shape[1], UH.shape[2]
    u1 = np.empty(8)
    u2 = np.empty(8)
    for i in range(sx):
        for j in range(sy):
            rl = ULLF[0, i, j]
            pl = _pres(ULLF, i, j, gamma)
            er = min(EPS_FLOOR, rl)
            ep = min(EPS_FLOOR, pl)
            th1 = 1.0
            if UH[0, i, j] < er:
                th1 = (rl - er) / (rl - UH[0, i, j])
            level = -1
            t1 = th1
            th2 = 1.0
            while True:
                u1[0] = t1 * UH[0, i, j] + (1.0 - t1) * rl
                for c in range(1, 8):
                    u1[c] = UH[c, i, j]
                p1 = _pres8(u1, gamma)
                if level < 0:
                    # the pressure blend is sized on the first pass only
                    th2 = 1.0
                    if p1 < ep:
                        th2 = (pl - ep) / (pl - p1)
                    t2 = th2
                else:
                    t2 = max(th2 - RETRY_DELTA * (2.0 ** level), 0.0)
                for c in range(8):
                    u2[c] = t2 * u1[c] + (1.0 - t2) * ULLF[c, i, j]
                if not verify:
                    break
                if u2[0] >= er and _pres8(u2, gamma) >= ep - _pnoise8(u2):
                    break
                level += 1
                if level == 0:
                    counts[1] += 1
                if level >= RETRY_LEVELS:
                    counts[2] += 1
                    loc[0] = i
                    loc[1] = j
                    break
                t1 = max(th1 - RETRY_DELTA * (2.0 ** level), 0.0)
            if th1 < 1.0 or th2 < 1.0:
                counts[0] += 1
            for c in range(8):
                out[c, i, j] = u2[c]


# -- time step bracket ---------------------------------------------------------

@njit(**_JIT)
def dt_brackets(avg, va1, va2, sqa, ca1, ca2,
                vf, vv1, vv2, sqv, cv1, cv2,
                hf, vh1, vh2, sqh, ch1, ch2,
                cn, vc1, vc2, sqc, cc1, cc2,
                dx, dy, g, res, loc):
    """Largest admissibility bracket over all interior unknowns.

    Each unknown pays its two directional dissipation speeds per axis plus
    its own discrete divergence weighted by 1/sqrt(rho); dt must satisfy
    dt * bracket <= 1. res = (max, x-part, y-part, div-part) at the argmax;
    loc = (family, i, j) with families avg/vface/hface/corner = 0..3.
    """
    best = -1.0
    sx, sy = avg.shape[1], avg.shape[2]

    for i in range(g, sx - g):
        for j in range(g, sy - g):
            aL = _alpha_pair(va1[i - 1, j], ca1[i - 1, j], sqa[i - 1, j],
                             avg[4, i - 1, j], avg[5, i - 1, j], avg[6, i - 1, j],
                             va1[i, j], ca1[i, j], sqa[i, j],
                             avg[4, i, j], avg[5, i, j], avg[6, i, j])
            aR = _alpha_pair(va1[i, j], ca1[i, j], sqa[i, j],
                             avg[4, i, j], avg[5, i, j], avg[6, i, j],
                             va1[i + 1, j], ca1[i + 1, j], sqa[i + 1, j],
                             avg[4, i + 1, j], avg[5, i + 1, j], avg[6, i + 1, j])
            aD = _alpha_pair(va2[i, j - 1], ca2[i, j - 1], sqa[i, j - 1],
                             avg[4, i, j - 1], avg[5, i, j - 1], avg[6, i, j - 1],
                             va2[i, j], ca2[i, j], sqa[i, j],
                             avg[4, i, j], avg[5, i, j], avg[6, i, j])
            aU = _alpha_pair(va2[i, j], ca2[i, j], sqa[i, j],
                             avg[4, i, j], avg[5, i, j], avg[6, i, j],
                             va2[i, j + 1], ca2[i, j + 1], sqa[i, j + 1],
                             avg[4, i, j + 1], avg[5, i, j + 1], avg[6, i, j + 1])
            div = ((avg[4, i + 1, j] - avg[4, i - 1, j]) / (2.0 * dx)
                   + (avg[5, i, j + 1] - avg[5, i, j - 1]) / (2.0 * dy))
            tx = (aL + aR) / dx
            ty = (aD + aU) / dy
            td = abs(div) / sqa[i, j]
            br = tx + ty + td
            if br > best:
                best = br
                res[0] = br; res[1] = tx; res[2] = ty; res[3] = td
                loc[0] = 0; loc[1] = i; loc[2] = j

    sx, sy = cn.shape[1], cn.shape[2]
    for i in range(g, sx - g):
        for j in range(g, sy - g):
            aL = _alpha_pair(vc1[i - 1, j], cc1[i - 1, j], sqc[i - 1, j],
                             cn[4, i - 1, j], cn[5, i - 1, j], cn[6, i - 1, j],
                             vc1[i, j], cc1[i, j], sqc[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j])
            aR = _alpha_pair(vc1[i, j], cc1[i, j], sqc[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j],
                             vc1[i + 1, j], cc1[i + 1, j], sqc[i + 1, j],
                             cn[4, i + 1, j], cn[5, i + 1, j], cn[6, i + 1, j])
            aD = _alpha_pair(vc2[i, j - 1], cc2[i, j - 1], sqc[i, j - 1],
                             cn[4, i, j - 1], cn[5, i, j - 1], cn[6, i, j - 1],
                             vc2[i, j], cc2[i, j], sqc[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j])
            aU = _alpha_pair(vc2[i, j], cc2[i, j], sqc[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j],
                             vc2[i, j + 1], cc2[i, j + 1], sqc[i, j + 1],
                             cn[4, i, j + 1], cn[5, i, j + 1], cn[6, i, j + 1])
            div = ((cn[4, i + 1, j] - cn[4, i - 1, j]) / (2.0 * dx)
                   + (cn[5, i, j + 1] - cn[5, i, j - 1]) / (2.0 * dy))
            tx = (aL + aR) / dx
            ty = (aD + aU) / dy
            td = abs(div) / sqc[i, j]
            br = tx + ty + td
            if br > best:
                best = br
                res[0] = br; res[1] = tx; res[2] = ty; res[3] = td
                loc[0] = 3; loc[1] = i; loc[2] = j

    sx, sy = vf.shape[1], vf.shape[2]
    for i in range(g, sx - g):
        for j in range(g, sy - g):
            aL = _alpha_pair(vv1[i - 1, j], cv1[i - 1, j], sqv[i - 1, j],
                             vf[4, i - 1, j], vf[5, i - 1, j], vf[6, i - 1, j],
                             vv1[i, j], cv1[i, j], sqv[i, j],
                             vf[4, i, j], vf[5, i, j], vf[6, i, j])
            aR = _alpha_pair(vv1[i, j], cv1[i, j], sqv[i, j],
                             vf[4, i, j], vf[5, i, j], vf[6, i, j],
                             vv1[i + 1, j], cv1[i + 1, j], sqv[i + 1, j],
                             vf[4, i + 1, j], vf[5, i + 1, j], vf[6, i + 1, j])
            aD = _alpha_pair(vc2[i, j], cc2[i, j], sqc[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j],
                             vv2[i, j], cv2[i, j], sqv[i, j],
                             vf[4, i, j], vf[5, i, j], vf[6, i, j])
            aU = _alpha_pair(vv2[i, j], cv2[i, j], sqv[i, j],
                             vf[4, i, j], vf[5, i, j], vf[6, i, j],
                             vc2[i, j + 1], cc2[i, j + 1], sqc[i, j + 1],
                             cn[4, i, j + 1], cn[5, i, j + 1], cn[6, i, j + 1])
            div = ((vf[4, i + 1, j] - vf[4, i - 1, j]) / (2.0 * dx)
                   + (cn[5, i, j + 1] - cn[5, i, j]) / (2.0 * dy))
            tx = (aL + aR) / dx
            ty = (aD + aU) / dy
            td = abs(div) / sqv[i, j]
            br = tx + ty + td
            if br > best:
                best = br
                res[0] = br; res[1] = tx; res[2] = ty; res[3] = td
                loc[0] = 1; loc[1] = i; loc[2] = j

    sx, sy = hf.shape[1], hf.shape[2]
    for i in range(g, sx - g):
        for j in range(g, sy - g):
            aD = _alpha_pair(vh2[i, j - 1], ch2[i, j - 1], sqh[i, j - 1],
                             hf[4, i, j - 1], hf[5, i, j - 1], hf[6, i, j - 1],
                             vh2[i, j], ch2[i, j], sqh[i, j],
                             hf[4, i, j], hf[5, i, j], hf[6, i, j])
            aU = _alpha_pair(vh2[i, j], ch2[i, j], sqh[i, j],
                             hf[4, i, j], hf[5, i, j], hf[6, i, j],
                             vh2[i, j + 1], ch2[i, j + 1], sqh[i, j + 1],
                             hf[4, i, j + 1], hf[5, i, j + 1], hf[6, i, j + 1])
            aL = _alpha_pair(vc1[i, j], cc1[i, j], sqc[i, j],
                             cn[4, i, j], cn[5, i, j], cn[6, i, j],
                             vh1[i, j], ch1[i, j], sqh[i, j],
                             hf[4, i, j], hf[5, i, j], hf[6, i, j])
            aR = _alpha_pair(vh1[i, j], ch1[i, j], sqh[i, j],
                             hf[4, i, j], hf[5, i, j], hf[6, i, j],
                             vc1[i + 1, j], cc1[i + 1, j], sqc[i + 1, j],
                             cn[4, i + 1, j], cn[5, i + 1, j], cn[6, i + 1, j])
            div = ((cn[4, i + 1, j] - cn[4, i, j]) / (2.0 * dx)
                   + (hf[5, i, j + 1] - hf[5, i, j - 1]) / (2.0 * dy))
            tx = (aL + aR) / dx
            ty = (aD + aU) / dy
            td = abs(div) / sqh[i, j]
            br = tx + ty + td
            if br > best:
                best = br
                res[0] = br; res[1] = tx; res[2] = ty; res[3] = td
                loc[0] = 2; loc[1] = i; loc[2] = j
