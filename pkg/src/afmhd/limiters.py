"""Shock-sensor blending and the positivity-preserving limiters.

Three layers act on each forward-Euler stage: (1) a smoothness sensor blends
high-order fluxes toward first-order LLF fluxes near discontinuities, (2) a
parametrized flux limiter bounds the cell-average update so density and
pressure stay above per-cell floors, (3) a scaling limiter pulls point
values toward their LLF fallbacks.  All blending is convex, so the floors
carried by the fallbacks survive.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels as K
from .errors import ConvergenceFailure
from .physics import ENE, GasModel, MAG, RHO, VEC, pressure

EPS_FLOOR = K.EPS_FLOOR
RETRY_DELTA = K.RETRY_DELTA
RETRY_LEVELS = K.RETRY_LEVELS


# -- shock sensor ----------------------------------------------------------------

@dataclass
class SensorCoefficients:
    """Per-edge and per-cell blending coefficients in (0, 1]."""

    theta_xedge: np.ndarray
    theta_yedge: np.ndarray
    theta_cell: np.ndarray
    kappa: float


def sensor_thetas_from_phis(ph1x, ph1y, ph2, ph3, kappa, periodic_x,
                            periodic_y, nx, ny, thx, thy, thc):
    """Edge coefficients exp(-kappa [max(phi1) max(phi2) + max(phi3)]) from
    per-cell indicators; cell coefficient = min of the four incident edges.

    The indicator arrays are valid away from the outermost slot of each
    axis; those slots are filled by wrap (periodic) or nearest copy first.
    """
    for arr in (ph1x, ph1y, ph2, ph3):
        if periodic_x:
            arr[0, :] = arr[nx, :]
            arr[-1, :] = arr[-1 - nx, :]
        else:
            arr[0, :] = arr[1, :]
            arr[-1, :] = arr[-2, :]
        if periodic_y:
            arr[:, 0] = arr[:, ny]
            arr[:, -1] = arr[:, -1 - ny]
        else:
            arr[:, 0] = arr[:, 1]
            arr[:, -1] = arr[:, -2]
    sa, sb = thc.shape
    thx[1:sa, :] = np.exp(-kappa * (
        np.maximum(ph1x[:-1, :], ph1x[1:, :]) * np.maximum(ph2[:-1, :], ph2[1:, :])
        + np.maximum(ph3[:-1, :], ph3[1:, :])))
    thy[:, 1:sb] = np.exp(-kappa * (
        np.maximum(ph1y[:, :-1], ph1y[:, 1:]) * np.maximum(ph2[:, :-1], ph2[:, 1:])
        + np.maximum(ph3[:, :-1], ph3[:, 1:])))
    np.minimum(np.minimum(thx[:-1, :], thx[1:, :]),
               np.minimum(thy[:, :-1], thy[:, 1:]), out=thc)


def shock_sensor(field, gas: GasModel, kappa: float, bc) -> SensorCoefficients:
    """Standalone sensor evaluation on a ghost-filled field."""
    Ua = field.avg
    sh = Ua.shape[1:]
    p = pressure(Ua, gas)
    v1 = Ua[1] / Ua[0]
    v2 = Ua[2] / Ua[0]
    ph1x, ph1y, ph2, ph3 = (np.zeros(sh) for _ in range(4))
    K.sensor_phis(Ua, p, v1, v2, field.mesh.dx, field.mesh.dy,
                  ph1x, ph1y, ph2, ph3)
    thx = np.ones((sh[0] + 1, sh[1]))
    thy = np.ones((sh[0], sh[1] + 1))
    thc = np.ones(sh)
    sensor_thetas_from_phis(ph1x, ph1y, ph2, ph3, kappa,
                            bc.left.kind == "periodic",
                            bc.bottom.kind == "periodic",
                            field.mesh.nx, field.mesh.ny, thx, thy, thc)
    return SensorCoefficients(theta_xedge=thx, theta_yedge=thy,
                              theta_cell=thc, kappa=kappa)


def sensor_blend(f_high, f_llf, theta):
    """Convex combination theta f_high + (1 - theta) f_llf; theta = 1 is
    bitwise transparent."""
    return theta * np.asarray(f_high) + (1.0 - theta) * np.asarray(f_llf)


sensor_blend_source = sensor_blend


# -- parametrized flux limiter for averages ---------------------------------------

def pp_source_theta(u_llf, u_src, eps_p: float, gas: GasModel) -> float:
    """Blending bound for the source contribution, by pressure concavity."""
    pl = float(pressure(u_llf, gas))
    ps = float(pressure(u_src, gas))
    if ps >= eps_p:
        return 1.0
    denom = pl - ps
    if denom <= 1.0e-300:
        return 1.0
    return min(1.0, (pl - eps_p) / denom)


def smallest_positive_pressure_root(base, inc, eps_p: float,
                                    gas: GasModel) -> float:
    """Largest r in [0, 1] keeping pressure >= eps_p along base + r inc.

    Solves the cubic rho E - |m|^2/2 - rho |B|^2/2 - rho eps_p/(gamma-1) = 0
    by guarded Newton from r = 1 with bisection fallback, returning the safe
    end of the final bracket.
    """
    base = np.asarray(base, dtype=float)
    inc = np.asarray(inc, dtype=float)
    eps_term = eps_p / (gas.gamma - 1.0)

    def q_dq(r):
        u = base + r * inc
        mm = float(u[VEC] @ u[VEC])
        bb = float(u[MAG] @ u[MAG])
        q = u[RHO] * u[ENE] - 0.5 * mm - 0.5 * u[RHO] * bb - u[RHO] * eps_term
        dq = (inc[RHO] * u[ENE] + u[RHO] * inc[ENE]
              - float(u[VEC] @ inc[VEC]) - 0.5 * inc[RHO] * bb
              - u[RHO] * float(u[MAG] @ inc[MAG]) - inc[RHO] * eps_term)
        return q, dq

    lo, hi, r = 0.0, 1.0, 1.0
    for _ in range(10):
        q, dq = q_dq(r)
        if q >= 0.0:
            lo = r
        else:
            hi = r
        rn = r - q / dq if dq != 0.0 else 0.5 * (lo + hi)
        if not (lo < rn < hi):
            rn = 0.5 * (lo + hi)
        r = rn
        if hi - lo < 1.0e-13:
            return lo
    for _ in range(100):
        if hi - lo < 1.0e-13:
            return lo
        mid = 0.5 * (lo + hi)
        q, _ = q_dq(mid)
        if q >= 0.0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceFailure(
        f"pressure-root bracket stalled at [{lo}, {hi}]")


def pp_lambda_candidates(u_lim1, H, eps_rho: float, eps_p: float,
                         gas: GasModel):
    """Per-direction bounds Lambda = (L, R, D, U) such that any coefficient
    box [0, Lambda]^4 applied to the anti-diffusive contributions H keeps
    rho >= eps_rho and p >= eps_p (checked at the box vertices; convexity
    extends the bound to the interior)."""
    u_lim1 = np.asarray(u_lim1, dtype=float)
    H = np.asarray(H, dtype=float)
    lam = np.ones(4)
    negsum = sum(H[J, RHO] for J in range(4) if H[J, RHO] < 0.0)
    if negsum < 0.0:
        lam_rho = min(1.0, (u_lim1[RHO] - eps_rho) / (1.0e-12 - negsum))
        for J in range(4):
            if H[J, RHO] < 0.0:
                lam[J] = lam_rho
    rmin = np.ones(4)
    for k in range(1, 16):
        bits = [(k >> J) & 1 for J in range(4)]
        dlt = sum(bits[J] * lam[J] * H[J] for J in range(4))
        if pressure(u_lim1 + dlt, gas) < eps_p:
            rk = smallest_positive_pressure_root(u_lim1, dlt, eps_p, gas)
            for J in range(4):
                if bits[J]:
                    rmin[J] = min(rmin[J], rk)
    return lam * rmin


def pp_edge_thetas(lam: np.ndarray):
    """Unique per-edge coefficients: the min of the two adjacent cells'
    facing bounds, so the blended flux is single-valued per edge.  lam has
    shape (4, sx, sy) ordered (L, R, D, U); returns (theta_x, theta_y) on
    the interior edge lattices (sx-1, sy) and (sx, sy-1)."""
    theta_x = np.minimum(lam[1, :-1, :], lam[0, 1:, :])
    theta_y = np.minimum(lam[3, :, :-1], lam[2, :, 1:])
    return theta_x, theta_y


def limited_average_update(avg, FxA, FxB, FyA, FyB, SA, SB, th_src, lam,
                           dt, dx, dy):
    """Reference blended update over the inner cell range [1, s-1); mirrors
    the compiled kernel without verification or retry."""
    sx, sy = avg.shape[1], avg.shape[2]
    out = avg.copy()
    for i in range(1, sx - 1):
        for j in range(1, sy - 1):
            tL = min(lam[1, i - 1, j], lam[0, i, j])
            tR = min(lam[1, i, j], lam[0, i + 1, j])
            tD = min(lam[3, i, j - 1], lam[2, i, j])
            tU = min(lam[3, i, j], lam[2, i, j + 1])
            ts = th_src[i, j]
            fL = tL * FxA[:, i, j] + (1.0 - tL) * FxB[:, i, j]
            fR = tR * FxA[:, i + 1, j] + (1.0 - tR) * FxB[:, i + 1, j]
            fD = tD * FyA[:, i, j] + (1.0 - tD) * FyB[:, i, j]
            fU = tU * FyA[:, i, j + 1] + (1.0 - tU) * FyB[:, i, j + 1]
            s = ts * SA[:, i, j] + (1.0 - ts) * SB[:, i, j]
            out[:, i, j] = (avg[:, i, j] - dt / dx * (fR - fL)
                            - dt / dy * (fU - fD) - dt * s)
    return out


# -- scaling limiter for point values ----------------------------------------------

def scaling_limit_point(u_high, u_llf, eps_rho: float, eps_p: float,
                        gas: GasModel):
    """Two-step blend of a point candidate toward its fallback: density row
    first, then the whole state for pressure."""
    u_high = np.asarray(u_high, dtype=float)
    u_llf = np.asarray(u_llf, dtype=float)
    th1 = 1.0
    if u_high[RHO] < eps_rho:
        th1 = (u_llf[RHO] - eps_rho) / (u_llf[RHO] - u_high[RHO])
    u1 = u_high.copy()
    u1[RHO] = th1 * u_high[RHO] + (1.0 - th1) * u_llf[RHO]
    th2 = 1.0
    p1 = float(pressure(u1, gas))
    if p1 < eps_p:
        pl = float(pressure(u_llf, gas))
        denom = pl - p1
        th2 = 1.0 if denom <= 1.0e-300 else (pl - eps_p) / denom
    return th2 * u1 + (1.0 - th2) * u_llf


def limit_cell_center(u_center, u_avg, gas: GasModel):
    """Blend a recovered cell-center value toward the cell average; the
    floors come from the average, which the average limiter has already
    certified."""
    u_avg = np.asarray(u_avg, dtype=float)
    eps_rho = min(EPS_FLOOR, float(u_avg[RHO]))
    eps_p = min(EPS_FLOOR, float(pressure(u_avg, gas)))
    return scaling_limit_point(u_center, u_avg, eps_rho, eps_p, gas)
