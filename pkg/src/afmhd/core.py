"""High-order stage assembly, time-step control, and SSP-RK3 integration.

Degrees of freedom are cell averages plus point values at cell corners and
face midpoints.  One forward-Euler application of the full pipeline is:

    ghosts -> center recovery (+ limiting) -> LLF ingredients ->
    high-order fluxes / RHS -> shock-sensor blend -> PP blend -> update.

The per-point arithmetic lives in compiled kernels; this module owns the
array plumbing and exposes slow reference implementations of the individual
operators for testing.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels as K
from .errors import (DegenerateInput, InadmissibleState, NoAdmissibleState,
                     PPViolation)
from .grid import (G, BoundaryPolicy, DoFField, Mesh2D, combine, fd,
                   fill_ghosts, recover_center, sync_periodic_aliases)
from .limiters import sensor_thetas_from_phis
from .physics import (BX, BY, GasModel, MAG, P_NOISE_REL, RHO, VEC,
                      energy_scale, flux, is_admissible,
                      powell_psi, pressure)

SRC_CENTRAL = 0
SRC_UPWIND = 1
SRC_OFF = 2
_SRC_MODES = {"central": SRC_CENTRAL, "upwind": SRC_UPWIND, "off": SRC_OFF}

SIMPSON_W = np.array([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0])

_FAMILIES = ("avg", "vface", "hface", "corner")


@dataclass(frozen=True)
class SchemeOptions:
    """Switchboard for the limiting layers and source discretizations."""

    kappa: float = 1.0
    sensor: bool = True
    pp: bool = True
    source_avg: bool = True
    source_points: bool = True
    point_source: str = "central"
    nu: float = 0.4

    def __post_init__(self):
        if self.point_source not in ("central", "upwind"):
            raise DegenerateInput(
                f"point_source must be 'central' or 'upwind', got {self.point_source!r}")
        if not (0.0 < self.nu <= 1.0):
            raise DegenerateInput(f"CFL number must lie in (0, 1], got {self.nu}")
        if self.kappa < 0.0:
            raise DegenerateInput(f"sensor strength must be >= 0, got {self.kappa}")


@dataclass(frozen=True)
class TimeStepReport:
    """Chosen dt and the DoF whose admissibility bracket was binding."""

    dt: float
    family: str
    i: int
    j: int
    bracket: float
    x_term: float
    y_term: float
    divergence_term: float


@dataclass
class StepStats:
    """Limiter activity accumulated over the stages of one RK step."""

    sensor_active: int = 0
    pp_active: int = 0
    retry_events: int = 0

    def add(self, other: "StepStats") -> None:
        self.sensor_active += other.sensor_active
        self.pp_active += other.pp_active
        self.retry_events += other.retry_events


class _Tables:
    """Primitive/flux tables for one DoF lattice, rebuilt every stage."""

    def __init__(self, shape):
        self.p = np.empty(shape)
        self.v1 = np.empty(shape)
        self.v2 = np.empty(shape)
        self.sq = np.empty(shape)
        self.cf1 = np.empty(shape)
        self.cf2 = np.empty(shape)
        self.F1 = np.empty((8,) + shape)
        self.F2 = np.empty((8,) + shape)

    def build(self, U, gamma):
        K.build_tables(U, gamma, self.p, self.v1, self.v2, self.sq,
                       self.cf1, self.cf2, self.F1, self.F2)


class Workspace:
    """Preallocated scratch for one mesh; reused across stages and steps."""

    def __init__(self, mesh: Mesh2D):
        sa = (mesh.nx + 2 * G, mesh.ny + 2 * G)
        sv = (mesh.nx + 1 + 2 * G, mesh.ny + 2 * G)
        sh = (mesh.nx + 2 * G, mesh.ny + 1 + 2 * G)
        sc = (mesh.nx + 1 + 2 * G, mesh.ny + 1 + 2 * G)
        self.ta = _Tables(sa)
        self.tv = _Tables(sv)
        self.th = _Tables(sh)
        self.tc = _Tables(sc)
        self.te = _Tables(sa)  # recovered cell centers
        self.center = np.empty((8,) + sa)
        self.ax = np.empty(sv)
        self.ay = np.empty(sh)
        self.Fxllf = np.empty((8,) + sv)
        self.Fyllf = np.empty((8,) + sh)
        self.FxA = np.empty((8,) + sv)
        self.FyA = np.empty((8,) + sh)
        self.Sllf = np.zeros((8,) + sa)
        self.Shigh = np.zeros((8,) + sa)
        self.SA = np.empty((8,) + sa)
        self.Ullf = np.empty((8,) + sa)
        self.ph1x = np.zeros(sa)
        self.ph1y = np.zeros(sa)
        self.ph2 = np.zeros(sa)
        self.ph3 = np.zeros(sa)
        self.thx = np.ones(sv)
        self.thy = np.ones(sh)
        self.thc = np.ones(sa)
        self.th_src = np.ones(sa)
        self.Lam = np.ones((4,) + sa)
        self.ones_cell = np.ones(sa)
        self.ones_lam = np.ones((4,) + sa)
        self.eps_r = np.full(sa, K.EPS_FLOOR)
        self.eps_p = np.full(sa, K.EPS_FLOOR)
        self.rhs_cn = np.zeros((8,) + sc)
        self.rhs_vf = np.zeros((8,) + sv)
        self.rhs_hf = np.zeros((8,) + sh)
        self.hi_cn = np.empty((8,) + sc)
        self.hi_vf = np.empty((8,) + sv)
        self.hi_hf = np.empty((8,) + sh)
        self.fb_cn = np.empty((8,) + sc)
        self.fb_vf = np.empty((8,) + sv)
        self.fb_hf = np.empty((8,) + sh)
        self.lim_center = np.empty((8,) + sa)
        self.counts = np.zeros((5, 3), dtype=np.int64)
        self.loc = np.zeros(2, dtype=np.int64)
        self.dt_res = np.zeros(4)
        self.dt_loc = np.zeros(3, dtype=np.int64)


def _check_admissible_tables(ws: Workspace, field: DoFField, center, t: float):
    """Abort cleanly the moment any DoF or recovered center leaves the
    admissible set; this is the detection point for unlimited runs.

    Positivity of pressure is enforced to floating-point accuracy: the
    recovered p carries cancellation noise ~ulp(energy_scale), so demanding
    p > 0 bit-exactly would abort sound strongly-magnetized runs."""
    lattices = (
        ("avg", field.avg, ws.ta), ("vface", field.vface, ws.tv),
        ("hface", field.hface, ws.th), ("corner", field.corner, ws.tc),
        ("center", center, ws.te),
    )
    for name, U, tb in lattices:
        with np.errstate(invalid="ignore"):
            floor = -P_NOISE_REL * energy_scale(U)
            bad = ~((U[RHO] > 0.0) & (tb.p > floor)
                    & np.isfinite(U[RHO]) & np.isfinite(tb.p))
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise NoAdmissibleState(
                f"inadmissible state at t={t:.6g}: {name} DoF ({i},{j}) "
                f"rho={U[RHO, i, j]:.6g} p={tb.p[i, j]:.6g}")


def euler_stage(field: DoFField, t: float, dt: float, gas: GasModel,
                bc: BoundaryPolicy, opts: SchemeOptions, ws: Workspace):
    """One forward-Euler application of the full limited pipeline.

    Returns the updated field and the stage's limiter statistics.  Ghost
    values of the output are stale; the next call refills them.
    """
    mesh = field.mesh
    dx, dy = mesh.dx, mesh.dy
    gam = gas.gamma
    stats = StepStats()
    fill_ghosts(field, bc, t)

    ws.center[:] = recover_center(field)
    center = ws.center
    if opts.pp:
        ws.counts[4] = 0
        K.scale_limit_points(center, field.avg, gam, True,
                             ws.lim_center, ws.counts[4], ws.loc)
        if ws.counts[4, 2] > 0:
            raise PPViolation(
                f"center limiting failed at t={t:.6g} cell {tuple(ws.loc)}")
        center = ws.lim_center

    ws.ta.build(field.avg, gam)
    ws.tv.build(field.vface, gam)
    ws.th.build(field.hface, gam)
    ws.tc.build(field.corner, gam)
    ws.te.build(center, gam)
    _check_admissible_tables(ws, field, center, t)

    ta, tv, th, tc, te = ws.ta, ws.tv, ws.th, ws.tc, ws.te
    Ua = field.avg
    sa, sb = Ua.shape[1], Ua.shape[2]
    lx, ly = dt / dx, dt / dy

    # averages: first-order ingredients
    K.avg_llf_edges(Ua, ta.v1, ta.v2, ta.sq, ta.cf1, ta.cf2, ta.F1, ta.F2,
                    ws.ax, ws.Fxllf, ws.ay, ws.Fyllf)
    if opts.source_avg:
        K.avg_llf_source(Ua, dx, dy, ws.Sllf)
        K.avg_high_source(field.corner, field.vface, field.hface, center,
                          dx, dy, ws.Shigh)
    else:
        ws.Sllf[:] = 0.0
        ws.Shigh[:] = 0.0

    if opts.pp:
        ws.Ullf[:] = Ua
        ws.Ullf[:, 1:-1, 1:-1] = (
            Ua[:, 1:-1, 1:-1]
            - lx * (ws.Fxllf[:, 2:sa, 1:-1] - ws.Fxllf[:, 1:sa - 1, 1:-1])
            - ly * (ws.Fyllf[:, 1:-1, 2:sb] - ws.Fyllf[:, 1:-1, 1:sb - 1])
            - dt * ws.Sllf[:, 1:-1, 1:-1])
        pl = pressure(ws.Ullf[:, 1:-1, 1:-1], gas)
        with np.errstate(invalid="ignore"):
            bad = ~((ws.Ullf[RHO, 1:-1, 1:-1] > 0.0) & (pl > 0.0) & np.isfinite(pl))
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise PPViolation(
                f"first-order update inadmissible at t={t:.6g} "
                f"cell ({i + 1},{j + 1}); dt or dissipation speeds are wrong")

    # averages: high-order fluxes (Simpson along each face) and sensor blend
    ws.FxA[:] = (tc.F1[:, :, :-1] + 4.0 * tv.F1 + tc.F1[:, :, 1:]) / 6.0
    ws.FyA[:] = (tc.F2[:, :-1, :] + 4.0 * th.F2 + tc.F2[:, 1:, :]) / 6.0
    if opts.sensor and opts.kappa > 0.0:
        K.sensor_phis(Ua, ta.p, ta.v1, ta.v2, dx, dy,
                      ws.ph1x, ws.ph1y, ws.ph2, ws.ph3)
        sensor_thetas_from_phis(ws.ph1x, ws.ph1y, ws.ph2, ws.ph3, opts.kappa,
                                bc.left.kind == "periodic",
                                bc.bottom.kind == "periodic",
                                mesh.nx, mesh.ny, ws.thx, ws.thy, ws.thc)
        stats.sensor_active += int(np.count_nonzero(
            ws.thc[G:sa - G, G:sb - G] < 1.0))
    else:
        ws.thx[:] = 1.0
        ws.thy[:] = 1.0
        ws.thc[:] = 1.0
    ws.FxA *= ws.thx
    ws.FxA += (1.0 - ws.thx) * ws.Fxllf
    ws.FyA *= ws.thy
    ws.FyA += (1.0 - ws.thy) * ws.Fyllf
    np.multiply(ws.Shigh, ws.thc, out=ws.SA)
    ws.SA += (1.0 - ws.thc) * ws.Sllf

    out = DoFField.zeros(mesh)
    out.avg[:] = field.avg
    out.vface[:] = field.vface
    out.hface[:] = field.hface
    out.corner[:] = field.corner

    ws.counts[0] = 0
    if opts.pp:
        ws.Lam[:] = 1.0
        K.avg_limiter_lambdas(Ua, ws.Ullf, ws.FxA, ws.Fxllf, ws.FyA, ws.Fyllf,
                              ws.SA, ws.Sllf, dt, dx, dy, gam,
                              ws.th_src, ws.Lam, ws.eps_r, ws.eps_p)
        K.avg_limited_update(Ua, ws.FxA, ws.Fxllf, ws.FyA, ws.Fyllf,
                             ws.SA, ws.Sllf, ws.th_src, ws.Lam,
                             ws.eps_r, ws.eps_p, dt, dx, dy, gam, True,
                             out.avg, ws.counts[0], ws.loc)
        if ws.counts[0, 2] > 0:
            raise PPViolation(
                f"average retry ladder exhausted at t={t:.6g} "
                f"cell {tuple(ws.loc)}")
    else:
        K.avg_limited_update(Ua, ws.FxA, ws.FxA, ws.FyA, ws.FyA,
                             ws.SA, ws.SA, ws.ones_cell, ws.ones_lam,
                             ws.eps_r, ws.eps_p, dt, dx, dy, gam, False,
                             out.avg, ws.counts[0], ws.loc)

    # point values: high-order candidates
    smode = _SRC_MODES[opts.point_source] if opts.source_points else SRC_OFF
    K.corner_high_rhs(field.corner, field.hface, field.vface,
                      tc.v1, tc.cf1, th.v1, th.cf1, tc.v2, tc.cf2,
                      tv.v2, tv.cf2, tc.F1, th.F1, tc.F2, tv.F2,
                      dx, dy, smode, ws.rhs_cn)
    K.vface_high_rhs(field.vface, center, field.corner,
                     tv.v1, tv.cf1, te.v1, te.cf1, tv.F1, te.F1, tv.F2, tc.F2,
                     dx, dy, smode, ws.rhs_vf)
    K.hface_high_rhs(field.hface, center, field.corner,
                     th.v2, th.cf2, te.v2, te.cf2, th.F2, te.F2, th.F1, tc.F1,
                     dx, dy, smode, ws.rhs_hf)
    for hi, U, rhs in ((ws.hi_cn, field.corner, ws.rhs_cn),
                       (ws.hi_vf, field.vface, ws.rhs_vf),
                       (ws.hi_hf, field.hface, ws.rhs_hf)):
        hi[:] = U
        hi[:, 1:-1, 1:-1] = U[:, 1:-1, 1:-1] + dt * rhs[:, 1:-1, 1:-1]

    if opts.pp:
        K.corner_llf_rhs(field.corner, tc.v1, tc.v2, tc.sq, tc.cf1, tc.cf2,
                         tc.F1, tc.F2, dx, dy, opts.source_points, ws.rhs_cn)
        K.vface_llf_rhs(field.vface, field.corner, tv.v1, tv.v2, tv.sq,
                        tv.cf1, tv.cf2, tv.F1, tv.F2, tc.v2, tc.sq, tc.cf2,
                        tc.F2, dx, dy, opts.source_points, ws.rhs_vf)
        K.hface_llf_rhs(field.hface, field.corner, th.v1, th.v2, th.sq,
                        th.cf1, th.cf2, th.F1, th.F2, tc.v1, tc.sq, tc.cf1,
                        tc.F1, dx, dy, opts.source_points, ws.rhs_hf)
        for fb, U, rhs in ((ws.fb_cn, field.corner, ws.rhs_cn),
                           (ws.fb_vf, field.vface, ws.rhs_vf),
                           (ws.fb_hf, field.hface, ws.rhs_hf)):
            fb[:] = U
            fb[:, 1:-1, 1:-1] = U[:, 1:-1, 1:-1] + dt * rhs[:, 1:-1, 1:-1]
        for n, (hi, fb, dst) in enumerate(((ws.hi_cn, ws.fb_cn, out.corner),
                                           (ws.hi_vf, ws.fb_vf, out.vface),
                                           (ws.hi_hf, ws.fb_hf, out.hface))):
            ws.counts[1 + n] = 0
            K.scale_limit_points(hi, fb, gam, True, dst,
                                 ws.counts[1 + n], ws.loc)
            if ws.counts[1 + n, 2] > 0:
                raise PPViolation(
                    f"point retry ladder exhausted at t={t:.6g} "
                    f"{_FAMILIES[1 + n]} {tuple(ws.loc)}")
    else:
        out.corner[:] = ws.hi_cn
        out.vface[:] = ws.hi_vf
        out.hface[:] = ws.hi_hf

    for name, arr in (("avg", out.avg), ("vface", out.vface),
                      ("hface", out.hface), ("corner", out.corner)):
        sl = arr[:, 1:-1, 1:-1]
        if not np.isfinite(sl).all():
            c, i, j = np.argwhere(~np.isfinite(sl))[0]
            raise NoAdmissibleState(
                f"non-finite update at t={t:.6g}: {name} component {c} "
                f"DoF ({i + 1},{j + 1})")
    sync_periodic_aliases(out, bc)

    stats.pp_active += int(ws.counts[:, 0].sum())
    stats.retry_events += int(ws.counts[:, 1].sum())
    return out, stats


def compute_dt(field: DoFField, nu: float, gas: GasModel,
               bc: BoundaryPolicy, ws: Workspace, t: float = 0.0) -> TimeStepReport:
    """Largest dt satisfying the per-DoF admissibility brackets, scaled by nu.

    Every cell pays its four edge dissipation speeds over the mesh spacings
    plus its central divergence over sqrt(rho); each point value pays the
    analogous bracket on its fallback stencil.
    """
    if not (0.0 < nu <= 1.0):
        raise DegenerateInput(f"CFL number must lie in (0, 1], got {nu}")
    fill_ghosts(field, bc, t)
    ws.ta.build(field.avg, gas.gamma)
    ws.tv.build(field.vface, gas.gamma)
    ws.th.build(field.hface, gas.gamma)
    ws.tc.build(field.corner, gas.gamma)
    for name, U, tb in (("avg", field.avg, ws.ta), ("vface", field.vface, ws.tv),
                        ("hface", field.hface, ws.th), ("corner", field.corner, ws.tc)):
        with np.errstate(invalid="ignore"):
            bad = ~((U[RHO] > 0.0) & (tb.p > 0.0) & np.isfinite(tb.p))
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise NoAdmissibleState(
                f"inadmissible state at t={t:.6g}: {name} DoF ({i},{j})")
    ta, tv, th, tc = ws.ta, ws.tv, ws.th, ws.tc
    K.dt_brackets(field.avg, ta.v1, ta.v2, ta.sq, ta.cf1, ta.cf2,
                  field.vface, tv.v1, tv.v2, tv.sq, tv.cf1, tv.cf2,
                  field.hface, th.v1, th.v2, th.sq, th.cf1, th.cf2,
                  field.corner, tc.v1, tc.v2, tc.sq, tc.cf1, tc.cf2,
                  field.mesh.dx, field.mesh.dy, G, ws.dt_res, ws.dt_loc)
    return TimeStepReport(dt=nu / ws.dt_res[0],
                          family=_FAMILIES[int(ws.dt_loc[0])],
                          i=int(ws.dt_loc[1]), j=int(ws.dt_loc[2]),
                          bracket=ws.dt_res[0], x_term=ws.dt_res[1],
                          y_term=ws.dt_res[2], divergence_term=ws.dt_res[3])


def ssp_rk3_step(field: DoFField, t: float, dt: float, gas: GasModel,
                 bc: BoundaryPolicy, opts: SchemeOptions, ws: Workspace):
    """Three-stage strong-stability-preserving step: convex combinations of
    forward-Euler stages, so every admissibility floor survives the step."""
    stats = StepStats()
    u1, s = euler_stage(field, t, dt, gas, bc, opts, ws)
    stats.add(s)
    u2, s = euler_stage(u1, t + dt, dt, gas, bc, opts, ws)
    stats.add(s)
    u2 = combine(0.75, field, 0.25, u2)
    u3, s = euler_stage(u2, t + 0.5 * dt, dt, gas, bc, opts, ws)
    stats.add(s)
    return combine(1.0 / 3.0, field, 2.0 / 3.0, u3), stats


# -- reference operators (slow, loop-based; the kernels are tested against
#    compositions of these) ----------------------------------------------------

def simpson_face_flux(axis: int, u_lo, u_mid, u_hi, gas: GasModel):
    """Third-order face flux from the two corner traces and the midpoint."""
    for u in (u_lo, u_mid, u_hi):
        if not is_admissible(np.asarray(u, dtype=float).reshape(8, -1),
                             0.0, 0.0, gas).all():
            raise InadmissibleState("face trace outside the admissible set")
    return (flux(axis, u_lo, gas) + 4.0 * flux(axis, u_mid, gas)
            + flux(axis, u_hi, gas)) / 6.0


_FD_MODE = ("minus", "central", "plus")


def cell_divergence_table(nodes, dx: float, dy: float):
    """Discrete div(B) at the 3x3 quadrature nodes of one cell.

    nodes[:, l, m] holds the state at node (l, m); l indexes x, m indexes y.
    Derivatives are one-sided toward the interior on the cell boundary and
    central on the midlines, all built from the half-spacing differences.
    """
    nodes = np.asarray(nodes, dtype=float)
    div = np.empty((3, 3))
    for l in range(3):
        for m in range(3):
            d1 = fd(nodes[BX, 0, m], nodes[BX, 1, m], nodes[BX, 2, m],
                    dx, _FD_MODE[l])
            d2 = fd(nodes[BY, l, 0], nodes[BY, l, 1], nodes[BY, l, 2],
                    dy, _FD_MODE[m])
            div[l, m] = d1 + d2
    return div


def average_source(nodes, gas: GasModel, dx: float, dy: float):
    """Godunov-Powell source of one cell: tensor Simpson quadrature of
    div(B) * Psi over the 3x3 node table."""
    nodes = np.asarray(nodes, dtype=float)
    if not is_admissible(nodes.reshape(8, -1), 0.0, 0.0, gas).all():
        raise InadmissibleState("quadrature node outside the admissible set")
    div = cell_divergence_table(nodes, dx, dy)
    src = np.zeros(8)
    for l in range(3):
        for m in range(3):
            src += SIMPSON_W[l] * SIMPSON_W[m] * div[l, m] * powell_psi(
                nodes[:, l, m])
    return src


def _cell_nodes(field: DoFField, center, i: int, j: int):
    """3x3 quadrature-node states of cell (i, j) in slot coordinates."""
    nodes = np.empty((8, 3, 3))
    nodes[:, 0, 0] = field.corner[:, i, j]
    nodes[:, 2, 0] = field.corner[:, i + 1, j]
    nodes[:, 0, 2] = field.corner[:, i, j + 1]
    nodes[:, 2, 2] = field.corner[:, i + 1, j + 1]
    nodes[:, 0, 1] = field.vface[:, i, j]
    nodes[:, 2, 1] = field.vface[:, i + 1, j]
    nodes[:, 1, 0] = field.hface[:, i, j]
    nodes[:, 1, 2] = field.hface[:, i, j + 1]
    nodes[:, 1, 1] = center[:, i, j]
    return nodes


def average_rhs(field: DoFField, gas: GasModel, with_source: bool = True):
    """Unlimited semi-discrete RHS of the cell averages on the interior.

    Ghosts must be filled.  Returns an (8, nx, ny) array.
    """
    mesh = field.mesh
    center = recover_center(field)
    out = np.empty((8, mesh.nx, mesh.ny))
    for i in range(G, G + mesh.nx):
        for j in range(G, G + mesh.ny):
            fR = simpson_face_flux(1, field.corner[:, i + 1, j],
                                   field.vface[:, i + 1, j],
                                   field.corner[:, i + 1, j + 1], gas)
            fL = simpson_face_flux(1, field.corner[:, i, j],
                                   field.vface[:, i, j],
                                   field.corner[:, i, j + 1], gas)
            fU = simpson_face_flux(2, field.corner[:, i, j + 1],
                                   field.hface[:, i, j + 1],
                                   field.corner[:, i + 1, j + 1], gas)
            fD = simpson_face_flux(2, field.corner[:, i, j],
                                   field.hface[:, i, j],
                                   field.corner[:, i + 1, j], gas)
            rhs = -(fR - fL) / mesh.dx - (fU - fD) / mesh.dy
            if with_source:
                rhs -= average_source(_cell_nodes(field, center, i, j),
                                      gas, mesh.dx, mesh.dy)
            out[:, i - G, j - G] = rhs
    return out


def _split_fd(F_all, U, alpha, h):
    """Upwind flux-split derivative pair over one 5-point half-spaced line:
    D_plus applied to (F + alpha U)/2 on the left triple plus D_minus
    applied to (F - alpha U)/2 on the right triple."""
    Fp = [0.5 * (F + alpha * u) for F, u in zip(F_all, U)]
    Fm = [0.5 * (F - alpha * u) for F, u in zip(F_all, U)]
    return (fd(Fp[0], Fp[1], Fp[2], h, "plus")
            + fd(Fm[2], Fm[3], Fm[4], h, "minus"))


def point_rhs(field: DoFField, center, kind: str, i: int, j: int,
              gas: GasModel, source: str = "central"):
    """High-order RHS of one point value, assembled from its 5-point lines.

    kind is 'corner', 'xface' (x-normal faces), or 'yface'; (i, j) are slot
    indices on the corresponding lattice.  source picks the derivative
    flavor inside the Godunov-Powell term: 'central' (average of the two
    one-sided derivatives), 'upwind' (picked by velocity sign), or 'off'.
    """
    mesh = field.mesh
    dx, dy = mesh.dx, mesh.dy

    def srcder(line, comp, h, vel):
        dp = fd(line[0][comp], line[1][comp], line[2][comp], h, "plus")
        dm = fd(line[2][comp], line[3][comp], line[4][comp], h, "minus")
        if source == "central":
            return 0.5 * (dp + dm)
        return dp if vel >= 0.0 else dm

    from .physics import spectral_radius

    def line_alpha(axis, states):
        return max(spectral_radius(axis, u, gas) for u in states)

    if kind == "corner":
        xs = [field.corner[:, i - 1, j], field.hface[:, i - 1, j],
              field.corner[:, i, j], field.hface[:, i, j],
              field.corner[:, i + 1, j]]
        ys = [field.corner[:, i, j - 1], field.vface[:, i, j - 1],
              field.corner[:, i, j], field.vface[:, i, j],
              field.corner[:, i, j + 1]]
    elif kind == "xface":
        xs = [field.vface[:, i - 1, j], center[:, i - 1, j],
              field.vface[:, i, j], center[:, i, j],
              field.vface[:, i + 1, j]]
        ys = None
    elif kind == "yface":
        ys = [field.hface[:, i, j - 1], center[:, i, j - 1],
              field.hface[:, i, j], center[:, i, j],
              field.hface[:, i, j + 1]]
        xs = None
    else:
        raise DegenerateInput(f"unknown point kind {kind!r}")

    rhs = np.zeros(8)
    divb = 0.0
    if kind == "corner":
        u = field.corner[:, i, j]
        rhs -= _split_fd([flux(1, q, gas) for q in xs], xs, line_alpha(1, xs), dx)
        rhs -= _split_fd([flux(2, q, gas) for q in ys], ys, line_alpha(2, ys), dy)
        if source != "off":
            v = u[VEC] / u[RHO]
            divb = srcder(xs, BX, dx, v[0]) + srcder(ys, BY, dy, v[1])
    elif kind == "xface":
        u = field.vface[:, i, j]
        rhs -= _split_fd([flux(1, q, gas) for q in xs], xs, line_alpha(1, xs), dx)
        f_dn = flux(2, field.corner[:, i, j], gas)
        f_up = flux(2, field.corner[:, i, j + 1], gas)
        rhs -= (f_up - f_dn) / dy
        if source != "off":
            v = u[VEC] / u[RHO]
            divb = (srcder(xs, BX, dx, v[0])
                    + (field.corner[BY, i, j + 1] - field.corner[BY, i, j]) / dy)
    else:
        u = field.hface[:, i, j]
        rhs -= _split_fd([flux(2, q, gas) for q in ys], ys, line_alpha(2, ys), dy)
        f_l = flux(1, field.corner[:, i, j], gas)
        f_r = flux(1, field.corner[:, i + 1, j], gas)
        rhs -= (f_r - f_l) / dx
        if source != "off":
            v = u[VEC] / u[RHO]
            divb = ((field.corner[BX, i + 1, j] - field.corner[BX, i, j]) / dx
                    + srcder(ys, BY, dy, v[1]))
    if source != "off":
        rhs -= divb * powell_psi(u)
    return rhs
