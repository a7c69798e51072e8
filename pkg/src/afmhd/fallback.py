"""First-order LLF updates with the discrete Godunov-Powell source.

These are the blending targets of every limiter: under the CFL bracket they
keep density and pressure positive, so any convex combination toward them
can be made admissible.  The loop-based functions here are references; the
solver uses the compiled kernels, which are tested against these.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels as K
from .errors import PPViolation
from .grid import G, BoundaryPolicy, DoFField, fill_ghosts
from .physics import (BX, BY, GasModel, RHO, VEC, flux, is_admissible,
                      powell_psi, pp_alpha)


def llf_flux(axis: int, U, Ut, alpha: float, gas: GasModel):
    """Two-state dissipative flux (F(U) + F(Ut) - alpha (Ut - U)) / 2."""
    return 0.5 * (flux(axis, U, gas) + flux(axis, Ut, gas)
                  - alpha * (np.asarray(Ut) - np.asarray(U)))


def _edge_flux(axis, U, Ut, gas):
    return llf_flux(axis, U, Ut, pp_alpha(axis, U, Ut, gas), gas)


def llf_cell_update(field: DoFField, i: int, j: int, dt: float,
                    gas: GasModel, with_source: bool = True):
    """First-order update of the single cell average in slot (i, j)."""
    dx, dy = field.mesh.dx, field.mesh.dy
    Ua = field.avg
    u = Ua[:, i, j]
    fR = _edge_flux(1, u, Ua[:, i + 1, j], gas)
    fL = _edge_flux(1, Ua[:, i - 1, j], u, gas)
    fU = _edge_flux(2, u, Ua[:, i, j + 1], gas)
    fD = _edge_flux(2, Ua[:, i, j - 1], u, gas)
    new = u - dt / dx * (fR - fL) - dt / dy * (fU - fD)
    if with_source:
        div = ((Ua[BX, i + 1, j] - Ua[BX, i - 1, j]) / (2.0 * dx)
               + (Ua[BY, i, j + 1] - Ua[BY, i, j - 1]) / (2.0 * dy))
        new = new - dt * div * powell_psi(u)
    return new


def llf_average_update(field: DoFField, dt: float, gas: GasModel,
                       with_source: bool = True):
    """First-order update of every interior cell average; ghosts must be
    filled.  Returns an (8, nx, ny) array of updated states."""
    mesh = field.mesh
    out = np.empty((8, mesh.nx, mesh.ny))
    for i in range(G, G + mesh.nx):
        for j in range(G, G + mesh.ny):
            out[:, i - G, j - G] = llf_cell_update(field, i, j, dt, gas,
                                                   with_source)
    return out


def llf_point_update(field: DoFField, kind: str, i: int, j: int, dt: float,
                     gas: GasModel, with_source: bool = True):
    """First-order update of one point value.

    Corners difference fluxes between like-kind corners one cell apart in
    each axis.  Faces do the same along their own axis; across the face the
    flux pairs the face value with the two adjacent corners a half cell
    away, divided by the full spacing.  Sources use central differences of
    the same neighbor sets.
    """
    mesh = field.mesh
    dx, dy = mesh.dx, mesh.dy
    cn, vf, hf = field.corner, field.vface, field.hface
    if kind == "corner":
        u = cn[:, i, j]
        fR = _edge_flux(1, u, cn[:, i + 1, j], gas)
        fL = _edge_flux(1, cn[:, i - 1, j], u, gas)
        fU = _edge_flux(2, u, cn[:, i, j + 1], gas)
        fD = _edge_flux(2, cn[:, i, j - 1], u, gas)
        new = u - dt / dx * (fR - fL) - dt / dy * (fU - fD)
        if with_source:
            div = ((cn[BX, i + 1, j] - cn[BX, i - 1, j]) / (2.0 * dx)
                   + (cn[BY, i, j + 1] - cn[BY, i, j - 1]) / (2.0 * dy))
            new = new - dt * div * powell_psi(u)
    elif kind == "xface":
        u = vf[:, i, j]
        fR = _edge_flux(1, u, vf[:, i + 1, j], gas)
        fL = _edge_flux(1, vf[:, i - 1, j], u, gas)
        fU = _edge_flux(2, u, cn[:, i, j + 1], gas)
        fD = _edge_flux(2, cn[:, i, j], u, gas)
        new = u - dt / dx * (fR - fL) - dt / dy * (fU - fD)
        if with_source:
            div = ((vf[BX, i + 1, j] - vf[BX, i - 1, j]) / (2.0 * dx)
                   + (cn[BY, i, j + 1] - cn[BY, i, j]) / (2.0 * dy))
            new = new - dt * div * powell_psi(u)
    elif kind == "yface":
        u = hf[:, i, j]
        fU = _edge_flux(2, u, hf[:, i, j + 1], gas)
        fD = _edge_flux(2, hf[:, i, j - 1], u, gas)
        fR = _edge_flux(1, u, cn[:, i + 1, j], gas)
        fL = _edge_flux(1, cn[:, i, j], u, gas)
        new = u - dt / dx * (fR - fL) - dt / dy * (fU - fD)
        if with_source:
            div = ((cn[BX, i + 1, j] - cn[BX, i, j]) / (2.0 * dx)
                   + (hf[BY, i, j + 1] - hf[BY, i, j - 1]) / (2.0 * dy))
            new = new - dt * div * powell_psi(u)
    else:
        raise ValueError(f"unknown point kind {kind!r}")
    return new


def lemma_bracket(field: DoFField, kind: str, i: int, j: int,
                  gas: GasModel) -> float:
    """CFL bracket of one DoF: dt * lemma_bracket <= 1 keeps its first-order
    update admissible.  Sums the PP dissipation speeds of the four edges the
    update differences across plus the magnitude of its own discrete
    divergence over sqrt(rho)."""
    mesh = field.mesh
    dx, dy = mesh.dx, mesh.dy
    cn, vf, hf = field.corner, field.vface, field.hface
    if kind == "avg":
        Ua = field.avg
        u = Ua[:, i, j]
        aL = pp_alpha(1, Ua[:, i - 1, j], u, gas)
        aR = pp_alpha(1, u, Ua[:, i + 1, j], gas)
        aD = pp_alpha(2, Ua[:, i, j - 1], u, gas)
        aU = pp_alpha(2, u, Ua[:, i, j + 1], gas)
        div = ((Ua[BX, i + 1, j] - Ua[BX, i - 1, j]) / (2.0 * dx)
               + (Ua[BY, i, j + 1] - Ua[BY, i, j - 1]) / (2.0 * dy))
    elif kind == "corner":
        u = cn[:, i, j]
        aL = pp_alpha(1, cn[:, i - 1, j], u, gas)
        aR = pp_alpha(1, u, cn[:, i + 1, j], gas)
        aD = pp_alpha(2, cn[:, i, j - 1], u, gas)
        aU = pp_alpha(2, u, cn[:, i, j + 1], gas)
        div = ((cn[BX, i + 1, j] - cn[BX, i - 1, j]) / (2.0 * dx)
               + (cn[BY, i, j + 1] - cn[BY, i, j - 1]) / (2.0 * dy))
    elif kind == "xface":
        u = vf[:, i, j]
        aL = pp_alpha(1, vf[:, i - 1, j], u, gas)
        aR = pp_alpha(1, u, vf[:, i + 1, j], gas)
        aD = pp_alpha(2, cn[:, i, j], u, gas)
        aU = pp_alpha(2, u, cn[:, i, j + 1], gas)
        div = ((vf[BX, i + 1, j] - vf[BX, i - 1, j]) / (2.0 * dx)
               + (cn[BY, i, j + 1] - cn[BY, i, j]) / (2.0 * dy))
    elif kind == "yface":
        u = hf[:, i, j]
        aL = pp_alpha(1, cn[:, i, j], u, gas)
        aR = pp_alpha(1, u, cn[:, i + 1, j], gas)
        aD = pp_alpha(2, hf[:, i, j - 1], u, gas)
        aU = pp_alpha(2, u, hf[:, i, j + 1], gas)
        div = ((cn[BX, i + 1, j] - cn[BX, i, j]) / (2.0 * dx)
               + (hf[BY, i, j + 1] - hf[BY, i, j - 1]) / (2.0 * dy))
    else:
        raise ValueError(f"unknown point kind {kind!r}")
    return (aL + aR) / dx + (aD + aU) / dy + abs(div) / np.sqrt(u[RHO])


@dataclass
class LLFCandidates:
    """Fallback states and shared edge dissipation speeds for one stage."""

    avg: np.ndarray
    corner: np.ndarray
    vface: np.ndarray
    hface: np.ndarray
    alpha_x: np.ndarray
    alpha_y: np.ndarray
    src: np.ndarray


def llf_candidates(field: DoFField, dt: float, gas: GasModel,
                   bc: BoundaryPolicy, t: float = 0.0,
                   with_source: bool = True) -> LLFCandidates:
    """Kernel-backed fallback states on the full lattices (valid away from
    the outermost ring); convenience for tests and diagnostics."""
    mesh = field.mesh
    dx, dy = mesh.dx, mesh.dy
    fill_ghosts(field, bc, t)

    def tables(U):
        sh = U.shape[1:]
        arrs = [np.empty(sh) for _ in range(6)]
        F1, F2 = np.empty((8,) + sh), np.empty((8,) + sh)
        K.build_tables(U, gas.gamma, *arrs, F1, F2)
        return arrs + [F1, F2]

    pa, va1, va2, sqa, ca1, ca2, F1a, F2a = tables(field.avg)
    pc, vc1, vc2, sqc, cc1, cc2, F1c, F2c = tables(field.corner)
    pv, vv1, vv2, sqv, cv1, cv2, F1v, F2v = tables(field.vface)
    ph, vh1, vh2, sqh, ch1, ch2, F1h, F2h = tables(field.hface)

    sa, sb = field.avg.shape[1], field.avg.shape[2]
    ax = np.zeros(field.vface.shape[1:])
    Fx = np.zeros((8,) + field.vface.shape[1:])
    ay = np.zeros(field.hface.shape[1:])
    Fy = np.zeros((8,) + field.hface.shape[1:])
    K.avg_llf_edges(field.avg, va1, va2, sqa, ca1, ca2, F1a, F2a, ax, Fx, ay, Fy)
    src = np.zeros((8, sa, sb))
    if with_source:
        K.avg_llf_source(field.avg, dx, dy, src)
    avg = field.avg.copy()
    avg[:, 1:-1, 1:-1] = (field.avg[:, 1:-1, 1:-1]
                          - dt / dx * (Fx[:, 2:sa, 1:-1] - Fx[:, 1:sa - 1, 1:-1])
                          - dt / dy * (Fy[:, 1:-1, 2:sb] - Fy[:, 1:-1, 1:sb - 1])
                          - dt * src[:, 1:-1, 1:-1])

    rhs = np.zeros((8,) + field.corner.shape[1:])
    K.corner_llf_rhs(field.corner, vc1, vc2, sqc, cc1, cc2, F1c, F2c,
                     dx, dy, with_source, rhs)
    corner = field.corner.copy()
    corner[:, 1:-1, 1:-1] += dt * rhs[:, 1:-1, 1:-1]

    rhs = np.zeros((8,) + field.vface.shape[1:])
    K.vface_llf_rhs(field.vface, field.corner, vv1, vv2, sqv, cv1, cv2,
                    F1v, F2v, vc2, sqc, cc2, F2c, dx, dy, with_source, rhs)
    vface = field.vface.copy()
    vface[:, 1:-1, 1:-1] += dt * rhs[:, 1:-1, 1:-1]

    rhs = np.zeros((8,) + field.hface.shape[1:])
    K.hface_llf_rhs(field.hface, field.corner, vh1, vh2, sqh, ch1, ch2,
                    F1h, F2h, vc1, sqc, cc1, F1c, dx, dy, with_source, rhs)
    hface = field.hface.copy()
    hface[:, 1:-1, 1:-1] += dt * rhs[:, 1:-1, 1:-1]

    # the Lemma promises these states stay admissible under the CFL bracket;
    # a violation means dt or the dissipation speeds are wrong
    for name, arr in (("avg", avg), ("corner", corner),
                      ("vface", vface), ("hface", hface)):
        if not is_admissible(arr[:, 1:-1, 1:-1], 0.0, 0.0, gas).all():
            raise PPViolation(f"first-order {name} states lost positivity")

    return LLFCandidates(avg=avg, corner=corner, vface=vface, hface=hface,
                         alpha_x=ax, alpha_y=ay, src=src)
