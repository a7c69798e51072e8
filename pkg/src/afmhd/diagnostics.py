"""Error norms, discrete divergence measures, and run-history records."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import DegenerateInput, NoExactSolution
from .grid import (G, DoFField, Mesh2D, interior_avg, interior_corner,
                   interior_hface, interior_vface, recover_center)
from .physics import (BX, BY, RHO, GasModel, conserved_of_primitive, pressure)

_W = (1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0)

HISTORY_HEADER = "t,div1,div2,min_rho,min_p,mass,sensor_active,pp_active,retry_count"


# divergence measures ----------------------------------------------------------


def _fd3(lo, mid, hi, h: float, pos: int):
    """Half-spaced derivative on a three-node line: sided at the ends,
    central in the middle, in the same difference form the stages use."""
    if pos == 0:
        return (4.0 * (mid - lo) + (lo - hi)) / h
    if pos == 1:
        return (hi - lo) / h
    return (4.0 * (hi - mid) + (lo - hi)) / h


def _node_tables(cnb, vfb, hfb, ceb):
    """Per-cell 3x3 node tables of one scalar; [l][m] with l along x."""
    return ((cnb[:-1, :-1], vfb[:-1, :], cnb[:-1, 1:]),
            (hfb[:, :-1], ceb, hfb[:, 1:]),
            (cnb[1:, :-1], vfb[1:, :], cnb[1:, 1:]))


def divergence_measure_1(field: DoFField) -> float:
    """L1 quadrature of the nodal div(B) used by the average source term.

    Sums |div B| at the 3x3 in-cell nodes with tensor Simpson weights,
    times the cell area.
    """
    mesh = field.mesh
    dx, dy = mesh.dx, mesh.dy
    cn = interior_corner(field)
    vf = interior_vface(field)
    hf = interior_hface(field)
    ce = recover_center(field)[:, G:-G, G:-G]
    B1 = _node_tables(cn[BX], vf[BX], hf[BX], ce[BX])
    B2 = _node_tables(cn[BY], vf[BY], hf[BY], ce[BY])
    total = 0.0
    for l in range(3):
        for m in range(3):
            d = _fd3(B1[0][m], B1[1][m], B1[2][m], dx, l) \
                + _fd3(B2[l][0], B2[l][1], B2[l][2], dy, m)
            total += _W[l] * _W[m] * float(np.abs(d).sum())
    return total * dx * dy


def divergence_measure_2(field: DoFField) -> float:
    """L1 of the Gauss-Green boundary circulation, Simpson along each edge."""
    mesh = field.mesh
    cn = interior_corner(field)
    vf = interior_vface(field)
    hf = interior_hface(field)
    right = cn[BX, 1:, :-1] + 4.0 * vf[BX, 1:, :] + cn[BX, 1:, 1:]
    left = cn[BX, :-1, :-1] + 4.0 * vf[BX, :-1, :] + cn[BX, :-1, 1:]
    top = cn[BY, :-1, 1:] + 4.0 * hf[BY, :, 1:] + cn[BY, 1:, 1:]
    bottom = cn[BY, :-1, :-1] + 4.0 * hf[BY, :, :-1] + cn[BY, 1:, :-1]
    circ = np.abs((right - left) + (top - bottom))
    return float(circ.sum()) * mesh.dx * mesh.dy / 6.0


# error norms ------------------------------------------------------------------


@dataclass(frozen=True)
class L1Errors:
    """Per-variable L1 errors of the averages and of the point unknowns."""

    avg: np.ndarray
    points: np.ndarray


def l1_error(field: DoFField, exact, t: float, mesh: Mesh2D,
             gas: GasModel) -> L1Errors:
    """L1 distance to a reference solution at time t.

    Averages are compared against tensor-Simpson cell means of the exact
    conserved state, evaluated exactly as the initializer builds them, and
    weighted by the cell area. The point companion averages |difference|
    over the corner and face unknowns and scales by the domain area.
    """
    if exact is None:
        raise NoExactSolution("no reference solution to compare against")
    nx, ny = mesh.nx, mesh.ny
    xs_c = mesh.xs_cell()[G:G + nx]
    xs_f = mesh.xs_face()[G:G + nx + 1]
    ys_c = mesh.ys_cell()[G:G + ny]
    ys_f = mesh.ys_face()[G:G + ny + 1]

    def at(xs, ys):
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return conserved_of_primitive(exact(X, Y, t), gas)

    cn, vf = at(xs_f, ys_f), at(xs_f, ys_c)
    hf, ce = at(xs_c, ys_f), at(xs_c, ys_c)
    corners = (((cn[:, :-1, :-1] - ce) + (cn[:, 1:, :-1] - ce))
               + ((cn[:, :-1, 1:] - ce) + (cn[:, 1:, 1:] - ce)))
    faces = (((vf[:, :-1, :] - ce) + (vf[:, 1:, :] - ce))
             + ((hf[:, :, :-1] - ce) + (hf[:, :, 1:] - ce)))
    mean = ce + (corners + 4.0 * faces) / 36.0

    avg_err = np.abs(interior_avg(field) - mean).sum(axis=(1, 2)) \
        * (mesh.dx * mesh.dy)
    diffs = (np.abs(interior_corner(field) - cn),
             np.abs(interior_vface(field) - vf),
             np.abs(interior_hface(field) - hf))
    npts = sum(d[0].size for d in diffs)
    dom = (mesh.x1 - mesh.x0) * (mesh.y1 - mesh.y0)
    pt_err = sum(d.sum(axis=(1, 2)) for d in diffs) * (dom / npts)
    return L1Errors(avg=avg_err, points=pt_err)


def convergence_table(rows) -> np.ndarray:
    """Observed orders from (h, error) rows, one per adjacent pair."""
    rows = [(float(h), float(e)) for h, e in rows]
    if len(rows) < 2:
        raise DegenerateInput("need at least two (h, error) rows")
    h = np.array([r[0] for r in rows])
    e = np.array([r[1] for r in rows])
    if not np.all(h[1:] < h[:-1]):
        raise DegenerateInput("h must be strictly decreasing")
    if not np.all(e > 0.0):
        raise DegenerateInput("errors must be positive")
    return np.log(e[:-1] / e[1:]) / np.log(h[:-1] / h[1:])


# run history ------------------------------------------------------------------


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One sampled row of the run history."""

    t: float
    div1: float
    div2: float
    min_rho: float
    min_p: float
    mass: float
    sensor_active: int
    pp_active: int
    retry_count: int


def make_record(field: DoFField, gas: GasModel, t: float,
                sensor_active: int = 0, pp_active: int = 0,
                retry_count: int = 0) -> DiagnosticsRecord:
    """Scan a field into one history row. Raises DegenerateInput on
    non-finite entries."""
    mesh = field.mesh
    min_rho = np.inf
    min_p = np.inf
    # np.minimum propagates NaN, so a poisoned lattice cannot hide
    for arr in (interior_avg(field), interior_vface(field),
                interior_hface(field), interior_corner(field)):
        min_rho = np.minimum(min_rho, arr[RHO].min())
        min_p = np.minimum(min_p, pressure(arr, gas).min())
    rec = DiagnosticsRecord(
        t=float(t),
        div1=divergence_measure_1(field),
        div2=divergence_measure_2(field),
        min_rho=float(min_rho),
        min_p=float(min_p),
        mass=float(interior_avg(field)[RHO].sum()) * mesh.dx * mesh.dy,
        sensor_active=int(sensor_active),
        pp_active=int(pp_active),
        retry_count=int(retry_count),
    )
    vals = [getattr(rec, f.name) for f in fields(rec)]
    if not np.all(np.isfinite(vals)):
        raise DegenerateInput("history row has non-finite entries")
    return rec


def write_history(records, path) -> None:
    """Dump history rows as CSV at full double precision."""
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(HISTORY_HEADER + "\n")
        for r in records:
            f.write("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n" % (
                r.t, r.div1, r.div2, r.min_rho, r.min_p, r.mass,
                r.sensor_active, r.pp_active, r.retry_count))
