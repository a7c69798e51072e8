"""Cartesian mesh, degree-of-freedom storage, and ghost-layer handling.

The solver carries four coupled unknown families on an nx-by-ny mesh:

    avg     cell averages,                    slots (8, nx+2G,   ny+2G)
    vface   x-normal face midpoint values,    slots (8, nx+1+2G, ny+2G)
    hface   y-normal face midpoint values,    slots (8, nx+2G,   ny+1+2G)
    corner  cell corner values,               slots (8, nx+1+2G, ny+1+2G)

Point values are shared between neighboring cells, so faces and corners are
stored once on a staggered lattice. Storage slot s maps to physical index
s - G; interior cells live at slots [G, G+nx). Cell-center values are scratch
data recovered per stage, never persistent unknowns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, DegenerateInput, InadmissibleState
from .physics import BX, BY, GasModel, MOMX, MOMY, NCOMP, conserved_of_primitive, is_admissible

G = 2  # ghost layers on every side


@dataclass(frozen=True)
class Mesh2D:
    """Uniform Cartesian mesh on [x0, x1] x [y0, y1]."""

    nx: int
    ny: int
    x0: float = 0.0
    x1: float = 1.0
    y0: float = 0.0
    y1: float = 1.0

    def __post_init__(self) -> None:
        if self.nx < 1 or self.ny < 1:
            raise DegenerateInput("mesh needs at least one cell per direction")
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise DegenerateInput("mesh extents must be positive")

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / self.nx

    @property
    def dy(self) -> float:
        return (self.y1 - self.y0) / self.ny

    # 1D coordinates for every storage slot, ghosts included
    def xs_cell(self) -> np.ndarray:
        return self.x0 + (np.arange(self.nx + 2 * G) - G + 0.5) * self.dx

    def xs_face(self) -> np.ndarray:
        return self.x0 + (np.arange(self.nx + 1 + 2 * G) - G) * self.dx

    def ys_cell(self) -> np.ndarray:
        return self.y0 + (np.arange(self.ny + 2 * G) - G + 0.5) * self.dy

    def ys_face(self) -> np.ndarray:
        return self.y0 + (np.arange(self.ny + 1 + 2 * G) - G) * self.dy


@dataclass
class DoFField:
    """All unknowns of one time level on one mesh."""

    mesh: Mesh2D
    avg: np.ndarray
    vface: np.ndarray
    hface: np.ndarray
    corner: np.ndarray

    @classmethod
    def zeros(cls, mesh: Mesh2D) -> "DoFField":
        sx, sy = mesh.nx + 2 * G, mesh.ny + 2 * G
        return cls(
            mesh=mesh,
            avg=np.zeros((NCOMP, sx, sy)),
            vface=np.zeros((NCOMP, sx + 1, sy)),
            hface=np.zeros((NCOMP, sx, sy + 1)),
            corner=np.zeros((NCOMP, sx + 1, sy + 1)),
        )

    def copy(self) -> "DoFField":
        return DoFField(self.mesh, self.avg.copy(), self.vface.copy(),
                        self.hface.copy(), self.corner.copy())

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.avg, self.vface, self.hface, self.corner


def combine(a: float, X: DoFField, b: float, Y: DoFField) -> DoFField:
    """Convex combination a*X + b*Y of two fields on the same mesh.

    Requires a + b = 1 and evaluates as X + b*(Y - X), so Y == X returns X
    bit-for-bit (1/3 + 2/3 alone does not round to 1).
    """
    if abs(a + b - 1.0) > 4e-16:
        raise ValueError(f"weights must sum to 1, got {a} + {b}")
    return DoFField(
        X.mesh,
        X.avg + b * (Y.avg - X.avg),
        X.vface + b * (Y.vface - X.vface),
        X.hface + b * (Y.hface - X.hface),
        X.corner + b * (Y.corner - X.corner),
    )


# interior views -------------------------------------------------------------
# Point families include both boundary slots; on periodic sides slot G+n
# duplicates slot G by construction.

def interior_avg(field: DoFField) -> np.ndarray:
    m = field.mesh
    return field.avg[:, G:G + m.nx, G:G + m.ny]

def interior_vface(field: DoFField) -> np.ndarray:
    m = field.mesh
    return field.vface[:, G:G + m.nx + 1, G:G + m.ny]

def interior_hface(field: DoFField) -> np.ndarray:
    m = field.mesh
    return field.hface[:, G:G + m.nx, G:G + m.ny + 1]

def interior_corner(field: DoFField) -> np.ndarray:
    m = field.mesh
    return field.corner[:, G:G + m.nx + 1, G:G + m.ny + 1]


# boundary conditions --------------------------------------------------------

InflowFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]
MaskFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BoundaryCondition:
    """One side's boundary rule.

    kind: "periodic", "outflow", "reflective", or "inflow". Inflow evaluates
    state_fn(x, y, t) -> conserved (8, ...); where mask_fn (if given) is
    False, the side falls back to outflow extrapolation.
    """

    kind: str
    state_fn: InflowFn | None = None
    mask_fn: MaskFn | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("periodic", "outflow", "reflective", "inflow"):
            raise ConfigError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "inflow" and self.state_fn is None:
            raise ConfigError("inflow side needs a state function")


@dataclass(frozen=True)
class BoundaryPolicy:
    left: BoundaryCondition
    right: BoundaryCondition
    bottom: BoundaryCondition
    top: BoundaryCondition

    def __post_init__(self) -> None:
        for a, b, names in ((self.left, self.right, "left/right"),
                            (self.bottom, self.top, "bottom/top")):
            if (a.kind == "periodic") != (b.kind == "periodic"):
                raise ConfigError(f"periodic sides must pair up: {names}")

    @classmethod
    def all_periodic(cls) -> "BoundaryPolicy":
        p = BoundaryCondition("periodic")
        return cls(p, p, p, p)

    @classmethod
    def all_outflow(cls) -> "BoundaryPolicy":
        o = BoundaryCondition("outflow")
        return cls(o, o, o, o)


def _fill_axis(A: np.ndarray, axis: int, n: int, face_type: bool,
               lo: BoundaryCondition, hi: BoundaryCondition,
               flip_rows: tuple[int, int]) -> None:
    """Fill ghost slots of one array along one axis in place.

    n is the cell count; face-type arrays carry n+1 interior slots and an
    aliased periodic pair (slot G == slot G+n).
    """
    sw = [slice(None)] * A.ndim

    def take(idx):
        s = list(sw)
        s[axis] = idx
        return tuple(s)

    hi0 = G + n if face_type else G + n - 1  # last interior slot
    if lo.kind == "periodic":
        A[take(slice(G + n, hi0 + 1 + G))] = A[take(slice(G, G + G + (1 if face_type else 0)))]
        # ghosts wrap with period n
        A[take(slice(0, G))] = A[take(slice(n, n + G))]
        if face_type:
            A[take(G + n)] = A[take(G)]
        return  # hi side handled by the same wrap

    # low side
    if lo.kind in ("outflow", "inflow"):
        A[take(slice(0, G))] = A[take(slice(G, G + 1))]
    elif lo.kind == "reflective":
        src = slice(2 * G, G, -1) if face_type else slice(2 * G - 1, G - 1, -1)
        A[take(slice(0, G))] = A[take(src)]
        for r in flip_rows:
            A[(r,) + take(slice(0, G))[1:]] *= -1.0

    # high side
    if hi.kind in ("outflow", "inflow"):
        A[take(slice(hi0 + 1, None))] = A[take(slice(hi0, hi0 + 1))]
    elif hi.kind == "reflective":
        if face_type:
            src = slice(hi0 - 1, hi0 - 1 - G, -1)
        else:
            src = slice(hi0, hi0 - G, -1)
        A[take(slice(hi0 + 1, None))] = A[take(src)]
        for r in flip_rows:
            A[(r,) + take(slice(hi0 + 1, None))[1:]] *= -1.0


def _inflow_overwrite(A: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                      slab: slice, axis: int, bc: BoundaryCondition,
                      t: float) -> None:
    """Replace a ghost slab (and pinned boundary line) with prescribed data."""
    s = [slice(None), slice(None), slice(None)]
    s[axis] = slab
    s = tuple(s)
    X, Y = np.meshgrid(xs[s[1]], ys[s[2]], indexing="ij")
    U = bc.state_fn(X, Y, t)
    if bc.mask_fn is None:
        A[s] = U
    else:
        M = bc.mask_fn(X, Y)
        A[s] = np.where(M[None], U, A[s])


def fill_ghosts(field: DoFField, bc: BoundaryPolicy, t: float) -> None:
    """Fill every ghost slot of every DoF family in place.

    The x pass runs first over all rows, then the y pass runs over all
    columns, so diagonal ghost corners inherit valid data. Inflow sides also
    pin the point values lying on the boundary line itself.
    """
    m = field.mesh
    # (array, x face-type, y face-type)
    fams = ((field.avg, False, False), (field.vface, True, False),
            (field.hface, False, True), (field.corner, True, True))

    for A, fx, fy in fams:
        _fill_axis(A, 1, m.nx, fx, bc.left, bc.right, (MOMX, BX))
    for A, fx, fy in fams:
        _fill_axis(A, 2, m.ny, fy, bc.bottom, bc.top, (MOMY, BY))

    # prescribed data wins over extrapolation wherever an inflow mask holds;
    # face-type slabs include the boundary-line slot G (resp. G+n)
    xs_c, xs_f = m.xs_cell(), m.xs_face()
    ys_c, ys_f = m.ys_cell(), m.ys_face()
    for A, fx, fy in fams:
        xs = xs_f if fx else xs_c
        ys = ys_f if fy else ys_c
        if bc.left.kind == "inflow":
            _inflow_overwrite(A, xs, ys, slice(0, G + (1 if fx else 0)), 1, bc.left, t)
        if bc.right.kind == "inflow":
            hi0 = G + m.nx if fx else G + m.nx - 1
            _inflow_overwrite(A, xs, ys, slice(hi0 + (0 if fx else 1), None), 1, bc.right, t)
        if bc.bottom.kind == "inflow":
            _inflow_overwrite(A, xs, ys, slice(0, G + (1 if fy else 0)), 2, bc.bottom, t)
        if bc.top.kind == "inflow":
            hi0 = G + m.ny if fy else G + m.ny - 1
            _inflow_overwrite(A, xs, ys, slice(hi0 + (0 if fy else 1), None), 2, bc.top, t)


def sync_periodic_aliases(field: DoFField, bc: BoundaryPolicy) -> None:
    """Re-identify duplicated boundary point slots on periodic sides."""
    m = field.mesh
    if bc.left.kind == "periodic":
        field.vface[:, G + m.nx, :] = field.vface[:, G, :]
        field.corner[:, G + m.nx, :] = field.corner[:, G, :]
    if bc.bottom.kind == "periodic":
        field.hface[:, :, G + m.ny] = field.hface[:, :, G]
        field.corner[:, :, G + m.ny] = field.corner[:, :, G]


# initialization and recovery ------------------------------------------------

_W_EDGE, _W_MID = 1.0 / 6.0, 2.0 / 3.0  # Simpson weights on [0, 1]


def init_dofs(mesh: Mesh2D, ic: Callable[[np.ndarray, np.ndarray], np.ndarray],
              gas: GasModel) -> DoFField:
    """Sample an initial condition into a DoF field.

    ic(x, y) returns primitive (8, ...) data. Point values are direct samples;
    cell averages are 3x3 tensor-Simpson quadratures of the conserved state,
    which reuses the point samples plus one extra evaluation at cell centers.
    Raises InadmissibleState if any interior unknown is outside the
    admissible set.
    """
    field = DoFField.zeros(mesh)
    xs_c, xs_f = mesh.xs_cell(), mesh.xs_face()
    ys_c, ys_f = mesh.ys_cell(), mesh.ys_face()

    def sample(xs, ys):
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return conserved_of_primitive(ic(X, Y), gas)

    field.corner[:] = sample(xs_f, ys_f)
    field.vface[:] = sample(xs_f, ys_c)
    field.hface[:] = sample(xs_c, ys_f)
    center = sample(xs_c, ys_c)

    cn, vf, hf = field.corner, field.vface, field.hface
    sx, sy = mesh.nx + 2 * G, mesh.ny + 2 * G
    # (corners + 4 faces + 16 center)/36, written as center plus weighted
    # deviations so a uniform state yields bitwise-identical averages
    corners = (((cn[:, :sx, :sy] - center) + (cn[:, 1:, :sy] - center))
               + ((cn[:, :sx, 1:] - center) + (cn[:, 1:, 1:] - center)))
    faces = (((vf[:, :sx, :] - center) + (vf[:, 1:, :] - center))
             + ((hf[:, :, :sy] - center) + (hf[:, :, 1:] - center)))
    field.avg[:] = center + (corners + 4.0 * faces) / 36.0

    eps = 0.0
    for name, arr in (("avg", interior_avg(field)), ("vface", interior_vface(field)),
                      ("hface", interior_hface(field)), ("corner", interior_corner(field))):
        ok = is_admissible(arr, eps, eps, gas) & (arr[0] > 0.0)
        if not np.all(ok):
            raise InadmissibleState(f"initial {name} data violates positivity")
    return field


def recover_center(field: DoFField) -> np.ndarray:
    """Cell-center point values consistent with the parabolic reconstruction.

    Exact for tensor quadratics: the center weight pattern inverts the 3x3
    Simpson rule given the average and the eight boundary values.  The
    classical form (36 avg - 4 faces - corners)/16 is evaluated as a
    residual off the average so uniform data recovers bit-exactly.
    """
    a, vf, hf, cn = field.arrays()
    sx, sy = a.shape[1], a.shape[2]
    faces = (vf[:, :sx, :] + vf[:, 1:, :]) + (hf[:, :, :sy] + hf[:, :, 1:])
    corners = ((cn[:, :sx, :sy] + cn[:, 1:, :sy])
               + (cn[:, :sx, 1:] + cn[:, 1:, 1:]))
    a4 = 4.0 * a
    return a + (4.0 * (a4 - faces) + (a4 - corners)) / 16.0


def fd(u_lo: np.ndarray, u_mid: np.ndarray, u_hi: np.ndarray, h: float,
       mode: str) -> np.ndarray:
    """Three-point derivative on a half-spaced stencil (lo, mid, hi).

    The points sit h/2 apart. "minus" differentiates at lo, "central" at mid,
    "plus" at hi; all three are exact on quadratics.  The sided forms are
    grouped as differences so uniform input gives exactly zero.
    """
    if mode == "minus":
        return (4.0 * (u_mid - u_lo) + (u_lo - u_hi)) / h
    if mode == "central":
        return (u_hi - u_lo) / h
    if mode == "plus":
        return (4.0 * (u_hi - u_mid) + (u_lo - u_hi)) / h
    raise DegenerateInput(f"unknown fd mode {mode!r}")
