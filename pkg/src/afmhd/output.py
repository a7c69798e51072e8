"""Field export on the refined visualization grid."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .grid import (DoFField, Mesh2D, interior_avg, interior_corner,
                   interior_hface, interior_vface)
from .physics import ENE, GasModel, primitive_of_conserved

FIELD_HEADER = "x,y,rho,v1,v2,v3,B1,B2,B3,p,E"


def refined_grid(field: DoFField, gas: GasModel):
    """Half-spaced (2nx+1) x (2ny+1) node block of the whole solution.

    Even/even nodes carry corner values, even/odd carry x-face midpoints,
    odd/even carry y-face midpoints, and odd/odd carry the cell average of
    the enclosing cell. Returns (xs, ys, data) with data rows matching the
    state columns of FIELD_HEADER: primitives followed by total energy.
    """
    mesh = field.mesh
    nx, ny = mesh.nx, mesh.ny
    U = np.empty((8, 2 * nx + 1, 2 * ny + 1))
    U[:, 0::2, 0::2] = interior_corner(field)
    U[:, 0::2, 1::2] = interior_vface(field)
    U[:, 1::2, 0::2] = interior_hface(field)
    U[:, 1::2, 1::2] = interior_avg(field)
    W = primitive_of_conserved(U, gas)
    xs = mesh.x0 + np.arange(2 * nx + 1) * (0.5 * mesh.dx)
    ys = mesh.y0 + np.arange(2 * ny + 1) * (0.5 * mesh.dy)
    return xs, ys, np.concatenate([W, U[ENE:ENE + 1]], axis=0)


def write_fields(field: DoFField, mesh: Mesh2D, path, gas: GasModel,
                 fmt: str = "csv") -> None:
    """Dump the refined grid to one file; rows are row-major in (x, y)."""
    xs, ys, data = refined_grid(field, gas)
    if fmt == "csv":
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        cols = [X.ravel(), Y.ravel()]
        cols += [row.ravel() for row in data]
        np.savetxt(path, np.column_stack(cols), fmt="%.17g", delimiter=",",
                   header=FIELD_HEADER, comments="")
    elif fmt == "npz":
        names = FIELD_HEADER.split(",")[2:]
        np.savez(path, x=xs, y=ys, **{n: data[k] for k, n in enumerate(names)})
    else:
        raise ConfigError(f"unknown dump format {fmt!r}")
