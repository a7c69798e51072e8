"""CSV readers for the solver output schemas.

All three files the solver writes share the same shape: one header line
of comma-separated column names, then numeric rows. Tables load as
column-name -> 1D float array; parsing keeps full double precision, so
plotted extrema equal the file's extrema exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import IoError, SchemaMismatch

FIELD_COLUMNS = ("x", "y", "rho", "v1", "v2", "v3", "B1", "B2", "B3",
                 "p", "E")
HISTORY_COLUMNS = ("t", "div1", "div2", "min_rho", "min_p", "mass",
                   "sensor_active", "pp_active", "retry_count")


def read_table(path) -> dict:
    """Load a headed CSV as {column: array}."""
    try:
        text = Path(path).read_text(encoding="ascii")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise SchemaMismatch(f"{path}: missing header line")
    names = [c.strip() for c in lines[0].split(",")]
    if len(set(names)) != len(names) or any(not n for n in names):
        raise SchemaMismatch(f"{path}: malformed header {lines[0]!r}")
    rows = []
    for ln in lines[1:]:
        if not ln.strip():
            continue
        # empty cells (unset convergence rates) read as nan
        rows.append([cell.strip() or "nan" for cell in ln.split(",")])
    if not rows:
        raise SchemaMismatch(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if widths != {len(names)}:
        raise SchemaMismatch(f"{path}: header names {len(names)} columns "
                             f"but rows have {sorted(widths)}")
    try:
        data = np.array(rows, dtype=np.float64)
    except ValueError as exc:
        raise SchemaMismatch(f"{path}: non-numeric cell: {exc}") from exc
    return {n: data[:, k] for k, n in enumerate(names)}


def require_columns(table: dict, cols, path="table") -> None:
    missing = [c for c in cols if c not in table]
    if missing:
        raise SchemaMismatch(f"{path}: missing columns {missing}; "
                             f"has {sorted(table)}")


def field_grid(table: dict, path="table"):
    """Reshape a refined-grid dump to (xs, ys, {var: 2D array}).

    Rows are x-major; xs and ys must tile the table exactly.
    """
    require_columns(table, ("x", "y"), path)
    xs = np.unique(table["x"])
    ys = np.unique(table["y"])
    n = xs.size * ys.size
    if n != table["x"].size:
        raise SchemaMismatch(f"{path}: rows do not tile a grid "
                             f"({xs.size} x {ys.size} != {table['x'].size})")
    grids = {}
    for name, col in table.items():
        arr = col.reshape(xs.size, ys.size)
        grids[name] = arr
    if not (np.array_equal(grids["x"][:, 0], xs)
            and np.array_equal(grids["y"][0, :], ys)):
        raise SchemaMismatch(f"{path}: rows are not x-major grid order")
    return xs, ys, grids
