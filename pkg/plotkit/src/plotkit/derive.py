"""Scalar fields derivable from the raw dump columns.

The dump stores primitives plus total energy, which is enough to recover
the adiabatic index and hence sound speed and Mach number without any
solver configuration.
"""

from __future__ import annotations

import numpy as np

from .errors import SchemaMismatch

# derived name -> raw columns consumed
DERIVED = {
    "speed": ("v1", "v2", "v3"),
    "bmag": ("B1", "B2", "B3"),
    "pmag": ("B1", "B2", "B3"),
    "mach": ("rho", "v1", "v2", "v3", "B1", "B2", "B3", "p", "E"),
}


def needed_columns(var: str):
    """Raw columns a variable references (itself when not derived)."""
    return DERIVED.get(var, (var,))


def _gamma_of(table) -> float:
    kin = 0.5 * table["rho"] * (table["v1"] ** 2 + table["v2"] ** 2
                                + table["v3"] ** 2)
    mag = 0.5 * (table["B1"] ** 2 + table["B2"] ** 2 + table["B3"] ** 2)
    internal = table["E"] - kin - mag
    with np.errstate(divide="ignore", invalid="ignore"):
        g = 1.0 + table["p"] / internal
    g = np.median(g[np.isfinite(g) & (internal > 0)])
    if not np.isfinite(g) or g <= 1.0:
        raise SchemaMismatch("cannot recover an adiabatic index > 1 "
                             "from p and E columns")
    return float(g)


def evaluate(table: dict, var: str) -> np.ndarray:
    """One scalar column/field, raw or derived."""
    if var in table:
        return table[var]
    if var == "speed":
        return np.sqrt(table["v1"] ** 2 + table["v2"] ** 2
                       + table["v3"] ** 2)
    if var == "bmag":
        return np.sqrt(table["B1"] ** 2 + table["B2"] ** 2
                       + table["B3"] ** 2)
    if var == "pmag":
        return 0.5 * (table["B1"] ** 2 + table["B2"] ** 2
                      + table["B3"] ** 2)
    if var == "mach":
        g = _gamma_of(table)
        speed = np.sqrt(table["v1"] ** 2 + table["v2"] ** 2
                        + table["v3"] ** 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            cs = np.sqrt(np.maximum(g * table["p"] / table["rho"], 0.0))
            m = np.where(cs > 0, speed / cs, 0.0)
        return m
    raise SchemaMismatch(f"unknown variable {var!r}")
