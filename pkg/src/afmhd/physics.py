"""Pointwise ideal-MHD algebra on conserved 8-vectors.

Component layout, shared by conserved and primitive arrays (axis 0 of every
state array, trailing axes are grid/batch axes):

    conserved U = (rho, m1, m2, m3, B1, B2, B3, E)
    primitive W = (rho, v1, v2, v3, B1, B2, B3, p)

with momentum m = rho*v and total energy E = p/(gamma-1) + rho|v|^2/2 + |B|^2/2.
Directional arguments ``axis`` take 1 (x) or 2 (y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, NonpositiveDensity

RHO = 0
MOMX, MOMY, MOMZ = 1, 2, 3
BX, BY, BZ = 4, 5, 6
ENE = 7
PRS = 7
VEC = slice(1, 4)
MAG = slice(4, 7)

NCOMP = 8


@dataclass(frozen=True)
class GasModel:
    """Ideal-gas closure, gamma > 1."""

    gamma: float = 5.0 / 3.0

    def __post_init__(self) -> None:
        if not self.gamma > 1.0:
            raise DegenerateInput(f"gamma must exceed 1, got {self.gamma}")


def _check_axis(axis: int) -> None:
    if axis not in (1, 2):
        raise DegenerateInput(f"axis must be 1 or 2, got {axis}")


def pressure(U: np.ndarray, gas: GasModel) -> np.ndarray:
    """Thermal pressure from the conserved state."""
    kinetic = 0.5 * (U[MOMX] ** 2 + U[MOMY] ** 2 + U[MOMZ] ** 2) / U[RHO]
    magnetic = 0.5 * (U[BX] ** 2 + U[BY] ** 2 + U[BZ] ** 2)
    return (gas.gamma - 1.0) * (U[ENE] - kinetic - magnetic)


def total_pressure(U: np.ndarray, gas: GasModel) -> np.ndarray:
    """Thermal plus magnetic pressure p + |B|^2/2."""
    return pressure(U, gas) + 0.5 * (U[BX] ** 2 + U[BY] ** 2 + U[BZ] ** 2)


# pressure() is a difference of energies, so in strongly magnetized or fast
# flow it carries cancellation noise of a few ulp of those energies even for
# states constructed to be admissible; evolved-state positivity is therefore
# checked against -P_NOISE_REL * energy_scale rather than against zero.
# An order looser than the limiter verify slack (kernels.P_VERIFY_REL) so a
# state the limiters accept is never rejected here, yet still seven-plus
# orders below any genuine positivity loss seen in unlimited shock runs.
P_NOISE_REL = 1.0e-11


def energy_scale(U: np.ndarray) -> np.ndarray:
    """Magnitude of the energies whose difference forms the pressure."""
    with np.errstate(divide="ignore", invalid="ignore"):
        kinetic = 0.5 * (U[MOMX] ** 2 + U[MOMY] ** 2 + U[MOMZ] ** 2) / U[RHO]
    magnetic = 0.5 * (U[BX] ** 2 + U[BY] ** 2 + U[BZ] ** 2)
    return np.abs(U[ENE]) + kinetic + magnetic


def primitive_of_conserved(U: np.ndarray, gas: GasModel) -> np.ndarray:
    """Convert conserved to primitive variables.

    Raises NonpositiveDensity if any density fails rho > 0 (NaN included).
    """
    U = np.asarray(U, dtype=np.float64)
    rho = U[RHO]
    if not np.all(rho > 0.0):
        raise NonpositiveDensity("conversion needs rho > 0 everywhere")
    W = U.copy()
    W[VEC] = U[VEC] / rho
    W[PRS] = pressure(U, gas)
    return W


def conserved_of_primitive(W: np.ndarray, gas: GasModel) -> np.ndarray:
    """Convert primitive to conserved variables."""
    W = np.asarray(W, dtype=np.float64)
    rho = W[RHO]
    U = W.copy()
    U[VEC] = W[VEC] * rho
    U[ENE] = (
        W[PRS] / (gas.gamma - 1.0)
        + 0.5 * rho * (W[MOMX] ** 2 + W[MOMY] ** 2 + W[MOMZ] ** 2)
        + 0.5 * (W[BX] ** 2 + W[BY] ** 2 + W[BZ] ** 2)
    )
    return U


def flux(axis: int, U: np.ndarray, gas: GasModel) -> np.ndarray:
    """Directional flux of the conserved state.

    The row carrying the normal field component is identically zero; the
    matching divergence terms live in the nonconservative source instead.
    """
    _check_axis(axis)
    mn = axis
    bn = 3 + axis
    rho = U[RHO]
    vn = U[mn] / rho
    Bn = U[bn]
    p_t = total_pressure(U, gas)
    vdotB = (U[MOMX] * U[BX] + U[MOMY] * U[BY] + U[MOMZ] * U[BZ]) / rho

    F = np.empty_like(U)
    F[RHO] = U[mn]
    F[MOMX] = vn * U[MOMX] - Bn * U[BX]
    F[MOMY] = vn * U[MOMY] - Bn * U[BY]
    F[MOMZ] = vn * U[MOMZ] - Bn * U[BZ]
    F[mn] = F[mn] + p_t
    F[BX] = vn * U[BX] - Bn * U[MOMX] / rho
    F[BY] = vn * U[BY] - Bn * U[MOMY] / rho
    F[BZ] = vn * U[BZ] - Bn * U[MOMZ] / rho
    F[bn] = 0.0
    F[ENE] = (U[ENE] + p_t) * vn - Bn * vdotB
    return F


def powell_psi(U: np.ndarray) -> np.ndarray:
    """Source direction (0, B, v, v.B) multiplying the field divergence."""
    rho = U[RHO]
    P = np.empty_like(U)
    P[RHO] = 0.0
    P[VEC] = U[MAG]
    P[MAG] = U[VEC] / rho
    P[ENE] = (U[MOMX] * U[BX] + U[MOMY] * U[BY] + U[MOMZ] * U[BZ]) / rho
    return P


def fast_speed(axis: int, W: np.ndarray, gas: GasModel) -> np.ndarray:
    """Fast magnetosonic speed along ``axis`` from primitive variables.

    The inner discriminant is clamped at zero; round-off can push it
    slightly negative when the field is aligned with the axis.
    """
    _check_axis(axis)
    rho = W[RHO]
    a2 = gas.gamma * W[PRS] / rho
    b2 = (W[BX] ** 2 + W[BY] ** 2 + W[BZ] ** 2) / rho
    bn2 = W[3 + axis] ** 2 / rho
    s = a2 + b2
    disc = np.maximum(s * s - 4.0 * a2 * bn2, 0.0)
    return np.sqrt(0.5 * (s + np.sqrt(disc)))


def _fast_speed_conserved(axis: int, U: np.ndarray, gas: GasModel) -> np.ndarray:
    rho = U[RHO]
    a2 = gas.gamma * pressure(U, gas) / rho
    b2 = (U[BX] ** 2 + U[BY] ** 2 + U[BZ] ** 2) / rho
    bn2 = U[3 + axis] ** 2 / rho
    s = a2 + b2
    disc = np.maximum(s * s - 4.0 * a2 * bn2, 0.0)
    return np.sqrt(0.5 * (s + np.sqrt(disc)))


def spectral_radius(axis: int, U: np.ndarray, gas: GasModel) -> np.ndarray:
    """|v_axis| + fast speed, the directional wave-speed bound."""
    _check_axis(axis)
    return np.abs(U[axis] / U[RHO]) + _fast_speed_conserved(axis, U, gas)


def llf_split(
    axis: int, U: np.ndarray, alpha: np.ndarray | float, gas: GasModel
) -> tuple[np.ndarray, np.ndarray]:
    """Split the directional flux into (F + alpha U)/2 and (F - alpha U)/2."""
    F = flux(axis, U, gas)
    aU = alpha * U
    return 0.5 * (F + aU), 0.5 * (F - aU)


def pp_alpha(axis: int, U: np.ndarray, Ut: np.ndarray, gas: GasModel) -> np.ndarray:
    """Dissipation speed large enough to keep the two-state LLF flux
    positivity preserving.

    Exceeds both local spectral radii and adds a density-weighted penalty
    for the jump in the magnetic field.
    """
    _check_axis(axis)
    rho, rhot = U[RHO], Ut[RHO]
    sq, sqt = np.sqrt(rho), np.sqrt(rhot)
    vn, vnt = U[axis] / rho, Ut[axis] / rhot
    cf = _fast_speed_conserved(axis, U, gas)
    cft = _fast_speed_conserved(axis, Ut, gas)
    roe = np.abs(sq * vn + sqt * vnt) / (sq + sqt)
    vstar = np.maximum(np.maximum(np.abs(vn), np.abs(vnt)), roe)
    dB = np.sqrt(
        (U[BX] - Ut[BX]) ** 2 + (U[BY] - Ut[BY]) ** 2 + (U[BZ] - Ut[BZ]) ** 2
    ) / (sq + sqt)
    alpha_star = vstar + np.maximum(cf, cft) + dB
    return np.maximum(
        np.maximum(np.abs(vn) + cf, np.abs(vnt) + cft), alpha_star
    )


def is_admissible(
    U: np.ndarray, eps_rho: np.ndarray | float, eps_p: np.ndarray | float, gas: GasModel
) -> np.ndarray:
    """True where rho >= eps_rho and p(U) >= eps_p. NaN entries fail."""
    rho = np.asarray(U[RHO])
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        p = pressure(U, gas)
    return (rho >= eps_rho) & (p >= eps_p)
