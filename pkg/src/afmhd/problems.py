"""Built-in experiments: domains, gas models, initial data, boundaries.

Each problem is a ProblemSpec holding everything a run needs besides the
mesh resolution. 1D shock tubes are emitted as y-invariant 2D specs on a
narrow periodic strip (four square cells high).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BadParams, NoExactSolution, UnknownProblem
from .grid import BoundaryCondition, BoundaryPolicy, Mesh2D
from .physics import NCOMP, GasModel, conserved_of_primitive

ICFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
ExactFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]

SQRT4PI = math.sqrt(4.0 * math.pi)

# amplitude that tunes the vortex center pressure to ~5.3e-12
VORTEX_MU = 5.389489439


@dataclass(frozen=True)
class ProblemSpec:
    """One experiment: domain, gas, run length, initial and boundary data.

    ic(x, y) and exact(x, y, t) return primitive (8, ...) arrays over the
    broadcast shape of the coordinates.
    """

    name: str
    x0: float
    x1: float
    y0: float
    y1: float
    gamma: float
    t_end: float
    kappa_default: float
    ic: ICFn
    bc: BoundaryPolicy
    exact: ExactFn | None = None
    pseudo_1d: bool = False

    def gas(self) -> GasModel:
        return GasModel(gamma=self.gamma)

    def mesh(self, nx: int, ny: int | None = None) -> Mesh2D:
        """Mesh with nx cells across the x extent.

        Pseudo-1D problems always get a four-cell periodic strip of square
        cells in y; otherwise ny defaults to matching the aspect ratio.
        """
        if self.pseudo_1d:
            dx = (self.x1 - self.x0) / nx
            return Mesh2D(nx, 4, self.x0, self.x1, self.y0, self.y0 + 4.0 * dx)
        if ny is None:
            aspect = (self.y1 - self.y0) / (self.x1 - self.x0)
            ny = max(1, round(nx * aspect))
        return Mesh2D(nx, ny, self.x0, self.x1, self.y0, self.y1)


def _prim(x, rho, v1, v2, v3, b1, b2, b3, p) -> np.ndarray:
    """Stack eight primitive components over the shape of x."""
    W = np.empty((NCOMP,) + np.shape(x))
    for k, c in enumerate((rho, v1, v2, v3, b1, b2, b3, p)):
        W[k] = c
    return W


def _state8(seq, what: str) -> np.ndarray:
    w = np.asarray(seq, dtype=np.float64)
    if w.shape != (NCOMP,) or not np.all(np.isfinite(w)):
        raise BadParams(f"{what} must be 8 finite primitives (rho, v, B, p)")
    if not (w[0] > 0.0 and w[7] > 0.0):
        raise BadParams(f"{what} needs positive density and pressure")
    return w


# problem builders ------------------------------------------------------------


def _sine() -> ProblemSpec:
    def exact(x, y, t):
        rho = 1.0 + 0.99 * np.sin(2.0 * np.pi * (x + y - 2.0 * t))
        return _prim(x, rho, 1.0, 1.0, 0.0, 0.1, 0.1, 0.0, 1.0)

    return ProblemSpec("sine", 0.0, 1.0, 0.0, 1.0, gamma=5.0 / 3.0, t_end=0.1,
                       kappa_default=0.0, ic=lambda x, y: exact(x, y, 0.0),
                       bc=BoundaryPolicy.all_periodic(), exact=exact)


def _vortex(mu: float = VORTEX_MU, literal: bool = False) -> ProblemSpec:
    """Smooth vortex advected diagonally across a periodic box.

    The default amplitudes carry a 1/(2 pi) factor; literal=True drops it,
    which drives the center pressure of the mu=5.389489439 case far negative.
    """
    mu = float(mu)
    if not mu > 0.0:
        raise BadParams("vortex needs mu > 0")
    xi = math.sqrt(2.0) * mu
    s = 1.0 if literal else 1.0 / (2.0 * math.pi)
    cv, cb, cp = xi * s, mu * s, 0.5 * s * s

    def profile(x, y):
        r2 = x * x + y * y
        g = np.exp(0.5 * (1.0 - r2))
        dp = cp * (mu * mu * (1.0 - r2) - xi * xi) * np.exp(1.0 - r2)
        return _prim(x, 1.0, 1.0 - cv * y * g, 1.0 + cv * x * g, 0.0,
                     -cb * y * g, cb * x * g, 0.0, 1.0 + dp)

    def exact(x, y, t):
        xr = -10.0 + np.mod(np.asarray(x, dtype=np.float64) - t + 10.0, 20.0)
        yr = -10.0 + np.mod(np.asarray(y, dtype=np.float64) - t + 10.0, 20.0)
        return profile(xr, yr)

    return ProblemSpec("vortex", -10.0, 10.0, -10.0, 10.0, gamma=5.0 / 3.0,
                       t_end=0.1, kappa_default=0.0, ic=profile,
                       bc=BoundaryPolicy.all_periodic(), exact=exact)


def _orszag_tang() -> ProblemSpec:
    def ic(x, y):
        sy = np.sin(2.0 * np.pi * y)
        return _prim(x, 25.0 / (36.0 * np.pi), -sy, np.sin(2.0 * np.pi * x),
                     0.0, -sy / SQRT4PI, np.sin(4.0 * np.pi * x) / SQRT4PI,
                     0.0, 5.0 / (12.0 * np.pi))

    return ProblemSpec("orszag_tang", 0.0, 1.0, 0.0, 1.0, gamma=5.0 / 3.0,
                       t_end=0.5, kappa_default=1.0, ic=ic,
                       bc=BoundaryPolicy.all_periodic())


def _rotor(literal: bool = False) -> ProblemSpec:
    """Dense rotating disk in a light ambient medium.

    The bridging taper is f = (r1-r)/(r1-r0), falling from 1 at the disk edge
    to 0 at the ambient edge. literal=True selects (r1-r)/(r-r0) instead,
    which blows up as r -> r0 from above.
    """
    r0, r1 = 0.1, 0.115

    def ic(x, y):
        dx, dy = x - 0.5, y - 0.5
        r = np.hypot(dx, dy)
        inner = r < r0
        outer = r > r1
        with np.errstate(divide="ignore", invalid="ignore"):
            f = (r1 - r) / ((r - r0) if literal else (r1 - r0))
            rho = np.where(inner, 10.0, np.where(outer, 1.0, 1.0 + 9.0 * f))
            v1 = np.where(inner, -dy / r0, np.where(outer, 0.0, -f * dy / r))
            v2 = np.where(inner, dx / r0, np.where(outer, 0.0, f * dx / r))
        return _prim(x, rho, v1, v2, 0.0, 2.5 / SQRT4PI, 0.0, 0.0, 0.5)

    return ProblemSpec("rotor", 0.0, 1.0, 0.0, 1.0, gamma=5.0 / 3.0,
                       t_end=0.295, kappa_default=2.0, ic=ic,
                       bc=BoundaryPolicy.all_periodic())


def _blast() -> ProblemSpec:
    def ic(x, y):
        p = np.where(np.hypot(x, y) < 0.1, 10.0, 0.1)
        b = 1.0 / math.sqrt(2.0)
        return _prim(x, 1.0, 0.0, 0.0, 0.0, b, b, 0.0, p)

    return ProblemSpec("blast", -0.5, 0.5, -0.5, 0.5, gamma=5.0 / 3.0,
                       t_end=0.2, kappa_default=1.0, ic=ic,
                       bc=BoundaryPolicy.all_outflow())


def _shock_cloud(literal: bool = False) -> ProblemSpec:
    """Planar shock at x = 0.6 running into a dense circular cloud.

    Post-shock and ambient tuples are read as (rho, v, p, B); literal=True
    reads them as (rho, v, B, p), which puts p = -2.1826182 on the left.
    """
    if literal:
        wl = np.array([3.86859, 0.0, 0.0, 0.0, 167.345, 0.0, 2.1826182,
                       -2.1826182])
        wr = np.array([1.0, -11.2536, 0.0, 0.0, 1.0, 0.0, 0.56418958,
                       0.56418958])
    else:
        wl = np.array([3.86859, 0.0, 0.0, 0.0, 0.0, 2.1826182, -2.1826182,
                       167.345])
        wr = np.array([1.0, -11.2536, 0.0, 0.0, 0.0, 0.56418958, 0.56418958,
                       1.0])
    gas = GasModel(gamma=5.0 / 3.0)
    u_left = conserved_of_primitive(wl, gas)

    def ic(x, y):
        W = np.where(np.asarray(x)[None] < 0.6, wl.reshape(NCOMP, 1, 1),
                     wr.reshape(NCOMP, 1, 1))
        W[0] = np.where(np.hypot(x - 0.8, y - 0.5) < 0.15, 10.0, W[0])
        return W

    def left_state(x, y, t):
        return np.broadcast_to(u_left.reshape(NCOMP, 1, 1),
                               (NCOMP,) + np.shape(x))

    bc = BoundaryPolicy(left=BoundaryCondition("inflow", state_fn=left_state),
                        right=BoundaryCondition("outflow"),
                        bottom=BoundaryCondition("outflow"),
                        top=BoundaryCondition("outflow"))
    return ProblemSpec("shock_cloud", 0.0, 1.0, 0.0, 1.0, gamma=gas.gamma,
                       t_end=0.06, kappa_default=1.0, ic=ic, bc=bc)


def _jet(ba: float = math.sqrt(200.0)) -> ProblemSpec:
    """High Mach number jet entering a magnetized ambient from below.

    The flow is symmetric about x = 0, so only the left half-plane is
    simulated with a reflective wall on the right. The injected state keeps
    the ambient B = (0, ba, 0) so the inlet adds no divergence.
    """
    ba = float(ba)
    if not (math.isfinite(ba) and ba > 0.0):
        raise BadParams("jet needs ba > 0")
    gamma = 1.4
    u_in = conserved_of_primitive(
        np.array([gamma, 0.0, 800.0, 0.0, 0.0, ba, 0.0, 1.0]),
        GasModel(gamma=gamma))

    def ic(x, y):
        return _prim(x, 0.1 * gamma, 0.0, 0.0, 0.0, 0.0, ba, 0.0, 1.0)

    def inlet(x, y, t):
        return np.broadcast_to(u_in.reshape(NCOMP, 1, 1),
                               (NCOMP,) + np.shape(x))

    bc = BoundaryPolicy(
        left=BoundaryCondition("outflow"),
        right=BoundaryCondition("reflective"),
        bottom=BoundaryCondition("inflow", state_fn=inlet,
                                 mask_fn=lambda x, y: np.abs(x) < 0.05),
        top=BoundaryCondition("outflow"))
    return ProblemSpec("jet", -0.5, 0.0, 0.0, 1.5, gamma=gamma, t_end=0.002,
                       kappa_default=2.0, ic=ic, bc=bc)


def _riemann_spec(name: str, left, right, gamma: float, t_end: float,
                  xc: float = 0.5, kappa: float = 10.0) -> ProblemSpec:
    wl = _state8(left, "left state")
    wr = _state8(right, "right state")
    gamma, t_end, xc = float(gamma), float(t_end), float(xc)
    if not gamma > 1.0:
        raise BadParams("riemann needs gamma > 1")
    if not t_end > 0.0:
        raise BadParams("riemann needs t_end > 0")
    if not 0.0 < xc < 1.0:
        raise BadParams("riemann needs 0 < xc < 1")

    def ic(x, y):
        return np.where(np.asarray(x)[None] < xc, wl.reshape(NCOMP, 1, 1),
                        wr.reshape(NCOMP, 1, 1))

    bc = BoundaryPolicy(left=BoundaryCondition("outflow"),
                        right=BoundaryCondition("outflow"),
                        bottom=BoundaryCondition("periodic"),
                        top=BoundaryCondition("periodic"))
    return ProblemSpec(name, 0.0, 1.0, 0.0, 1.0, gamma=gamma, t_end=t_end,
                       kappa_default=float(kappa), ic=ic, bc=bc,
                       pseudo_1d=True)


def _rp1() -> ProblemSpec:
    return _riemann_spec("rp1",
                         left=(1.0, 0.0, 0.0, 0.0, 0.75, 1.0, 0.0, 1.0),
                         right=(0.125, 0.0, 0.0, 0.0, 0.75, -1.0, 0.0, 0.1),
                         gamma=2.0, t_end=0.2, kappa=10.0)


def _rp2() -> ProblemSpec:
    b1 = 2.0 / SQRT4PI
    return _riemann_spec(
        "rp2",
        left=(1.08, 1.2, 0.01, 0.5, b1, 3.6 / SQRT4PI, b1, 0.95),
        right=(1.0, 0.0, 0.0, 0.0, b1, 4.0 / SQRT4PI, b1, 1.0),
        gamma=5.0 / 3.0, t_end=0.2, kappa=50.0)


def _riemann(left=None, right=None, gamma=None, t_end=None, xc: float = 0.5,
             kappa: float = 10.0) -> ProblemSpec:
    """User-supplied shock tube; left/right are primitive 8-tuples."""
    if left is None or right is None or gamma is None or t_end is None:
        raise BadParams("riemann needs left, right, gamma, and t_end")
    return _riemann_spec("riemann", left, right, gamma, t_end, xc, kappa)


_REGISTRY: dict[str, Callable[..., ProblemSpec]] = {
    "sine": _sine,
    "vortex": _vortex,
    "orszag_tang": _orszag_tang,
    "rotor": _rotor,
    "blast": _blast,
    "shock_cloud": _shock_cloud,
    "jet": _jet,
    "rp1": _rp1,
    "rp2": _rp2,
    "riemann": _riemann,
}


def problem_names() -> list[str]:
    return sorted(_REGISTRY)


def build_problem(name: str, params: dict | None = None) -> ProblemSpec:
    """Look up a problem by name and build it with the given parameters."""
    try:
        builder = _REGISTRY[name]
    except KeyError:
        raise UnknownProblem(
            f"no problem named {name!r}; known: {', '.join(problem_names())}"
        ) from None
    try:
        return builder(**(params or {}))
    except TypeError as exc:
        raise BadParams(f"{name}: {exc}") from None


def exact_solution(spec: ProblemSpec, x, y, t: float) -> np.ndarray:
    """Closed-form primitive reference of a problem, where one exists."""
    if spec.exact is None:
        raise NoExactSolution(f"{spec.name} has no closed-form solution")
    return spec.exact(np.asarray(x, dtype=np.float64),
                      np.asarray(y, dtype=np.float64), float(t))
