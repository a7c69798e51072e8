"""Run orchestration: time loop, dumps, history, and convergence driver."""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .core import Workspace, compute_dt, ssp_rk3_step
from .diagnostics import l1_error, make_record, write_history
from .errors import (ConfigError, InadmissibleState, NoAdmissibleState,
                     NoExactSolution, NonpositiveDensity, PPViolation)
from .grid import DoFField, init_dofs, interior_avg
from .output import write_fields
from .physics import P_NOISE_REL, energy_scale
from .problems import build_problem

# failures that mean "the scheme hit an inadmissible state", as opposed to
# configuration problems
ABORT_ERRORS = (PPViolation, NoAdmissibleState, InadmissibleState,
                NonpositiveDensity)

CONVERGENCE_VARS = ("rho", "m1", "m2", "m3", "B1", "B2", "B3", "E")


@dataclass(frozen=True)
class RunSummary:
    problem: str
    steps: int
    t_final: float
    wall_time: float
    min_rho: float
    min_p: float
    sensor_active: int
    pp_active: int
    retry_count: int
    retry_steps: int
    history: list
    field: DoFField


def _dump(field, mesh, outdir: Path, tag: str, gas, formats) -> None:
    for fmt in formats:
        write_fields(field, mesh, outdir / f"fields_{tag}.{fmt}", gas, fmt)


def run(config: RunConfig) -> RunSummary:
    """Integrate one configured problem to its final time.

    Writes field dumps (every dump_stride steps plus the final state) and
    the per-step history CSV into the output directory. Raises the abort
    error of the failing stage, annotated with step and time, after saving
    the history collected so far.
    """
    spec = build_problem(config.problem, config.params)
    gas = spec.gas()
    mesh = spec.mesh(config.nx, config.ny)
    opts = config.scheme_options(spec)
    t_end = config.t_end if config.t_end is not None else spec.t_end
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    ws = Workspace(mesh)
    F = init_dofs(mesh, spec.ic, gas)
    records = [make_record(F, gas, 0.0)]
    if config.dump_stride:
        _dump(F, mesh, outdir, "000000", gas, config.formats)

    t = 0.0
    steps = sensor_active = pp_active = retry_count = retry_steps = 0
    start = time.perf_counter()
    while t_end - t > 1e-14 * t_end:
        rep = compute_dt(F, opts.nu, gas, spec.bc, ws, t)
        clipped = rep.dt >= t_end - t
        dt = t_end - t if clipped else rep.dt
        try:
            F, st = ssp_rk3_step(F, t, dt, gas, spec.bc, opts, ws)
        except ABORT_ERRORS as exc:
            write_history(records, outdir / "history.csv")
            raise type(exc)(f"step {steps + 1} at t = {t:.9g}: {exc}") from exc
        t = t_end if clipped else t + dt
        steps += 1
        rec = make_record(F, gas, t, st.sensor_active, st.pp_active,
                          st.retry_events)
        records.append(rec)
        # min_p is recorded raw; tolerate cancellation noise in the
        # positivity gate (see physics.P_NOISE_REL)
        p_noise = P_NOISE_REL * float(energy_scale(interior_avg(F)).max())
        if opts.pp and (rec.min_rho <= 0.0 or rec.min_p <= -p_noise):
            raise PPViolation(
                f"step {steps} at t = {t:.9g}: positivity floor broken, "
                f"min rho {rec.min_rho:.3e}, min p {rec.min_p:.3e}")
        sensor_active += st.sensor_active
        pp_active += st.pp_active
        retry_count += st.retry_events
        retry_steps += 1 if st.retry_events else 0
        if config.dump_stride and steps % config.dump_stride == 0:
            _dump(F, mesh, outdir, f"{steps:06d}", gas, config.formats)
    wall = time.perf_counter() - start

    _dump(F, mesh, outdir, "final", gas, config.formats)
    write_history(records, outdir / "history.csv")
    return RunSummary(problem=spec.name, steps=steps, t_final=t,
                      wall_time=wall,
                      min_rho=min(r.min_rho for r in records),
                      min_p=min(r.min_p for r in records),
                      sensor_active=sensor_active, pp_active=pp_active,
                      retry_count=retry_count, retry_steps=retry_steps,
                      history=records, field=F)


@dataclass(frozen=True)
class ConvergenceResult:
    hs: np.ndarray            # (n,)
    errors: np.ndarray        # (n, 8) average errors per conserved variable
    point_errors: np.ndarray  # (n, 8) point-unknown companions
    path: Path


def _rate(h1: float, e1: float, h2: float, e2: float):
    if e1 > 0.0 and e2 > 0.0:
        return math.log(e1 / e2) / math.log(h1 / h2)
    return None


def convergence_command(config: RunConfig, meshes) -> ConvergenceResult:
    """Run a mesh sequence and tabulate L1 errors against the exact solution.

    Writes convergence.csv (h plus error and observed rate per conserved
    variable; rates are blank on the first row and wherever an error is 0).
    """
    meshes = [int(n) for n in meshes]
    spec = build_problem(config.problem, config.params)
    if spec.exact is None:
        raise NoExactSolution(f"{spec.name} has no reference to converge to")
    if len(meshes) < 2 or sorted(set(meshes)) != meshes:
        raise ConfigError("need at least two strictly increasing mesh sizes")
    outdir = Path(config.outdir)
    hs, errs, perrs = [], [], []
    for n in meshes:
        # ny=None keeps the problem aspect ratio at every resolution
        sub = dataclasses.replace(config, nx=n, ny=None,
                                  outdir=str(outdir / f"mesh{n:04d}"))
        summary = run(sub)
        mesh = summary.field.mesh
        t = summary.t_final
        err = l1_error(summary.field, spec.exact, t, mesh, spec.gas())
        hs.append(mesh.dx)
        errs.append(err.avg)
        perrs.append(err.points)
    hs = np.array(hs)
    errs = np.array(errs)
    perrs = np.array(perrs)

    path = outdir / "convergence.csv"
    header = "h," + ",".join(
        f"err_{v},rate_{v}" for v in CONVERGENCE_VARS)
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(header + "\n")
        for k in range(len(meshes)):
            cells = ["%.17g" % hs[k]]
            for c in range(8):
                cells.append("%.17g" % errs[k, c])
                r = None if k == 0 else _rate(hs[k - 1], errs[k - 1, c],
                                              hs[k], errs[k, c])
                cells.append("" if r is None else "%.6g" % r)
            f.write(",".join(cells) + "\n")
    return ConvergenceResult(hs=hs, errors=errs, point_errors=perrs, path=path)
