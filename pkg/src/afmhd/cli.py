"""Command line front end.

Exit codes: 0 on success, 2 when a run aborts on lost positivity, 3 on
configuration problems (bad flags, files, or parameter values).
"""

from __future__ import annotations

import argparse
import sys

from .config import RunConfig, load_config
from .errors import ConfigError, DegenerateInput, NoExactSolution
from .solver import ABORT_ERRORS, convergence_command, run


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; that slot is taken by
    # positivity aborts here, so route usage errors through ConfigError
    def error(self, message):
        raise ConfigError(message)


def _state(text: str):
    parts = [p for p in text.replace(",", " ").split() if p]
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"state must be 8 numbers, got {text!r}") from exc
    if len(vals) != 8:
        raise ConfigError(f"state must be 8 numbers (rho,v1,v2,v3,B1,B2,B3,p),"
                          f" got {len(vals)}")
    return vals


def _meshes(text: str):
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError as exc:
        raise ConfigError(f"meshes must be integers, got {text!r}") from exc


def _add_overrides(p):
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--ny", type=int, default=None)
    p.add_argument("--cfl", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--out", default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="afmhd", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="integrate one configured problem")
    p.add_argument("--config", required=True, help="YAML run configuration")
    _add_overrides(p)

    p = sub.add_parser("convergence",
                       help="run a mesh sequence and tabulate L1 errors")
    p.add_argument("--config", required=True)
    p.add_argument("--meshes", required=True, type=_meshes,
                   help="comma separated cell counts, e.g. 16,32,64,128")
    p.add_argument("--out", default=None)

    p = sub.add_parser("riemann", help="run a user-supplied shock tube")
    p.add_argument("--left", required=True, type=_state,
                   help="left primitives rho,v1,v2,v3,B1,B2,B3,p")
    p.add_argument("--right", required=True, type=_state)
    p.add_argument("--gamma", required=True, type=float)
    p.add_argument("--tend", required=True, type=float)
    p.add_argument("--xc", type=float, default=0.5)
    _add_overrides(p)
    return parser


def _summary_line(s) -> str:
    return (f"{s.problem}: {s.steps} steps to t = {s.t_final:.6g} "
            f"in {s.wall_time:.2f} s; min rho {s.min_rho:.3e}, "
            f"min p {s.min_p:.3e}, sensor {s.sensor_active}, "
            f"pp {s.pp_active}, retries {s.retry_count}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.cmd == "run":
            cfg = load_config(args.config).with_overrides(
                nx=args.nx, ny=args.ny, cfl=args.cfl, kappa=args.kappa,
                outdir=args.out)
            print(_summary_line(run(cfg)))
        elif args.cmd == "convergence":
            cfg = load_config(args.config).with_overrides(outdir=args.out)
            res = convergence_command(cfg, args.meshes)
            print(f"wrote {res.path}")
        else:
            cfg = RunConfig(problem="riemann",
                            params=dict(left=args.left, right=args.right,
                                        gamma=args.gamma, t_end=args.tend,
                                        xc=args.xc))
            cfg = cfg.with_overrides(nx=args.nx, ny=args.ny, cfl=args.cfl,
                                     kappa=args.kappa, outdir=args.out)
            print(_summary_line(run(cfg)))
        return 0
    except (ConfigError, DegenerateInput, NoExactSolution) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except ABORT_ERRORS as exc:
        print(f"positivity abort: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
