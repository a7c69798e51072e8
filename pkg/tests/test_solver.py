"""End-to-end tests of the run driver, config handling, field dumps, and CLI.

Small meshes and short horizons keep each case in the seconds range; the
long-horizon claims live in test_acceptance.py.
"""

import dataclasses

import numpy as np
import pytest
import yaml

from afmhd import cli
from afmhd.config import RunConfig, config_from_dict, load_config
from afmhd.diagnostics import HISTORY_HEADER
from afmhd.errors import ConfigError, NoExactSolution, SolverError
from afmhd.grid import G, init_dofs
from afmhd.output import FIELD_HEADER, refined_grid, write_fields
from afmhd.physics import ENE, RHO, conserved_of_primitive, primitive_of_conserved
from afmhd.problems import build_problem
from afmhd.solver import ABORT_ERRORS, convergence_command, run

UNIFORM = (1.0, 0.0, 0.0, 0.0, 0.75, 1.0, 0.0, 1.0)


def uniform_config(tmp_path, **kw):
    # a Riemann problem with equal states is a constant field; outflow in x
    # and periodic in y keep it constant for all time
    base = dict(problem="riemann",
                params=dict(left=UNIFORM, right=UNIFORM, gamma=2.0, t_end=0.02),
                nx=24, outdir=str(tmp_path / "run"))
    base.update(kw)
    return RunConfig(**base)


# ---------------------------------------------------------------- config ----


def test_config_defaults():
    cfg = RunConfig(problem="sine")
    assert cfg.nx == 64 and cfg.ny is None
    assert cfg.cfl == 0.4
    assert cfg.kappa is None and cfg.t_end is None
    assert cfg.sensor and cfg.pp and cfg.source_avg and cfg.source_points
    assert cfg.point_source == "central"
    assert cfg.formats == ("csv",)


@pytest.mark.parametrize("kw", [
    dict(nx=3), dict(nx=64.0), dict(nx=True), dict(ny=2),
    dict(cfl=0.0), dict(cfl=1.5), dict(cfl=-0.1),
    dict(kappa=-1.0), dict(t_end=0.0), dict(t_end=-2.0),
    dict(sensor=1), dict(pp="yes"),
    dict(point_source="sideways"), dict(outdir=""),
    dict(dump_stride=-1), dict(dump_stride=2.5),
    dict(formats=("csv", "hdf5")), dict(formats=()),
])
def test_config_rejects_bad_values(kw):
    with pytest.raises(ConfigError):
        RunConfig(problem="sine", **kw)


def test_config_from_dict_unknown_key():
    with pytest.raises(ConfigError, match="mesh_size"):
        config_from_dict({"problem": "sine", "mesh_size": 32})
    with pytest.raises(ConfigError, match="problem"):
        config_from_dict({"nx": 32})
    with pytest.raises(ConfigError):
        config_from_dict([("problem", "sine")])


def test_load_config_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("problem: sine\nnx: 24\ncfl: 0.3\nformats: [csv, npz]\n")
    cfg = load_config(str(path))
    assert cfg.problem == "sine" and cfg.nx == 24 and cfg.cfl == 0.3
    assert cfg.formats == ("csv", "npz")

    # an empty params key parses as None; treat it as "no parameters"
    empty = tmp_path / "empty_params.yaml"
    empty.write_text("problem: sine\nparams:\n")
    assert load_config(str(empty)).params == {}

    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.yaml"))
    bad = tmp_path / "bad.yaml"
    bad.write_text("problem: [unclosed\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))


def test_with_overrides_filters_none():
    cfg = RunConfig(problem="sine", nx=32)
    same = cfg.with_overrides(nx=None, cfl=None)
    assert same == cfg
    bumped = cfg.with_overrides(nx=48, outdir="elsewhere")
    assert bumped.nx == 48 and bumped.outdir == "elsewhere"
    assert bumped.problem == "sine"


def test_scheme_options_kappa_fallback():
    spec = build_problem("rotor")
    opts = RunConfig(problem="rotor").scheme_options(spec)
    assert opts.kappa == spec.kappa_default == 2.0
    assert opts.nu == 0.4
    forced = RunConfig(problem="rotor", kappa=0.5, cfl=0.2).scheme_options(spec)
    assert forced.kappa == 0.5 and forced.nu == 0.2
    off = RunConfig(problem="rotor", kappa=0.0).scheme_options(spec)
    assert off.kappa == 0.0


# ---------------------------------------------------------------- output ----


def test_refined_grid_slot_map():
    spec = build_problem("sine")
    mesh = spec.mesh(4)
    gas = spec.gas()
    field = init_dofs(mesh, spec.ic, gas)
    # overwrite each lattice with a distinct constant state so the refined
    # image reveals which slot fed each node
    tag = {"avg": 1.0, "vface": 2.0, "hface": 3.0, "corner": 4.0}
    for name, arr in zip(("avg", "vface", "hface", "corner"), field.arrays()):
        arr[:] = conserved_of_primitive(
            np.array([tag[name], 0, 0, 0, 0, 0, 0, tag[name]]), gas
        ).reshape(8, 1, 1)
    xs, ys, W = refined_grid(field, gas)
    assert W.shape == (9, 9, 9)
    assert xs.shape == (9,) and ys.shape == (9,)
    assert np.allclose(xs, np.arange(9) * mesh.dx / 2.0)
    # even/even nodes are corners, odd/odd are cell centers, mixed are faces
    assert np.all(W[0, 0::2, 0::2] == 4.0)
    assert np.all(W[0, 1::2, 1::2] == 1.0)
    assert np.all(W[0, 0::2, 1::2] == 2.0)
    assert np.all(W[0, 1::2, 0::2] == 3.0)


def test_write_fields_csv_shape_and_roundtrip(tmp_path):
    spec = build_problem("orszag_tang")
    mesh = spec.mesh(4)
    gas = spec.gas()
    field = init_dofs(mesh, spec.ic, gas)
    path = tmp_path / "fields.csv"
    write_fields(field, mesh, str(path), gas)

    lines = path.read_text().strip().split("\n")
    assert lines[0] == FIELD_HEADER == "x,y,rho,v1,v2,v3,B1,B2,B3,p,E"
    assert len(lines) - 1 == 9 * 9

    data = np.loadtxt(str(path), delimiter=",", skiprows=1)
    xs, ys, W = refined_grid(field, gas)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    # %.17g round-trips float64 exactly
    assert np.array_equal(data[:, 0], X.ravel())
    assert np.array_equal(data[:, 1], Y.ravel())
    for k in range(9):
        assert np.array_equal(data[:, 2 + k], W[k].ravel())


def test_write_fields_npz_matches_csv(tmp_path):
    spec = build_problem("blast")
    mesh = spec.mesh(6)
    gas = spec.gas()
    field = init_dofs(mesh, spec.ic, gas)
    write_fields(field, mesh, str(tmp_path / "f.csv"), gas, fmt="csv")
    write_fields(field, mesh, str(tmp_path / "f.npz"), gas, fmt="npz")
    txt = np.loadtxt(str(tmp_path / "f.csv"), delimiter=",", skiprows=1)
    npz = np.load(str(tmp_path / "f.npz"))
    names = FIELD_HEADER.split(",")[2:]
    assert set(names) <= set(npz.files)
    for k, name in enumerate(names):
        assert np.array_equal(npz[name].ravel(), txt[:, 2 + k])
    with pytest.raises(ConfigError):
        write_fields(field, mesh, str(tmp_path / "f.xml"), gas, fmt="xml")


# ---------------------------------------------------------------- solver ----


def test_uniform_state_preserved_exactly(tmp_path):
    cfg = uniform_config(tmp_path)
    summary = run(cfg)
    assert summary.steps > 3
    assert summary.t_final == 0.02

    U0 = conserved_of_primitive(np.array(UNIFORM), build_problem(
        "riemann", cfg.params).gas())
    for arr in summary.field.arrays():
        inner = arr[:, G:-G, G:-G]
        assert np.array_equal(inner, np.broadcast_to(
            U0.reshape(8, 1, 1), inner.shape))

    # mass column of the history must be constant to round-off
    mass = np.array([r.mass for r in summary.history])
    assert np.all(np.abs(mass - mass[0]) <= 1e-12 * abs(mass[0]))


def test_history_rows_and_final_clip(tmp_path):
    cfg = uniform_config(tmp_path)
    summary = run(cfg)
    hist = (tmp_path / "run" / "history.csv").read_text().strip().split("\n")
    assert hist[0] == HISTORY_HEADER
    assert len(hist) - 1 == summary.steps + 1
    last = hist[-1].split(",")
    assert float(last[0]) == 0.02  # exact landing on t_end
    assert summary.history[-1].t == 0.02


def test_run_writes_field_dumps(tmp_path):
    cfg = uniform_config(tmp_path, dump_stride=2, formats=("csv", "npz"))
    summary = run(cfg)
    out = tmp_path / "run"
    assert (out / "fields_final.csv").exists()
    assert (out / "fields_final.npz").exists()
    assert (out / "fields_000000.csv").exists()
    n_dumps = len(list(out.glob("fields_0*.csv")))
    assert n_dumps == summary.steps // 2 + 1


def test_determinism_bitwise(tmp_path):
    def one(tag):
        cfg = RunConfig(problem="sine", nx=12, t_end=0.05,
                        outdir=str(tmp_path / tag))
        run(cfg)
        d = tmp_path / tag
        return ((d / "fields_final.csv").read_bytes(),
                (d / "history.csv").read_bytes())

    f1, h1 = one("a")
    f2, h2 = one("b")
    assert f1 == f2
    assert h1 == h2


def test_orszag_tang_smoke(tmp_path):
    cfg = RunConfig(problem="sine", nx=16, t_end=0.02, outdir=str(tmp_path))
    s = run(cfg)
    assert s.min_rho > 0.0 and s.min_p > 0.0
    cfg = RunConfig(problem="orszag_tang", nx=32, t_end=0.05,
                    outdir=str(tmp_path / "ot"))
    s = run(cfg)
    assert s.min_p > 0.0
    assert all(np.isfinite(r.div1) and np.isfinite(r.div2) for r in s.history)


def test_pp_off_abort_annotated(tmp_path):
    # the near-vacuum vortex core dooms the unlimited scheme within a step
    # or two once the lattice resolves it
    cfg = RunConfig(problem="vortex", nx=64, pp=False,
                    outdir=str(tmp_path / "voff"))
    with pytest.raises(ABORT_ERRORS, match="step") as ei:
        run(cfg)
    assert isinstance(ei.value, SolverError)
    # the partial history is still on disk for post-mortem work
    assert (tmp_path / "voff" / "history.csv").exists()


def test_convergence_command(tmp_path):
    cfg = RunConfig(problem="sine", outdir=str(tmp_path / "conv"))
    res = convergence_command(cfg, [8, 16])
    assert res.hs[0] == pytest.approx(1.0 / 8.0)
    assert res.errors.shape == (2, 8)
    rate = np.log2(res.errors[0, RHO] / res.errors[1, RHO])
    assert 2.7 < rate < 3.8

    lines = (tmp_path / "conv" / "convergence.csv").read_text().strip().split("\n")
    head = lines[0].split(",")
    assert head[0] == "h" and "err_rho" in head and "rate_rho" in head
    first = lines[1].split(",")
    assert first[head.index("rate_rho")] == ""  # no rate on the coarsest mesh
    second = lines[2].split(",")
    assert float(second[head.index("rate_rho")]) == pytest.approx(rate, rel=1e-5)
    # zero-error columns leave the rate slot blank rather than printing nan
    assert second[head.index("rate_m3")] == ""

    with pytest.raises(ConfigError):
        convergence_command(cfg, [16, 16])
    with pytest.raises(ConfigError):
        convergence_command(cfg, [32, 16])
    with pytest.raises(NoExactSolution):
        convergence_command(dataclasses.replace(
            cfg, problem="orszag_tang"), [8, 16])


# ------------------------------------------------------------------- cli ----


def test_cli_run_and_overrides(tmp_path, capsys):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(dict(
        problem="riemann",
        params=dict(left=list(UNIFORM), right=list(UNIFORM),
                    gamma=2.0, t_end=0.02),
        nx=24, outdir=str(tmp_path / "cli_default"))))
    assert cli.main(["run", "--config", str(path)]) == 0
    assert (tmp_path / "cli_default" / "fields_final.csv").exists()

    rc = cli.main(["run", "--config", str(path),
                   "--nx", "16", "--out", str(tmp_path / "cli_out")])
    assert rc == 0
    rows = (tmp_path / "cli_out" / "fields_final.csv").read_text().strip()
    assert len(rows.split("\n")) - 1 == 33 * 9  # 16x4 strip, refined
    out = capsys.readouterr().out
    assert "riemann" in out


def test_cli_config_errors(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "nope.yaml")]) == 3
    bad = tmp_path / "bad.yaml"
    bad.write_text("problem: sine\nnx: 2\n")
    assert cli.main(["run", "--config", str(bad)]) == 3
    unknown = tmp_path / "unknown.yaml"
    unknown.write_text("problem: sine\nresolution: 32\n")
    assert cli.main(["run", "--config", str(unknown)]) == 3
    assert cli.main(["run"]) == 3  # missing --config is a usage error
    assert cli.main(["riemann", "--left", "1,2,3", "--right", "1,2,3",
                     "--gamma", "2", "--tend", "0.1"]) == 3


def test_cli_positivity_abort_exit_code(tmp_path):
    path = tmp_path / "voff.yaml"
    path.write_text(yaml.safe_dump(dict(
        problem="vortex", nx=64, pp=False, outdir=str(tmp_path / "voff"))))
    assert cli.main(["run", "--config", str(path)]) == 2


def test_cli_riemann_subcommand(tmp_path):
    state = ",".join(str(v) for v in UNIFORM)
    rc = cli.main(["riemann", "--left", state,
                   "--right", "0.4 0 0 0 0.75 -1 0 0.3",
                   "--gamma", "2.0", "--tend", "0.01",
                   "--nx", "32", "--out", str(tmp_path / "rp")])
    assert rc == 0
    assert (tmp_path / "rp" / "fields_final.csv").exists()
    assert (tmp_path / "rp" / "history.csv").exists()


def test_cli_convergence_subcommand(tmp_path):
    path = tmp_path / "conv.yaml"
    path.write_text("problem: sine\n")
    rc = cli.main(["convergence", "--config", str(path),
                   "--meshes", "8,16", "--out", str(tmp_path / "conv")])
    assert rc == 0
    assert (tmp_path / "conv" / "convergence.csv").exists()
    rc = cli.main(["convergence", "--config", str(path),
                   "--meshes", "8", "--out", str(tmp_path / "conv1")])
    assert rc == 3  # a single mesh has no rate to report
