"""Run configuration: file schema, validation, and flag overrides."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields

import yaml

from .core import SchemeOptions
from .errors import ConfigError
from .problems import ProblemSpec

FORMATS = ("csv", "npz")


@dataclass(frozen=True)
class RunConfig:
    """Everything one run needs; unset entries fall back to problem defaults."""

    problem: str
    params: dict = field(default_factory=dict)
    nx: int = 64
    ny: int | None = None
    cfl: float = 0.4
    kappa: float | None = None
    t_end: float | None = None
    sensor: bool = True
    pp: bool = True
    source_avg: bool = True
    source_points: bool = True
    point_source: str = "central"
    outdir: str = "out"
    dump_stride: int = 0
    formats: tuple = ("csv",)

    def __post_init__(self) -> None:
        if not isinstance(self.problem, str) or not self.problem:
            raise ConfigError("problem must be a nonempty name string")
        if self.params is None:
            # an empty "params:" key in YAML loads as None
            object.__setattr__(self, "params", {})
        if not isinstance(self.params, dict):
            raise ConfigError("params must be a mapping")
        for name in ("nx", "ny"):
            v = getattr(self, name)
            if name == "ny" and v is None:
                continue
            if not isinstance(v, int) or isinstance(v, bool) or v < 4:
                raise ConfigError(f"{name} must be an integer >= 4")
        if not isinstance(self.cfl, (int, float)) or not 0.0 < self.cfl <= 1.0:
            raise ConfigError("cfl must lie in (0, 1]")
        if self.kappa is not None and (
                not isinstance(self.kappa, (int, float)) or self.kappa < 0.0):
            raise ConfigError("kappa must be >= 0")
        if self.t_end is not None and (
                not isinstance(self.t_end, (int, float)) or self.t_end <= 0.0):
            raise ConfigError("t_end must be > 0")
        for name in ("sensor", "pp", "source_avg", "source_points"):
            if not isinstance(getattr(self, name), bool):
                raise ConfigError(f"{name} must be true or false")
        if self.point_source not in ("central", "upwind"):
            raise ConfigError("point_source must be 'central' or 'upwind'")
        if not isinstance(self.outdir, str) or not self.outdir:
            raise ConfigError("outdir must be a nonempty path string")
        if not isinstance(self.dump_stride, int) or isinstance(
                self.dump_stride, bool) or self.dump_stride < 0:
            raise ConfigError("dump_stride must be an integer >= 0")
        object.__setattr__(self, "formats", tuple(self.formats))
        if not self.formats or any(f not in FORMATS for f in self.formats):
            raise ConfigError(f"formats must be a nonempty subset of {FORMATS}")

    def with_overrides(self, **kv) -> "RunConfig":
        """Copy with the non-None entries replaced (command line flags)."""
        kv = {k: v for k, v in kv.items() if v is not None}
        return dataclasses.replace(self, **kv)

    def scheme_options(self, spec: ProblemSpec) -> SchemeOptions:
        kappa = self.kappa if self.kappa is not None else spec.kappa_default
        return SchemeOptions(kappa=float(kappa), sensor=self.sensor,
                             pp=self.pp, source_avg=self.source_avg,
                             source_points=self.source_points,
                             point_source=self.point_source,
                             nu=float(self.cfl))


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a key/value mapping")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "problem" not in data:
        raise ConfigError("config needs a problem name")
    return RunConfig(**data)


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return config_from_dict(data)
