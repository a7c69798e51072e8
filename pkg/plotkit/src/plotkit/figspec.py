"""Figure descriptions and their YAML loader."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import IoError, SchemaMismatch

KINDS = ("line", "contour", "history", "convergence")

# per-kind fallback when the spec names no variables
DEFAULT_VARIABLES = {
    "line": ("rho",),
    "contour": ("rho",),
    "history": ("div1", "div2"),
    "convergence": ("err_rho",),
}


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input table(s), plot kind, variables, output path.

    variables names one panel each for the contour kind and one curve
    each otherwise; reference optionally overlays a second table on line
    plots. levels is the equally-spaced contour count.
    """

    kind: str
    input: str
    output: str
    variables: tuple = ()
    levels: int = 30
    reference: str | None = None
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaMismatch(f"kind must be one of {KINDS}, "
                                 f"got {self.kind!r}")
        if not self.input or not isinstance(self.input, str):
            raise SchemaMismatch("input must name a CSV file")
        if not self.output or not isinstance(self.output, str):
            raise SchemaMismatch("output must name an image file")
        vs = self.variables
        if isinstance(vs, str):
            vs = (vs,)
        if not vs:
            vs = DEFAULT_VARIABLES[self.kind]
        vs = tuple(vs)
        if not all(isinstance(v, str) and v for v in vs):
            raise SchemaMismatch(f"variables must be names, got {vs!r}")
        if len(vs) > 6:
            raise SchemaMismatch("at most 6 panels per figure")
        object.__setattr__(self, "variables", vs)
        if not (isinstance(self.levels, int)
                and not isinstance(self.levels, bool) and self.levels >= 1):
            raise SchemaMismatch(f"levels must be a positive integer, "
                                 f"got {self.levels!r}")


def spec_from_dict(raw: dict) -> FigureSpec:
    if not isinstance(raw, dict):
        raise SchemaMismatch("figure spec must be a mapping")
    known = {f for f in FigureSpec.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise SchemaMismatch(f"unknown figure spec keys: {sorted(unknown)}")
    if "kind" not in raw or "input" not in raw or "output" not in raw:
        raise SchemaMismatch("figure spec needs kind, input and output")
    return FigureSpec(**raw)


def load_figure_spec(path) -> FigureSpec:
    """Parse one YAML figure spec; relative data paths stay relative."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read figure spec {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SchemaMismatch(f"figure spec {path} is not valid YAML: "
                             f"{exc}") from exc
    return spec_from_dict(raw)
