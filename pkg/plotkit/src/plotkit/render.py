"""Figure rendering: one FigureSpec in, one image file out."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .csvio import field_grid, read_table, require_columns  # noqa: E402
from .derive import evaluate, needed_columns  # noqa: E402
from .errors import IoError, SchemaMismatch  # noqa: E402
from .figspec import FigureSpec  # noqa: E402

_PANEL_SHAPES = {1: (1, 1), 2: (1, 2), 3: (1, 3), 4: (2, 2),
                 5: (2, 3), 6: (2, 3)}


def _validate_columns(spec: FigureSpec, table: dict) -> None:
    cols = []
    for v in spec.variables:
        cols.extend(needed_columns(v))
    require_columns(table, dict.fromkeys(cols), spec.input)


def _contour_panel(ax, xs, ys, Z, levels: int, label: str) -> None:
    lo, hi = float(Z.min()), float(Z.max())
    if hi > lo:
        # exactly `levels` equally spaced interior lines
        vals = np.linspace(lo, hi, levels + 2)[1:-1]
        ax.contour(xs, ys, Z.T, levels=vals, colors="k", linewidths=0.45)
    # a flat field draws no lines but still renders a valid panel
    ax.set_xlim(xs[0], xs[-1])
    ax.set_ylim(ys[0], ys[-1])
    ax.set_aspect("equal")
    ax.set_title(f"{label}  [{lo:.4g}, {hi:.4g}]", fontsize=9)
    ax.tick_params(labelsize=7)


def _render_contour(spec: FigureSpec, table: dict, fig) -> None:
    xs, ys, grids = field_grid(table, spec.input)
    rows, cols = _PANEL_SHAPES[len(spec.variables)]
    for k, var in enumerate(spec.variables):
        ax = fig.add_subplot(rows, cols, k + 1)
        _contour_panel(ax, xs, ys, evaluate(grids, var), spec.levels, var)
    fig.set_size_inches(3.4 * cols, 3.2 * rows)


def _render_line(spec: FigureSpec, table: dict, fig) -> None:
    require_columns(table, ("x",), spec.input)
    ax = fig.add_subplot(1, 1, 1)
    if "y" in table:
        xs, ys, grids = field_grid(table, spec.input)
        jmid = ys.size // 2
        for var in spec.variables:
            ax.plot(xs, evaluate(grids, var)[:, jmid], lw=1.0, label=var)
    else:
        for var in spec.variables:
            ax.plot(table["x"], evaluate(table, var), lw=1.0, label=var)
    if spec.reference is not None:
        ref = read_table(spec.reference)
        require_columns(ref, ("x",), spec.reference)
        for var in spec.variables:
            if var in ref:
                ax.plot(ref["x"], ref[var], "k--", lw=0.8,
                        label=f"{var} (reference)")
    ax.set_xlabel("x")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)


def _render_history(spec: FigureSpec, table: dict, fig) -> None:
    require_columns(table, ("t",), spec.input)
    ax = fig.add_subplot(1, 1, 1)
    for var in spec.variables:
        ax.semilogy(table["t"], np.maximum(evaluate(table, var), 1e-300),
                    lw=1.2, label=var)
    ax.set_xlabel("t")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3, which="both")


def _render_convergence(spec: FigureSpec, table: dict, fig) -> None:
    require_columns(table, ("h",), spec.input)
    ax = fig.add_subplot(1, 1, 1)
    h = table["h"]
    for var in spec.variables:
        err = evaluate(table, var)
        ax.loglog(h, err, "o-", lw=1.0, ms=4, label=var)
    # third-order guide through the finest datum of the first curve
    err0 = evaluate(table, spec.variables[0])
    ax.loglog(h, err0[h.argmin()] * (h / h.min()) ** 3, "k:",
              lw=0.9, label="slope 3")
    ax.set_xlabel("h")
    ax.set_ylabel("L1 error")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3, which="both")


_RENDERERS = {
    "contour": _render_contour,
    "line": _render_line,
    "history": _render_history,
    "convergence": _render_convergence,
}


def render(spec: FigureSpec) -> Path:
    """Draw one figure; returns the written path."""
    table = read_table(spec.input)
    _validate_columns(spec, table)
    fig = plt.figure(figsize=(4.6, 3.8))
    try:
        _RENDERERS[spec.kind](spec, table, fig)
        if spec.title:
            fig.suptitle(spec.title, fontsize=10)
        fig.tight_layout()
        out = Path(spec.output)
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out, dpi=110)
        except OSError as exc:
            raise IoError(f"cannot write {out}: {exc}") from exc
    finally:
        plt.close(fig)
    return out
