import numpy as np
import pytest

from plotkit.errors import SchemaMismatch
from plotkit.figspec import FigureSpec
from plotkit.render import render

from conftest import write_field_csv


def test_uniform_field_contour_renders(tmp_path):
    # constant data has a single flat level; must render without error
    f = write_field_csv(tmp_path / "u.csv",
                        uniform=(1, 0, 0, 0, 0.5, 0.5, 0, 1, 2))
    out = render(FigureSpec(kind="contour", input=str(f),
                            output=str(tmp_path / "u.png")))
    assert out.exists() and out.stat().st_size > 0


def test_contour_panels_and_derived(field_csv, tmp_path):
    out = render(FigureSpec(
        kind="contour", input=str(field_csv),
        variables=["rho", "p", "mach", "pmag", "speed", "bmag"],
        output=str(tmp_path / "six.png")))
    assert out.exists()


def test_contour_missing_column_fails_before_render(tmp_path):
    f = tmp_path / "short.csv"
    f.write_text("x,y,rho\n0,0,1\n0,1,1\n1,0,1\n1,1,1\n")
    with pytest.raises(SchemaMismatch, match="missing"):
        render(FigureSpec(kind="contour", input=str(f), variables=["p"],
                          output=str(tmp_path / "no.png")))
    assert not (tmp_path / "no.png").exists()


def test_line_with_reference(field_csv, tmp_path):
    ref = tmp_path / "ref.csv"
    x = np.linspace(0, 1, 20)
    np.savetxt(ref, np.column_stack([x, 1 + 0.1 * x]), fmt="%.17g",
               delimiter=",", header="x,rho", comments="")
    out = render(FigureSpec(kind="line", input=str(field_csv),
                            variables=["rho"], reference=str(ref),
                            output=str(tmp_path / "line.png")))
    assert out.exists()


def test_line_generic_table(tmp_path):
    f = tmp_path / "curve.csv"
    x = np.linspace(0, 2, 30)
    np.savetxt(f, np.column_stack([x, np.sin(x)]), fmt="%.17g",
               delimiter=",", header="x,s", comments="")
    out = render(FigureSpec(kind="line", input=str(f), variables=["s"],
                            output=str(tmp_path / "curve.png")))
    assert out.exists()


def test_history_two_curves(tmp_path):
    f = tmp_path / "history.csv"
    t = np.linspace(0, 0.5, 50)
    rows = np.column_stack([t, 1e-3 * (1 + t), 1e-5 * (1 + t) ** 2,
                            np.full_like(t, 0.1), np.full_like(t, 0.2),
                            np.full_like(t, 1.0), np.zeros_like(t),
                            np.zeros_like(t), np.zeros_like(t)])
    np.savetxt(f, rows, fmt="%.17g", delimiter=",",
               header="t,div1,div2,min_rho,min_p,mass,sensor_active,"
                      "pp_active,retry_count", comments="")
    out = render(FigureSpec(kind="history", input=str(f),
                            output=str(tmp_path / "h.png")))
    assert out.exists()


def test_convergence_plot(tmp_path):
    f = tmp_path / "conv.csv"
    h = np.array([1 / 8, 1 / 16, 1 / 32])
    err = 0.3 * h ** 3
    rate = np.array([np.nan, 3.0, 3.0])
    np.savetxt(f, np.column_stack([h, err, rate]), fmt="%.17g",
               delimiter=",", header="h,err_rho,rate_rho", comments="")
    out = render(FigureSpec(kind="convergence", input=str(f),
                            output=str(tmp_path / "c.png")))
    assert out.exists()


def test_output_directory_created(field_csv, tmp_path):
    out = render(FigureSpec(kind="contour", input=str(field_csv),
                            output=str(tmp_path / "deep/dir/f.png")))
    assert out.exists()


def test_unknown_variable(field_csv, tmp_path):
    with pytest.raises(SchemaMismatch):
        render(FigureSpec(kind="contour", input=str(field_csv),
                          variables=["vorticity"],
                          output=str(tmp_path / "x.png")))
