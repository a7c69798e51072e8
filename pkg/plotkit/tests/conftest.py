from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

FIELD_HEADER = "x,y,rho,v1,v2,v3,B1,B2,B3,p,E"


def write_field_csv(path, nx=5, ny=4, uniform=None, seed=0):
    """Small synthetic refined-grid dump, x-major rows."""
    xs = np.linspace(0.0, 1.0, nx)
    ys = np.linspace(0.0, 2.0, ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    rng = np.random.default_rng(seed)
    cols = [X.ravel(), Y.ravel()]
    if uniform is not None:
        cols += [np.full(nx * ny, v) for v in uniform]
    else:
        rho = 1.0 + 0.3 * rng.random(nx * ny)
        v = rng.standard_normal((3, nx * ny)) * 0.1
        B = rng.standard_normal((3, nx * ny)) * 0.2
        p = 0.5 + 0.2 * rng.random(nx * ny)
        gamma = 5.0 / 3.0
        E = (p / (gamma - 1.0) + 0.5 * rho * (v ** 2).sum(axis=0)
             + 0.5 * (B ** 2).sum(axis=0))
        cols += [rho, *v, *B, p, E]
    np.savetxt(path, np.column_stack(cols), fmt="%.17g", delimiter=",",
               header=FIELD_HEADER, comments="")
    return path


@pytest.fixture
def field_csv(tmp_path):
    return write_field_csv(tmp_path / "fields.csv")
