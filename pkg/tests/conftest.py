"""Shared fixtures and random-state helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from afmhd.physics import GasModel, conserved_of_primitive


def random_primitive(rng: np.random.Generator, n: int, *,
                     rho_span: tuple[float, float] = (1e-6, 1e3),
                     p_span: tuple[float, float] = (1e-6, 1e3),
                     v_max: float = 1e2,
                     b_max: float = 5e1) -> np.ndarray:
    """Draw n primitive states with log-uniform rho, p and uniform v, B."""
    W = np.empty((8, n))
    W[0] = np.exp(rng.uniform(np.log(rho_span[0]), np.log(rho_span[1]), n))
    W[1:4] = rng.uniform(-v_max, v_max, (3, n))
    W[4:7] = rng.uniform(-b_max, b_max, (3, n))
    W[7] = np.exp(rng.uniform(np.log(p_span[0]), np.log(p_span[1]), n))
    return W


def random_conserved(rng: np.random.Generator, n: int, gas: GasModel,
                     **spans) -> np.ndarray:
    """Draw n admissible conserved states."""
    return conserved_of_primitive(random_primitive(rng, n, **spans), gas)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture
def gas53() -> GasModel:
    return GasModel(gamma=5.0 / 3.0)
