"""State algebra: conversions, fluxes, wave speeds, admissibility."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from afmhd.errors import DegenerateInput, NonpositiveDensity
from afmhd.physics import (
    GasModel,
    conserved_of_primitive,
    fast_speed,
    flux,
    is_admissible,
    llf_split,
    powell_psi,
    pp_alpha,
    pressure,
    primitive_of_conserved,
    spectral_radius,
    total_pressure,
)
from conftest import random_conserved


def _state(rho, v, B, p, gas):
    W = np.array([rho, *v, *B, p], dtype=float)
    return conserved_of_primitive(W, gas)


# -- energy closure ----------------------------------------------------------

def test_energy_of_brio_wu_left_state():
    gas = GasModel(gamma=2.0)
    U = _state(1.0, (0, 0, 0), (0.75, 1.0, 0.0), 1.0, gas)
    assert U[7] == pytest.approx(1.78125, abs=0.0)


def test_energy_of_magnetized_ambient_state():
    gas = GasModel(gamma=5.0 / 3.0)
    U = _state(1.0, (0, 0, 0), (1 / np.sqrt(2), 1 / np.sqrt(2), 0.0), 0.1, gas)
    assert U[7] == pytest.approx(0.65, rel=1e-14)


def test_gamma_must_exceed_one():
    with pytest.raises(DegenerateInput):
        GasModel(gamma=1.0)


# -- conversions -------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(
    rho=st.floats(1e-6, 1e3),
    v=st.tuples(*[st.floats(-100, 100)] * 3),
    B=st.tuples(*[st.floats(-50, 50)] * 3),
    p=st.floats(1e-6, 1e3),
)
def test_roundtrip_primitive_conserved(rho, v, B, p):
    gas = GasModel(gamma=5.0 / 3.0)
    W = np.array([rho, *v, *B, p])
    U = conserved_of_primitive(W, gas)
    W2 = primitive_of_conserved(U, gas)
    # p comes back through a cancellation against the kinetic energy, so its
    # error scales with E, not with p itself; the atol absorbs subnormal
    # underflow of rho*v for tiny velocities
    assert np.allclose(W2[:7], W[:7], rtol=1e-13, atol=1e-290)
    assert abs(W2[7] - p) <= 1e-12 * (1.0 + abs(U[7]))


def test_conversion_rejects_nonpositive_density():
    gas = GasModel()
    U = _state(1.0, (0, 0, 0), (0, 0, 0), 1.0, gas)
    U[0] = 0.0
    with pytest.raises(NonpositiveDensity):
        primitive_of_conserved(U, gas)
    U[0] = np.nan
    with pytest.raises(NonpositiveDensity):
        primitive_of_conserved(U, gas)


# -- fluxes ------------------------------------------------------------------

def test_flux_of_static_magnetized_state():
    gas = GasModel(gamma=2.0)
    U = _state(1.0, (0, 0, 0), (0.75, 1.0, 0.0), 1.0, gas)
    F = flux(1, U, gas)
    expect = np.array([0.0, 1.21875, -0.75, 0.0, 0.0, 0.0, 0.0, 0.0])
    np.testing.assert_allclose(F, expect, rtol=0, atol=1e-15)


def test_flux_normal_field_row_is_zero(rng, gas53):
    U = random_conserved(rng, 64, gas53)
    assert np.all(flux(1, U, gas53)[4] == 0.0)
    assert np.all(flux(2, U, gas53)[5] == 0.0)


def test_flux_axis_swap_symmetry(rng, gas53):
    # relabeling (x<->y) must commute with the flux: the oracle is the
    # component permutation swapping rows 1<->2 and 4<->5
    perm = np.array([0, 2, 1, 3, 5, 4, 6, 7])
    U = random_conserved(rng, 64, gas53)
    F2 = flux(2, U, gas53)
    F1_swapped = flux(1, U[perm], gas53)
    np.testing.assert_allclose(F2, F1_swapped[perm], rtol=1e-13, atol=1e-13)


def test_flux_rejects_bad_axis(gas53):
    U = _state(1.0, (0, 0, 0), (0, 0, 0), 1.0, gas53)
    with pytest.raises(DegenerateInput):
        flux(3, U, gas53)


# -- source direction --------------------------------------------------------

def test_powell_psi_layout():
    gas = GasModel()
    U = _state(1.0, (1, 2, 3), (4, 5, 6), 1.0, gas)
    np.testing.assert_allclose(
        powell_psi(U), [0, 4, 5, 6, 1, 2, 3, 32], rtol=1e-14)


# -- wave speeds -------------------------------------------------------------

def test_fast_speed_reduces_to_sound_speed_without_field():
    gas = GasModel(gamma=1.4)
    W = np.array([1.0, 0, 0, 0, 0, 0, 0, 1.0])
    c = np.sqrt(1.4)
    assert fast_speed(1, W, gas) == pytest.approx(c, rel=1e-14)


def test_fast_speed_with_transverse_field():
    # B_axis = 0 collapses the discriminant: c_f = sqrt(c^2 + |B|^2/rho)
    gas = GasModel(gamma=5.0 / 3.0)
    W = np.array([2.0, 0, 0, 0, 0, 3.0, 4.0, 1.2])
    expect = np.sqrt(gas.gamma * 1.2 / 2.0 + 25.0 / 2.0)
    assert fast_speed(1, W, gas) == pytest.approx(expect, rel=1e-14)


def test_spectral_radius_static_unmagnetized():
    gas = GasModel(gamma=2.0)
    U = _state(1.0, (0, 0, 0), (0, 0, 0), 1.0, gas)
    assert spectral_radius(1, U, gas) == pytest.approx(np.sqrt(2.0), rel=1e-14)
    U = _state(1.0, (0.5, -2.0, 0), (0, 0, 0), 1.0, gas)
    assert spectral_radius(2, U, gas) == pytest.approx(2.0 + np.sqrt(2.0), rel=1e-14)


def test_fast_speed_exceeds_alfvén_and_sound(rng, gas53):
    U = random_conserved(rng, 256, gas53)
    W = primitive_of_conserved(U, gas53)
    for axis in (1, 2):
        cf = fast_speed(axis, W, gas53)
        c = np.sqrt(gas53.gamma * W[7] / W[0])
        ca = np.abs(W[3 + axis]) / np.sqrt(W[0])
        assert np.all(cf >= c - 1e-12 * cf)
        assert np.all(cf >= ca - 1e-12 * cf)


# -- flux splitting ----------------------------------------------------------

def test_llf_split_recombines(rng, gas53):
    U = random_conserved(rng, 64, gas53)
    alpha = spectral_radius(1, U, gas53)
    plus, minus = llf_split(1, U, alpha, gas53)
    F = flux(1, U, gas53)
    # recombination cancels terms of size alpha*U, so scale tolerances by it
    scale = np.abs(F) + np.abs(alpha * U) + 1.0
    assert np.all(np.abs(plus + minus - F) <= 1e-13 * scale)
    assert np.all(np.abs(plus - minus - alpha * U) <= 1e-13 * scale)


# -- dissipation speed bound -------------------------------------------------

def test_pp_alpha_dominates_both_spectral_radii(rng, gas53):
    U = random_conserved(rng, 512, gas53)
    Ut = random_conserved(rng, 512, gas53)
    for axis in (1, 2):
        a = pp_alpha(axis, U, Ut, gas53)
        assert np.all(a >= spectral_radius(axis, U, gas53) - 1e-12 * a)
        assert np.all(a >= spectral_radius(axis, Ut, gas53) - 1e-12 * a)


def test_pp_alpha_symmetric(rng, gas53):
    U = random_conserved(rng, 128, gas53)
    Ut = random_conserved(rng, 128, gas53)
    np.testing.assert_allclose(
        pp_alpha(1, U, Ut, gas53), pp_alpha(1, Ut, U, gas53), rtol=1e-14)


def test_pp_alpha_field_jump_penalty():
    # states identical except B: bound = max spectral radius + |dB|/(2 sqrt(rho))
    gas = GasModel(gamma=5.0 / 3.0)
    U = _state(4.0, (0.3, 0, 0), (1.0, 0, 0), 2.0, gas)
    Ut = _state(4.0, (0.3, 0, 0), (1.0, 2.0, -1.0), 2.0, gas)
    rr = max(spectral_radius(1, U, gas), spectral_radius(1, Ut, gas))
    dB = np.sqrt(0 + 4.0 + 1.0)
    assert pp_alpha(1, U, Ut, gas) == pytest.approx(rr + dB / 4.0, rel=1e-14)


def test_pp_alpha_coincident_states_is_spectral_radius(rng, gas53):
    U = random_conserved(rng, 64, gas53)
    np.testing.assert_allclose(
        pp_alpha(1, U, U, gas53), spectral_radius(1, U, gas53), rtol=1e-14)


# -- admissibility -----------------------------------------------------------

def test_is_admissible_basic(gas53):
    U = _state(1.0, (0, 0, 0), (0, 0, 0), 1.0, gas53)
    assert is_admissible(U, 0.0, 0.0, gas53)
    assert not is_admissible(U, 2.0, 0.0, gas53)
    assert not is_admissible(U, 0.0, 2.0, gas53)


def test_is_admissible_rejects_nan(gas53):
    U = _state(1.0, (0, 0, 0), (0, 0, 0), 1.0, gas53)
    U[7] = np.nan
    assert not is_admissible(U, 0.0, 0.0, gas53)
    U[7] = 1.0
    U[0] = np.nan
    assert not is_admissible(U, 0.0, 0.0, gas53)


def test_admissible_set_is_convex_along_segments(rng, gas53):
    # interpolants of admissible states stay admissible: spot check of the
    # concavity of rho and p under convex combination
    U = random_conserved(rng, 256, gas53)
    Ut = random_conserved(rng, 256, gas53)
    for lam in (0.25, 0.5, 0.75):
        mid = lam * U + (1 - lam) * Ut
        assert np.all(is_admissible(mid, 0.0, 0.0, gas53))


def test_pressure_total_pressure_consistency(rng, gas53):
    U = random_conserved(rng, 64, gas53)
    pt = total_pressure(U, gas53)
    pb = 0.5 * (U[4] ** 2 + U[5] ** 2 + U[6] ** 2)
    np.testing.assert_allclose(pt, pressure(U, gas53) + pb, rtol=1e-13)
