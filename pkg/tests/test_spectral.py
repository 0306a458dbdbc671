import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adiasearch.model import InitialState, uniform_state
from adiasearch.spectral import (
    ORACLE_CAP_ENV,
    EffectiveHamiltonian,
    eigenvalues,
    eigenvectors,
    full_matrix,
    full_spectrum,
    gap,
    matrix_2d,
    spectrum,
    transition_element,
)

amps = st.floats(0.001, 0.999)
unit = st.floats(0.0, 1.0)
scales = st.floats(0.01, 100.0)


def test_matrix_at_s1_is_final_hamiltonian():
    for a in (0.05, 0.5, 0.9):
        np.testing.assert_allclose(matrix_2d(EffectiveHamiltonian(a), 1.0), [[0, 0], [0, 1]], atol=1e-15)


def test_matrix_at_s0_equal_weights():
    h = EffectiveHamiltonian(1 / math.sqrt(2))
    m = matrix_2d(h, 0.0)
    np.testing.assert_allclose(m, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(m), [0.0, 1.0], atol=1e-15)


def test_matrix_midpoint_scaled_entries():
    # c * a * b * (s - 1) = 2 * 0.1 * sqrt(0.99) * (-0.5)
    m = matrix_2d(EffectiveHamiltonian(0.1, 2.0), 0.5)
    assert m[0, 1] == m[1, 0] == pytest.approx(-0.09949874371066199, abs=1e-15)
    assert m[0, 0] == pytest.approx(0.99, abs=1e-15)
    assert m[1, 1] == pytest.approx(1.01, abs=1e-15)


def test_matrix_matches_projector_construction():
    # direct (1-s)(I - psi psi^T) + s(I - m m^T) in the 2-D basis
    a = 0.3
    psi = np.array([a, math.sqrt(1 - a * a)])
    for s in (0.0, 0.2, 0.5, 0.77, 1.0):
        direct = (1 - s) * (np.eye(2) - np.outer(psi, psi)) + s * (np.eye(2) - np.diag([1.0, 0.0]))
        np.testing.assert_allclose(matrix_2d(EffectiveHamiltonian(a), s), direct, atol=1e-15)


def test_gap_examples():
    assert gap(EffectiveHamiltonian(0.2), 0.0) == pytest.approx(1.0, abs=1e-15)
    assert gap(EffectiveHamiltonian(0.2), 1.0) == pytest.approx(1.0, abs=1e-15)
    for n in (4, 64, 1000):
        assert gap(EffectiveHamiltonian(1 / math.sqrt(n)), 0.5) == pytest.approx(1 / math.sqrt(n), abs=1e-15)
    assert gap(EffectiveHamiltonian(0.1, 10.0), 0.5) == pytest.approx(1.0, abs=1e-14)


def test_eigenvalue_examples():
    assert eigenvalues(EffectiveHamiltonian(0.3), 0.0) == pytest.approx((0.0, 1.0), abs=1e-15)
    assert eigenvalues(EffectiveHamiltonian(0.6), 0.5) == pytest.approx((0.2, 0.8), abs=1e-15)
    assert eigenvalues(EffectiveHamiltonian(0.6, 3.0), 0.5) == pytest.approx((0.6, 2.4), abs=1e-14)


@pytest.mark.parametrize("fn", [matrix_2d, gap, eigenvalues])
@pytest.mark.parametrize("s", [-0.1, 1.0001, math.nan])
def test_out_of_range_s(fn, s):
    with pytest.raises(ValueError):
        fn(EffectiveHamiltonian(0.3), s)


def test_invalid_hamiltonian_parameters():
    for a in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            EffectiveHamiltonian(a)
    with pytest.raises(ValueError):
        EffectiveHamiltonian(0.3, 0.0)


@settings(max_examples=300, deadline=None)
@given(amps, unit, scales)
def test_closed_form_matches_2x2_eigensolve(a, s, c):
    h = EffectiveHamiltonian(a, c)
    lo, hi = eigenvalues(h, s)
    ref = np.linalg.eigvalsh(matrix_2d(h, s))
    assert lo == pytest.approx(ref[0], abs=1e-12 * c)
    assert hi == pytest.approx(ref[1], abs=1e-12 * c)
    assert hi - lo == pytest.approx(gap(h, s), abs=1e-12 * c)
    assert lo + hi == pytest.approx(c, rel=1e-14)
    assert gap(h, s) >= 0


@settings(max_examples=300, deadline=None)
@given(amps, unit, scales)
def test_gap_symmetry_and_minimum(a, s, c):
    h = EffectiveHamiltonian(a, c)
    # 1 - s itself rounds, so symmetry holds to the slope times one ulp
    assert gap(h, s) == pytest.approx(gap(h, 1.0 - s), rel=1e-15, abs=4e-16 * c)
    assert gap(h, s) >= gap(h, 0.5) * (1 - 1e-15)
    assert gap(h, 0.5) == pytest.approx(c * a, rel=1e-15)


def test_gap_minimum_on_grid():
    h = EffectiveHamiltonian(0.07, 3.0)
    ss = np.linspace(0, 1, 10001)
    g = np.array([gap(h, float(s)) for s in ss])
    assert ss[g.argmin()] == 0.5
    assert g.min() == pytest.approx(0.21, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(amps, unit, scales)
def test_scaling_multiplies_spectrum_keeps_vectors(a, s, c):
    h1, hc = EffectiveHamiltonian(a), EffectiveHamiltonian(a, c)
    assert np.allclose(np.array(eigenvalues(hc, s)), c * np.array(eigenvalues(h1, s)), rtol=1e-14, atol=0)
    np.testing.assert_array_equal(eigenvectors(hc, s), eigenvectors(h1, s))
    np.testing.assert_allclose(matrix_2d(hc, s), c * matrix_2d(h1, s), rtol=1e-15)


@settings(max_examples=200, deadline=None)
@given(amps, unit)
def test_transition_element_bounded(a, s):
    assert transition_element(EffectiveHamiltonian(a), s) <= 1.0 + 1e-14
    assert transition_element(EffectiveHamiltonian(a, 4.0), s) <= 4.0 + 1e-13


def test_full_matrix_endpoints():
    state = uniform_state(8, 3)
    h0 = full_matrix(state, 0.0)
    np.testing.assert_allclose(h0 @ state.amplitudes, 0.0, atol=1e-15)
    h1 = full_matrix(state, 1.0, 2.5)
    np.testing.assert_allclose(h1 @ state.basis_vector(), 0.0, atol=1e-15)
    np.testing.assert_allclose(h1, h1.T)


def test_full_spectrum_uniform_n4_midpoint():
    state = uniform_state(4, 2)
    for c in (1.0, 3.0):
        full = full_spectrum(state, 0.5, c)
        lo, hi = eigenvalues(EffectiveHamiltonian(0.5, c), 0.5)
        np.testing.assert_allclose(full[:2], [lo, hi], atol=1e-14)
        np.testing.assert_allclose(full[2:], c, atol=1e-14)


@pytest.mark.parametrize("n", [2, 5, 16, 64, 256])
def test_full_spectrum_matches_closed_form(n):
    rng = np.random.default_rng(n)
    amps_ = rng.uniform(0.1, 1.0, n)
    amps_ /= np.linalg.norm(amps_)
    state = InitialState(amps_, int(rng.integers(1, n + 1)))
    for s in np.linspace(0, 1, 9):
        for c in (1.0, 7.0):
            full = full_spectrum(state, float(s), c)
            lo, hi = eigenvalues(EffectiveHamiltonian(state.a_m, c), float(s))
            assert abs(full[0] - lo) < 1e-10 * c
            assert abs(full[1] - hi) < 1e-10 * c
            assert np.all(np.abs(full[2:] - c) < 1e-10 * c)


def test_oracle_cap(monkeypatch):
    big = uniform_state(300, 1)
    with pytest.raises(ValueError, match="cap"):
        full_matrix(big, 0.5)
    monkeypatch.setenv(ORACLE_CAP_ENV, "512")
    assert full_matrix(big, 0.5).shape == (300, 300)
    monkeypatch.setenv(ORACLE_CAP_ENV, "8")
    with pytest.raises(ValueError):
        full_matrix(uniform_state(16, 1), 0.5)
    monkeypatch.setenv(ORACLE_CAP_ENV, "lots")
    with pytest.raises(ValueError):
        full_matrix(uniform_state(4, 1), 0.5)


def test_spectrum_samples():
    rows = spectrum(EffectiveHamiltonian(0.5), 3)
    assert [r.s for r in rows] == [0.0, 0.5, 1.0]
    assert rows[1].lambda1 == pytest.approx(0.25) and rows[1].gap == pytest.approx(0.5)
    with pytest.raises(ValueError):
        spectrum(EffectiveHamiltonian(0.5), 1)
