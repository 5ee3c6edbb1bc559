"""Numerics oracles: truncated-Taylor expm, closed-form ZOH, characteristic
polynomial roots for the eigenvalue solver."""

import numpy as np
import pytest

from helpers import (charpoly_coefficients, durand_kerner_roots,
                     rk4_reference, sorted_complex, taylor_expm)
from lfcsim.errors import ConvergenceError
from lfcsim.numerics import Spectrum, eigenvalues, expm, zoh_discretize


# -- expm ------------------------------------------------------------------

def test_expm_zero_is_identity():
    assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))


def test_expm_nilpotent():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(expm(m), [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)


def test_expm_matches_taylor_oracle():
    rng = np.random.default_rng(42)
    for _ in range(50):
        m = rng.uniform(-1, 1, (4, 4))
        m *= 1.0 / max(1.0, np.linalg.norm(m))
        assert np.allclose(expm(m), taylor_expm(m), atol=1e-12)


def test_expm_inverse_property():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = rng.uniform(-1, 1, (5, 5))
        m *= 10.0 / np.linalg.norm(m)
        assert np.allclose(expm(m) @ expm(-m), np.eye(5), atol=1e-9)


def test_expm_rejects_nonsquare():
    with pytest.raises(ValueError, match="square"):
        expm(np.zeros((2, 3)))


def test_expm_rejects_nonfinite():
    m = np.zeros((2, 2))
    m[0, 0] = np.nan
    with pytest.raises(ValueError, match="finite"):
        expm(m)


# -- zoh_discretize ---------------------------------------------------------

def test_zoh_zero_dynamics():
    b = np.arange(6.0).reshape(3, 2)
    ad, bd = zoh_discretize(np.zeros((3, 3)), b, dt=0.25)
    assert np.allclose(ad, np.eye(3), atol=1e-15)
    assert np.allclose(bd, 0.25 * b, atol=1e-15)


def test_zoh_scalar_closed_form():
    ad, bd = zoh_discretize(np.array([[-1.0]]), np.array([[1.0]]), dt=0.1)
    assert ad[0, 0] == pytest.approx(np.exp(-0.1), abs=1e-14)
    assert bd[0, 0] == pytest.approx(1.0 - np.exp(-0.1), abs=1e-14)


def test_zoh_semigroup_property():
    rng = np.random.default_rng(3)
    a = rng.uniform(-1, 1, (4, 4)) - 2.0 * np.eye(4)
    b = rng.uniform(-1, 1, (4, 2))
    dt1, dt2 = 0.07, 0.13
    ad1, _ = zoh_discretize(a, b, dt1)
    ad2, _ = zoh_discretize(a, b, dt2)
    ad12, _ = zoh_discretize(a, b, dt1 + dt2)
    assert np.allclose(ad12, ad1 @ ad2, atol=1e-10)


def test_zoh_matches_fine_rk4():
    """Stepping x <- Ad x + Bd u with constant u tracks a fine-step RK4."""
    rng = np.random.default_rng(11)
    a = rng.uniform(-1, 1, (4, 4)) - 1.5 * np.eye(4)
    b = rng.uniform(-1, 1, (4, 1))
    u = np.array([0.8])
    dt, horizon = 0.02, 2.0
    ad, bd = zoh_discretize(a, b, dt)
    x = np.zeros(4)
    for _ in range(int(horizon / dt)):
        x = ad @ x + bd @ u
    fine = rk4_reference(a, b, u, np.zeros(4), dt / 1000, int(horizon / dt) * 1000)
    assert np.abs(x - fine).max() < 1e-6


def test_zoh_rejects_bad_dt_and_shapes():
    with pytest.raises(ValueError, match="dt"):
        zoh_discretize(np.eye(2), np.ones((2, 1)), dt=0.0)
    with pytest.raises(ValueError, match="rows"):
        zoh_discretize(np.eye(2), np.ones((3, 1)), dt=0.1)


# -- eigenvalues -------------------------------------------------------------

def test_eigenvalues_diagonal():
    spec = eigenvalues(np.diag([-1.0, -2.0, -3.0]))
    assert np.allclose(spec.values, [-1.0, -2.0, -3.0])


def test_eigenvalues_rotation():
    spec = eigenvalues(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert np.allclose(spec.values, [1j, -1j])


def test_eigenvalues_match_charpoly_roots():
    rng = np.random.default_rng(19)
    for _ in range(50):
        m = rng.uniform(-2, 2, (5, 5))
        got = sorted_complex(eigenvalues(m).values)
        want = sorted_complex(durand_kerner_roots(charpoly_coefficients(m)))
        assert np.abs(got - want).max() < 1e-8


def test_eigenvalues_trace_and_det_consistency():
    rng = np.random.default_rng(23)
    for _ in range(20):
        m = rng.uniform(-1, 1, (6, 6))
        spec = eigenvalues(m)
        scale = np.linalg.norm(m)
        assert abs(np.trace(m) - spec.values.sum().real) < 1e-8 * scale
        assert abs(spec.values.sum().imag) < 1e-8 * scale
        det = np.prod(spec.values).real
        assert np.sign(det) == np.sign(np.linalg.det(m))


def test_eigenvalues_conjugate_pairs_exact():
    rng = np.random.default_rng(29)
    m = rng.uniform(-1, 1, (8, 8))
    vals = eigenvalues(m).values
    complex_vals = vals[vals.imag != 0]
    for v in complex_vals:
        assert np.conj(v) in complex_vals


def test_eigenvalues_residual_property():
    """Every eigenvalue admits a unit vector with a tiny residual (checked
    through the smallest singular value of M - lambda I)."""
    rng = np.random.default_rng(31)
    for _ in range(10):
        m = rng.uniform(-1, 1, (6, 6))
        scale = np.linalg.norm(m)
        for lam in eigenvalues(m).values:
            sigma_min = np.linalg.svd(m - lam * np.eye(6), compute_uv=False)[-1]
            assert sigma_min <= 1e-8 * scale


def test_eigenvalues_ordering_seed_invariance():
    rng = np.random.default_rng(37)
    m = rng.uniform(-1, 1, (12, 12))
    v0 = eigenvalues(m, ordering_seed=0).values
    v1 = eigenvalues(m, ordering_seed=1).values
    assert np.abs(sorted_complex(v0) - sorted_complex(v1)).max() < 1e-10


def test_eigenvalues_sorted_deterministically():
    rng = np.random.default_rng(41)
    m = rng.uniform(-1, 1, (7, 7))
    v = eigenvalues(m).values
    key = np.lexsort((-v.imag, -v.real))
    assert np.array_equal(key, np.arange(len(v)))


def test_eigenvalues_rejects_large_order():
    with pytest.raises(ValueError, match="exceeds"):
        eigenvalues(np.eye(201))


def test_spectrum_invariants():
    with pytest.raises(ValueError, match="residual_bound"):
        Spectrum(values=np.array([1.0 + 0j]), residual_bound=-1.0)
    spec = eigenvalues(np.eye(3))
    assert spec.order == 3
    assert spec.residual_bound >= 0
    assert spec.max_real() == pytest.approx(1.0)


def test_convergence_error_is_distinct():
    assert issubclass(ConvergenceError, RuntimeError)
