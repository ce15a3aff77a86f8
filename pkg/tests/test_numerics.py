"""Tests for the shared Hermitian linear algebra helpers."""

import numpy as np
import pytest

from aglerkit.errors import NotPSDError
from aglerkit.numerics import (
    AffineProjector,
    affine_project,
    eig_hermitian,
    hermitian_defect,
    hermitize,
    project_psd,
    psd_factor,
    require_hermitian,
    roots_univariate,
)


def random_hermitian(rng, order):
    raw = rng.standard_normal((order, order)) + 1j * rng.standard_normal((order, order))
    return 0.5 * (raw + raw.conj().T)


class TestHermitianValidation:
    def test_hermitize_produces_zero_defect(self):
        rng = np.random.default_rng(3)
        raw = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        assert hermitian_defect(hermitize(raw)) <= 1e-15

    def test_require_hermitian_rejects_skew_input(self):
        with pytest.raises(ValueError):
            require_hermitian(np.array([[0.0, 1.0], [-1.0, 0.0]]))

    def test_require_hermitian_rejects_rectangular_input(self):
        with pytest.raises(ValueError):
            require_hermitian(np.zeros((2, 3)))


class TestEigHermitian:
    def test_identity_eigenvalues(self):
        w, v = eig_hermitian(np.eye(3))
        assert np.allclose(w, [1.0, 1.0, 1.0])
        assert np.allclose(v @ v.conj().T, np.eye(3))

    def test_diagonal_matrix(self):
        w, _ = eig_hermitian(np.diag([-1.0, 2.0]))
        assert np.allclose(w, [-1.0, 2.0])

    def test_singular_two_by_two(self):
        # det = 3/4 * 4/3 - 1 = 0 and trace = 25/12, so the spectrum is {0, 25/12}
        mat = np.array([[0.75, 1.0], [1.0, 4.0 / 3.0]])
        w, _ = eig_hermitian(mat)
        assert w[0] == pytest.approx(0.0, abs=1e-12)
        assert w[1] == pytest.approx(25.0 / 12.0)

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            order = int(rng.integers(1, 41))
            mat = random_hermitian(rng, order)
            w, v = eig_hermitian(mat)
            scale = 1.0 + np.linalg.norm(mat)
            assert np.linalg.norm(mat - (v * w) @ v.conj().T) <= 1e-10 * scale
            assert np.linalg.norm(v.conj().T @ v - np.eye(order)) <= 1e-10
            assert np.all(np.diff(w) >= -1e-14)


class TestProjectPsd:
    def test_psd_input_is_unchanged(self):
        rng = np.random.default_rng(7)
        factor = rng.standard_normal((4, 4))
        mat = factor @ factor.T
        assert np.max(np.abs(project_psd(mat) - mat)) <= 1e-12 * (1 + np.abs(mat).max())

    def test_negative_eigenvalue_is_clipped(self):
        out = project_psd(np.diag([-1.0, 2.0]))
        assert np.allclose(out, np.diag([0.0, 2.0]))

    def test_shifted_rank_one_spectrum_is_clipped_at_zero(self):
        v = np.array([1.0, 2.0, 2.0]) / 3.0
        eps = 0.1
        mat = np.outer(v, v) - eps * np.eye(3)
        w, _ = eig_hermitian(project_psd(mat))
        # spectrum of vv* - eps I is {1 - eps, -eps, -eps}; clipping kills the negatives
        assert np.allclose(w, [0.0, 0.0, 1.0 - eps], atol=1e-12)

    def test_result_is_always_psd(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            mat = random_hermitian(rng, int(rng.integers(1, 12)))
            w, _ = eig_hermitian(project_psd(mat))
            assert w[0] >= -1e-12


class TestPsdFactor:
    def test_identity_round_trip(self):
        w = psd_factor(np.eye(2))
        assert w.shape == (2, 2)
        assert np.allclose(w @ w.conj().T, np.eye(2))

    def test_all_ones_matrix_has_single_column(self):
        w = psd_factor(np.ones((2, 2)))
        assert w.shape == (2, 1)
        assert np.allclose(w @ w.conj().T, np.ones((2, 2)))

    def test_zero_matrix_has_no_columns(self):
        assert psd_factor(np.zeros((2, 2))).shape == (2, 0)

    def test_round_trip_on_random_psd_matrices(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            order = int(rng.integers(1, 41))
            half = rng.standard_normal((order, order)) + 1j * rng.standard_normal(
                (order, order)
            )
            mat = half @ half.conj().T
            w = psd_factor(mat)
            bound = np.sqrt(1e-9) * (1 + np.linalg.norm(mat))
            assert np.linalg.norm(mat - w @ w.conj().T) <= bound

    def test_indefinite_matrix_is_rejected(self):
        with pytest.raises(NotPSDError):
            psd_factor(np.diag([-1.0, 1.0]))


class TestRootsUnivariate:
    def test_quadratic_with_real_roots(self):
        roots = np.sort_complex(roots_univariate([-1.0, 0.0, 1.0]))
        assert np.allclose(roots, [-1.0, 1.0])

    def test_affine_slice_root(self):
        # 2 - w, the z2-slice of 2 - z1 - z2 at z1 = 0
        assert np.allclose(roots_univariate([2.0, -1.0]), [2.0])

    def test_quadratic_with_imaginary_roots(self):
        roots = sorted(roots_univariate([1.0, 0.0, 1.0]), key=lambda r: r.imag)
        assert np.allclose(roots, [-1j, 1j])

    def test_constant_polynomial_has_no_roots(self):
        assert roots_univariate([5.0]).size == 0

    def test_zero_polynomial_is_rejected(self):
        with pytest.raises(ValueError):
            roots_univariate([0.0, 0.0])

    def test_trailing_zero_leading_coefficients_are_trimmed(self):
        roots = roots_univariate([2.0, -1.0, 1e-18], lead_tol=1e-12)
        assert roots.size == 1
        assert roots[0] == pytest.approx(2.0)

    def test_residual_at_returned_roots(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            degree = int(rng.integers(1, 13))
            true_roots = rng.standard_normal(degree) + 1j * rng.standard_normal(degree)
            coeffs = np.poly(true_roots)[::-1]  # ascending
            scale = np.max(np.abs(coeffs))
            for root in roots_univariate(coeffs):
                value = np.polyval(coeffs[::-1], root)
                assert abs(value) <= 1e-8 * scale * max(1.0, abs(root)) ** degree


class TestAffineProjection:
    def test_feasible_point_is_fixed(self):
        e = np.array([[1.0, 1.0]])
        d = np.array([1.0])
        x = np.array([0.5, 0.5])
        assert np.allclose(affine_project(x, e, d), x)

    def test_projection_of_origin_onto_coordinate_constraint(self):
        e = np.array([[1.0, 0.0, 0.0]])
        d = np.array([1.0])
        assert np.allclose(affine_project(np.zeros(3), e, d), [1.0, 0.0, 0.0])

    def test_projection_onto_antidiagonal(self):
        e = np.array([[1.0, 1.0]])
        d = np.array([0.0])
        assert np.allclose(affine_project(np.array([2.0, 0.0]), e, d), [1.0, -1.0])

    def test_projection_is_idempotent_and_feasible(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            e = rng.standard_normal((3, 8))
            d = e @ rng.standard_normal(8)  # consistent by construction
            proj = AffineProjector(e, d)
            x = rng.standard_normal(8)
            y = proj.project(x)
            assert proj.residual(y) <= 1e-9 * (1 + np.abs(d).max())
            assert np.allclose(proj.project(y), y)

    def test_inconsistent_system_requires_least_squares_flag(self):
        e = np.array([[1.0, 0.0], [1.0, 0.0]])
        d = np.array([0.0, 1.0])
        with pytest.raises(ValueError):
            affine_project(np.zeros(2), e, d)
        out = affine_project(np.zeros(2), e, d, least_squares=True)
        assert out[0] == pytest.approx(0.5)

    def test_shape_mismatch_is_rejected(self):
        with pytest.raises(ValueError):
            AffineProjector(np.zeros((2, 3)), np.zeros(3))
