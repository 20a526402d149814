"""Float backend: SVD helpers, thresholded and fixed-rank pseudoinverses,
numerical Jordan decomposition and the complex-symmetric form."""

import numpy as np
import pytest

from scinv import (
    ChainFailure,
    JordanOptions,
    auto_threshold,
    complex_symmetric_form,
    eigenvalues,
    mp_inverse,
    mp_inverse_fixed_rank,
    numeric_rank,
    numerical_jordan,
    svd,
)

NILPOTENT = np.array([[4.0, -1, 2], [7, -2, 3], [-4, 1, -2]])


class TestSvd:
    def test_reconstruct(self):
        rng = np.random.default_rng(0)
        m = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        f = svd(m)
        assert np.abs(f.reconstruct() - m).max() < 1e-12
        assert np.all(np.diff(f.sigma) <= 0)

    def test_zero_matrix_sigma(self):
        assert np.all(svd(np.zeros((3, 3))).sigma == 0)

    def test_auto_threshold_scales_with_largest(self):
        sigma = np.array([2.0, 1.0, 1e-20])
        t = auto_threshold(sigma, (3, 3))
        assert t == 3 * np.finfo(float).eps * 2.0


class TestMpInverse:
    def test_matches_numpy_pinv(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            m = rng.normal(size=(4, 3)) @ rng.normal(size=(3, 4))
            assert np.abs(mp_inverse(m) - np.linalg.pinv(m)).max() < 1e-8

    def test_nonsingular_is_inverse(self):
        m = np.array([[1.0, 2], [3, 4]])
        assert np.abs(mp_inverse(m) - np.linalg.inv(m)).max() < 1e-12

    def test_fixed_rank_zeroes_smallest(self):
        # rank-2 matrix plus tiny rank-1 noise: fixed rank 2 must ignore it
        rng = np.random.default_rng(2)
        u = np.linalg.qr(rng.normal(size=(3, 3)))[0]
        m = u @ np.diag([2.0, 1.0, 1e-12]) @ u.T
        x = mp_inverse_fixed_rank(m, 2)
        assert np.abs(x).max() < 2.0
        # AUTO threshold, by contrast, inverts the 1e-12 value
        assert np.abs(mp_inverse(m)).max() > 1e10

    def test_fixed_rank_bounds(self):
        with pytest.raises(ValueError):
            mp_inverse_fixed_rank(np.eye(2), 3)
        assert np.all(mp_inverse_fixed_rank(np.eye(2), 0) == 0)

    def test_explicit_threshold(self):
        m = np.diag([1.0, 1e-9])
        assert np.abs(mp_inverse(m, 1e-6)[1, 1]) == 0
        assert mp_inverse(m, 1e-12)[1, 1] == pytest.approx(1e9)


class TestEigJordan:
    def test_eigenvalues_nilpotent_block(self):
        w = eigenvalues(np.array([[0.0, 1], [0, 0]]))
        assert np.abs(w).max() < 1e-12

    def test_eigenvalues_nilpotent_example_near_zero(self):
        opts = JordanOptions()
        w = eigenvalues(NILPOTENT)
        tol = opts.resolved_cluster_tol(NILPOTENT)
        assert np.all(np.abs(w) < tol)

    def test_defective_two_by_two(self):
        form = numerical_jordan(np.array([[1.0, 1], [0, 1]]))
        assert [(round(l.real), s) for l, s in form.blocks] == [(1, 2)]
        assert form.residual < 1e-8

    def test_diagonal(self):
        form = numerical_jordan(np.diag([1.0, 2.0]))
        assert [(round(l.real), s) for l, s in form.blocks] == [(1, 1), (2, 1)]

    def test_nilpotent_example_single_chain(self):
        form = numerical_jordan(NILPOTENT)
        assert [s for _, s in form.blocks] == [3]
        assert abs(form.blocks[0][0]) < 1e-6
        assert form.residual < 1e-8

    def test_reconstruction_random_defective(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            p = rng.integers(-4, 5, size=(4, 4)).astype(float)
            if abs(np.linalg.det(p)) < 0.5:
                continue
            j = np.diag([2.0, 2.0, 2.0, 5.0]) + np.diag([1.0, 1.0, 0.0], 1)
            m = p @ j @ np.linalg.inv(p)
            form = numerical_jordan(m)
            assert sorted(s for _, s in form.blocks) == [1, 3]
            assert form.residual < 1e-6

    def test_rank_tol_override_fails_loudly(self):
        # an absurd rank tolerance yields a structurally impossible rank
        # sequence; that must surface as ChainFailure, not a wrong answer
        with pytest.raises(ChainFailure):
            numerical_jordan(np.array([[1.0, 1], [0, 1]]), JordanOptions(rank_tol=10.0))


class TestComplexSymmetricForm:
    def test_size_two_zero_block(self):
        jf = numerical_jordan(np.array([[0.0, 1], [0, 0]]))
        s, x = complex_symmetric_form(jf)
        expected = np.array([[0.5j, 0.5], [0.5, -0.5j]])
        assert np.abs(x - expected).max() < 1e-12

    def test_symmetry_and_reconstruction(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            p = rng.integers(-4, 5, size=(3, 3)).astype(float)
            if abs(np.linalg.det(p)) < 0.5:
                continue
            j = np.array([[2.0, 1, 0], [0, 2, 0], [0, 0, -1]])
            m = p @ j @ np.linalg.inv(p)
            jf = numerical_jordan(m)
            s, x = complex_symmetric_form(jf)
            assert np.abs(x - x.T).max() == 0
            cond = np.linalg.cond(jf.p)
            assert np.abs(s @ x @ np.linalg.inv(s) - m).max() < 1e-8 * cond
