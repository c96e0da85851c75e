"""Tests for dual certificates and the one-dimensional null-space test."""
import numpy as np
import pytest

from src.core.exceptions import KernelTooLarge, SingularGram, SupportNotCovered
from src.cs import SensingProblem, WeightVector, recovery_declared, solve_weighted_bp
from src.cs_analysis import dual_certificate, nullspace_check_1d
from src.numerics import gaussian_sensing_matrix, make_rng, random_sparse_vector


class TestDualCertificate:
    """Tests for dual_certificate."""

    def test_orthogonal_matrix(self):
        x = np.array([1.0, -2.0, 0.0])
        report = dual_certificate(np.eye(3), x, WeightVector(np.abs(x)))
        assert report.sign_match
        assert report.strict_bound == 0.0
        assert report.valid
        assert report.delta_hat == pytest.approx(0.0, abs=1e-12)
        assert report.mu_hat == 0.0
        assert report.stability_condition()
        assert report.support_size == 2

    def test_three_column_instance(self, three_column_problem):
        problem, x = three_column_problem
        report = dual_certificate(problem.A, x, WeightVector.ones(3))
        assert report.valid
        assert report.strict_bound == pytest.approx(0.5)
        np.testing.assert_allclose(report.Y0, [0.5, 0.5])

    def test_boundary_is_not_valid(self):
        # A = [[1, 1]], x = e_1, unit weights: the off-support entry equals 1
        report = dual_certificate(np.array([[1.0, 1.0]]), np.array([1.0, 0.0]), WeightVector.ones(2))
        assert report.sign_match
        assert report.borderline
        assert not report.valid

    def test_to_dict(self):
        x = np.array([1.0, 0.0])
        row = dual_certificate(np.eye(2), x, WeightVector(np.array([1.0, 0.5]))).to_dict()
        assert set(row) >= {"valid", "sign_match", "strict_bound", "delta_hat", "mu_hat", "a0_constant"}

    def test_support_not_covered(self):
        with pytest.raises(SupportNotCovered):
            dual_certificate(np.eye(2), np.array([1.0, 1.0]), WeightVector(np.array([1.0, 0.0])))

    def test_singular_gram(self):
        A = np.array([[1.0, 1.0], [0.0, 0.0]])
        with pytest.raises(SingularGram):
            dual_certificate(A, np.array([1.0, 1.0]), WeightVector.ones(2))

    @pytest.mark.parametrize("offset", [0.0, 1e-9])
    def test_nearly_repeated_column(self, offset):
        A = make_rng(17).standard_normal((5, 4))
        A[:, 2] = A[:, 0] + offset * make_rng(18).standard_normal(5)
        x = np.array([1.0, 0.0, -1.0, 0.0])
        with pytest.raises(SingularGram) as exc:
            dual_certificate(A, x, WeightVector.ones(4))
        assert exc.value.condition > 1e12

    @pytest.mark.slow
    def test_valid_certificate_means_recovery(self):
        N, m, s = 30, 20, 3
        checked, failures = 0, []
        for seed in range(400):
            A = gaussian_sensing_matrix(m, N, [seed, 0])
            x = random_sparse_vector(N, s, [seed, 1])
            w = WeightVector.from_estimate(x, 0.01)
            if not dual_certificate(A, x, w).valid:
                continue
            solution = solve_weighted_bp(SensingProblem.from_signal(A, x), w)
            if not recovery_declared(solution.t, x, 1e-7):
                failures.append(seed)
            checked += 1
            if checked == 100:
                break
        assert checked == 100
        assert failures == []

    def test_stability_condition_implies_valid(self):
        N, m = 64, 32
        floors = (1e-6, 1e-3, 1e-2, 1e-1)
        holds, violations = 0, []
        for seed in range(200):
            s = 2 + 2 * (seed % 2)
            A = gaussian_sensing_matrix(m, N, [seed, 2])
            x = random_sparse_vector(N, s, [seed, 3])
            report = dual_certificate(A, x, WeightVector.from_estimate(x, floors[seed % 4]))
            if report.stability_condition():
                holds += 1
                if not report.valid:
                    violations.append(seed)
        assert holds >= 20
        assert violations == []

    def test_accurate_weights_give_valid_certificates(self):
        N, m, s = 256, 120, 8
        valid = 0
        for seed in range(100):
            A = gaussian_sensing_matrix(m, N, [seed, 4])
            x = random_sparse_vector(N, s, [seed, 5])
            valid += dual_certificate(A, x, WeightVector.from_estimate(x, 1e-6)).valid
        assert valid / 100 >= 0.95


class TestNullspaceCheck:
    """Tests for nullspace_check_1d."""

    def test_injective(self):
        assert nullspace_check_1d(np.eye(2), np.array([1.0, 0.0]), WeightVector.ones(2))

    def test_non_unique_minimizer(self):
        assert not nullspace_check_1d(np.array([[1.0, 1.0]]), np.array([1.0, 0.0]), WeightVector.ones(2))

    def test_weights_make_it_unique(self):
        A = np.array([[1.0, 1.0]])
        x = np.array([1.0, 0.0])
        w = WeightVector(np.array([2.0, 1.0]))
        assert nullspace_check_1d(A, x, w)
        solution = solve_weighted_bp(SensingProblem.from_signal(A, x), w)
        np.testing.assert_allclose(solution.t, x, atol=1e-9)

    def test_tall_matrix_kernel(self):
        # 3 x 2 with dependent columns: kernel spanned by (1, -1)
        A = np.array([[1.0, 1.0], [2.0, 2.0], [0.0, 0.0]])
        w = WeightVector(np.array([2.0, 1.0]))
        assert nullspace_check_1d(A, np.array([1.0, 0.0]), w)

    def test_kernel_too_large(self):
        with pytest.raises(KernelTooLarge) as exc:
            nullspace_check_1d(np.array([[1.0, 1.0, 1.0]]), np.array([1.0, 0.0, 0.0]), WeightVector.ones(3))
        assert exc.value.dimension == 2
