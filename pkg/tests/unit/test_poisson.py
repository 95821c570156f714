"""Unit tests for the log-gradient field, screened Poisson operator, CG and completion."""

import math

import numpy as np
import pytest
from scipy import sparse

from poissondepth.core.align import apply_affine, global_affine_align
from poissondepth.core.config import SolverConfig
from poissondepth.core.errors import (
    ConvergenceError,
    GradientFieldError,
    RasterValidationError,
    SolverBreakdownError,
    SparseDepthError,
)
from poissondepth.core.metrics import depth_metrics
from poissondepth.core.poisson import (
    ScreenedPoissonOperator,
    apply_system_operator,
    conjugate_gradient,
    log_gradient,
    poisson_complete,
    poisson_complete_no_global,
)
from poissondepth.core.types import DepthRaster, SparseDepth, validate_raster


def _dense_oracle(shape, anchors, lam):
    """Explicit A = Laplacian + λ at anchors, assembled edge by edge."""
    height, width = shape
    n = height * width
    a = np.zeros((n, n))
    for r in range(height):
        for c in range(width):
            p = r * width + c
            for q in ([p + 1] if c + 1 < width else []) + ([p + width] if r + 1 < height else []):
                a[p, p] += 1.0
                a[q, q] += 1.0
                a[p, q] -= 1.0
                a[q, p] -= 1.0
    for p in anchors:
        a[p, p] += lam
    return a


def _random_operator(rng, max_side=16):
    height, width = (int(v) for v in rng.integers(2, max_side + 1, size=2))
    count = int(rng.integers(1, height * width // 2 + 1))
    anchors = rng.choice(height * width, size=count, replace=False)
    return ScreenedPoissonOperator((height, width), anchors, float(rng.uniform(0.1, 10.0)))


def _affine_instance(make_depth, make_anchors, seed, height, width):
    rng = np.random.default_rng(seed)
    gt = make_depth(height, width, seed=seed, low=1.5, high=4.5)
    alpha = float(rng.uniform(0.2, 5.0))
    beta = float(rng.uniform(-1.4, 1.4))
    d_r = DepthRaster.dense((gt - beta) / alpha, unit="relative")
    count = max(2, height * width // 50)
    return gt, d_r, make_anchors(gt, count, seed=seed + 1000)


class TestLogGradient:
    def test_constant_raster(self):
        """Test that a constant raster has a zero field for any shift."""
        field = log_gradient(DepthRaster.dense(np.full((3, 4), 2.5), unit="relative"), 0.7)
        assert not field.gx.any()
        assert not field.gy.any()

    def test_exponential_ramp(self):
        """Test that exp(c) has unit gx and zero gy."""
        cols = np.tile(np.arange(5.0), (3, 1))
        field = log_gradient(DepthRaster.dense(np.exp(cols), unit="relative"), 0.0)

        np.testing.assert_allclose(field.gx[:, :-1], 1.0, atol=1e-6)
        np.testing.assert_array_equal(field.gx[:, -1], 0.0)
        np.testing.assert_allclose(field.gy, 0.0, atol=1e-6)

    def test_matches_scalar_loop(self):
        """Test forward differences against a per-pixel loop."""
        rng = np.random.default_rng(0)
        d = DepthRaster.dense(rng.uniform(0.5, 3.0, size=(3, 3)), unit="relative")
        shift = 0.25

        field = log_gradient(d, shift)

        for r in range(3):
            for c in range(3):
                here = math.log(max(float(d.data[r, c]) + shift, 1e-6))
                if c < 2:
                    right = math.log(max(float(d.data[r, c + 1]) + shift, 1e-6))
                    assert field.gx[r, c] == pytest.approx(right - here, abs=1e-14)
                if r < 2:
                    below = math.log(max(float(d.data[r + 1, c]) + shift, 1e-6))
                    assert field.gy[r, c] == pytest.approx(below - here, abs=1e-14)

    def test_few_floored_pixels_are_counted(self):
        """Test that up to 5% floored pixels are tolerated and counted."""
        data = np.full((10, 10), 2.0)
        data[4, 4] = 0.5
        field = log_gradient(DepthRaster.dense(data, unit="relative"), -1.0)
        assert field.floored_count == 1

    def test_many_floored_pixels_fail(self):
        """Test that a shift flooring more than 5% of pixels is an error."""
        data = np.full((10, 10), 2.0)
        data[:1, :] = 0.5
        with pytest.raises(GradientFieldError, match="inconsistent"):
            log_gradient(DepthRaster.dense(data, unit="relative"), -1.0)

    def test_requires_dense_input(self):
        """Test that invalid relative pixels are rejected."""
        d = DepthRaster(data=np.ones((2, 2)), mask=[[True, True], [True, False]], unit="relative")
        with pytest.raises(GradientFieldError, match="dense"):
            log_gradient(d, 0.0)


class TestOperator:
    def test_constants_in_null_space(self):
        """Test that a constant vector maps to zero without anchors."""
        op = ScreenedPoissonOperator((4, 5), np.array([], dtype=np.int64), 1.0)
        assert not op.matvec(np.full(20, 3.0)).any()

    def test_single_edge(self):
        """Test the 1×2 Laplacian by hand."""
        op = ScreenedPoissonOperator((1, 2), np.array([], dtype=np.int64), 0.0)
        np.testing.assert_array_equal(op.matvec(np.array([0.0, 1.0])), [-1.0, 1.0])

    def test_matches_dense_oracle(self):
        """Test a 4×4 instance with 3 anchors against the assembled matrix."""
        rng = np.random.default_rng(1)
        anchors = np.array([0, 6, 13])
        s = SparseDepth(rows=anchors // 4, cols=anchors % 4, depths=[1.0] * 3, shape=(4, 4))
        u = rng.normal(size=16)

        expected = _dense_oracle((4, 4), anchors, 2.0) @ u

        assert np.max(np.abs(apply_system_operator(u, s, 2.0) - expected)) <= 1e-12

    def test_diagonal_matches_oracle(self):
        """Test the Jacobi diagonal against the assembled matrix."""
        op = ScreenedPoissonOperator((3, 5), np.array([2, 7]), 4.0)
        np.testing.assert_array_equal(
            op.diagonal(), np.diag(_dense_oracle((3, 5), [2, 7], 4.0))
        )

    def test_symmetric_and_positive_definite(self):
        """Test symmetry and positive definiteness on random instances."""
        rng = np.random.default_rng(2)
        for _ in range(100):
            op = _random_operator(rng)
            u = rng.normal(size=op.size)
            v = rng.normal(size=op.size)
            bound = 1e-10 * np.linalg.norm(u) * np.linalg.norm(v)
            assert abs(op.matvec(u) @ v - u @ op.matvec(v)) <= bound
            assert u @ op.matvec(u) > 0

    def test_length_mismatch(self):
        """Test that a vector of the wrong length is rejected."""
        op = ScreenedPoissonOperator((3, 3), np.array([0]), 1.0)
        with pytest.raises(RasterValidationError):
            op.matvec(np.zeros(8))


class TestConjugateGradient:
    def test_identity_system(self):
        """Test that A = I gives u = b after one iteration."""
        b = np.array([1.0, -2.0, 3.5, 0.25, 7.0])
        u, stats = conjugate_gradient(np.eye(5), b)

        np.testing.assert_array_equal(u, b)
        assert stats.iterations == 1
        assert stats.converged

    def test_zero_rhs(self):
        """Test that b = 0 returns u = 0 without iterating."""
        op = ScreenedPoissonOperator((3, 3), np.array([4]), 1.0)
        u, stats = conjugate_gradient(op, np.zeros(9))

        assert not u.any()
        assert stats.iterations == 0
        assert stats.converged

    @pytest.mark.parametrize("as_sparse", [False, True])
    def test_dense_spd_system(self, as_sparse):
        """Test a random 5×5 SPD system against a direct solve."""
        rng = np.random.default_rng(3)
        m = rng.normal(size=(5, 5))
        a = m @ m.T + 5.0 * np.eye(5)
        b = rng.normal(size=5)
        operator = sparse.csr_matrix(a) if as_sparse else a

        u, stats = conjugate_gradient(operator, b, SolverConfig(cg_tol=1e-12))

        expected = np.linalg.solve(a, b)
        assert stats.converged
        assert np.linalg.norm(u - expected) <= 1e-8 * np.linalg.norm(expected)

    def test_raster_system_matches_direct_solve(self):
        """Test 16×16 screened Poisson solves against a dense factorization."""
        rng = np.random.default_rng(4)
        for _ in range(3):
            anchors = rng.choice(256, size=20, replace=False)
            op = ScreenedPoissonOperator((16, 16), anchors, 1.0)
            b = rng.normal(size=256)

            u, stats = conjugate_gradient(op, b, SolverConfig(cg_tol=1e-12))

            expected = np.linalg.solve(op.to_dense(), b)
            assert stats.converged
            assert stats.final_relative_residual <= 1e-12
            assert np.linalg.norm(u - expected) <= 1e-8 * np.linalg.norm(expected)

    def test_negative_curvature_breaks_down(self):
        """Test that an indefinite operator is reported, not iterated."""
        with pytest.raises(SolverBreakdownError, match="curvature"):
            conjugate_gradient(-np.eye(3), np.ones(3))

    def test_non_finite_rhs(self):
        """Test that a NaN right-hand side is rejected."""
        with pytest.raises(SolverBreakdownError):
            conjugate_gradient(np.eye(2), np.array([1.0, np.nan]))

    def test_iteration_cap(self):
        """Test that hitting the cap reports converged = False."""
        op = ScreenedPoissonOperator((8, 8), np.array([0, 63]), 1.0)
        b = np.random.default_rng(5).normal(size=64)

        _, stats = conjugate_gradient(op, b, max_iter=2)

        assert stats.iterations == 2
        assert not stats.converged
        assert stats.final_relative_residual > SolverConfig().cg_tol


class TestPoissonComplete:
    def test_self_consistent_input(self, make_depth, make_anchors):
        """Test that d_r equal to the ground truth is reproduced."""
        gt = make_depth(16, 16, seed=0)
        s = make_anchors(gt, 10, seed=1)

        depth, stats = poisson_complete(DepthRaster.dense(gt, unit="relative"), s)

        assert stats.converged
        assert depth.is_dense
        validate_raster(depth)
        assert depth_metrics(depth, DepthRaster.dense(gt)).rel <= 1e-6

    def test_planar_two_anchor_recovery(self):
        """Test exact recovery of a 4×4 plane from two anchors."""
        rows, cols = np.mgrid[0:4, 0:4].astype(np.float64)
        gt = 2.0 + 0.25 * rows + 0.5 * cols
        d_r = DepthRaster.dense((gt - 0.75) / 1.7, unit="relative")
        s = SparseDepth.from_entries([(0, 0, gt[0, 0]), (3, 2, gt[3, 2])], (4, 4))

        depth, _ = poisson_complete(d_r, s)

        assert depth_metrics(depth, DepthRaster.dense(gt)).rel <= 1e-4

    @pytest.mark.parametrize("seed", range(50))
    def test_exact_affine_recovery(self, make_depth, make_anchors, seed):
        """Test that exactly affine relative depth recovers the ground truth."""
        sides = (4, 8, 16, 32, 64)
        rng = np.random.default_rng(seed)
        height, width = (sides[int(i)] for i in rng.integers(0, len(sides), size=2))
        gt, d_r, s = _affine_instance(make_depth, make_anchors, seed, height, width)

        depth, stats = poisson_complete(d_r, s)

        assert stats.converged
        assert depth_metrics(depth, DepthRaster.dense(gt)).rel <= 1e-4

    @pytest.mark.parametrize("factor", [0.5, 2.0, 10.0])
    def test_scale_equivariance(self, make_depth, make_anchors, factor):
        """Test that scaling the anchors scales the output."""
        gt = make_depth(16, 16, seed=3)
        d_r = DepthRaster.dense(np.sqrt(gt), unit="relative")
        s = make_anchors(gt, 12, seed=4)
        cfg = SolverConfig(cg_tol=1e-10)

        base, _ = poisson_complete(d_r, s, cfg)
        scaled, _ = poisson_complete(d_r, s.scaled(factor), cfg)

        expected = DepthRaster.dense(factor * base.data.astype(np.float64))
        assert depth_metrics(scaled, expected).rel <= 1e-6

    def test_large_lambda_interpolates_anchors(self, make_depth, make_anchors):
        """Test that a large data weight pins the output to the anchors."""
        gt = make_depth(12, 12, seed=5)
        s = make_anchors(gt, 8, seed=6)
        noisy = s.with_depths(s.depths * np.linspace(0.8, 1.2, len(s)))

        depth, _ = poisson_complete(
            DepthRaster.dense(gt, unit="relative"), noisy, SolverConfig(lam=1e4)
        )

        at_anchors = depth.data[noisy.rows, noisy.cols].astype(np.float64)
        np.testing.assert_allclose(at_anchors, noisy.depths, rtol=1e-3)

    def test_deterministic(self, make_depth, make_anchors):
        """Test that repeated solves are bitwise identical."""
        gt = make_depth(20, 12, seed=8)
        d_r = DepthRaster.dense(np.sqrt(gt), unit="relative")
        s = make_anchors(gt, 9, seed=9)

        first, first_stats = poisson_complete(d_r, s)
        second, second_stats = poisson_complete(d_r, s)

        np.testing.assert_array_equal(first.data, second.data)
        assert first_stats.iterations == second_stats.iterations

    def test_beats_global_affine_on_distorted_depth(self, make_depth, make_anchors):
        """Test that a monotone distortion is handled better than by a global fit."""
        gt_values = make_depth(32, 32, seed=0)
        gt = DepthRaster.dense(gt_values)
        d_r = DepthRaster.dense(np.sqrt(gt_values), unit="relative")
        s = make_anchors(gt_values, 51, seed=1)

        coarse, _ = poisson_complete(d_r, s)
        aligned = apply_affine(d_r, global_affine_align(d_r, s))

        assert depth_metrics(coarse, gt).rel < depth_metrics(aligned, gt).rel

    def test_not_converged_carries_stats(self, make_depth, make_anchors):
        """Test that hitting the iteration cap raises with the solver stats."""
        gt = make_depth(16, 16, seed=2)
        s = make_anchors(gt, 5, seed=2)

        with pytest.raises(ConvergenceError) as exc:
            poisson_complete(
                DepthRaster.dense(np.sqrt(gt), unit="relative"), s, SolverConfig(cg_max_iter=1)
            )
        assert exc.value.stats.iterations == 1
        assert not exc.value.stats.converged

    def test_input_checks(self, make_depth):
        """Test anchor count, dims and lambda preconditions."""
        gt = make_depth(4, 4)
        d_r = DepthRaster.dense(gt, unit="relative")
        with pytest.raises(SparseDepthError, match="at least 2"):
            poisson_complete(d_r, SparseDepth.from_entries([(0, 0, 2.0)], (4, 4)))
        with pytest.raises(SparseDepthError, match="differ"):
            poisson_complete(d_r, SparseDepth.from_entries([(0, 0, 2.0), (1, 1, 3.0)], (5, 4)))
        with pytest.raises(ValueError, match="lambda"):
            poisson_complete(
                d_r,
                SparseDepth.from_entries([(0, 0, 2.0), (1, 1, 3.0)], (4, 4)),
                SolverConfig(lam=0.0),
            )


class TestPoissonNoGlobal:
    def test_identical_when_relative_equals_metric(self, make_depth, make_anchors):
        """Test that d_r = D* gives the same output with or without the shift."""
        gt = make_depth(16, 16, seed=4)
        d_r = DepthRaster.dense(gt, unit="relative")
        s = make_anchors(gt, 10, seed=5)

        with_shift, _ = poisson_complete(d_r, s)
        without_shift, _ = poisson_complete_no_global(d_r, s)

        assert depth_metrics(without_shift, with_shift).rel <= 1e-6

    def test_pure_scale_needs_no_shift(self, make_depth, make_anchors):
        """Test that beta = 0 gives matching outputs for both variants."""
        gt = make_depth(16, 16, seed=6)
        d_r = DepthRaster.dense(gt / 2.5, unit="relative")
        s = make_anchors(gt, 10, seed=7)

        with_shift, _ = poisson_complete(d_r, s)
        without_shift, _ = poisson_complete_no_global(d_r, s)

        assert depth_metrics(without_shift, with_shift).rel <= 1e-6

    def test_shifted_depth_is_worse_without_global(self, make_depth, make_anchors):
        """Test that a nonzero beta hurts the unshifted variant."""
        gt_values = make_depth(16, 16, seed=8)
        gt = DepthRaster.dense(gt_values)
        d_r = DepthRaster.dense((gt_values - 1.5) / 0.8, unit="relative")
        s = make_anchors(gt_values, 10, seed=9)

        with_shift, _ = poisson_complete(d_r, s)
        without_shift, _ = poisson_complete_no_global(d_r, s)

        assert depth_metrics(with_shift, gt).rel < depth_metrics(without_shift, gt).rel
