"""Tests for finite Blaschke products and the time/threshold transforms."""

import math

import numpy as np
import pytest

from blaschke_persistence.blaschke import (
    BlaschkeProduct,
    FilterTime,
    compose_mobius,
    evaluate,
    evaluate_array,
    log_derivative,
    sup_norm_diff,
    t_of_theta,
    theta_of_t,
)
from blaschke_persistence.errors import DomainError, PoleError
from blaschke_persistence.hyperbolic import MobiusTransform, mobius_apply, mobius_invert
from blaschke_persistence.verify import sample_disk, sample_product, sample_transform


class TestConstruction:
    def test_zero_must_be_interior(self):
        with pytest.raises(DomainError, match="zeros\\[0\\]"):
            BlaschkeProduct(zeros=((1.0, 1),))

    def test_multiplicity_must_be_positive(self):
        with pytest.raises(DomainError, match="multiplicity"):
            BlaschkeProduct(zeros=((0.5, 0),))

    def test_needs_a_zero(self):
        with pytest.raises(DomainError):
            BlaschkeProduct(zeros=())

    def test_from_points_merges_duplicates(self):
        B = BlaschkeProduct.from_points([0.5, 0.5, -0.2])
        assert B.zeros == ((0.5 + 0j, 2), (-0.2 + 0j, 1))
        assert B.degree == 3

    def test_dict_round_trip(self):
        B = BlaschkeProduct(zeros=((0.3 + 0.1j, 2), (-0.4j, 1)), phase=1j)
        assert BlaschkeProduct.from_dict(B.to_dict()) == B

    def test_from_dict_names_offending_zero(self):
        with pytest.raises(DomainError, match="zeros\\[1\\]"):
            BlaschkeProduct.from_dict({"phase": [1, 0], "zeros": [[0.1, 0, 1], [0.2, 0]]})


class TestEvaluate:
    def test_single_zero_at_origin(self):
        B = BlaschkeProduct.from_points([0.0])
        assert evaluate(B, 0.5) == -0.5

    def test_single_zero_at_half(self):
        B = BlaschkeProduct.from_points([0.5])
        assert evaluate(B, 0.0) == 0.5

    def test_symmetric_pair(self):
        B = BlaschkeProduct.from_points([0.6, -0.6])
        np.testing.assert_allclose(evaluate(B, 0.0), -0.36, rtol=1e-15)
        assert evaluate(B, 0.6) == 0.0

    def test_interior_values_are_interior(self):
        rng = np.random.default_rng(0)
        B = sample_product(rng, 4, max_radius=0.9)
        for z in sample_disk(rng, 50):
            assert abs(evaluate(B, z)) < 1.0

    def test_boundary_values_unimodular(self):
        rng = np.random.default_rng(1)
        B = sample_product(rng, 5, max_radius=0.9)
        for ang in rng.uniform(0, 2 * np.pi, 30):
            np.testing.assert_allclose(abs(evaluate(B, np.exp(1j * ang))), 1.0, atol=1e-12)

    def test_rejects_exterior_point(self):
        B = BlaschkeProduct.from_points([0.0])
        with pytest.raises(DomainError):
            evaluate(B, 1.5)

    def test_multiplicative_over_factors(self):
        rng = np.random.default_rng(2)
        pts = list(sample_disk(rng, 5, 0.9))
        B = BlaschkeProduct.from_points(pts)
        for z in sample_disk(rng, 20):
            per_factor = np.prod([evaluate(BlaschkeProduct.from_points([p]), z) for p in pts])
            np.testing.assert_allclose(evaluate(B, z), per_factor, rtol=1e-12)

    def test_array_agrees_with_scalar(self):
        rng = np.random.default_rng(3)
        B = sample_product(rng, 3)
        zs = sample_disk(rng, 64)
        np.testing.assert_allclose(
            evaluate_array(B, zs), [evaluate(B, z) for z in zs], rtol=1e-14
        )


class TestLogDerivative:
    def test_single_zero_at_origin(self):
        B = BlaschkeProduct.from_points([0.0])
        np.testing.assert_allclose(log_derivative(B, 0.3), 1.0 / 0.3, rtol=1e-14)

    def test_symmetric_pair_near_critical_point(self):
        B = BlaschkeProduct.from_points([0.6, -0.6])
        assert abs(log_derivative(B, 0.0001)) < 2e-3

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(4)
        h = 1e-6
        for _ in range(10):
            B = sample_product(rng, int(rng.integers(1, 6)), max_radius=0.8)
            z = complex(sample_disk(rng, 1, 0.8)[0])
            if min(abs(z - b) for b, _ in B.zeros) < 1e-2:
                continue
            fd = (evaluate(B, z + h) - evaluate(B, z - h)) / (2 * h)
            expected = fd / evaluate(B, z)
            got = log_derivative(B, z)
            np.testing.assert_allclose(got, expected, rtol=1e-7)

    def test_pole_at_zero(self):
        B = BlaschkeProduct.from_points([0.5])
        with pytest.raises(PoleError):
            log_derivative(B, 0.5)


class TestComposeMobius:
    def test_round_trip_restores_zeros(self):
        rng = np.random.default_rng(5)
        B = sample_product(rng, 3, max_radius=0.7)
        phi = sample_transform(rng)
        back = compose_mobius(compose_mobius(B, phi), mobius_invert(phi))
        for (b1, m1), (b2, m2) in zip(
            sorted(back.zeros, key=lambda t: (t[0].real, t[0].imag)),
            sorted(B.zeros, key=lambda t: (t[0].real, t[0].imag)),
        ):
            assert m1 == m2
            assert abs(b1 - b2) < 1e-12

    def test_pivot_at_zero_moves_zero_to_origin(self):
        B = BlaschkeProduct.from_points([0.5])
        composed = compose_mobius(B, MobiusTransform(pivot=0.5))
        assert abs(composed.zeros[0][0]) < 1e-15

    def test_modulus_identity(self):
        rng = np.random.default_rng(6)
        B = sample_product(rng, 4, max_radius=0.8)
        phi = sample_transform(rng)
        composed = compose_mobius(B, phi)
        worst = 0.0
        for z in sample_disk(rng, 100):
            worst = max(
                worst,
                abs(abs(evaluate(composed, z)) - abs(evaluate(B, mobius_apply(phi, z)))),
            )
        assert worst < 1e-10

    def test_preserves_degree_and_multiplicities(self):
        B = BlaschkeProduct(zeros=((0.3, 2), (-0.5j, 3)))
        composed = compose_mobius(B, MobiusTransform(pivot=0.4, phase=1j))
        assert sorted(m for _, m in composed.zeros) == [2, 3]
        assert composed.degree == B.degree

    def test_phase_convention(self):
        rng = np.random.default_rng(7)
        B = sample_product(rng, 3)
        phi = sample_transform(rng)
        composed = compose_mobius(B, phi)
        target = evaluate(B, mobius_apply(phi, 0.0))
        np.testing.assert_allclose(evaluate(composed, 0.0), target, atol=1e-12)


class TestSupNormDiff:
    def test_identical_products(self):
        B = BlaschkeProduct.from_points([0.4 + 0.1j])
        assert sup_norm_diff(B, B) == 0.0

    def test_antipodal_phases(self):
        B1 = BlaschkeProduct.from_points([0.0])
        B2 = BlaschkeProduct(zeros=((0.0, 1),), phase=-1.0)
        np.testing.assert_allclose(sup_norm_diff(B1, B2), 2.0, rtol=1e-12)

    def test_refinement_is_stable_under_doubling(self):
        B1 = BlaschkeProduct.from_points([0.6, -0.6])
        B2 = BlaschkeProduct.from_points([0.61, -0.6])
        coarse = sup_norm_diff(B1, B2, samples=2**14)
        fine = sup_norm_diff(B1, B2, samples=2**15)
        assert abs(coarse - fine) < 1e-6

    def test_lower_bounds_boundary_samples(self):
        rng = np.random.default_rng(8)
        B1 = sample_product(rng, 3)
        B2 = sample_product(rng, 2)
        z = np.exp(1j * rng.uniform(0, 2 * np.pi, 500))
        discrete = np.max(np.abs(evaluate_array(B1, z) - evaluate_array(B2, z)))
        assert sup_norm_diff(B1, B2) >= discrete - 1e-9

    def test_sample_count_validated(self):
        B = BlaschkeProduct.from_points([0.0])
        with pytest.raises(DomainError):
            sup_norm_diff(B, B, samples=100)


class TestTimeTransforms:
    def test_monotone_approach_to_zero(self):
        ts = [t_of_theta(theta).t for theta in (1e-3, 1e-5, 1e-8)]
        assert ts[0] > ts[1] > ts[2] > 0.0

    def test_euler_point(self):
        theta = (math.e - 1.0) / (math.e + 1.0)
        np.testing.assert_allclose(t_of_theta(theta).t, 1.0, rtol=1e-14)

    def test_example_value(self):
        np.testing.assert_allclose(t_of_theta(0.36).t, math.log(2.125), rtol=1e-14)

    def test_round_trip_in_time(self):
        # theta saturates toward 1 in float64, so the t-direction round trip
        # is meaningful up to moderate times only
        rng = np.random.default_rng(9)
        for t in rng.uniform(1e-3, 10.0, 200):
            np.testing.assert_allclose(t_of_theta(theta_of_t(t).theta).t, t, atol=1e-12)

    def test_round_trip_in_threshold(self):
        rng = np.random.default_rng(10)
        for theta in rng.uniform(1e-6, 1.0 - 1e-6, 200):
            np.testing.assert_allclose(theta_of_t(t_of_theta(theta).t).theta, theta, atol=1e-12)

    def test_domains(self):
        for bad in (0.0, 1.0, -0.5):
            with pytest.raises(DomainError):
                t_of_theta(bad)
        for bad in (0.0, -1.0, math.inf):
            with pytest.raises(DomainError):
                theta_of_t(bad)

    def test_filter_time_consistency_enforced(self):
        with pytest.raises(DomainError):
            FilterTime(t=1.0, theta=0.9)
