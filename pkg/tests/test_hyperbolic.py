"""Tests for the pseudo-hyperbolic geometry primitives."""

import numpy as np
import pytest

from blaschke_persistence.errors import DomainError
from blaschke_persistence.hyperbolic import (
    MobiusTransform,
    hyperbolic_disk_contains,
    mobius_apply,
    mobius_invert,
    rho,
    rho_array,
)
from blaschke_persistence.verify import sample_disk, sample_transform


class TestRho:
    def test_origin_collapses_to_modulus(self):
        rng = np.random.default_rng(42)
        for w in sample_disk(rng, 20):
            np.testing.assert_allclose(rho(0.0, w), abs(w), rtol=1e-14)

    def test_identity(self):
        assert rho(0.5, 0.5) == 0.0

    def test_antipodal_value(self):
        # direct evaluation: 0.6 / (1 + 0.09)
        np.testing.assert_allclose(rho(0.3, -0.3), 0.6 / 1.09, rtol=1e-15)

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        z = sample_disk(rng, 50)
        w = sample_disk(rng, 50)
        np.testing.assert_allclose(rho_array(z, w), rho_array(w, z), atol=1e-15)

    def test_rejects_boundary(self):
        with pytest.raises(DomainError):
            rho(1.0, 0.0)
        with pytest.raises(DomainError):
            rho(0.0, 1.0 - 1e-13)

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            rho(complex("nan"), 0.0)

    def test_strengthened_triangle_inequality(self):
        rng = np.random.default_rng(1)
        x, y, z = (sample_disk(rng, 10_000) for _ in range(3))
        dxy, dyz, dxz = rho_array(x, y), rho_array(y, z), rho_array(x, z)
        strong = (dxy + dyz) / (1.0 + dxy * dyz)
        assert np.all(dxz <= strong + 1e-12)
        assert np.all(strong <= dxy + dyz + 1e-12)


class TestMobius:
    def test_pivot_maps_to_origin(self):
        phi = MobiusTransform(pivot=0.5)
        assert mobius_apply(phi, 0.5) == 0.0

    def test_origin_pivot_negates(self):
        phi = MobiusTransform(pivot=0.0)
        np.testing.assert_allclose(mobius_apply(phi, 0.3 + 0.4j), -0.3 - 0.4j, atol=1e-15)

    def test_direct_value(self):
        # (0.2 - 0.6) / (1 - 0.12)
        phi = MobiusTransform(pivot=0.2)
        np.testing.assert_allclose(mobius_apply(phi, 0.6), -0.4 / 0.88, rtol=1e-15)

    def test_boundary_maps_to_boundary(self):
        rng = np.random.default_rng(3)
        phi = sample_transform(rng)
        for ang in rng.uniform(0, 2 * np.pi, 20):
            w = mobius_apply(phi, np.exp(1j * ang))
            np.testing.assert_allclose(abs(w), 1.0, atol=1e-12)

    def test_interior_stays_interior(self):
        rng = np.random.default_rng(4)
        phi = sample_transform(rng)
        for z in sample_disk(rng, 50):
            assert abs(mobius_apply(phi, z)) < 1.0

    def test_validates_pivot_and_phase(self):
        with pytest.raises(DomainError):
            MobiusTransform(pivot=1.0)
        with pytest.raises(DomainError):
            MobiusTransform(pivot=0.2, phase=1.1)


class TestMobiusInvert:
    def test_phase_one_is_involution(self):
        phi = MobiusTransform(pivot=0.3 + 0.2j)
        inv = mobius_invert(phi)
        assert inv.pivot == phi.pivot
        assert inv.phase == phi.phase

    def test_identity_like_transform(self):
        phi = MobiusTransform(pivot=0.0, phase=-1.0)
        inv = mobius_invert(phi)
        assert inv.pivot == 0.0
        assert inv.phase == -1.0

    def test_round_trip_on_random_points(self):
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(10):
            phi = sample_transform(rng)
            inv = mobius_invert(phi)
            for z in sample_disk(rng, 10):
                back = mobius_apply(inv, mobius_apply(phi, z))
                worst = max(worst, abs(back - z))
        assert worst < 1e-12

    def test_rho_is_mobius_invariant(self):
        rng = np.random.default_rng(6)
        phi = sample_transform(rng)
        x = sample_disk(rng, 1000)
        y = sample_disk(rng, 1000)
        before = rho_array(x, y)
        fx = np.array([mobius_apply(phi, z) for z in x])
        fy = np.array([mobius_apply(phi, z) for z in y])
        np.testing.assert_allclose(rho_array(fx, fy), before, atol=1e-12)


class TestDiskContains:
    def test_origin_disk(self):
        assert hyperbolic_disk_contains(0.0, 0.5, 0.4)

    def test_boundary_is_excluded(self):
        assert not hyperbolic_disk_contains(0.0, 0.5, 0.5)

    def test_from_rho_example(self):
        assert not hyperbolic_disk_contains(0.3, 0.2, -0.3)

    def test_radius_domain(self):
        with pytest.raises(DomainError):
            hyperbolic_disk_contains(0.0, 1.5, 0.2)
