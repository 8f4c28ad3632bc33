"""Tests for tensor algebra, invariants and generators."""

import numpy as np
import pytest

from src.exceptions import KindMismatch, NonPositiveJacobian, SingularC
from src.mechanics.tensors import (
    InvariantPoint,
    MaterialKind,
    fd_gradient,
    from_voigt,
    generator_basis,
    generator_gradients,
    invariant_gradients,
    invariants,
    inverse,
    principal_invariants,
    right_cauchy_green,
    rotate,
    structural_tensor,
    sym4,
    to_voigt,
    unit_vector,
)
from src.sampling.anneal import rotate_tensor
from tests.conftest import random_c, random_rotation


class TestInvariants:
    """Test cases for principal and pseudo invariants."""

    def test_worked_example(self, example_c, example_a0):
        """Test the quintuple of diag(1.4, 1.1, 0.8) with a0 = (1, 2, 1) / sqrt(6)."""
        point = invariants(example_c, example_a0)

        np.testing.assert_allclose(point.as_array(), [3.3, 3.54, 1.232, 1.1, 1.24], atol=1e-12)

    def test_rotated_example(self, example_c, example_a0):
        """Test the pseudo invariants after a 0.1 rad rotation in the y-z plane."""
        rotated = rotate_tensor(example_c, (0.0, 0.0, 0.1))
        point = invariants(rotated, example_a0)

        assert point.i4 == pytest.approx(1.078, abs=2e-3)
        assert point.i5 == pytest.approx(1.199, abs=2e-3)
        np.testing.assert_allclose(point.as_array()[:3], [3.3, 3.54, 1.232], atol=1e-12)

    def test_identity(self, example_a0):
        """Test that C = I maps to (3, 3, 1, 1, 1)."""
        np.testing.assert_allclose(
            invariants(np.eye(3), example_a0).as_array(), [3.0, 3.0, 1.0, 1.0, 1.0]
        )

    def test_rotation_invariance(self, rng):
        """Test that principal invariants ignore an observer rotation."""
        for _ in range(20):
            c = random_c(rng)
            r = random_rotation(rng)
            np.testing.assert_allclose(
                principal_invariants(rotate(c, r)).as_array(),
                principal_invariants(c).as_array(),
                rtol=1e-12,
            )

    def test_iso_point_rejects_pseudo_invariants(self):
        """Test that an isotropic point cannot carry I4."""
        with pytest.raises(KindMismatch):
            InvariantPoint(MaterialKind.ISO, 3.0, 3.0, 1.0, i4=1.0)

    def test_from_array_length(self):
        """Test that only triples and quintuples are accepted."""
        assert InvariantPoint.from_array([3, 3, 1]).kind is MaterialKind.ISO
        assert InvariantPoint.from_array([3, 3, 1, 1, 1]).kind is MaterialKind.TRANS_ISO
        with pytest.raises(KindMismatch):
            InvariantPoint.from_array([3, 3, 1, 1])


class TestTensorHelpers:
    """Test cases for Voigt conversion, inverses and kinematics."""

    def test_voigt_order(self):
        """Test the 11, 12, 13, 22, 23, 33 ordering."""
        m = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 6.0]])

        np.testing.assert_array_equal(to_voigt(m), [1, 2, 3, 4, 5, 6])
        np.testing.assert_array_equal(from_voigt(to_voigt(m)), m)

    def test_inverse(self, rng):
        """Test the adjugate inverse against numpy."""
        c = random_c(rng)
        np.testing.assert_allclose(inverse(c), np.linalg.inv(c), rtol=1e-12)

    def test_singular_inverse(self):
        """Test that a singular C is refused."""
        with pytest.raises(SingularC):
            inverse(np.diag([1.0, 1.0, 0.0]))

    def test_negative_jacobian(self):
        """Test that det F <= 0 is refused."""
        with pytest.raises(NonPositiveJacobian):
            right_cauchy_green(np.diag([1.0, 1.0, -1.0]))

    def test_zero_direction(self):
        """Test that a zero fiber direction is refused."""
        with pytest.raises(ValueError):
            unit_vector([0.0, 0.0, 0.0])

    def test_structural_tensor_needs_unit_vector(self):
        """Test that structural_tensor checks the norm of a0."""
        with pytest.raises(ValueError):
            structural_tensor(np.array([1.0, 1.0, 0.0]))


class TestGenerators:
    """Test cases for generator bases and their derivatives."""

    def test_iso_basis(self, example_c):
        """Test the [I, C, C^-1] ordering."""
        basis = generator_basis(MaterialKind.ISO, example_c)

        assert len(basis) == 3
        np.testing.assert_allclose(basis.generators[2], np.diag([1 / 1.4, 1 / 1.1, 1 / 0.8]))
        assert basis.columns().shape == (9, 3)

    def test_transiso_basis_is_symmetric(self, rng, example_a0):
        """Test that all six generators are symmetric."""
        m = structural_tensor(example_a0)
        basis = generator_basis(MaterialKind.TRANS_ISO, random_c(rng), m)

        assert len(basis) == 6
        for h in basis.generators:
            np.testing.assert_array_equal(h, h.T)

    def test_structure_argument(self, example_c, example_a0):
        """Test that A is required for TransIso and refused for Iso."""
        with pytest.raises(KindMismatch):
            generator_basis(MaterialKind.TRANS_ISO, example_c)
        with pytest.raises(KindMismatch):
            generator_basis(MaterialKind.ISO, example_c, structural_tensor(example_a0))

    def test_singular_basis(self):
        """Test that a singular C has no generator basis."""
        with pytest.raises(SingularC):
            generator_basis(MaterialKind.ISO, np.zeros((3, 3)))

    @pytest.mark.parametrize("kind", [MaterialKind.ISO, MaterialKind.TRANS_ISO])
    def test_generator_gradients_match_differences(self, rng, example_a0, kind):
        """Test closed-form dH/dC against central differences."""
        a = structural_tensor(example_a0) if kind is MaterialKind.TRANS_ISO else None
        c = random_c(rng)
        analytic = generator_gradients(kind, c, a)
        for j in range(kind.n_generators):
            numeric = fd_gradient(lambda x: generator_basis(kind, x, a).generators[j], c)
            np.testing.assert_allclose(analytic[j], numeric, atol=1e-7)

    def test_invariant_gradients_match_differences(self, rng, example_a0):
        """Test closed-form dI/dC against central differences."""
        a = structural_tensor(example_a0)
        c = random_c(rng)
        analytic = invariant_gradients(MaterialKind.TRANS_ISO, c, a, example_a0)
        numeric = fd_gradient(lambda x: invariants(x, example_a0).as_array(), c)
        for k in range(5):
            np.testing.assert_allclose(analytic[k], numeric[k], atol=1e-7)

    def test_sym4_minor_symmetry(self, rng):
        """Test that sym4 output is symmetric in both index pairs."""
        t = sym4(rng.standard_normal((3, 3, 3, 3)))

        np.testing.assert_array_equal(t, t.transpose(1, 0, 2, 3))
        np.testing.assert_array_equal(t, t.transpose(0, 1, 3, 2))
