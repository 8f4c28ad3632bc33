"""Tests for designs, physicality, hulls, annealing and quintuple inversion."""

import numpy as np
import pytest

from src.exceptions import ConfigError, DegenerateCloud, KindMismatch, Unphysical
from src.mechanics.tensors import (
    InvariantPoint,
    MaterialKind,
    invariants,
    principal_invariants,
    structural_tensor,
)
from src.sampling.anneal import (
    REFERENCE_ISO,
    AnnealConfig,
    anneal_aniso,
    anneal_iso,
    rotate_tensor,
    rotation_xyz,
)
from src.sampling.design import (
    DomainBounds,
    cauchy_green_of,
    dedupe,
    dedupe_indices,
    invariant_cloud,
    invariants_of,
    lhs_sample,
    min_pairwise_distance,
    tplhd_sample,
)
from src.sampling.hull import build_hull, hull_from_points, point_in_hull
from src.sampling.physicality import (
    physicality_check,
    physicality_check_batch,
    principal_stretches_squared,
    reconstruct_C,
)
from src.sampling.quintuple import solve_C_from_quintuple
from tests.conftest import random_c


class TestDomainBounds:
    """Test cases for the deformation gradient box."""

    def test_box(self):
        """Test the diagonal and off-diagonal ranges."""
        bounds = DomainBounds(0.175)

        assert bounds.lower[0, 0] == pytest.approx(0.825)
        assert bounds.upper[0, 1] == pytest.approx(0.175)
        assert bounds.contains(np.eye(3))
        assert not bounds.contains(np.eye(3) * 1.2)

    @pytest.mark.parametrize("delta", [0.0, 1.0, -0.1])
    def test_invalid_delta(self, delta):
        """Test that delta must lie in (0, 1)."""
        with pytest.raises(ConfigError):
            DomainBounds(delta)

    def test_c_bounds_cover_samples(self, bounds):
        """Test that C of every sampled F lies in the entry bounds."""
        c = cauchy_green_of(lhs_sample(bounds, 500, seed=3))
        lower, upper = bounds.c_bounds()
        voigt = c[:, [0, 0, 0, 1, 1, 2], [0, 1, 2, 1, 2, 2]]

        assert np.all(voigt >= lower - 1e-12)
        assert np.all(voigt <= upper + 1e-12)


class TestLhsSample:
    """Test cases for Latin hypercube designs."""

    def test_stratification(self, bounds):
        """Test that each entry has exactly one sample per bin."""
        n = 50
        f = lhs_sample(bounds, n, seed=1).reshape(n, 9)
        unit = (f - bounds.lower.ravel()) / (bounds.upper - bounds.lower).ravel()
        bins = np.floor(unit * n).astype(int)

        for column in bins.T:
            assert sorted(column) == list(range(n))

    def test_deterministic(self, bounds):
        """Test that a seed reproduces the design exactly."""
        np.testing.assert_array_equal(lhs_sample(bounds, 20, 7), lhs_sample(bounds, 20, 7))

    def test_single_point(self, bounds):
        """Test n = 1."""
        assert lhs_sample(bounds, 1, 0).shape == (1, 3, 3)

    def test_invariants_of_matches_scalar(self, bounds, example_a0):
        """Test the vectorized invariants against the scalar ones."""
        c = cauchy_green_of(lhs_sample(bounds, 10, 0))
        rows = invariants_of(c, example_a0)

        for ci, row in zip(c, rows):
            np.testing.assert_allclose(row, invariants(ci, example_a0).as_array(), rtol=1e-12)


class TestTplhdSample:
    """Test cases for translational propagation Latin hypercubes."""

    @pytest.mark.parametrize("n", [9, 50, 512, 2500])
    def test_stratification(self, bounds, n):
        """Test that each entry takes the centre of every bin exactly once."""
        f = tplhd_sample(bounds, n).reshape(n, 9)
        unit = (f - bounds.lower.ravel()) / (bounds.upper - bounds.lower).ravel()

        for column in unit.T:
            np.testing.assert_allclose(np.sort(column), (np.arange(n) + 0.5) / n, atol=1e-12)

    def test_deterministic(self, bounds):
        """Test that the design depends on n alone."""
        np.testing.assert_array_equal(tplhd_sample(bounds, 300), tplhd_sample(bounds, 300))

    def test_single_point(self, bounds):
        """Test that n = 1 is the undeformed state."""
        np.testing.assert_array_equal(tplhd_sample(bounds, 1), np.eye(3)[None, :, :])

    def test_positive_determinant(self, bounds):
        """Test that every gradient of the box preserves orientation."""
        assert np.all(np.linalg.det(tplhd_sample(bounds, 2500)) > 0.0)

    def test_invalid_size(self, bounds):
        """Test that n must be positive."""
        with pytest.raises(ConfigError):
            tplhd_sample(bounds, 0)


class TestDedupe:
    """Test cases for the duplicate filter."""

    def test_keeps_first_occurrence(self):
        """Test greedy first-come filtering."""
        points = [[3.0, 3.0, 1.0], [3.005, 3.0, 1.0], [3.2, 3.1, 1.0]]

        assert dedupe_indices(points) == [0, 2]

    def test_all_components_must_be_close(self):
        """Test that one far component keeps a point."""
        assert dedupe_indices([[3.0, 3.0, 1.0], [3.0, 3.0, 1.02]]) == [0, 1]

    def test_invariant_points(self):
        """Test dedupe on InvariantPoint lists."""
        points = [InvariantPoint.from_array([3, 3, 1]), InvariantPoint.from_array([3, 3, 1])]

        assert len(dedupe(points)) == 1

    def test_tplhd_reduction(self, bounds):
        """Test that 2500 TPLHD gradients plus the identity leave 200 to 360 distinct triples."""
        f = np.concatenate([np.eye(3)[None, :, :], tplhd_sample(bounds, 2500)])
        kept = dedupe_indices(invariants_of(cauchy_green_of(f)))

        assert kept[0] == 0
        assert 200 <= len(kept) <= 360


class TestPhysicality:
    """Test cases for the realizability criterion."""

    def test_spd_triples_pass(self, rng):
        """Test that invariants of SPD tensors are physical and round-trip."""
        for _ in range(200):
            c = random_c(rng, 0.3)
            triple = principal_invariants(c).as_array()

            assert physicality_check(triple)
            np.testing.assert_allclose(
                principal_invariants(reconstruct_C(triple)).as_array(), triple, rtol=1e-9
            )

    def test_identity(self):
        """Test the triple-root case (3, 3, 1)."""
        assert physicality_check(REFERENCE_ISO)
        np.testing.assert_allclose(reconstruct_C(REFERENCE_ISO), np.eye(3))

    def test_complex_roots_fail(self):
        """Test a triple whose cubic has complex roots."""
        assert not physicality_check([3.0, 4.0, 1.0])
        with pytest.raises(Unphysical):
            reconstruct_C([3.0, 4.0, 1.0])

    def test_negative_root_fails(self):
        """Test a triple with a negative principal value."""
        # roots 2, 1, -0.5
        triple = [2.5, 0.5, -1.0]

        assert not physicality_check(triple)

    def test_batch_matches_scalar(self, rng):
        """Test the vectorized check against the scalar one."""
        points = np.column_stack(
            [rng.uniform(2.0, 4.0, 500), rng.uniform(1.5, 5.0, 500), rng.uniform(0.3, 2.0, 500)]
        )
        expected = [physicality_check(p) for p in points]

        np.testing.assert_array_equal(physicality_check_batch(points), expected)

    def test_roots_ascending(self):
        """Test the ordering of the trigonometric roots."""
        roots = principal_stretches_squared(principal_invariants(np.diag([1.4, 0.8, 1.1])))

        np.testing.assert_allclose(roots, [0.8, 1.1, 1.4], atol=1e-12)


class TestHull:
    """Test cases for the invariant hull."""

    def test_contains_cloud(self, small_hull, bounds):
        """Test that the cloud's own points are inside."""
        cloud = invariant_cloud(bounds, 2000, seed=2)

        assert small_hull.contains_batch(cloud).all()

    def test_far_point_outside(self, small_hull):
        """Test a point far outside the admissible region."""
        assert not point_in_hull(small_hull, [10.0, 10.0, 10.0])

    def test_vertices_inside(self, small_hull):
        """Test that every hull vertex counts as inside."""
        assert all(point_in_hull(small_hull, v) for v in small_hull.vertices)

    def test_coplanar_cloud(self):
        """Test that a flat cloud is degenerate."""
        points = np.column_stack([np.arange(10.0), np.arange(10.0) ** 2, np.zeros(10)])

        with pytest.raises(DegenerateCloud):
            hull_from_points(points)

    def test_too_few_points(self):
        """Test that three points do not make a hull."""
        with pytest.raises(DegenerateCloud):
            hull_from_points(np.eye(3))

    def test_round_trip(self, small_hull):
        """Test serialization of the hull."""
        restored = type(small_hull).from_dict(small_hull.to_dict())

        np.testing.assert_array_equal(restored.normals, small_hull.normals)
        assert restored.n_faces == small_hull.n_faces


class TestAnnealIso:
    """Test cases for space-filling designs in principal invariant space."""

    def test_feasible_and_pinned(self, small_hull):
        """Test that every point stays feasible and the reference stays pinned."""
        design = anneal_iso(small_hull, 25, AnnealConfig(30, 0.5, 0.95), seed=3)
        free = np.delete(design.invariants, design.pinned, axis=0)

        assert len(design) == 25
        np.testing.assert_array_equal(design.invariants[design.pinned], REFERENCE_ISO)
        np.testing.assert_array_equal(design.c[design.pinned], np.eye(3))
        assert small_hull.contains_batch(free).all()
        assert physicality_check_batch(free).all()

    def test_spread_never_shrinks(self, small_hull):
        """Test that annealing does not decrease the minimum pairwise distance."""
        initial = anneal_iso(small_hull, 25, AnnealConfig(0), seed=4)
        final = anneal_iso(small_hull, 25, AnnealConfig(40, 0.5, 0.95), seed=4)

        assert min_pairwise_distance(final.invariants) >= min_pairwise_distance(initial.invariants)

    def test_stored_c_matches_invariants(self, small_hull):
        """Test that each stored C reproduces its triple."""
        design = anneal_iso(small_hull, 10, AnnealConfig(5), seed=5)

        np.testing.assert_allclose(invariants_of(design.c), design.invariants, rtol=1e-9)

    def test_deterministic(self, small_hull):
        """Test that a seed reproduces the design."""
        a = anneal_iso(small_hull, 10, AnnealConfig(5), seed=6)
        b = anneal_iso(small_hull, 10, AnnealConfig(5), seed=6)

        np.testing.assert_array_equal(a.invariants, b.invariants)

    def test_invalid_config(self):
        """Test the annealing parameter checks."""
        with pytest.raises(ConfigError):
            AnnealConfig(10, t0=0.0)
        with pytest.raises(ConfigError):
            AnnealConfig(10, alpha=1.0)

    @pytest.mark.slow
    def test_beats_lhs_projection(self, bounds):
        """Test the space-filling gain over LHS-projected points at N = 200."""
        ratios = []
        for seed in range(5):
            hull = build_hull(bounds, 20000, seed)
            design = anneal_iso(hull, 200, AnnealConfig(2000), seed)
            lhs = invariant_cloud(bounds, 200, seed)
            ratios.append(min_pairwise_distance(design.invariants) / min_pairwise_distance(lhs))

        assert np.median(ratios) >= 1.5


class TestAnnealAniso:
    """Test cases for rotation annealing of the pseudo invariants."""

    def test_quintuples_realized(self, small_hull, example_a0):
        """Test that stored C tensors reproduce their quintuples."""
        iso = anneal_iso(small_hull, 15, AnnealConfig(5), seed=7)
        aniso = anneal_aniso(iso, example_a0, AnnealConfig(20, 2 * np.pi, 0.95), seed=7)
        computed = invariants_of(aniso.c, example_a0)

        assert aniso.kind is MaterialKind.TRANS_ISO
        np.testing.assert_allclose(computed[:, :3], aniso.invariants[:, :3], rtol=1e-9)
        np.testing.assert_allclose(computed[:, 3:], aniso.invariants[:, 3:], rtol=1e-12)
        np.testing.assert_array_equal(aniso.invariants[aniso.pinned], [3.0, 3.0, 1.0, 1.0, 1.0])

    def test_spread_beats_initial_rotation(self, small_hull, example_a0):
        """Test that annealing the angles does not shrink the (I4, I5) spread."""
        iso = anneal_iso(small_hull, 20, AnnealConfig(10, 0.5, 0.95), seed=9)
        initial = anneal_aniso(iso, example_a0, AnnealConfig(0), seed=9)
        final = anneal_aniso(iso, example_a0, AnnealConfig(40, 2 * np.pi, 0.95), seed=9)

        assert min_pairwise_distance(final.invariants[:, 3:]) >= min_pairwise_distance(
            initial.invariants[:, 3:]
        )
        assert not np.array_equal(final.angles, initial.angles)
        np.testing.assert_array_equal(final.invariants[:, :3], iso.invariants)

    def test_requires_iso_design(self, small_hull, example_a0):
        """Test that only isotropic designs can be rotated."""
        iso = anneal_iso(small_hull, 5, AnnealConfig(0), seed=8)
        aniso = anneal_aniso(iso, example_a0, AnnealConfig(0), seed=8)

        with pytest.raises(ConfigError):
            anneal_aniso(aniso, example_a0, AnnealConfig(0), seed=8)


class TestRotations:
    """Test cases for the composite plane rotations."""

    def test_orthogonal(self):
        """Test R^T R = I and det R = 1."""
        r = rotation_xyz((0.3, -1.2, 2.5))

        np.testing.assert_allclose(r.T @ r, np.eye(3), atol=1e-14)
        assert np.linalg.det(r) == pytest.approx(1.0)

    def test_rotation_keeps_principal_invariants(self, example_c):
        """Test that rotating C leaves I1, I2 and I3 unchanged."""
        rotated = rotate_tensor(example_c, (0.4, 0.5, 0.6))

        np.testing.assert_allclose(
            principal_invariants(rotated).as_array(), [3.3, 3.54, 1.232], rtol=1e-12
        )


class TestQuintupleSolve:
    """Test cases for recovering C from five invariants."""

    def test_recovers_realizable_quintuple(self, example_a0):
        """Test that a rotated C's quintuple is solved to tolerance."""
        target_c = rotate_tensor(np.diag([1.2, 1.0, 0.9]), (0.3, 0.2, 0.1))
        point = invariants(target_c, example_a0)
        c = solve_C_from_quintuple(point, structural_tensor(example_a0))

        actual = invariants(c, example_a0).as_array()
        np.testing.assert_allclose(actual, point.as_array(), atol=1e-7)
        assert np.all(np.linalg.eigvalsh(c) > 0)

    def test_reference_quintuple(self, example_a0):
        """Test that (3, 3, 1, 1, 1) gives the undeformed state."""
        point = InvariantPoint.from_array([3.0, 3.0, 1.0, 1.0, 1.0])

        np.testing.assert_allclose(
            solve_C_from_quintuple(point, structural_tensor(example_a0)), np.eye(3), atol=1e-6
        )

    def test_annealed_quintuple(self, small_hull, example_a0):
        """Test that an annealed design point is solved back to its quintuple."""
        iso = anneal_iso(small_hull, 10, AnnealConfig(5), seed=10)
        aniso = anneal_aniso(iso, example_a0, AnnealConfig(10, 2 * np.pi, 0.95), seed=10)
        row = next(j for j in range(len(aniso)) if j != aniso.pinned)
        point = InvariantPoint.from_array(aniso.invariants[row])
        bounds = ([0.1, -2.0, -2.0, 0.1, -2.0, 0.1], [3.0, 2.0, 2.0, 3.0, 2.0, 3.0])
        c = solve_C_from_quintuple(point, structural_tensor(example_a0), bounds=bounds)

        np.testing.assert_allclose(
            invariants(c, example_a0).as_array(), aniso.invariants[row], atol=1e-7
        )
        assert np.all(np.linalg.eigvalsh(c) > 0)

    def test_needs_quintuple(self, example_a0):
        """Test that a triple is refused."""
        with pytest.raises(KindMismatch):
            solve_C_from_quintuple(
                InvariantPoint.from_array([3, 3, 1]), structural_tensor(example_a0)
            )
