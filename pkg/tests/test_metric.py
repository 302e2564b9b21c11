import math

import numpy as np
import pytest

from eni.envs import empty_square, irregular_room
from eni.errors import InvalidInput
from eni.geometry import (
    Point2,
    SimplePolygon,
    VisibilityPolygon,
    compute_visibility_polygon,
    make_environment,
)
from eni.metric import (
    DEFAULT_ROTATIONS,
    RotationSet,
    compute_eni,
    compute_eni_from_samples,
    path_eni,
    phi,
    phi_best_rotation,
    summarize,
)
from eni.sampling import sample_points
from eni.simulator import Trace

import oracles


def centered_square_vp(side, kernel=(0.0, 0.0)):
    k = np.asarray(kernel, dtype=float)
    half = side / 2
    verts = (
        np.array([[-half, -half], [half, -half], [half, half], [-half, half]]) + k
    )
    return VisibilityPolygon(Point2(k[0], k[1]), SimplePolygon(verts))


class TestRotationSet:
    def test_default_is_ten_at_36_degrees(self):
        assert len(DEFAULT_ROTATIONS) == 10
        assert np.allclose(np.diff(DEFAULT_ROTATIONS.angles), math.radians(36.0))
        assert DEFAULT_ROTATIONS.angles[0] == 0.0

    def test_validation(self):
        with pytest.raises(InvalidInput):
            RotationSet(np.array([0.0, 0.0]))
        with pytest.raises(InvalidInput):
            RotationSet(np.array([0.0, 7.0]))
        with pytest.raises(InvalidInput):
            RotationSet.uniform(0)


class TestPhi:
    def test_identical_polygons(self):
        a = centered_square_vp(2.0, (3.0, 4.0))
        assert phi(a, a) == 0.0

    def test_containment(self):
        virt = centered_square_vp(2.0, (1.0, 1.0))
        phys = centered_square_vp(1.0, (-5.0, 2.0))
        assert phi(virt, phys) == pytest.approx(3.0, rel=1e-12)
        assert phi(phys, virt) == 0.0

    def test_kernel_on_polygon_corner_falls_back(self):
        # kernel in the closure but on the boundary: no radial representation
        verts = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]])
        virt = VisibilityPolygon(Point2(0.0, 0.0), SimplePolygon(verts))
        phys = centered_square_vp(2.0)
        # virt extends [0,2]^2 from its kernel; phys covers [-1,1]^2: overlap 1
        assert phi(virt, phys) == pytest.approx(3.0, rel=1e-9)


class TestPhiBestRotation:
    def test_identical_squares(self):
        a = centered_square_vp(2.0)
        score, idx = phi_best_rotation(a, a)
        assert score == 0.0
        assert idx == 0

    def test_symmetric_decagon_tie_breaks_to_zero(self):
        ang = 2 * np.pi * np.arange(10) / 10
        decagon = VisibilityPolygon(
            Point2(0, 0), SimplePolygon(np.stack([np.cos(ang), np.sin(ang)], axis=1))
        )
        virt = centered_square_vp(2.4)
        scores = [
            phi(virt, VisibilityPolygon(decagon.kernel,
                SimplePolygon(oracles.convex_hull(
                    decagon.polygon.vertices @ np.array(
                        [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]]
                    )))))
            for t in DEFAULT_ROTATIONS.angles
        ]
        assert max(scores) - min(scores) < 1e-6
        score, idx = phi_best_rotation(virt, decagon)
        assert idx == 0
        assert score == pytest.approx(scores[0], abs=1e-9)

    def test_rect_pair_matches_rasterization_oracle(self):
        virt = VisibilityPolygon(
            Point2(0, 0), SimplePolygon([[-1, -0.5], [1, -0.5], [1, 0.5], [-1, 0.5]])
        )
        phys = VisibilityPolygon(
            Point2(0, 0), SimplePolygon([[-0.5, -1], [0.5, -1], [0.5, 1], [-0.5, 1]])
        )
        per_angle = []
        for theta in DEFAULT_ROTATIONS.angles:
            c, s = np.cos(theta), np.sin(theta)
            rot = phys.polygon.vertices @ np.array([[c, s], [-s, c]])
            per_angle.append(
                oracles.grid_difference_area(virt.polygon.vertices, rot, resolution=900)
            )
        score, idx = phi_best_rotation(virt, phys)
        assert score == pytest.approx(min(per_angle), rel=0.01, abs=5e-3)
        assert idx == int(np.argmin(np.round(per_angle, 6)))


class TestSummarize:
    def test_zeros(self):
        assert summarize(np.zeros(3)) == (0.0, 0.0)

    def test_one_two_three(self):
        mean, std = summarize(np.array([1.0, 2.0, 3.0]))
        assert mean == 2.0
        assert std == pytest.approx(math.sqrt(2.0 / 3.0), rel=1e-12)

    def test_constant(self):
        mean, std = summarize(np.full(7, 4.2))
        assert mean == pytest.approx(4.2)
        assert std == 0.0

    def test_empty_rejected(self):
        with pytest.raises(InvalidInput):
            summarize(np.array([]))


class TestComputeEni:
    def test_self_pair_is_exactly_zero(self):
        env = irregular_room()
        res = compute_eni(env, env, target_count=80)
        assert np.all(res.x == 0.0)
        assert res.mean == 0.0 and res.std == 0.0
        assert res.phys_samples is res.virt_samples

    def test_small_virtual_world_fits_in_large_physical(self):
        pe = empty_square(20.0)
        ve = empty_square(5.0)
        res = compute_eni(pe, ve, target_count=60)
        # every virtual fan is a 5x5 square; verify the matched physical fan
        # geometrically contains it at the recorded rotation
        import shapely

        assert res.mean == 0.0
        for rec in res.matches:
            virt = res.virt_samples.vis_polygons[rec.virt_index]
            phys = res.phys_samples.vis_polygons[rec.phys_index]
            theta = res.thetas.angles[rec.theta_index]
            c, s = np.cos(theta), np.sin(theta)
            prot = phys.relative_vertices() @ np.array([[c, s], [-s, c]])
            assert shapely.Polygon(prot).buffer(1e-9).covers(
                shapely.Polygon(virt.relative_vertices())
            )

    def test_large_virtual_world_cannot_fit(self):
        pe = empty_square(5.0)
        ve = empty_square(20.0)
        res = compute_eni(pe, ve, target_count=60)
        assert res.mean > 0.0
        assert np.all(res.x >= 375.0 - 1e-6)  # area pigeonhole: 400 - 25

    def test_result_internal_consistency(self):
        pe = irregular_room()
        ve = empty_square(12.0)
        res = compute_eni(pe, ve, target_count=60)
        assert res.x.shape[0] == len(res.matches) == len(res.virt_samples)
        for i, rec in enumerate(res.matches):
            assert rec.virt_index == i
            assert rec.score == res.x[i]
            assert 0 <= rec.phys_index < len(res.phys_samples)
            assert 0 <= rec.theta_index < len(res.thetas)
        mean, std = summarize(res.x)
        assert res.mean == mean and res.std == std

    def test_exhaustive_argmin_certificate(self):
        pe = irregular_room()
        ve = make_environment(
            [(0, 0), (11, 0.5), (11.5, 9), (0.5, 9.5)],
            [[(4, 4), (6.5, 4.2), (6, 6.5)]],
            name="ve",
        )
        phys = sample_points(pe, 20)
        virt = sample_points(ve, 25)
        res = compute_eni_from_samples(phys, virt)
        scores, js, ts = oracles.brute_force_matches(virt, phys, DEFAULT_ROTATIONS.angles)
        for rec, s, j, t in zip(res.matches, scores, js, ts):
            assert rec.score == pytest.approx(s, rel=1e-6, abs=1e-9)
            assert rec.phys_index == j
            assert rec.theta_index == t

    def test_determinism_bit_identical(self):
        pe = irregular_room()
        ve = empty_square(9.0)
        r1 = compute_eni(pe, ve, target_count=60)
        r2 = compute_eni(pe, ve, target_count=60)
        assert np.array_equal(r1.x, r2.x)
        assert r1.matches == r2.matches
        assert (r1.mean, r1.std) == (r2.mean, r2.std)

    def test_threading_matches_serial(self):
        pe = irregular_room()
        ve = empty_square(9.0)
        serial = compute_eni(pe, ve, target_count=60, threads=1)
        threaded = compute_eni(pe, ve, target_count=60, threads=4)
        assert np.array_equal(serial.x, threaded.x)
        assert serial.matches == threaded.matches


class TestRigidMotionInvariance:
    def test_translation_leaves_scores_unchanged(self):
        pe = irregular_room()
        ve = empty_square(9.0)
        base = compute_eni(pe, ve, target_count=60)
        moved = compute_eni(pe.translated((7.25, -3.5)), ve, target_count=60)
        assert np.allclose(np.sort(base.x), np.sort(moved.x), atol=1e-9)

    def test_rotation_by_theta_step_multiple(self):
        pe = irregular_room()
        ve = make_environment(
            [(0, 0), (9.3, 0.4), (8.9, 8.7), (0.2, 9.1)], name="ve-quad"
        )
        base = compute_eni(pe, ve, target_count=60)
        rotated = compute_eni(pe.rotated(2 * math.radians(36.0)), ve, target_count=60)
        assert np.allclose(np.sort(base.x), np.sort(rotated.x), atol=1e-6)
        assert base.mean == pytest.approx(rotated.mean, abs=1e-6)
        assert base.std == pytest.approx(rotated.std, abs=1e-6)


class TestMonotoneVisibility:
    def test_added_obstacle_never_grows_fans(self):
        open_env = empty_square(12.0)
        blocked = make_environment(
            [(0, 0), (12, 0), (12, 12), (0, 12)],
            [[(5, 5), (7, 5), (7, 7), (5, 7)]],
            name="blocked",
        )
        rng = np.random.default_rng(6)
        for _ in range(25):
            p = rng.uniform(0.5, 11.5, 2)
            if not (4.5 < p[0] < 7.5 and 4.5 < p[1] < 7.5):
                a_open = compute_visibility_polygon(open_env, p).area
                a_blocked = compute_visibility_polygon(blocked, p).area
                assert a_blocked <= a_open + 1e-9


class TestPathEni:
    @staticmethod
    def straight_trace(positions, heading=0.0, phys_offset=(0.0, 0.0)):
        pos = np.asarray(positions, dtype=float)
        off = np.asarray(phys_offset, dtype=float)
        n = pos.shape[0]
        return Trace(
            phys_positions=pos + off,
            phys_headings=np.full(n, heading),
            virt_positions=pos,
            virt_headings=np.full(n, heading),
        )

    def test_identity_mapping_scores_zero(self):
        env = empty_square(10.0)
        trace = self.straight_trace([[2, 5], [3, 5], [4, 5]])
        scores = path_eni(trace, env, env)
        assert np.all(scores == 0.0)

    def test_offset_path_nonnegative_finite(self):
        env = empty_square(10.0)
        trace = self.straight_trace([[2, 4], [3, 4], [4, 4]], phys_offset=(1.0, 1.5))
        scores = path_eni(trace, env, env)
        assert np.all(scores >= 0.0)
        assert np.all(np.isfinite(scores))
        assert scores.max() > 0.0

    def test_heading_offset_is_used(self):
        env = empty_square(10.0)
        pos = np.array([[5.0, 5.0]])
        trace = Trace(
            phys_positions=pos.copy(),
            phys_headings=np.array([0.0]),
            virt_positions=pos + np.array([[1.0, 0.0]]),
            virt_headings=np.array([math.radians(36.0)]),
        )
        direct = path_eni(trace, env, env)[0]
        virt_vp = compute_visibility_polygon(env, (6.0, 5.0))
        phys_vp = compute_visibility_polygon(env, (5.0, 5.0))
        manual = phi(
            virt_vp,
            VisibilityPolygon(
                phys_vp.kernel,
                SimplePolygon(
                    (phys_vp.relative_vertices() @ np.array(
                        [[math.cos(math.radians(36.0)), math.sin(math.radians(36.0))],
                         [-math.sin(math.radians(36.0)), math.cos(math.radians(36.0))]]
                    )) + phys_vp.kernel.to_array()
                ),
            ),
        )
        assert direct == pytest.approx(manual, rel=1e-9)

    def test_pose_outside_free_space_rejected(self):
        env = empty_square(10.0)
        trace = self.straight_trace([[2, 5], [30, 5]])
        from eni.errors import PoseOutOfBounds

        with pytest.raises(PoseOutOfBounds):
            path_eni(trace, env, env)
