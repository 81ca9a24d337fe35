from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import mesh_of, triangulated_meshes
from geometry.exact import Point3
from terrain.mesh import (
    OcclusionInterval,
    Realization2_5D,
    Viewpoint2_5D,
    blockers_of,
    edge_fully_visible,
    invisible_edges,
    occlusion_interval,
    passes_below,
    sees_all,
    segment_above_terrain,
)
from utils.errors import (
    DegenerateBlocker,
    IntervalInverted,
    InvalidMesh,
    OutsideDomain,
    RealizationOutOfBounds,
    TooFewVertices,
)

HALF = Fraction(1, 2)


SCREEN = mesh_of(
    [(0, 0, 0, 0), (2, 1, 3, 3), (2, -1, 3, 3), (4, 1, 0, 0), (4, -1, 4, 4)],
    [(0, 1, 2), (1, 3, 2), (2, 3, 4)],
)


@pytest.fixture
def screen_mesh():
    """A ridge at height 3 in front of a sloped far edge (3, 4)"""
    return SCREEN


def _along(r, edge, s):
    a, b = r.point(edge[0]), r.point(edge[1])
    return Point3(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), a.z + s * (b.z - a.z))


class TestMeshModel:
    def test_edges_and_faces(self, ridge_mesh):
        assert ridge_mesh.edges == ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3))
        assert sorted(ridge_mesh.opposite_vertices((1, 2))) == [0, 3]
        assert ridge_mesh.opposite_vertices((0, 1)) == [2]

    def test_triangles_are_counterclockwise(self, ridge_mesh):
        # (1, 3, 2) is clockwise in projection
        assert ridge_mesh.triangles[1] == (1, 2, 3)

    def test_too_few_vertices(self):
        with pytest.raises(TooFewVertices):
            mesh_of([(0, 0, 0, 0), (1, 0, 0, 0)], [])

    def test_duplicate_projection(self):
        with pytest.raises(InvalidMesh):
            mesh_of([(0, 0, 0, 0), (1, 0, 0, 0), (0, 0, 1, 1)], [(0, 1, 2)])

    def test_crossing_edges(self):
        with pytest.raises(InvalidMesh):
            mesh_of(
                [(0, 0, 0, 0), (2, 0, 0, 0), (2, 2, 0, 0), (0, 2, 0, 0)],
                [(0, 1, 2), (0, 1, 3), (1, 2, 3)],
            )

    def test_vertex_inside_triangle(self):
        with pytest.raises(InvalidMesh):
            mesh_of([(0, 0, 0, 0), (4, 0, 0, 0), (0, 4, 0, 0), (1, 1, 0, 0)], [(0, 1, 2)])

    def test_zero_area(self):
        with pytest.raises(InvalidMesh):
            mesh_of([(0, 0, 0, 0), (1, 1, 0, 0), (2, 2, 0, 0)], [(0, 1, 2)])

    def test_inverted_interval(self):
        with pytest.raises(IntervalInverted):
            mesh_of([(0, 0, 1, 0), (1, 0, 0, 0), (0, 1, 0, 0)], [(0, 1, 2)])

    def test_realization_bounds(self, ridge_mesh):
        with pytest.raises(RealizationOutOfBounds):
            Realization2_5D(ridge_mesh, (0, 6, 0, 0))
        with pytest.raises(RealizationOutOfBounds):
            ridge_mesh.tops().with_z(0, 1)

    def test_height_at(self, ridge_mesh):
        r = ridge_mesh.tops()
        assert r.height_at(2, 0) == 5
        assert r.height_at(1, 0) == Fraction(5, 2)
        with pytest.raises(OutsideDomain):
            r.height_at(10, 10)

    def test_viewpoint(self, ridge_mesh):
        assert Viewpoint2_5D(1, 2).point(ridge_mesh) == Point3(2, 1, 7)
        with pytest.raises(ValueError):
            Viewpoint2_5D(0, -1)


class TestSegmentPredicates:
    def test_passes_below_a_raised_edge(self):
        a, b = Point3(0, 0, 0), Point3(4, 0, 0)
        assert passes_below(a, b, Point3(2, 1, 5), Point3(2, -1, 5))
        assert not passes_below(a, b, Point3(2, 1, -1), Point3(2, -1, -1))
        assert not passes_below(a, b, Point3(5, 1, 5), Point3(5, -1, 5))

    def test_grazing_is_not_below(self):
        assert not passes_below(Point3(0, 0, 0), Point3(4, 0, 2), Point3(2, 1, 1), Point3(2, -1, 1))

    def test_collinear_projection(self):
        a, b = Point3(0, 0, 0), Point3(4, 0, 0)
        assert passes_below(a, b, Point3(1, 0, 0), Point3(3, 0, 1))
        assert not passes_below(a, b, Point3(1, 0, -1), Point3(3, 0, 0))

    def test_vertical_sight(self):
        assert passes_below(Point3(1, 0, 0), Point3(1, 0, 1), Point3(0, 0, 2), Point3(2, 0, 2))
        assert not passes_below(Point3(1, 0, 2), Point3(1, 0, 3), Point3(0, 0, 2), Point3(2, 0, 2))

    def test_segment_above_terrain(self, ridge_mesh):
        r = ridge_mesh.tops()
        a, d = r.point(0), r.point(3)
        assert not segment_above_terrain(a, d, r)
        assert not segment_above_terrain(d, a, r)
        lowered = ridge_mesh.bottoms()
        assert segment_above_terrain(a, d, lowered)
        assert segment_above_terrain(d, a, lowered)

    def test_blockers(self, ridge_mesh):
        r = ridge_mesh.tops()
        assert blockers_of(r.point(0), r.point(3), r) == [(1, 2)]


class TestOcclusion:
    def test_ridge_hides_the_lower_half_of_the_far_edge(self, screen_mesh):
        r = screen_mesh.tops()
        v = Point3(0, 0, 4)
        assert occlusion_interval(v, (3, 4), (1, 2), r) == OcclusionInterval(0, HALF, (1, 2))
        assert not edge_fully_visible(v, (3, 4), r)
        assert (3, 4) in invisible_edges(v, r)

    def test_higher_viewpoint_clears_the_ridge(self, screen_mesh):
        r = screen_mesh.tops()
        assert occlusion_interval(Point3(0, 0, 10), (3, 4), (1, 2), r) is None

    def test_sampling_agrees_with_the_exact_interval(self, screen_mesh):
        r = screen_mesh.tops()
        v = Point3(0, 0, 4)
        for k in range(101):
            s = Fraction(k, 100)
            assert segment_above_terrain(v, _along(r, (3, 4), s), r) == (s >= HALF)

    def test_blocker_cannot_be_the_target(self, screen_mesh):
        with pytest.raises(DegenerateBlocker):
            occlusion_interval(Point3(0, 0, 4), (3, 4), (4, 3), screen_mesh.tops())

    def test_disjoint_blocker(self, screen_mesh):
        r = screen_mesh.tops()
        assert occlusion_interval(Point3(0, 0, 4), (0, 1), (2, 4), r) is None

    @given(st.integers(0, 4), st.integers(0, 12), st.data())
    @settings(max_examples=150, deadline=None)
    def test_interval_contains_every_blocked_sample(self, vertex, lift, data):
        r = SCREEN.tops()
        base = r.point(vertex)
        v = Point3(base.x, base.y, base.z + lift)
        edges = SCREEN.edges
        target = data.draw(st.sampled_from(edges))
        blocker = data.draw(st.sampled_from([e for e in edges if e != target]))
        interval = occlusion_interval(v, target, blocker, r)
        p, q = r.point(blocker[0]), r.point(blocker[1])
        for k in range(201):
            s = Fraction(k, 200)
            if passes_below(v, _along(r, target, s), p, q):
                assert interval is not None
                assert interval.s_lo <= s <= interval.s_hi

    @given(st.integers(0, 4), st.integers(0, 12))
    @settings(max_examples=60, deadline=None)
    def test_fan_clip_agrees_with_occlusion_intervals(self, vertex, lift):
        r = SCREEN.tops()
        base = r.point(vertex)
        v = Point3(base.x, base.y, base.z + lift)
        for target in SCREEN.edges:
            exact = all(
                occlusion_interval(v, target, blocker, r) is None
                for blocker in SCREEN.edges
                if blocker != target
            )
            assert edge_fully_visible(v, target, r) == exact

    @pytest.mark.slow
    @given(triangulated_meshes(), st.data())
    @settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_random_triples_agree_with_dense_sampling(self, mesh, data):
        r = Realization2_5D(
            mesh, tuple(data.draw(st.sampled_from([v.low, v.high])) for v in mesh.vertices)
        )
        base = r.point(data.draw(st.integers(0, mesh.n - 1)))
        v = Point3(base.x, base.y, base.z + data.draw(st.integers(0, 6)))
        target = data.draw(st.sampled_from(mesh.edges))
        blocker = data.draw(st.sampled_from([e for e in mesh.edges if e != target]))
        interval = occlusion_interval(v, target, blocker, r)
        if interval is not None:
            assert 0 <= interval.s_lo <= interval.s_hi <= 1
        p, q = r.point(blocker[0]), r.point(blocker[1])
        for k in range(1001):
            s = Fraction(k, 1000)
            if passes_below(v, _along(r, target, s), p, q):
                assert interval is not None
                assert interval.s_lo <= s <= interval.s_hi


class TestSeesAll:
    def test_flat_realization(self, flat_mesh):
        r = Realization2_5D(flat_mesh, (0, 0, 0, 0))
        for i in range(flat_mesh.n):
            assert sees_all(Viewpoint2_5D(i, 0), r)

    def test_ridge_at_tops_hides_the_far_end(self, ridge_mesh):
        assert not sees_all(Viewpoint2_5D(0, 0), ridge_mesh.tops())

    def test_raising_the_viewpoint_helps(self, screen_mesh):
        r = screen_mesh.tops()
        assert not sees_all(Viewpoint2_5D(0, 4), r)
        assert sees_all(Viewpoint2_5D(0, 40), r)
