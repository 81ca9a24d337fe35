from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geometry.exact import Point2
from terrain.model import chain_values_at_sorted
from terrain.visibility import boundary_at, fixed_terrain_watchtower, visibility_region
from utils.errors import DegeneratePolyline

HALF = Fraction(1, 2)
PI_M = [Point2(0, 0), Point2(1, 1), Point2(2, HALF), Point2(3, 1), Point2(4, 0)]
M_POLYLINE = [Point2(0, 0), Point2(1, 1), Point2(2, 0), Point2(3, 1), Point2(4, 0)]


@st.composite
def polylines(draw, max_vertices=8):
    n = draw(st.integers(min_value=2, max_value=max_vertices))
    gaps = draw(st.lists(st.integers(1, 5), min_size=n - 1, max_size=n - 1))
    ys = draw(st.lists(st.integers(-20, 20), min_size=n, max_size=n))
    xs = [0]
    for gap in gaps:
        xs.append(xs[-1] + gap)
    return [Point2(x, y) for x, y in zip(xs, ys)]


class TestVisibilityRegion:
    def test_m_region_is_max_of_two_lines(self):
        region = visibility_region(PI_M)
        for x in [Fraction(k, 4) for k in range(17)]:
            assert boundary_at(region, x) == max(x, 4 - x)
        assert region.vertices() == [Point2(2, 2)]

    def test_single_edge(self):
        region = visibility_region([Point2(0, 0), Point2(2, 1)])
        assert region.breakpoints == ()
        assert boundary_at(region, 10) == 5

    def test_parallel_edges_keep_the_highest(self):
        region = visibility_region([Point2(0, 0), Point2(1, 1), Point2(2, 0), Point2(3, 1)])
        # y = x and y = x - 2 share a slope; only y = x survives
        assert boundary_at(region, 0) == 2
        assert boundary_at(region, Fraction(3)) == 3
        assert len(region.pieces) == 2

    def test_degenerate(self):
        with pytest.raises(DegeneratePolyline):
            visibility_region([Point2(0, 0)])
        with pytest.raises(DegeneratePolyline):
            visibility_region([Point2(0, 0), Point2(0, 1)])

    def test_evaluate_sorted_matches_pointwise(self):
        region = visibility_region(M_POLYLINE)
        xs = [Fraction(k, 3) for k in range(13)]
        assert region.evaluate_sorted(xs) == [boundary_at(region, x) for x in xs]

    @given(polylines(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_suffix_lookups_start_mid_chain(self, polyline, data):
        region = visibility_region(polyline)
        x_lo, x_hi = polyline[0].x, polyline[-1].x
        start = data.draw(st.fractions(min_value=x_lo, max_value=x_hi, max_denominator=6))
        xs = [start, (start + x_hi) / 2, x_hi]
        assert region.evaluate_sorted(xs) == [boundary_at(region, x) for x in xs]
        assert chain_values_at_sorted(polyline, xs)[0] == chain_values_at_sorted(polyline, [x_lo, start])[1]

    def test_fixed_tower_reuses_a_given_region(self):
        region = visibility_region(M_POLYLINE)
        assert fixed_terrain_watchtower(M_POLYLINE, region) == fixed_terrain_watchtower(M_POLYLINE)

    def test_contains(self):
        region = visibility_region(PI_M)
        assert region.contains(Point2(2, 2))
        assert not region.contains(Point2(2, Fraction(199, 100)))

    @given(polylines())
    @settings(max_examples=100, deadline=None)
    def test_region_lies_on_or_above_every_edge_line(self, polyline):
        region = visibility_region(polyline)
        xs = [p.x for p in polyline]
        probe = sorted(set(xs) | {x + HALF for x in xs})
        boundary = region.evaluate_sorted(probe)
        for p, q in zip(polyline, polyline[1:]):
            for x, b in zip(probe, boundary):
                assert b >= p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)

    @given(polylines())
    @settings(max_examples=100, deadline=None)
    def test_boundary_touches_some_edge_line(self, polyline):
        region = visibility_region(polyline)
        for x in [p.x for p in polyline]:
            b = boundary_at(region, x)
            assert any(
                b == p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)
                for p, q in zip(polyline, polyline[1:])
            )


class TestFixedTerrainWatchtower:
    def test_m_polyline(self):
        tower = fixed_terrain_watchtower(M_POLYLINE)
        assert tower.height == 2
        assert tower.base == Point2(1, 1)
        assert tower.top == Point2(1, 3)

    def test_pi_of_m_instance(self):
        tower = fixed_terrain_watchtower(PI_M)
        assert tower.height == Fraction(3, 2)
        assert tower.base == Point2(2, HALF)

    def test_convex_valley_needs_no_tower(self):
        tower = fixed_terrain_watchtower([Point2(0, 4), Point2(2, 0), Point2(4, 4)])
        assert tower.height == 0

    def test_tower_at_edge_interior(self):
        # the best base lies where the region corner projects inside an edge
        polyline = [Point2(0, 0), Point2(1, 1), Point2(2, 1), Point2(3, 0)]
        tower = fixed_terrain_watchtower(polyline)
        region = visibility_region(polyline)
        corner = region.vertices()[0]
        assert tower.base.x == corner.x
        assert tower.top == corner
        assert tower.height == HALF

    @given(polylines())
    @settings(max_examples=100, deadline=None)
    def test_no_sampled_base_beats_the_tower(self, polyline):
        tower = fixed_terrain_watchtower(polyline)
        region = visibility_region(polyline)
        x_lo, x_hi = polyline[0].x, polyline[-1].x
        xs = [x_lo + (x_hi - x_lo) * Fraction(k, 40) for k in range(41)]
        terrain = chain_values_at_sorted(polyline, xs)
        for x, y in zip(xs, terrain):
            assert boundary_at(region, x) - y >= tower.height
        assert tower.height >= 0
        assert region.contains(tower.top)
