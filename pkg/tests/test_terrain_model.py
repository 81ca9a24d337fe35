from fractions import Fraction

import pytest

from conftest import terrain_of
from geometry.exact import Point2
from terrain.model import (
    Channel,
    Realization1D,
    Tower1D,
    UncertainVertex1D,
    chain_value_at,
    chain_values_at_sorted,
    polygon_Q,
    polygon_Qhat,
    polygon_Qp,
    realization_from_path,
    split_apexes,
    terrain_height_at,
    validate_terrain,
)
from utils.errors import (
    ApexOutsideStrip,
    IntervalInverted,
    InvalidChannel,
    NonMonotoneX,
    OutOfRange,
    RealizationOutOfBounds,
    TooFewVertices,
)


class TestTerrain:
    def test_accepts_mapping_and_tuples(self):
        from_dict = validate_terrain(
            {"vertices": [{"x": "0", "low": "0", "high": "1"}, {"x": "1/3", "low": 0, "high": 1}]}
        )
        from_tuples = validate_terrain([(0, 0, 1), (Fraction(1, 3), 0, 1)])
        assert from_dict == from_tuples
        assert from_dict.xs == [0, Fraction(1, 3)]

    def test_too_few(self):
        with pytest.raises(TooFewVertices):
            terrain_of((0, 0, 1))

    def test_non_monotone(self):
        with pytest.raises(NonMonotoneX):
            terrain_of((0, 0, 1), (2, 0, 1), (1, 0, 1))

    def test_duplicate_x(self):
        with pytest.raises(NonMonotoneX):
            terrain_of((0, 0, 1), (0, 0, 1))

    def test_inverted_interval(self):
        with pytest.raises(IntervalInverted):
            UncertainVertex1D(0, 2, 1)

    def test_tops_and_bottoms(self, m_terrain):
        assert m_terrain.tops[2] == Point2(2, Fraction(1, 2))
        assert m_terrain.bottoms[2] == Point2(2, 0)
        assert m_terrain.vertices[0].is_precise
        assert not m_terrain.vertices[2].is_precise

    def test_index_of_x(self, m_terrain):
        assert m_terrain.index_of_x(Fraction(3)) == 3
        assert m_terrain.index_of_x(Fraction(5, 2)) == -1


class TestRealization:
    def test_bounds_checked(self, m_terrain):
        with pytest.raises(RealizationOutOfBounds):
            Realization1D(m_terrain, (0, 1, 1, 1, 0))
        with pytest.raises(RealizationOutOfBounds):
            Realization1D(m_terrain, (0, 1, 0))

    def test_with_height_returns_new_realization(self, m_terrain):
        r = Realization1D(m_terrain, (0, 1, 0, 1, 0))
        raised = r.with_height(2, "1/2")
        assert raised.heights[2] == Fraction(1, 2)
        assert r.heights[2] == 0

    def test_bends_lie_on_edges(self, m_terrain):
        r = Realization1D(m_terrain, (0, 1, 0, 1, 0))
        bent = r.with_bend(Point2(Fraction(1, 2), Fraction(1, 2)))
        assert bent.polyline()[1] == Point2(Fraction(1, 2), Fraction(1, 2))
        assert len(bent.polyline()) == 6
        with pytest.raises(RealizationOutOfBounds):
            r.with_bend(Point2(Fraction(1, 2), 1))

    def test_bend_at_vertex_is_ignored(self, m_terrain):
        r = Realization1D(m_terrain, (0, 1, 0, 1, 0))
        assert r.with_bend(Point2(1, 1)) is r

    def test_height_at(self, m_terrain):
        r = Realization1D(m_terrain, (0, 1, 0, 1, 0))
        assert terrain_height_at(r, Fraction(3, 2)) == Fraction(1, 2)
        with pytest.raises(OutOfRange):
            terrain_height_at(r, 5)


def test_tower_between():
    tower = Tower1D.between(Point2(2, Fraction(1, 2)), Point2(2, 2))
    assert tower.height == Fraction(3, 2)


class TestChains:
    def test_sorted_and_single_lookups_agree(self):
        chain = [Point2(0, 0), Point2(1, 2), Point2(3, 0)]
        xs = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)]
        assert chain_values_at_sorted(chain, xs) == [chain_value_at(chain, x) for x in xs]
        assert chain_value_at(chain, 2) == 1

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            chain_values_at_sorted([Point2(0, 0), Point2(1, 0)], [Fraction(2)])


class TestChannel:
    def test_polygon_q(self, m_terrain):
        q = polygon_Q(m_terrain)
        assert q.upper == tuple(m_terrain.tops)
        assert q.lower == tuple(m_terrain.bottoms)
        assert q.contains(Point2(2, Fraction(1, 4)))
        assert not q.contains(Point2(2, 1))
        assert q.upper_at(Fraction(3, 2)) == Fraction(3, 4)

    def test_crossing_chains_rejected(self):
        with pytest.raises(InvalidChannel):
            Channel((Point2(0, 0), Point2(2, 2)), (Point2(0, 1), Point2(2, 1)))

    def test_different_ranges_rejected(self):
        with pytest.raises(InvalidChannel):
            Channel((Point2(0, 0), Point2(2, 0)), (Point2(0, 1), Point2(3, 1)))

    def test_trusted_matches_validated(self, m_terrain):
        checked = Channel(m_terrain.bottoms, m_terrain.tops)
        assert polygon_Q(m_terrain) == checked
        assert polygon_Q(m_terrain).mirrored() == Channel(checked.mirrored().lower, checked.mirrored().upper)

    def test_trusted_skips_checks(self):
        crossing = Channel.trusted((Point2(0, 0), Point2(2, 2)), (Point2(0, 1), Point2(2, 1)))
        assert crossing.lower[1] == Point2(2, 2)

    def test_terrain_columns_are_cached(self, m_terrain):
        assert m_terrain.xs is m_terrain.xs
        assert m_terrain.tops is m_terrain.tops

    def test_mirrored_twice_is_identity(self, m_terrain):
        q = polygon_Q(m_terrain)
        assert q.mirrored().mirrored() == q
        assert q.mirrored().x_first == -4


class TestApexPolygons:
    def test_qp_inserts_apex_above_the_upper_chain(self, m_terrain):
        q = polygon_Q(m_terrain)
        apex = Point2(Fraction(5, 2), 2)
        q_p = polygon_Qp(q, apex)
        assert apex in q_p.upper
        assert len(q_p.upper) == len(q.upper) + 1

    def test_qp_ignores_apex_inside(self, m_terrain):
        q = polygon_Q(m_terrain)
        assert polygon_Qp(q, Point2(Fraction(5, 2), Fraction(1, 2))) == q

    def test_apex_on_interval_abscissa(self, m_terrain):
        with pytest.raises(ApexOutsideStrip):
            polygon_Qp(polygon_Q(m_terrain), Point2(2, 5))

    def test_qhat_keeps_only_outside_apexes(self, m_terrain):
        q = polygon_Q(m_terrain)
        outside = Point2(Fraction(1, 2), 3)
        inside = Point2(Fraction(5, 2), Fraction(1, 2))
        retained, dropped = split_apexes(q, [inside, outside])
        assert retained == [outside]
        assert dropped == [inside]
        q_hat = polygon_Qhat(q, [inside, outside])
        assert q_hat.upper[1] == outside
        assert inside not in q_hat.upper


def test_realization_from_path(m_terrain):
    path = [Point2(0, 0), Point2(1, 1), Point2(2, Fraction(1, 2)), Point2(3, 1), Point2(4, 0)]
    r = realization_from_path(m_terrain, path)
    assert r.heights == (0, 1, Fraction(1, 2), 1, 0)
    assert realization_from_path(m_terrain, path[::-1]) == r
