"""
Tower tops inside edges of the visibility region
For a top w above strip (x_k, x_k+1) the realization that lifts the base highest hangs
the left part from w along w's tangent to the lower hull of the tops t_1..t_k, and the
right part along the tangent to the lower hull of t_k+1..t_n. With w on the boundary
of P, the tower height is then a rational function of w.x on every stretch where the
boundary edge and both tangent vertices stay fixed; its minima are searched exactly.
"""

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from geometry.exact import (
    Line2,
    Orientation,
    Point2,
    interpolate_y,
    intersect_lines,
    line_through,
    orientation,
    y_at,
)
from geometry.polynomial import poly_add, poly_derivative, poly_mul, poly_sub, sign_change_roots
from terrain.model import ImpreciseTerrain1D
from terrain.visibility import UpperRegion
from utils.errors import ParallelLines

logger = logging.getLogger(__name__)

# Newton steps allowed when lifting a sunken top back onto its base
_LIFT_STEPS = 200


class PrefixHulls:
    """Lower convex hulls of every prefix of an x-sorted point list

    The hull is kept as one stack whose slots are overwritten in place; every slot
    remembers its history by prefix, so the hull of any prefix stays readable.
    """

    def __init__(self, points: Sequence[Point2]):
        self._versions: List[List[int]] = []
        self._points: List[List[Point2]] = []
        self.sizes: List[int] = []
        size = 0
        for version, p in enumerate(points):
            size = self._kept(size, p)
            if size == len(self._points):
                self._versions.append([])
                self._points.append([])
            self._versions[size].append(version)
            self._points[size].append(p)
            size += 1
            self.sizes.append(size)

    def _latest(self, slot: int) -> Point2:
        return self._points[slot][-1]

    def _kept(self, size: int, p: Point2) -> int:
        """How many vertices of the current hull survive adding p on its right"""
        if size < 2:
            return size
        # (slot a-1, slot a, p) turns left for a prefix of a = 1..size-1
        lo, hi = 1, size
        while lo < hi:
            mid = (lo + hi) // 2
            if orientation(self._latest(mid - 1), self._latest(mid), p) == Orientation.LEFT:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def vertex(self, version: int, slot: int) -> Point2:
        versions = self._versions[slot]
        return self._points[slot][bisect_right(versions, version) - 1]

    def tangent(self, version: int, w: Point2) -> int:
        """Slot of the hull vertex v maximizing slope(v, w), for w right of the prefix"""
        lo, hi = 0, self.sizes[version] - 1
        # first edge whose line passes on or above w
        while lo < hi:
            mid = (lo + hi) // 2
            edge = (self.vertex(version, mid), self.vertex(version, mid + 1))
            if orientation(*edge, w) != Orientation.LEFT:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def edge_lines(self, version: int, first: int, last: int) -> List[Line2]:
        last = min(last, self.sizes[version] - 2)
        return [
            line_through(self.vertex(version, a), self.vertex(version, a + 1))
            for a in range(max(first, 0), last + 1)
        ]


@dataclass(frozen=True)
class EdgeTop:
    """Best top found over one strip: the top (x, y) and the tower height below it"""

    strip: int
    x: Fraction
    y: Fraction
    height: Fraction


class StripSearch:
    def __init__(self, terrain: ImpreciseTerrain1D, region: UpperRegion):
        self.terrain = terrain
        self.region = region
        self.xs = terrain.xs

    # hulls are built on the first strip expanded
    @cached_property
    def _left(self) -> PrefixHulls:
        return PrefixHulls(self.terrain.tops)

    @cached_property
    def _right(self) -> PrefixHulls:
        # suffixes read as prefixes of the mirrored, reversed tops
        return PrefixHulls([t.mirrored() for t in reversed(self.terrain.tops)])

    def _right_version(self, k: int) -> int:
        return self.terrain.n - 2 - k

    def tangents(self, k: int, w: Point2) -> Tuple[Point2, Point2]:
        """Tops the left and right parts hang from when the top is w over strip k"""
        left = self._left.vertex(k, self._left.tangent(k, w))
        version = self._right_version(k)
        right = self._right.vertex(version, self._right.tangent(version, w.mirrored())).mirrored()
        return left, right

    def height_at(self, k: int, x: Fraction, y: Fraction) -> Fraction:
        """Tower height under (x, y) for the highest base the strip allows; negative when
        that base ends up above the top"""
        xk, xk1 = self.xs[k], self.xs[k + 1]
        a, b = self.tangents(k, Point2(x, y))
        return (x - xk) * (xk1 - x) / (xk1 - xk) * ((y - a.y) / (x - a.x) + (y - b.y) / (b.x - x))

    def _height_slope(self, k: int, x: Fraction, y: Fraction) -> Fraction:
        """d height / d y at a fixed x, for the tangents active at (x, y)"""
        xk, xk1 = self.xs[k], self.xs[k + 1]
        a, b = self.tangents(k, Point2(x, y))
        return (x - xk) * (xk1 - x) / (xk1 - xk) * (1 / (x - a.x) + 1 / (b.x - x))

    def lift_to_base(self, k: int, x: Fraction, y: Fraction) -> Fraction:
        """Lowest y' >= y whose height is zero; height is convex and increasing in y,
        so Newton steps land on or above the zero and then walk down onto it"""
        for _ in range(_LIFT_STEPS):
            h = self.height_at(k, x, y)
            if h == 0:
                return y
            y -= h / self._height_slope(k, x, y)
        logger.debug("strip %d: lift at x=%s did not settle, keeping y=%s", k, x, y)
        return y

    def lower_bound(self, k: int) -> Fraction:
        """No tower based inside strip k is shorter: P's boundary minus the top chain,
        a convex function minimized at a boundary vertex or a strip end"""
        xk, xk1 = self.xs[k], self.xs[k + 1]
        tk, tk1 = self.terrain.tops[k], self.terrain.tops[k + 1]
        breaks = self.region.breakpoints
        samples = [xk] + list(breaks[bisect_right(breaks, xk) : bisect_left(breaks, xk1)]) + [xk1]
        gaps = (
            y - interpolate_y(tk, tk1, x)
            for x, y in zip(samples, self.region.evaluate_sorted(samples))
        )
        return max(Fraction(0), min(gaps))

    def _stretches(self, k: int) -> List[Tuple[Line2, Fraction, Fraction]]:
        """Boundary pieces of P over strip k, clipped to it"""
        xk, xk1 = self.xs[k], self.xs[k + 1]
        breaks = self.region.breakpoints
        first = bisect_right(breaks, xk)
        last = bisect_left(breaks, xk1)
        out = []
        for i in range(first, last + 1):
            lo = breaks[i - 1] if i > 0 and breaks[i - 1] > xk else xk
            hi = breaks[i] if i < len(breaks) and breaks[i] < xk1 else xk1
            if lo < hi:
                out.append((self.region.pieces[i], lo, hi))
        return out

    def _switches(self, k: int, line: Line2, lo: Fraction, hi: Fraction) -> List[Fraction]:
        """Abscissas in (lo, hi) where a tangent vertex may change along the line"""
        ends = [Point2(x, y_at(line, x)) for x in (lo, hi)]
        lines = []
        for hulls, version, mirror in (
            (self._left, k, False),
            (self._right, self._right_version(k), True),
        ):
            slots = [hulls.tangent(version, p.mirrored() if mirror else p) for p in ends]
            # the tangent slot moves monotonically along a line, one edge per switch
            edges = hulls.edge_lines(version, min(slots) - 1, max(slots) + 1)
            if mirror:
                edges = [Line2(-e.a, e.b, e.c) for e in edges]
            lines.extend(edges)
        events = []
        for edge in lines:
            try:
                x = intersect_lines(line, edge).x
            except ParallelLines:
                continue
            if lo < x < hi:
                events.append(x)
        return sorted(set(events))

    def _stationary(
        self, k: int, line: Line2, a: Point2, b: Point2, lo: Fraction, hi: Fraction
    ) -> List[Fraction]:
        """Critical abscissas in (lo, hi) of the height along the line for fixed tangents"""
        xk, xk1 = self.xs[k], self.xs[k + 1]
        slope, intercept = line.slope, line.intercept
        # height * d = (x - xk)(xk1 - x)[(y - a.y)(b.x - x) + (y - b.y)(x - a.x)] / ((x - a.x)(b.x - x))
        left_gap = [intercept - a.y, slope]
        right_gap = [intercept - b.y, slope]
        to_a = [-a.x, Fraction(1)]
        to_b = [b.x, Fraction(-1)]
        numerator = poly_mul(
            poly_mul([-xk, Fraction(1)], [xk1, Fraction(-1)]),
            poly_add(poly_mul(left_gap, to_b), poly_mul(right_gap, to_a)),
        )
        denominator = poly_mul(to_a, to_b)
        critical = poly_sub(
            poly_mul(poly_derivative(numerator), denominator),
            poly_mul(numerator, poly_derivative(denominator)),
        )
        return sign_change_roots(critical, lo, hi)

    def best_in_strip(self, k: int) -> Optional[EdgeTop]:
        """Shortest tower with its base strictly inside strip k and its top on P"""
        xk, xk1 = self.xs[k], self.xs[k + 1]
        best: Optional[Tuple[Fraction, Fraction, Fraction]] = None
        for line, lo, hi in self._stretches(k):
            marks = [lo] + self._switches(k, line, lo, hi) + [hi]
            candidates = set(marks)
            for m0, m1 in zip(marks, marks[1:]):
                mid = (m0 + m1) / 2
                a, b = self.tangents(k, Point2(mid, y_at(line, mid)))
                candidates.update(self._stationary(k, line, a, b, m0, m1))
            for x in sorted(candidates):
                if not xk < x < xk1:
                    continue
                y = y_at(line, x)
                h = self.height_at(k, x, y)
                if best is None or h < best[0]:
                    best = (h, x, y)
        if best is None:
            return None
        h, x, y = best
        if h < 0:
            y = self.lift_to_base(k, x, y)
            h = self.height_at(k, x, y)
        logger.debug("strip %d: best edge top (%s, %s), height %s", k, x, y, h)
        return EdgeTop(k, x, y, h)

    def hang(self, k: int, x: Fraction, y: Fraction) -> List[Fraction]:
        """Heights of the realization hanging from the top (x, y) over strip k: each side
        takes the steepest admissible slope from the top, so the base edge is highest"""
        vertices = self.terrain.vertices
        heights: List[Fraction] = [Fraction(0)] * self.terrain.n
        slope = None
        for j in range(k + 1):
            v = vertices[j]
            s = (y - v.high) / (x - v.x)
            if slope is None or s > slope:
                slope = s
            heights[j] = y - slope * (x - v.x)
        slope = None
        for j in range(self.terrain.n - 1, k, -1):
            v = vertices[j]
            s = (v.high - y) / (v.x - x)
            if slope is None or s < slope:
                slope = s
            heights[j] = y + slope * (v.x - x)
        return heights
