"""
Visibility region of a fixed 1.5D polyline
The region seeing the whole polyline is the intersection of the upper halfplanes of
its edge lines, i.e. everything above the upper envelope of those lines.
"""

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from heapq import merge
from typing import Iterable, List, Optional, Sequence, Tuple

from geometry.exact import Line2, Point2, intersect_lines, line_through, to_scalar, y_at
from terrain.model import Tower1D, chain_values_at_sorted
from utils.errors import DegeneratePolyline

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UpperRegion:
    """{(x, y) : y >= boundary(x)}; pieces[i] is active on [breakpoints[i-1], breakpoints[i]]"""

    pieces: Tuple[Line2, ...]
    breakpoints: Tuple[Fraction, ...]

    def piece_index(self, x: Fraction) -> int:
        return bisect_right(self.breakpoints, x)

    def vertices(self) -> List[Point2]:
        return [
            Point2(b, y_at(self.pieces[i], b)) for i, b in enumerate(self.breakpoints)
        ]

    def evaluate_sorted(self, xs: Iterable[Fraction]) -> List[Fraction]:
        """Boundary heights at nondecreasing abscissas by a forward merge"""
        xs = list(xs)
        values = []
        i = bisect_left(self.breakpoints, xs[0]) if xs else 0
        last = len(self.breakpoints)
        for x in xs:
            while i < last and self.breakpoints[i] < x:
                i += 1
            values.append(y_at(self.pieces[i], x))
        return values

    def contains(self, p: Point2) -> bool:
        return p.y >= boundary_at(self, p.x)


def _edge_lines(polyline: Sequence[Point2]) -> List[Line2]:
    if len(polyline) < 2:
        raise DegeneratePolyline(f"polyline needs at least 2 vertices, got {len(polyline)}")
    lines = []
    for p, q in zip(polyline, polyline[1:]):
        if q.x <= p.x:
            raise DegeneratePolyline(f"polyline x must increase strictly: {p}, {q}")
        lines.append(line_through(p, q))
    return lines


def visibility_region(polyline: Sequence[Point2]) -> UpperRegion:
    lines = _edge_lines(polyline)
    # highest line per slope, slopes ascending
    by_slope = {}
    for line in lines:
        slope, intercept = line.slope, line.intercept
        if slope not in by_slope or intercept > by_slope[slope][1]:
            by_slope[slope] = (line, intercept)
    ordered = [by_slope[s][0] for s in sorted(by_slope)]

    hull: List[Line2] = []
    breaks: List[Fraction] = []
    for line in ordered:
        while hull:
            x = intersect_lines(hull[-1], line).x
            if breaks and x <= breaks[-1]:
                hull.pop()
                breaks.pop()
                continue
            break
        if hull:
            breaks.append(intersect_lines(hull[-1], line).x)
        hull.append(line)
    logger.debug("visibility region: %d edges, %d pieces", len(lines), len(hull))
    return UpperRegion(tuple(hull), tuple(breaks))


def boundary_at(region: UpperRegion, x) -> Fraction:
    x = to_scalar(x)
    return y_at(region.pieces[region.piece_index(x)], x)


def fixed_terrain_watchtower(
    polyline: Sequence[Point2], region: Optional[UpperRegion] = None
) -> Tower1D:
    """Shortest vertical tower on a precise polyline; smallest x wins ties. A region
    already computed for the same polyline may be passed in."""
    points = list(polyline)
    if region is None:
        region = visibility_region(points)
    x_lo, x_hi = points[0].x, points[-1].x
    inner_breaks = (b for b in region.breakpoints if x_lo < b < x_hi)
    xs = []
    for x in merge((p.x for p in points), inner_breaks):
        if not xs or xs[-1] != x:
            xs.append(x)
    terrain = chain_values_at_sorted(points, xs)
    boundary = region.evaluate_sorted(xs)
    best = 0
    for k in range(1, len(xs)):
        if boundary[k] - terrain[k] < boundary[best] - terrain[best]:
            best = k
    x = xs[best]
    return Tower1D.between(Point2(x, terrain[best]), Point2(x, boundary[best]))
