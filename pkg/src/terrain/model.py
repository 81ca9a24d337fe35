"""
Imprecise 1.5D terrain model
Intervals, realizations, towers and the corridor polygons Q, Q_p and Q-hat
"""

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from heapq import merge
from typing import Iterable, List, Sequence, Tuple

from geometry.exact import Orientation, Point2, interpolate_y, orientation, to_scalar
from utils.errors import (
    ApexOutsideStrip,
    IntervalInverted,
    InvalidChannel,
    NonMonotoneX,
    OutOfRange,
    RealizationOutOfBounds,
    TooFewVertices,
)

logger = logging.getLogger(__name__)


def chain_values_at_sorted(chain: Sequence[Point2], xs: Iterable[Fraction]) -> List[Fraction]:
    """Heights of an x-monotone chain at nondecreasing abscissas, in one forward pass
    starting from the segment under the first abscissa"""
    xs = list(xs)
    values = []
    last = len(chain) - 1
    j = max(0, _bisect_chain(chain, xs[0]) - 1) if xs and last > 0 else 0
    for x in xs:
        if x < chain[0].x or x > chain[last].x:
            raise OutOfRange(f"x={x} outside [{chain[0].x}, {chain[last].x}]")
        if last == 0:
            values.append(chain[0].y)
            continue
        while chain[j + 1].x < x:
            j += 1
        values.append(interpolate_y(chain[j], chain[j + 1], x))
    return values


def chain_value_at(chain: Sequence[Point2], x: Fraction) -> Fraction:
    """Height of an x-monotone chain at one abscissa (binary search)"""
    x = to_scalar(x)
    if x < chain[0].x or x > chain[-1].x:
        raise OutOfRange(f"x={x} outside [{chain[0].x}, {chain[-1].x}]")
    j = _bisect_chain(chain, x)
    if j < len(chain) and chain[j].x == x:
        return chain[j].y
    return interpolate_y(chain[j - 1], chain[j], x)


def _bisect_chain(chain: Sequence[Point2], x: Fraction) -> int:
    lo, hi = 0, len(chain)
    while lo < hi:
        mid = (lo + hi) // 2
        if chain[mid].x < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class UncertainVertex1D:
    x: Fraction
    low: Fraction
    high: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", to_scalar(self.x))
        object.__setattr__(self, "low", to_scalar(self.low))
        object.__setattr__(self, "high", to_scalar(self.high))
        if self.low > self.high:
            raise IntervalInverted(f"interval at x={self.x} has low {self.low} > high {self.high}")

    @property
    def top(self) -> Point2:
        return Point2(self.x, self.high)

    @property
    def bottom(self) -> Point2:
        return Point2(self.x, self.low)

    @property
    def is_precise(self) -> bool:
        return self.low == self.high


@dataclass(frozen=True)
class ImpreciseTerrain1D:
    vertices: Tuple[UncertainVertex1D, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise TooFewVertices(f"a terrain needs at least 2 intervals, got {len(self.vertices)}")
        for prev, cur in zip(self.vertices, self.vertices[1:]):
            if cur.x <= prev.x:
                raise NonMonotoneX(f"x must increase strictly: {prev.x} then {cur.x}")

    @property
    def n(self) -> int:
        return len(self.vertices)

    # derived columns are cached; a terrain is immutable
    @cached_property
    def xs(self) -> List[Fraction]:
        return [v.x for v in self.vertices]

    @cached_property
    def tops(self) -> List[Point2]:
        return [v.top for v in self.vertices]

    @cached_property
    def bottoms(self) -> List[Point2]:
        return [v.bottom for v in self.vertices]

    def index_of_x(self, x: Fraction) -> int:
        """Index of the interval at abscissa x, or -1"""
        xs = self.xs
        i = bisect_left(xs, x)
        return i if i < len(xs) and xs[i] == x else -1


@dataclass(frozen=True)
class Realization1D:
    """One height per interval; bends are extra points lying on the realized edges
    (for example a tower base inside an edge) and do not change the terrain"""

    terrain: ImpreciseTerrain1D
    heights: Tuple[Fraction, ...]
    bends: Tuple[Point2, ...] = field(default=())

    def __post_init__(self):
        heights = tuple(to_scalar(h) for h in self.heights)
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "bends", tuple(sorted(self.bends, key=lambda p: p.x)))
        if len(heights) != self.terrain.n:
            raise RealizationOutOfBounds(
                f"realization has {len(heights)} heights for {self.terrain.n} intervals"
            )
        for i, (v, h) in enumerate(zip(self.terrain.vertices, heights)):
            if not v.low <= h <= v.high:
                raise RealizationOutOfBounds(
                    f"height {h} at index {i} outside [{v.low}, {v.high}]"
                )
        vertices = self.vertex_points()
        xs = [p.x for p in vertices]
        for b in self.bends:
            k = bisect_right(xs, b.x)
            if k == 0 or k == len(xs) or xs[k - 1] == b.x:
                raise RealizationOutOfBounds(f"bend {b} is not strictly inside an edge")
            if orientation(vertices[k - 1], b, vertices[k]) != Orientation.COLLINEAR:
                raise RealizationOutOfBounds(f"bend {b} does not lie on its edge")

    def vertex_points(self) -> List[Point2]:
        return [Point2(v.x, h) for v, h in zip(self.terrain.vertices, self.heights)]

    def polyline(self) -> List[Point2]:
        """Realized vertices merged with the bends, sorted by x"""
        if not self.bends:
            return self.vertex_points()
        return list(merge(self.vertex_points(), self.bends, key=lambda p: p.x))

    def with_height(self, i: int, y) -> "Realization1D":
        heights = list(self.heights)
        heights[i] = to_scalar(y)
        return Realization1D(self.terrain, tuple(heights))

    def with_bend(self, point: Point2) -> "Realization1D":
        if self.terrain.index_of_x(point.x) >= 0 or point in self.bends:
            return self
        return Realization1D(self.terrain, self.heights, self.bends + (point,))


@dataclass(frozen=True)
class Tower1D:
    base: Point2
    top: Point2
    height: Fraction

    def __post_init__(self):
        object.__setattr__(self, "height", to_scalar(self.height))

    @classmethod
    def between(cls, base: Point2, top: Point2) -> "Tower1D":
        return cls(base, top, top.y - base.y)


@dataclass(frozen=True)
class Channel:
    """x-monotone corridor between a lower and an upper chain over a shared x-range"""

    lower: Tuple[Point2, ...]
    upper: Tuple[Point2, ...]

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(self.lower))
        object.__setattr__(self, "upper", tuple(self.upper))
        for name, chain in (("lower", self.lower), ("upper", self.upper)):
            if not chain:
                raise InvalidChannel(f"{name} chain is empty")
            for p, q in zip(chain, chain[1:]):
                if q.x <= p.x:
                    raise InvalidChannel(f"{name} chain is not x-monotone at {p}, {q}")
        if self.lower[0].x != self.upper[0].x or self.lower[-1].x != self.upper[-1].x:
            raise InvalidChannel("chains do not share their x-range")
        xs = list(merge((p.x for p in self.lower), (p.x for p in self.upper)))
        for x, lo, hi in zip(
            xs, chain_values_at_sorted(self.lower, xs), chain_values_at_sorted(self.upper, xs)
        ):
            if lo > hi:
                raise InvalidChannel(f"lower chain above upper chain at x={x}")

    @classmethod
    def trusted(cls, lower: Sequence[Point2], upper: Sequence[Point2]) -> "Channel":
        """Build without re-validating; for chains derived from an already valid channel"""
        channel = object.__new__(cls)
        object.__setattr__(channel, "lower", tuple(lower))
        object.__setattr__(channel, "upper", tuple(upper))
        return channel

    @property
    def x_first(self) -> Fraction:
        return self.lower[0].x

    @property
    def x_last(self) -> Fraction:
        return self.lower[-1].x

    def lower_at(self, x) -> Fraction:
        return chain_value_at(self.lower, x)

    def upper_at(self, x) -> Fraction:
        return chain_value_at(self.upper, x)

    def contains(self, p: Point2) -> bool:
        if p.x < self.x_first or p.x > self.x_last:
            return False
        return self.lower_at(p.x) <= p.y <= self.upper_at(p.x)

    def mirrored(self) -> "Channel":
        """Reflection x -> -x; the chains keep their roles"""
        return Channel.trusted(
            [p.mirrored() for p in reversed(self.lower)],
            [p.mirrored() for p in reversed(self.upper)],
        )


def validate_terrain(raw) -> ImpreciseTerrain1D:
    """Build a terrain from a mapping with "vertices" or a sequence of (x, low, high) entries"""
    if isinstance(raw, ImpreciseTerrain1D):
        return raw
    entries = raw.get("vertices", []) if isinstance(raw, dict) else raw
    vertices = []
    for entry in entries:
        if isinstance(entry, UncertainVertex1D):
            vertices.append(entry)
        elif isinstance(entry, dict):
            vertices.append(UncertainVertex1D(entry["x"], entry["low"], entry["high"]))
        else:
            x, low, high = entry
            vertices.append(UncertainVertex1D(x, low, high))
    return ImpreciseTerrain1D(tuple(vertices))


def polygon_Q(terrain: ImpreciseTerrain1D) -> Channel:
    # low <= high per interval, so the chains never cross
    return Channel.trusted(terrain.bottoms, terrain.tops)


def _strip_index(chain: Sequence[Point2], p: Point2) -> int:
    """k such that chain[k].x < p.x < chain[k + 1].x"""
    k = _bisect_chain(chain, p.x)
    if k == 0 or k == len(chain) or chain[k].x == p.x:
        raise ApexOutsideStrip(f"apex {p} is not strictly between two consecutive abscissas")
    return k - 1


def polygon_Qp(channel: Channel, p: Point2) -> Channel:
    """Union of the channel with the triangle spanned by p over its strip of the upper chain"""
    k = _strip_index(channel.upper, p)
    tk, tk1 = channel.upper[k], channel.upper[k + 1]
    if orientation(tk, tk1, p) != Orientation.LEFT:
        return channel
    upper = channel.upper[: k + 1] + (p,) + channel.upper[k + 1 :]
    return Channel.trusted(channel.lower, upper)


def split_apexes(channel: Channel, apexes: Iterable[Point2]) -> Tuple[List[Point2], List[Point2]]:
    """Partition apexes into those that extend the upper chain and those that do not"""
    retained, dropped = [], []
    seen = set()
    for p in sorted(apexes, key=lambda q: q.x):
        if p.x in seen:
            dropped.append(p)
            continue
        try:
            k = _strip_index(channel.upper, p)
        except ApexOutsideStrip:
            dropped.append(p)
            continue
        if orientation(channel.upper[k], channel.upper[k + 1], p) == Orientation.LEFT:
            retained.append(p)
            seen.add(p.x)
        else:
            dropped.append(p)
    return retained, dropped


def polygon_Qhat(channel: Channel, apexes: Iterable[Point2]) -> Channel:
    retained, dropped = split_apexes(channel, apexes)
    if dropped:
        logger.debug("Q-hat: %d apexes kept, %d left to plain Q", len(retained), len(dropped))
    if not retained:
        return channel
    upper = tuple(merge(channel.upper, retained, key=lambda q: q.x))
    return Channel.trusted(channel.lower, upper)


def terrain_height_at(realization: Realization1D, x) -> Fraction:
    return chain_value_at(realization.vertex_points(), x)


def realization_from_path(terrain: ImpreciseTerrain1D, path: Sequence[Point2]) -> Realization1D:
    """Heights read off an x-monotone path at every interval abscissa"""
    points = list(path)
    if points[0].x > points[-1].x:
        points.reverse()
    return Realization1D(terrain, tuple(chain_values_at_sorted(points, terrain.xs)))
