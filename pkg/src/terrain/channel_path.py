"""
Taut-string shortest paths in x-monotone channels
A single left-to-right funnel sweep over the vertical portals at chain vertices.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from heapq import merge
from typing import Dict, Iterator, List, Optional, Tuple

from geometry.exact import Orientation, Point2, interpolate_y, orientation, to_scalar
from terrain.model import Channel, chain_values_at_sorted
from utils.errors import EndpointOutsideChannel, OutOfRange

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TautPath:
    points: Tuple[Point2, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def source(self) -> Point2:
        return self.points[0]

    @property
    def target(self) -> Point2:
        return self.points[-1]

    @property
    def bends(self) -> Tuple[Point2, ...]:
        return self.points[1:-1]

    def length(self) -> float:
        """Euclidean length as a float; for reporting only"""
        return sum(
            math.hypot(float(q.x - p.x), float(q.y - p.y))
            for p, q in zip(self.points, self.points[1:])
        )

    def mirrored(self) -> "TautPath":
        return TautPath(tuple(p.mirrored() for p in self.points))

    def reversed(self) -> "TautPath":
        return TautPath(tuple(reversed(self.points)))


@dataclass(frozen=True)
class TreeEntry:
    """Last edge (predecessor -> vertex) of the shortest path from the tree root"""

    vertex: Point2
    predecessor: Optional[Point2]
    length: float


def _portals(channel: Channel, x_lo: Fraction, x_hi: Fraction) -> Iterator[Tuple[Fraction, Fraction, Fraction]]:
    """(x, lower(x), upper(x)) at every chain vertex abscissa strictly inside (x_lo, x_hi)"""
    xs = []
    for x in merge((p.x for p in channel.lower), (p.x for p in channel.upper)):
        if x_lo < x < x_hi and (not xs or xs[-1] != x):
            xs.append(x)
    return zip(xs, chain_values_at_sorted(channel.lower, xs), chain_values_at_sorted(channel.upper, xs))


class _Funnel:
    """Deque funnel rooted at an apex; upper side turns left, lower side turns right"""

    def __init__(self, source: Point2):
        self.emitted: List[Point2] = []
        self.upper: deque = deque([source])
        self.lower: deque = deque([source])
        self.predecessor: Dict[Point2, Optional[Point2]] = {source: None}
        self.distance: Dict[Point2, float] = {source: 0.0}

    @property
    def apex(self) -> Point2:
        return self.upper[0]

    def _advance_apex(self, new_apex: Point2, from_upper: bool):
        self.emitted.append(self.apex)
        if from_upper:
            self.upper.popleft()
            self.lower = deque([new_apex])
        else:
            self.lower.popleft()
            self.upper = deque([new_apex])

    def _record(self, point: Point2, pred: Point2):
        if point in self.predecessor:
            return
        self.predecessor[point] = pred
        self.distance[point] = self.distance[pred] + math.hypot(
            float(point.x - pred.x), float(point.y - pred.y)
        )

    def add_upper(self, h: Point2):
        up = self.upper
        while len(up) >= 2 and orientation(up[-2], up[-1], h) != Orientation.LEFT:
            up.pop()
        if len(up) == 1:
            lo = self.lower
            while len(lo) >= 2 and orientation(lo[0], lo[1], h) == Orientation.RIGHT:
                self._advance_apex(lo[1], from_upper=False)
                lo = self.lower
            up = self.upper
        self._record(h, up[-1])
        up.append(h)

    def add_lower(self, h: Point2):
        lo = self.lower
        while len(lo) >= 2 and orientation(lo[-2], lo[-1], h) != Orientation.RIGHT:
            lo.pop()
        if len(lo) == 1:
            up = self.upper
            while len(up) >= 2 and orientation(up[0], up[1], h) == Orientation.LEFT:
                self._advance_apex(up[1], from_upper=True)
                up = self.upper
            lo = self.lower
        self._record(h, lo[-1])
        lo.append(h)

    def path_to_last_upper(self) -> List[Point2]:
        return self.emitted + list(self.upper)


def _without_collinear(points: List[Point2]) -> List[Point2]:
    out: List[Point2] = []
    for p in points:
        if out and out[-1] == p:
            continue
        while len(out) >= 2 and orientation(out[-2], out[-1], p) == Orientation.COLLINEAR:
            out.pop()
        out.append(p)
    return out


def _check_endpoint(channel: Channel, p: Point2):
    if not channel.contains(p):
        raise EndpointOutsideChannel(f"{p} is not inside the channel")


def taut_path(channel: Channel, s: Point2, t: Point2) -> TautPath:
    """Euclidean shortest path from s to t inside the channel"""
    _check_endpoint(channel, s)
    _check_endpoint(channel, t)
    if s.x > t.x:
        mirrored = taut_path(channel.mirrored(), s.mirrored(), t.mirrored())
        return mirrored.mirrored()
    if s.x == t.x:
        return TautPath((s,) if s == t else (s, t))

    funnel = _Funnel(s)
    portals = 0
    for x, lo, hi in _portals(channel, s.x, t.x):
        funnel.add_upper(Point2(x, hi))
        funnel.add_lower(Point2(x, lo))
        portals += 1
    funnel.add_upper(t)
    points = _without_collinear(funnel.path_to_last_upper())
    logger.debug("taut path %s -> %s: %d portals, %d bends", s, t, portals, len(points) - 2)
    return TautPath(tuple(points))


def shortest_path_tree(channel: Channel, s: Point2) -> Dict[Point2, TreeEntry]:
    """Last edges of the shortest paths from an extreme point s to every chain vertex
    (and every portal endpoint) of the channel"""
    if s.x == channel.x_last and s.x != channel.x_first:
        tree = shortest_path_tree(channel.mirrored(), s.mirrored())
        return {
            entry.vertex.mirrored(): TreeEntry(
                entry.vertex.mirrored(),
                entry.predecessor.mirrored() if entry.predecessor is not None else None,
                entry.length,
            )
            for entry in tree.values()
        }
    if s.x != channel.x_first:
        raise EndpointOutsideChannel(f"tree root {s} is not at an extreme of the channel")
    _check_endpoint(channel, s)

    funnel = _Funnel(s)
    for x, lo, hi in _portals(channel, s.x, channel.x_last + 1):
        funnel.add_upper(Point2(x, hi))
        funnel.add_lower(Point2(x, lo))
    return {
        p: TreeEntry(p, pred, funnel.distance[p]) for p, pred in funnel.predecessor.items()
    }


def path_from_tree(tree: Dict[Point2, TreeEntry], vertex: Point2) -> TautPath:
    """Walk predecessors back to the root; the path runs root -> vertex"""
    points = [vertex]
    entry = tree[vertex]
    while entry.predecessor is not None:
        points.append(entry.predecessor)
        entry = tree[entry.predecessor]
    points.reverse()
    return TautPath(tuple(points))


def crossing_with_vertical(path, x) -> Point2:
    """Intersection of an x-monotone path (either direction) with the vertical line at x"""
    points = list(path.points if isinstance(path, TautPath) else path)
    x = to_scalar(x)
    if points[0].x > points[-1].x:
        points.reverse()
    if x < points[0].x or x > points[-1].x:
        raise OutOfRange(f"x={x} outside the path's range [{points[0].x}, {points[-1].x}]")
    for p, q in zip(points, points[1:]):
        if p.x <= x <= q.x:
            if p.x == q.x:
                return p
            return Point2(x, interpolate_y(p, q, x))
    return points[0]
