"""
Imprecise 2.5D terrain (triangulated, one z-interval per vertex)
and exact line-of-sight predicates over its realizations.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from geometry.exact import Point2, Point3, cross, plane_z_at, to_scalar
from utils.errors import (
    DegenerateBlocker,
    IntervalInverted,
    InvalidMesh,
    OutsideDomain,
    RealizationOutOfBounds,
    TooFewVertices,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class UncertainVertex2_5D:
    x: Fraction
    y: Fraction
    low: Fraction
    high: Fraction

    def __post_init__(self):
        for name in ("x", "y", "low", "high"):
            object.__setattr__(self, name, to_scalar(getattr(self, name)))
        if self.low > self.high:
            raise IntervalInverted(
                f"interval at ({self.x}, {self.y}) has low {self.low} > high {self.high}"
            )

    @property
    def xy(self) -> Point2:
        return Point2(self.x, self.y)


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _segments_cross(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool:
    """Closed projected segments share a point"""
    d1 = _sign(cross(q1.x, q1.y, q2.x, q2.y, p1.x, p1.y))
    d2 = _sign(cross(q1.x, q1.y, q2.x, q2.y, p2.x, p2.y))
    d3 = _sign(cross(p1.x, p1.y, p2.x, p2.y, q1.x, q1.y))
    d4 = _sign(cross(p1.x, p1.y, p2.x, p2.y, q2.x, q2.y))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    def on_segment(a: Point2, b: Point2, c: Point2) -> bool:
        return min(a.x, b.x) <= c.x <= max(a.x, b.x) and min(a.y, b.y) <= c.y <= max(a.y, b.y)

    return (
        (d1 == 0 and on_segment(q1, q2, p1))
        or (d2 == 0 and on_segment(q1, q2, p2))
        or (d3 == 0 and on_segment(p1, p2, q1))
        or (d4 == 0 and on_segment(p1, p2, q2))
    )


@dataclass(frozen=True)
class ImpreciseMesh2_5D:
    vertices: Tuple[UncertainVertex2_5D, ...]
    triangles: Tuple[Tuple[int, int, int], ...]
    edges: Tuple[Edge, ...] = field(init=False, repr=False, compare=False)
    edge_faces: Dict[Edge, Tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        object.__setattr__(self, "vertices", vertices)
        n = len(vertices)
        if n < 3:
            raise TooFewVertices(f"a mesh needs at least 3 vertices, got {n}")
        if len({v.xy for v in vertices}) != n:
            raise InvalidMesh("vertex projections must be pairwise distinct")
        if not self.triangles:
            raise InvalidMesh("a mesh needs at least one triangle")

        triangles = []
        for tri in self.triangles:
            i, j, k = (int(t) for t in tri)
            if len({i, j, k}) != 3 or not all(0 <= t < n for t in (i, j, k)):
                raise InvalidMesh(f"bad triangle {tri}")
            a, b, c = vertices[i], vertices[j], vertices[k]
            area = cross(a.x, a.y, b.x, b.y, c.x, c.y)
            if area == 0:
                raise InvalidMesh(f"triangle {tri} has zero area")
            # counterclockwise in projection
            triangles.append((i, j, k) if area > 0 else (i, k, j))
        object.__setattr__(self, "triangles", tuple(triangles))

        faces: Dict[Edge, List[int]] = {}
        for f, (i, j, k) in enumerate(triangles):
            for a, b in ((i, j), (j, k), (k, i)):
                faces.setdefault((min(a, b), max(a, b)), []).append(f)
        for edge, adjacent in faces.items():
            if len(adjacent) > 2:
                raise InvalidMesh(f"edge {edge} borders {len(adjacent)} triangles")
        edges = tuple(sorted(faces))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "edge_faces", {e: tuple(fs) for e, fs in faces.items()})
        self._check_planar()

    def _check_planar(self):
        pts = [v.xy for v in self.vertices]
        for a in range(len(self.edges)):
            i, j = self.edges[a]
            for b in range(a + 1, len(self.edges)):
                k, m = self.edges[b]
                shared = {i, j} & {k, m}
                if shared:
                    # only the shared endpoint may be common: reject overlapping collinear edges
                    (s,) = shared
                    o1 = j if s == i else i
                    o2 = m if s == k else k
                    p, q, r = pts[s], pts[o1], pts[o2]
                    if cross(p.x, p.y, q.x, q.y, r.x, r.y) == 0 and (
                        (q.x - p.x) * (r.x - p.x) + (q.y - p.y) * (r.y - p.y) > 0
                    ):
                        raise InvalidMesh(f"edges {self.edges[a]} and {self.edges[b]} overlap")
                    continue
                if _segments_cross(pts[i], pts[j], pts[k], pts[m]):
                    raise InvalidMesh(f"edges {self.edges[a]} and {self.edges[b]} cross")
        for tri in self.triangles:
            for v, p in enumerate(pts):
                if v not in tri and self._in_triangle(tri, p, strict=True):
                    raise InvalidMesh(f"vertex {v} lies inside triangle {tri}")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def _in_triangle(self, tri: Sequence[int], p: Point2, strict: bool = False) -> bool:
        a, b, c = (self.vertices[t] for t in tri)
        signs = (
            cross(a.x, a.y, b.x, b.y, p.x, p.y),
            cross(b.x, b.y, c.x, c.y, p.x, p.y),
            cross(c.x, c.y, a.x, a.y, p.x, p.y),
        )
        if strict:
            return all(s > 0 for s in signs)
        return all(s >= 0 for s in signs)

    def locate(self, x, y) -> int:
        """Index of a triangle whose closed projection contains (x, y)"""
        p = Point2(x, y)
        for f, tri in enumerate(self.triangles):
            if self._in_triangle(tri, p):
                return f
        raise OutsideDomain(f"({p.x}, {p.y}) is outside the triangulation")

    def opposite_vertices(self, edge: Edge) -> List[int]:
        """Third vertex of each triangle bordering the edge"""
        result = []
        for f in self.edge_faces[edge]:
            (third,) = set(self.triangles[f]) - set(edge)
            result.append(third)
        return result

    def tops(self) -> "Realization2_5D":
        return Realization2_5D(self, tuple(v.high for v in self.vertices))

    def bottoms(self) -> "Realization2_5D":
        return Realization2_5D(self, tuple(v.low for v in self.vertices))


@dataclass(frozen=True)
class Realization2_5D:
    mesh: ImpreciseMesh2_5D
    z: Tuple[Fraction, ...]

    def __post_init__(self):
        z = tuple(to_scalar(v) for v in self.z)
        object.__setattr__(self, "z", z)
        if len(z) != self.mesh.n:
            raise RealizationOutOfBounds(f"realization has {len(z)} values for {self.mesh.n} vertices")
        for i, (v, zi) in enumerate(zip(self.mesh.vertices, z)):
            if not v.low <= zi <= v.high:
                raise RealizationOutOfBounds(f"z={zi} at vertex {i} outside [{v.low}, {v.high}]")

    def point(self, i: int) -> Point3:
        v = self.mesh.vertices[i]
        return Point3(v.x, v.y, self.z[i])

    def with_z(self, i: int, value) -> "Realization2_5D":
        z = list(self.z)
        z[i] = to_scalar(value)
        return Realization2_5D(self.mesh, tuple(z))

    def height_at(self, x, y) -> Fraction:
        i, j, k = self.mesh.triangles[self.mesh.locate(x, y)]
        return plane_z_at(self.point(i), self.point(j), self.point(k), to_scalar(x), to_scalar(y))


@dataclass(frozen=True)
class Viewpoint2_5D:
    """Tower of height tower_height on vertex base_vertex, realized at its top"""

    base_vertex: int
    tower_height: Fraction

    def __post_init__(self):
        object.__setattr__(self, "tower_height", to_scalar(self.tower_height))
        if self.tower_height < 0:
            raise ValueError(f"tower height must be >= 0, got {self.tower_height}")

    def point(self, mesh: ImpreciseMesh2_5D) -> Point3:
        v = mesh.vertices[self.base_vertex]
        return Point3(v.x, v.y, v.high + self.tower_height)


@dataclass(frozen=True)
class OcclusionInterval:
    s_lo: Fraction
    s_hi: Fraction
    blocker: Edge


def passes_below(a: Point3, b: Point3, p: Point3, q: Point3) -> bool:
    """Segment ab passes strictly below segment pq somewhere over their common projection"""
    dx, dy = b.x - a.x, b.y - a.y
    ex, ey = q.x - p.x, q.y - p.y
    wx, wy = p.x - a.x, p.y - a.y
    denom = dx * ey - dy * ex
    if denom != 0:
        t = (wx * ey - wy * ex) / denom
        u = (wx * dy - wy * dx) / denom
        if not (0 <= t <= 1 and 0 <= u <= 1):
            return False
        return a.z + t * (b.z - a.z) < p.z + u * (q.z - p.z)
    if dx == 0 and dy == 0:
        # vertical sight segment over the point a
        if wx * ey - wy * ex != 0:
            return False
        u = -(wx * ex + wy * ey) / (ex * ex + ey * ey)
        if not 0 <= u <= 1:
            return False
        return min(a.z, b.z) < p.z + u * (q.z - p.z)
    if wx * dy - wy * dx != 0:
        return False
    # collinear projections: compare at the ends of the overlap
    dd = dx * dx + dy * dy
    tp = (wx * dx + wy * dy) / dd
    tq = ((q.x - a.x) * dx + (q.y - a.y) * dy) / dd
    lo, hi = max(Fraction(0), min(tp, tq)), min(Fraction(1), max(tp, tq))
    if lo > hi:
        return False
    for t in (lo, hi):
        u = (t - tp) / (tq - tp)
        if a.z + t * (b.z - a.z) < p.z + u * (q.z - p.z):
            return True
    return False


def _edge_points(r: Realization2_5D, edge: Edge) -> Tuple[Point3, Point3]:
    return r.point(edge[0]), r.point(edge[1])


def segment_above_terrain(v: Point3, p: Point3, r: Realization2_5D) -> bool:
    """True iff no part of segment vp lies strictly below the realized terrain"""
    for end in (v, p):
        if end.z < r.height_at(end.x, end.y):
            return False
    for edge in r.mesh.edges:
        if passes_below(v, p, *_edge_points(r, edge)):
            return False
    return True


def _linear_roots(f0: Fraction, f1: Fraction) -> List[Fraction]:
    """Root in (0, 1) of the linear function through (0, f0) and (1, f1)"""
    if f0 == f1 or f0 == 0 or f1 == 0:
        return []
    root = f0 / (f0 - f1)
    return [root] if 0 < root < 1 else []


def _critical_parameters(v: Point3, a: Point3, b: Point3, p: Point3, q: Point3) -> List[Fraction]:
    """Parameters along ab at which the sign conditions of passes_below(v, e(s), pq) may change"""

    def along(s: int) -> Point3:
        return a if s == 0 else b

    def quantities(s: int) -> List[Fraction]:
        e = along(s)
        dx, dy = e.x - v.x, e.y - v.y
        ex, ey = q.x - p.x, q.y - p.y
        wx, wy = p.x - v.x, p.y - v.y
        denom = dx * ey - dy * ex
        num_t = wx * ey - wy * ex
        num_u = wx * dy - wy * dx
        z_num = num_t * (e.z - v.z) + (v.z - p.z) * denom - num_u * (q.z - p.z)
        values = [denom, num_t - denom, num_u, num_u - denom, z_num]
        # collinear projections, measured along the fixed direction of ab: where e(s)
        # passes v and the blocker endpoints, and where heights cross at those points
        lx, ly = b.x - a.x, b.y - a.y
        mu = dx * lx + dy * ly
        values.append(mu)
        for end in (p, q):
            lam = (end.x - v.x) * lx + (end.y - v.y) * ly
            values.append(mu - lam)
            values.append(lam * (e.z - v.z) + (v.z - end.z) * mu)
        ee = ex * ex + ey * ey
        values.append((e.z - p.z) * ee - ((e.x - p.x) * ex + (e.y - p.y) * ey) * (q.z - p.z))
        return values

    roots = {Fraction(0), Fraction(1)}
    for f0, f1 in zip(quantities(0), quantities(1)):
        roots.update(_linear_roots(f0, f1))
    return sorted(roots)


def occlusion_interval(
    v: Point3, target: Edge, blocker: Edge, r: Realization2_5D
) -> Optional[OcclusionInterval]:
    """Closed hull of the parameters s in [0, 1] at which the sight segment from v to
    the target edge point e(s) passes strictly below the blocker edge"""
    if tuple(sorted(target)) == tuple(sorted(blocker)):
        raise DegenerateBlocker(f"edge {target} cannot block itself")
    a, b = _edge_points(r, target)
    p, q = _edge_points(r, blocker)

    def blocked(s: Fraction) -> bool:
        e = Point3(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), a.z + s * (b.z - a.z))
        return passes_below(v, e, p, q)

    critical = _critical_parameters(v, a, b, p, q)
    members = [s for s in critical if blocked(s)]
    for lo, hi in zip(critical, critical[1:]):
        if blocked((lo + hi) / 2):
            members.extend((lo, hi))
    if not members:
        return None
    return OcclusionInterval(min(members), max(members), blocker)


def _fan_blocked(v: Point3, a: Point3, b: Point3, p: Point3, q: Point3) -> bool:
    """Some sight segment from v to a point of ab passes strictly below pq; the
    projections of v, a, b must not be collinear"""
    tri = (v, a, b) if cross(v.x, v.y, a.x, a.y, b.x, b.y) > 0 else (v, b, a)
    ex, ey = q.x - p.x, q.y - p.y
    u_lo, u_hi = Fraction(0), Fraction(1)
    for s, t in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
        c0 = cross(s.x, s.y, t.x, t.y, p.x, p.y)
        c1 = cross(s.x, s.y, t.x, t.y, q.x, q.y)
        # inside iff c0 + u (c1 - c0) >= 0
        if c0 < 0 and c1 < 0:
            return False
        if c0 < 0:
            u_lo = max(u_lo, c0 / (c0 - c1))
        elif c1 < 0:
            u_hi = min(u_hi, c0 / (c0 - c1))
        if u_lo > u_hi:
            return False
    for u in (u_lo, u_hi):
        x, y = p.x + u * ex, p.y + u * ey
        if p.z + u * (q.z - p.z) > plane_z_at(v, a, b, x, y):
            return True
    return False


def _boxes_apart(v: Point3, a: Point3, b: Point3, p: Point3, q: Point3) -> bool:
    return (
        max(p.x, q.x) < min(v.x, a.x, b.x)
        or min(p.x, q.x) > max(v.x, a.x, b.x)
        or max(p.y, q.y) < min(v.y, a.y, b.y)
        or min(p.y, q.y) > max(v.y, a.y, b.y)
    )


def edge_fully_visible(v: Point3, target: Edge, r: Realization2_5D) -> bool:
    a, b = _edge_points(r, target)
    fan_degenerate = cross(v.x, v.y, a.x, a.y, b.x, b.y) == 0
    key = tuple(sorted(target))
    for blocker in r.mesh.edges:
        if blocker == key:
            continue
        p, q = _edge_points(r, blocker)
        if _boxes_apart(v, a, b, p, q):
            continue
        if fan_degenerate:
            if occlusion_interval(v, key, blocker, r) is not None:
                return False
        elif _fan_blocked(v, a, b, p, q):
            return False
    return True


def sees_all_from(point: Point3, r: Realization2_5D) -> bool:
    """Every edge of the realization is visible from an arbitrary point above the domain"""
    if point.z < r.height_at(point.x, point.y):
        return False
    return all(edge_fully_visible(point, edge, r) for edge in r.mesh.edges)


def sees_all(viewpoint: Viewpoint2_5D, r: Realization2_5D) -> bool:
    return sees_all_from(viewpoint.point(r.mesh), r)


def invisible_edges(point: Point3, r: Realization2_5D) -> List[Edge]:
    return [edge for edge in r.mesh.edges if not edge_fully_visible(point, edge, r)]


def blockers_of(point: Point3, target: Point3, r: Realization2_5D) -> List[Edge]:
    """Edges under which the sight segment point -> target passes"""
    return [edge for edge in r.mesh.edges if passes_below(point, target, *_edge_points(r, edge))]
