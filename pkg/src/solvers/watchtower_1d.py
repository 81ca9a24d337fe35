"""
Optimistic shortest watchtower on imprecise 1.5D terrains
Discrete (base at an interval) and continuous (base anywhere on the terrain) solvers,
the canonical-realization transformations they rely on, and certificate checking.
"""

import heapq
import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Callable, List, Sequence, Tuple, Union

from geometry.exact import Point2, interpolate_y, line_through, y_at
from solvers.region_edges import EdgeTop, StripSearch
from terrain.channel_path import (
    TautPath,
    TreeEntry,
    crossing_with_vertical,
    shortest_path_tree,
    taut_path,
)
from terrain.model import (
    Channel,
    ImpreciseTerrain1D,
    Realization1D,
    Tower1D,
    chain_values_at_sorted,
    polygon_Q,
    polygon_Qhat,
    polygon_Qp,
    realization_from_path,
    split_apexes,
    terrain_height_at,
)
from terrain.visibility import UpperRegion, boundary_at, fixed_terrain_watchtower, visibility_region
from utils.errors import CertificateFailure, OutOfRange, RealizationOutOfBounds

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscreteVertex:
    index: int

    def describe(self) -> dict:
        return {"kind": "discrete_vertex", "index": self.index}


@dataclass(frozen=True)
class ApexCandidate:
    apex: Point2

    def describe(self) -> dict:
        return {"kind": "apex", "apex": [str(self.apex.x), str(self.apex.y)]}


@dataclass(frozen=True)
class BaselinePi:
    def describe(self) -> dict:
        return {"kind": "baseline_pi"}


@dataclass(frozen=True)
class RegionEdgeTop:
    """Top inside an edge of P over strip k, with the realization hanging from it"""

    strip: int
    top: Point2

    def describe(self) -> dict:
        return {"kind": "region_edge", "strip": self.strip, "top": [str(self.top.x), str(self.top.y)]}


CandidateKind = Union[DiscreteVertex, ApexCandidate, BaselinePi, RegionEdgeTop]


@dataclass(frozen=True)
class Solution1D:
    height: Fraction
    realization: Realization1D
    tower: Tower1D
    candidate_kind: CandidateKind


@dataclass(frozen=True)
class CertificateVerdict:
    ok: bool
    reason: str = "ok"

    def __bool__(self):
        return self.ok


def sees(a: Point2, b: Point2, polyline: Sequence[Point2]) -> bool:
    """True iff segment ab is on or above the polyline over its x-range"""
    points = list(polyline.polyline() if isinstance(polyline, Realization1D) else polyline)
    lo_x, hi_x = points[0].x, points[-1].x
    for p in (a, b):
        if p.x < lo_x or p.x > hi_x:
            raise OutOfRange(f"{p} outside the terrain range [{lo_x}, {hi_x}]")
    if a.x > b.x:
        a, b = b, a
    xs = [p.x for p in points]
    if a.x == b.x:
        return min(a.y, b.y) >= chain_values_at_sorted(points, [a.x])[0]
    inner = xs[bisect_right(xs, a.x) : bisect_left(xs, b.x)]
    samples = [a.x] + inner + [b.x]
    terrain = chain_values_at_sorted(points, samples)
    return all(interpolate_y(a, b, x) >= y for x, y in zip(samples, terrain))


def raise_wings(realization: Realization1D) -> Realization1D:
    """Both end vertices moved to the tops of their intervals"""
    terrain = realization.terrain
    return realization.with_height(0, terrain.vertices[0].high).with_height(
        terrain.n - 1, terrain.vertices[-1].high
    )


def raise_base(realization: Realization1D, i: int) -> Realization1D:
    """Vertex i moved to the top of its interval"""
    return realization.with_height(i, realization.terrain.vertices[i].high)


def shorten_between(realization: Realization1D, i: int, j: int) -> Realization1D:
    """Realized subpath between vertices i < j replaced by the taut path inside Q"""
    if not 0 <= i < j < realization.terrain.n:
        raise OutOfRange(f"need 0 <= i < j < n, got i={i}, j={j}")
    terrain = realization.terrain
    points = realization.vertex_points()
    path = taut_path(polygon_Q(terrain), points[i], points[j])
    inner = chain_values_at_sorted(path.points, terrain.xs[i + 1 : j])
    heights = list(realization.heights)
    heights[i + 1 : j] = inner
    return Realization1D(terrain, tuple(heights))


def compute_pi(terrain: ImpreciseTerrain1D) -> TautPath:
    return taut_path(polygon_Q(terrain), terrain.tops[0], terrain.tops[-1])


def validate_certificate(
    terrain: ImpreciseTerrain1D, realization: Realization1D, tower: Tower1D
) -> CertificateVerdict:
    if realization.terrain != terrain:
        return CertificateVerdict(False, "terrain_mismatch")
    for v, h in zip(terrain.vertices, realization.heights):
        if not v.low <= h <= v.high:
            return CertificateVerdict(False, "interval_violation")
    base, top = tower.base, tower.top
    if base.x != top.x:
        return CertificateVerdict(False, "tower_not_vertical")
    if top.y < base.y:
        return CertificateVerdict(False, "tower_inverted")
    if tower.height != top.y - base.y:
        return CertificateVerdict(False, "height_mismatch")
    try:
        on_terrain = terrain_height_at(realization, base.x) == base.y
    except OutOfRange:
        on_terrain = False
    if not on_terrain:
        return CertificateVerdict(False, "base_off_terrain")
    if top.y < boundary_at(visibility_region(realization.vertex_points()), top.x):
        return CertificateVerdict(False, "top_outside_region")
    return CertificateVerdict(True)


def _certified(terrain: ImpreciseTerrain1D, solution: Solution1D) -> Solution1D:
    verdict = validate_certificate(terrain, solution.realization, solution.tower)
    if not verdict:
        raise CertificateFailure(
            f"{solution.candidate_kind} produced an invalid certificate: {verdict.reason}"
        )
    return solution


@dataclass
class _PiContext:
    """Shared first steps of both solvers: pi, its realization and its region"""

    terrain: ImpreciseTerrain1D
    q: Channel
    pi: TautPath
    pi_realization: Realization1D
    region: UpperRegion
    region_at_xs: List[Fraction]

    @classmethod
    def build(cls, terrain: ImpreciseTerrain1D) -> "_PiContext":
        q = polygon_Q(terrain)
        pi = taut_path(q, terrain.tops[0], terrain.tops[-1])
        region = visibility_region(pi.points)
        return cls(
            terrain,
            q,
            pi,
            realization_from_path(terrain, pi.points),
            region,
            region.evaluate_sorted(terrain.xs),
        )


def _discrete_candidates(ctx: _PiContext) -> List[Tuple[Fraction, int]]:
    return [
        (max(Fraction(0), p_y - v.high), i)
        for i, (v, p_y) in enumerate(zip(ctx.terrain.vertices, ctx.region_at_xs))
    ]


def _discrete_solution(ctx: _PiContext, i: int) -> Solution1D:
    v = ctx.terrain.vertices[i]
    p_y = ctx.region_at_xs[i]
    base = v.top
    top = Point2(v.x, max(p_y, v.high))
    return Solution1D(
        top.y - base.y, raise_base(ctx.pi_realization, i), Tower1D.between(base, top), DiscreteVertex(i)
    )


def solve_discrete_1d(terrain: ImpreciseTerrain1D) -> Solution1D:
    ctx = _PiContext.build(terrain)
    candidates = _discrete_candidates(ctx)
    if logger.isEnabledFor(logging.DEBUG):
        for height, i in candidates:
            logger.debug("discrete candidate %d: height %s", i, height)
    height, best = min(candidates)
    solution = _certified(terrain, _discrete_solution(ctx, best))
    logger.info("discrete optimum %s at index %d (n=%d)", height, best, terrain.n)
    return solution


def _apex_base_y(
    terrain: ImpreciseTerrain1D, p: Point2, k: int, rho1: Sequence[Point2], rho2: Sequence[Point2]
) -> Fraction:
    """Height under p of the edge joining the crossings of rho1 at x_k and rho2 at x_k+1"""
    w_k = crossing_with_vertical(rho1, terrain.xs[k])
    w_k1 = crossing_with_vertical(rho2, terrain.xs[k + 1])
    return y_at(line_through(w_k, w_k1), p.x)


def _apex_solution(
    terrain: ImpreciseTerrain1D, p: Point2, k: int, rho1: Sequence[Point2], rho2: Sequence[Point2]
) -> Solution1D:
    """Realization: rho1 up to its crossing at x_k, the edge to rho2's crossing at x_k+1, then rho2"""
    xs = terrain.xs
    base_y = _apex_base_y(terrain, p, k, rho1, rho2)
    heights = chain_values_at_sorted(_left_to_right(rho1), xs[: k + 1]) + chain_values_at_sorted(
        _left_to_right(rho2), xs[k + 1 :]
    )
    base = Point2(p.x, base_y)
    top = Point2(p.x, max(p.y, base_y))
    realization = Realization1D(terrain, tuple(heights)).with_bend(base)
    return Solution1D(top.y - base.y, realization, Tower1D.between(base, top), ApexCandidate(p))


def _left_to_right(points: Sequence[Point2]) -> List[Point2]:
    points = list(points.points if isinstance(points, TautPath) else points)
    return points if points[0].x <= points[-1].x else points[::-1]


def _path_back_to(tree, p: Point2, stop: Callable[[Point2], bool]) -> List[Point2]:
    """Suffix of the tree path ending at p, walked back until a point satisfies stop"""
    points = [p]
    entry: TreeEntry = tree[p]
    while entry.predecessor is not None and not stop(points[-1]):
        points.append(entry.predecessor)
        entry = tree[entry.predecessor]
    return points[::-1]


def _apex_strip(terrain: ImpreciseTerrain1D, p: Point2) -> int:
    xs = terrain.xs
    return bisect_left(xs, p.x) - 1


def _materialize_apex(ctx: _PiContext, p: Point2, k: int) -> Solution1D:
    q_p = polygon_Qp(ctx.q, p)
    t1, tn = ctx.terrain.tops[0], ctx.terrain.tops[-1]
    rho1 = taut_path(q_p, t1, p)
    rho2 = taut_path(q_p, p, tn)
    return _apex_solution(ctx.terrain, p, k, rho1.points, rho2.points)


def _apex_keys(ctx: _PiContext) -> List[Tuple[Fraction, Point2, int, str]]:
    """Heap keys of the apex candidates: exact heights from the Q-hat shortest-path trees
    for apexes above the top chain, and for apexes inside Q the height over the top
    chain, a lower bound that is materialized only when it reaches the front"""
    terrain = ctx.terrain
    xs = terrain.xs
    x1, xn = xs[0], xs[-1]
    apexes = [
        p for p in ctx.region.vertices() if x1 < p.x < xn and terrain.index_of_x(p.x) < 0
    ]
    if not apexes:
        return []
    retained, inside = split_apexes(ctx.q, apexes)
    keys = []
    if retained:
        q_hat = polygon_Qhat(ctx.q, retained)
        from_left = shortest_path_tree(q_hat, terrain.tops[0])
        from_right = shortest_path_tree(q_hat, terrain.tops[-1])
        for p in retained:
            k = _apex_strip(terrain, p)
            rho1 = _path_back_to(from_left, p, lambda u, x=xs[k]: u.x <= x)
            rho2 = _path_back_to(from_right, p, lambda u, x=xs[k + 1]: u.x >= x)
            base_y = _apex_base_y(terrain, p, k, rho1, rho2)
            keys.append((max(Fraction(0), p.y - base_y), p, k, "estimate"))
    for p in inside:
        k = _apex_strip(terrain, p)
        over_tops = p.y - interpolate_y(terrain.tops[k], terrain.tops[k + 1], p.x)
        keys.append((max(Fraction(0), over_tops), p, k, "bound"))
    for height, p, _, kind in keys:
        logger.debug("apex candidate %s: %s %s", p, kind, height)
    return keys


def _edge_top_solution(ctx: _PiContext, search: StripSearch, edge: EdgeTop) -> Solution1D:
    """Realization hanging from the top over its strip, base on the strip's edge"""
    terrain = ctx.terrain
    k = edge.strip
    heights = search.hang(k, edge.x, edge.y)
    left = Point2(terrain.xs[k], heights[k])
    right = Point2(terrain.xs[k + 1], heights[k + 1])
    base = Point2(edge.x, interpolate_y(left, right, edge.x))
    top = Point2(edge.x, edge.y)
    realization = Realization1D(terrain, tuple(heights)).with_bend(base)
    return Solution1D(top.y - base.y, realization, Tower1D.between(base, top), RegionEdgeTop(k, top))


def solve_continuous_1d(terrain: ImpreciseTerrain1D) -> Solution1D:
    ctx = _PiContext.build(terrain)
    search = StripSearch(terrain, ctx.region)
    xs = terrain.xs

    # (height, tie order, seq, payload); tie order: discrete by index, apexes by x,
    # baseline, then tops inside P's edges by x. Strip entries carry lower bounds and
    # are expanded into their best edge top when they reach the front.
    seq = count()
    queue = []
    for height, i in _discrete_candidates(ctx):
        heapq.heappush(queue, (height, (0, Fraction(i)), next(seq), ("discrete", i)))
    baseline = fixed_terrain_watchtower(ctx.pi.points, ctx.region)
    heapq.heappush(queue, (baseline.height, (2, Fraction(0)), next(seq), ("baseline", baseline)))
    for height, p, k, kind in _apex_keys(ctx):
        heapq.heappush(queue, (height, (1, p.x), next(seq), (kind, (p, k))))
    for k in range(terrain.n - 1):
        heapq.heappush(queue, (search.lower_bound(k), (3, xs[k]), next(seq), ("strip", k)))

    while queue:
        height, tie, _, (kind, payload) = heapq.heappop(queue)
        if kind == "discrete":
            solution = _certified(terrain, _discrete_solution(ctx, payload))
        elif kind == "baseline":
            solution = _certified(
                terrain, Solution1D(payload.height, ctx.pi_realization, payload, BaselinePi())
            )
        elif kind == "strip":
            edge = search.best_in_strip(payload)
            if edge is not None:
                heapq.heappush(queue, (edge.height, (3, edge.x), next(seq), ("edge_top", edge)))
            continue
        elif kind == "edge_top":
            try:
                solution = _edge_top_solution(ctx, search, payload)
            except RealizationOutOfBounds as exc:
                logger.warning("edge top %s rejected: %s", payload, exc)
                continue
            verdict = validate_certificate(terrain, solution.realization, solution.tower)
            if not verdict:
                logger.warning("edge top %s rejected: %s", payload, verdict.reason)
                continue
        else:
            p, k = payload
            solution = _materialize_apex(ctx, p, k)
            if kind != "exact" and solution.height != height:
                logger.debug(
                    "apex %s: %s %s, materialized %s; re-ranking", p, kind, height, solution.height
                )
                heapq.heappush(queue, (solution.height, tie, next(seq), ("exact", (p, k))))
                continue
            verdict = validate_certificate(terrain, solution.realization, solution.tower)
            if not verdict:
                logger.warning("apex %s rejected: %s", p, verdict.reason)
                continue
        logger.info(
            "continuous optimum %s from %s (n=%d)", solution.height, solution.candidate_kind, terrain.n
        )
        return solution
    # the baseline is always in the queue and always certifies
    raise CertificateFailure("no candidate produced a valid certificate")
