"""
Zero-watchtower decision and OPT + epsilon scheme on imprecise 2.5D terrains
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional

from geometry.exact import to_scalar
from terrain.mesh import (
    ImpreciseMesh2_5D,
    Realization2_5D,
    Viewpoint2_5D,
    blockers_of,
    invisible_edges,
    sees_all,
)
from utils.errors import BudgetExceeded, NonPositiveEpsilon
from utils.settings import settings

logger = logging.getLogger(__name__)


class GuardSolution(NamedTuple):
    vertex: int
    height: Fraction
    realization: Realization2_5D


def _lower(r: Realization2_5D, i: int, base: int) -> Realization2_5D:
    if i == base:
        return r
    low = r.mesh.vertices[i].low
    return r if r.z[i] == low else r.with_z(i, low)


def greedy_guard_from(viewpoint: Viewpoint2_5D, mesh: ImpreciseMesh2_5D) -> Optional[Realization2_5D]:
    """Start from the highest realization and only ever lower vertices to their
    bottoms until everything is visible from the viewpoint, or nothing can move"""
    base = viewpoint.base_vertex
    r = mesh.tops()
    v = viewpoint.point(mesh)
    while True:
        if sees_all(viewpoint, r):
            return r

        # hidden vertices farthest first: drop every edge the sight segment passes under,
        # moving on to the next one while nothing lowers
        hidden = []
        for i in range(mesh.n):
            if i == base:
                continue
            blockers = blockers_of(v, r.point(i), r)
            if blockers:
                hidden.append((-v.squared_distance(r.point(i)), i, blockers))
        changed = False
        for _, target, blockers in sorted(hidden):
            before = r
            for a, b in blockers:
                r = _lower(_lower(r, a, base), b, base)
            if r is not before:
                logger.debug("view %s: vertex %d hidden by %s, lowered", viewpoint, target, blockers)
                changed = True
                break

        if not changed:
            # hidden edge with visible endpoints: drop the apex of an adjacent face
            for edge in invisible_edges(v, r):
                for apex in mesh.opposite_vertices(edge):
                    lowered = _lower(r, apex, base)
                    if lowered is not r:
                        logger.debug("view %s: edge %s hidden, lowered apex %d", viewpoint, edge, apex)
                        r = lowered
                        changed = True
                        break
                if changed:
                    break

        if not changed:
            logger.debug("view %s: nothing left to lower", viewpoint)
            return None


def _guard_at(args) -> Optional[Realization2_5D]:
    mesh, vertex, height = args
    return greedy_guard_from(Viewpoint2_5D(vertex, height), mesh)


def _first_guard(
    mesh: ImpreciseMesh2_5D, height: Fraction, workers: int
) -> Optional[GuardSolution]:
    """Smallest base vertex from which the greedy guards the terrain at this height"""
    jobs = [(mesh, vertex, height) for vertex in range(mesh.n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results: Iterable = list(pool.map(_guard_at, jobs))
    else:
        results = map(_guard_at, jobs)
    for vertex, r in enumerate(results):
        if r is not None:
            return GuardSolution(vertex, height, r)
    return None


def _workers(workers: Optional[int]) -> int:
    return int(workers if workers is not None else settings.get("solver.workers", 1))


def zero_watchtower(mesh: ImpreciseMesh2_5D, workers: Optional[int] = None) -> Optional[GuardSolution]:
    solution = _first_guard(mesh, Fraction(0), _workers(workers))
    if solution is None:
        logger.info("no zero-watchtower found (n=%d)", mesh.n)
    else:
        logger.info("zero-watchtower at vertex %d (n=%d)", solution.vertex, mesh.n)
    return solution


def height_cap(
    mesh: ImpreciseMesh2_5D, epsilon, max_doublings: Optional[int] = None
) -> GuardSolution:
    """Smallest epsilon * 2^j guarding the all-bottoms realization (base vertex at its top)"""
    epsilon = _check_epsilon(epsilon)
    if max_doublings is None:
        max_doublings = int(settings.get("solver.max_cap_doublings", 64))
    height = epsilon
    for _ in range(max_doublings + 1):
        for vertex in range(mesh.n):
            r = mesh.bottoms().with_z(vertex, mesh.vertices[vertex].high)
            if sees_all(Viewpoint2_5D(vertex, height), r):
                logger.debug("height cap %s from vertex %d", height, vertex)
                return GuardSolution(vertex, height, r)
        height *= 2
    raise BudgetExceeded(f"no guarding height found within {max_doublings} doublings of {epsilon}")


def _check_epsilon(epsilon) -> Fraction:
    epsilon = to_scalar(epsilon)
    if epsilon <= 0:
        raise NonPositiveEpsilon(f"epsilon must be positive, got {epsilon}")
    return epsilon


def approx_watchtower(
    mesh: ImpreciseMesh2_5D,
    epsilon,
    search: Optional[str] = None,
    workers: Optional[int] = None,
) -> GuardSolution:
    """Guarding tower whose height is a multiple of epsilon, scanning k * epsilon upward"""
    epsilon = _check_epsilon(epsilon)
    workers = _workers(workers)
    search = search or settings.get("solver.height_search", "linear")
    if search not in ("linear", "binary"):
        raise ValueError(f"unknown height search {search!r}")

    zero = zero_watchtower(mesh, workers)
    if zero is not None:
        return zero

    cap = height_cap(mesh, epsilon)
    steps = int(cap.height / epsilon)

    def attempt(k: int) -> Optional[GuardSolution]:
        found = _first_guard(mesh, k * epsilon, workers)
        if found is None and k == steps:
            # the cap realization is certified
            return cap
        return found

    if search == "linear":
        solution = _scan_linear(attempt, steps)
    else:
        solution = _scan_binary(attempt, steps)
    logger.info(
        "approximate watchtower %s (= %d * %s) at vertex %d",
        solution.height, int(solution.height / epsilon), epsilon, solution.vertex,
    )
    return solution


def _scan_linear(attempt: Callable[[int], Optional[GuardSolution]], steps: int) -> GuardSolution:
    for k in range(1, steps + 1):
        found = attempt(k)
        if found is not None:
            return found
    raise AssertionError("the cap step always succeeds")


def _scan_binary(attempt: Callable[[int], Optional[GuardSolution]], steps: int) -> GuardSolution:
    # step 0 failed (no zero-watchtower); the cap step succeeds
    lo, hi = 0, steps
    best = attempt(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        found = attempt(mid)
        if found is not None:
            hi, best = mid, found
        else:
            lo = mid
    return best
