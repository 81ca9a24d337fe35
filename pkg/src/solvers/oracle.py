"""
Brute-force baselines over discretized realizations
Kept deliberately simple; used by tests and the oracle subcommand, never by the solvers.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterator, List, Optional, Sequence, Tuple

from geometry.exact import Point2, Point3, to_scalar
from solvers.watchtower_2_5d import height_cap
from terrain.mesh import ImpreciseMesh2_5D, Realization2_5D, sees_all_from
from terrain.model import ImpreciseTerrain1D
from terrain.visibility import fixed_terrain_watchtower, visibility_region
from utils.errors import BudgetExceeded
from utils.settings import settings

logger = logging.getLogger(__name__)

MODES = ("discrete", "continuous")


@dataclass(frozen=True)
class GridSpec:
    samples_per_interval: int

    def __post_init__(self):
        if self.samples_per_interval < 2:
            raise ValueError(f"a grid needs at least 2 samples, got {self.samples_per_interval}")

    def values(self, low: Fraction, high: Fraction) -> List[Fraction]:
        """Evenly spaced samples including both endpoints; one value for a point interval"""
        if low == high:
            return [low]
        m = self.samples_per_interval
        return [low + (high - low) * Fraction(k, m - 1) for k in range(m)]


def _realizations(
    intervals: Sequence[Tuple[Fraction, Fraction]], grid: GridSpec, budget: Optional[int]
) -> Iterator[Tuple[Fraction, ...]]:
    axes = [grid.values(low, high) for low, high in intervals]
    total = prod(len(axis) for axis in axes)
    budget = settings.oracle_budget() if budget is None else budget
    if total > budget:
        raise BudgetExceeded(f"{total} grid realizations exceed the budget of {budget}")
    logger.debug("oracle: enumerating %d realizations", total)
    return product(*axes)


def oracle_1d(
    terrain: ImpreciseTerrain1D, grid: GridSpec, mode: str = "discrete", budget: Optional[int] = None
) -> Fraction:
    """Best watchtower height over all grid realizations"""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    xs = terrain.xs
    best: Optional[Fraction] = None
    intervals = [(v.low, v.high) for v in terrain.vertices]
    for heights in _realizations(intervals, grid, budget):
        polyline = [Point2(x, y) for x, y in zip(xs, heights)]
        if mode == "continuous":
            value = fixed_terrain_watchtower(polyline).height
        else:
            boundary = visibility_region(polyline).evaluate_sorted(xs)
            value = max(Fraction(0), min(b - y for b, y in zip(boundary, heights)))
        if best is None or value < best:
            best = value
    return best


def oracle_2_5d_zero(mesh: ImpreciseMesh2_5D, grid: GridSpec, budget: Optional[int] = None) -> bool:
    """Some grid realization is entirely visible from one of its own vertices"""
    intervals = [(v.low, v.high) for v in mesh.vertices]
    for z in _realizations(intervals, grid, budget):
        r = Realization2_5D(mesh, z)
        for i in range(mesh.n):
            if sees_all_from(r.point(i), r):
                return True
    return False


def oracle_2_5d_height(
    mesh: ImpreciseMesh2_5D, grid: GridSpec, epsilon, budget: Optional[int] = None
) -> Fraction:
    """Smallest multiple of epsilon at which some grid realization is guarded from above
    one of its vertices, capped by the certified height cap"""
    epsilon = to_scalar(epsilon)
    best_k = int(height_cap(mesh, epsilon).height / epsilon)
    intervals = [(v.low, v.high) for v in mesh.vertices]
    for z in _realizations(intervals, grid, budget):
        r = Realization2_5D(mesh, z)
        for i in range(mesh.n):
            base = r.point(i)
            for k in range(best_k):
                if sees_all_from(Point3(base.x, base.y, base.z + k * epsilon), r):
                    best_k = k
                    break
            if best_k == 0:
                return Fraction(0)
    return best_k * epsilon
