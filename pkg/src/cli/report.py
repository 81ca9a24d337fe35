"""
Solve reports and their certificates
A report is plain JSON with every number written as an exact rational string,
so that loading it back re-validates exactly what the solver produced.
"""

import json
import logging
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, Optional, Union

from geometry.exact import Point2, format_scalar, to_scalar
from parsers.mesh_parser import MeshParser, mesh_to_data
from parsers.terrain_parser import TerrainParser, terrain_to_data
from solvers.watchtower_1d import Solution1D, validate_certificate
from solvers.watchtower_2_5d import GuardSolution
from terrain.mesh import ImpreciseMesh2_5D, Realization2_5D, Viewpoint2_5D, sees_all
from terrain.model import ImpreciseTerrain1D, Realization1D, Tower1D
from utils.errors import ParseError, ValidationError, WatchtowerError

logger = logging.getLogger(__name__)

KIND_1D = ("1d-discrete", "1d-continuous")
KIND_2_5D = ("2.5d-zero", "2.5d-approx")
DECIMAL_DIGITS = 12


def decimal_text(value: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """Decimal rendering with the given number of significant digits"""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits
        rendered = Decimal(value.numerator) / Decimal(value.denominator)
    return f"{rendered:.{digits}g}"


def height_line(height: Fraction) -> str:
    return f"{format_scalar(height)} {decimal_text(height)}"


def _point_data(p: Point2):
    return [format_scalar(p.x), format_scalar(p.y)]


def _point_from(data) -> Point2:
    x, y = data
    return Point2(to_scalar(x), to_scalar(y))


@dataclass
class SolveReport:
    kind: str
    height: Fraction
    terrain: Union[ImpreciseTerrain1D, ImpreciseMesh2_5D]
    realization: Union[Realization1D, Realization2_5D]
    tower: Optional[Tower1D] = None
    viewpoint: Optional[Viewpoint2_5D] = None
    candidate: Dict = field(default_factory=dict)
    epsilon: Optional[Fraction] = None
    elapsed_seconds: float = 0.0

    @classmethod
    def from_solution_1d(cls, mode: str, terrain, solution: Solution1D, elapsed: float = 0.0):
        return cls(
            kind=f"1d-{mode}",
            height=solution.height,
            terrain=terrain,
            realization=solution.realization,
            tower=solution.tower,
            candidate=solution.candidate_kind.describe(),
            elapsed_seconds=elapsed,
        )

    @classmethod
    def from_guard(
        cls, mesh, solution: GuardSolution, epsilon: Optional[Fraction] = None, elapsed: float = 0.0
    ):
        return cls(
            kind="2.5d-zero" if epsilon is None else "2.5d-approx",
            height=solution.height,
            terrain=mesh,
            realization=solution.realization,
            viewpoint=Viewpoint2_5D(solution.vertex, solution.height),
            candidate={"kind": "base_vertex", "index": solution.vertex},
            epsilon=epsilon,
            elapsed_seconds=elapsed,
        )

    @property
    def is_1d(self) -> bool:
        return self.kind in KIND_1D

    def to_dict(self) -> Dict:
        data = {
            "kind": self.kind,
            "height": format_scalar(self.height),
            "height_decimal": decimal_text(self.height),
            "candidate": self.candidate,
        }
        if self.is_1d:
            data["terrain"] = terrain_to_data(self.terrain)
            data["realization"] = {
                "heights": [format_scalar(h) for h in self.realization.heights],
                "bends": [_point_data(b) for b in self.realization.bends],
            }
            data["tower"] = {"base": _point_data(self.tower.base), "top": _point_data(self.tower.top)}
        else:
            data["mesh"] = mesh_to_data(self.terrain)
            data["realization"] = {"z": [format_scalar(z) for z in self.realization.z]}
            data["viewpoint"] = {
                "vertex": self.viewpoint.base_vertex,
                "height": format_scalar(self.viewpoint.tower_height),
            }
            if self.epsilon is not None:
                data["epsilon"] = format_scalar(self.epsilon)
        # timing last; it is the only field that varies between runs
        data["elapsed_seconds"] = round(self.elapsed_seconds, 6)
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def save(self, path: str):
        try:
            with open(path, "w", encoding="utf-8") as f:
                f.write(self.to_json())
                f.write("\n")
        except OSError as e:
            raise ParseError(f"Failed to write report {path}: {e}") from e
        logger.debug("report written to %s", path)

    @classmethod
    def from_dict(cls, data: Dict) -> "SolveReport":
        try:
            kind = data["kind"]
            height = to_scalar(data["height"])
            if kind in KIND_1D:
                terrain = TerrainParser().parse_data(data["terrain"])
                raw = data["realization"]
                realization = Realization1D(
                    terrain,
                    tuple(to_scalar(h) for h in raw["heights"]),
                    tuple(_point_from(b) for b in raw.get("bends", [])),
                )
                base = _point_from(data["tower"]["base"])
                top = _point_from(data["tower"]["top"])
                return cls(
                    kind, height, terrain, realization,
                    tower=Tower1D(base, top, top.y - base.y),
                    candidate=data.get("candidate", {}),
                )
            if kind in KIND_2_5D:
                mesh = MeshParser().parse_data(data["mesh"])
                realization = Realization2_5D(
                    mesh, tuple(to_scalar(z) for z in data["realization"]["z"])
                )
                viewpoint = Viewpoint2_5D(
                    int(data["viewpoint"]["vertex"]), to_scalar(data["viewpoint"]["height"])
                )
                epsilon = data.get("epsilon")
                return cls(
                    kind, height, mesh, realization,
                    viewpoint=viewpoint,
                    candidate=data.get("candidate", {}),
                    epsilon=None if epsilon is None else to_scalar(epsilon),
                )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Malformed certificate: {e!r}") from e
        raise ParseError(f"Unknown report kind {kind!r}")

    @classmethod
    def load(cls, path: str) -> "SolveReport":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.loads(f.read(), parse_float=str)
        except OSError as e:
            raise ParseError(f"Failed to read certificate {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid certificate JSON: {e}") from e
        if not isinstance(data, dict):
            raise ParseError("certificate JSON needs a top-level object")
        return cls.from_dict(data)


def check_report(report: SolveReport, instance=None) -> str:
    """Reason code of the first failed check, "ok" when the certificate holds"""
    if instance is not None and instance != report.terrain:
        return "terrain_mismatch"
    if report.is_1d:
        if report.tower.height != report.height:
            return "height_mismatch"
        return validate_certificate(report.terrain, report.realization, report.tower).reason

    viewpoint = report.viewpoint
    if viewpoint.tower_height != report.height:
        return "height_mismatch"
    if not 0 <= viewpoint.base_vertex < report.terrain.n:
        return "base_out_of_range"
    base = report.terrain.vertices[viewpoint.base_vertex]
    if report.realization.z[viewpoint.base_vertex] != base.high:
        return "base_not_at_top"
    if report.epsilon is not None and (report.height / report.epsilon).denominator != 1:
        return "height_not_multiple_of_epsilon"
    try:
        visible = sees_all(viewpoint, report.realization)
    except WatchtowerError as e:
        logger.warning("certificate check failed: %s", e)
        return "predicate_error"
    return "ok" if visible else "not_guarded"


def load_instance(path: str):
    """Terrain or mesh, picked by the presence of a "triangles" key"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            content = f.read()
        data = json.loads(content, parse_float=str)
    except OSError as e:
        raise ParseError(f"Failed to read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON in {path}: {e}") from e
    if isinstance(data, dict) and "triangles" in data:
        return MeshParser().parse_data(data)
    return TerrainParser().parse_data(data)


__all__ = [
    "SolveReport",
    "ValidationError",
    "check_report",
    "decimal_text",
    "height_line",
    "load_instance",
]
