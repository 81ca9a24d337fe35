"""
Imprecise 2.5D mesh JSON parser
{"vertices": [{"x": .., "y": .., "low": .., "high": ..}], "triangles": [[i, j, k], ...]}
"""

import json
import logging
from typing import Dict, List, Optional, Tuple

from geometry.exact import format_scalar
from terrain.mesh import ImpreciseMesh2_5D, UncertainVertex2_5D
from utils.errors import ParseError

logger = logging.getLogger(__name__)

VERTEX_KEYS = ("x", "y", "low", "high")


class MeshParser:
    def __init__(self):
        self.mesh: Optional[ImpreciseMesh2_5D] = None

    def parse_from_file(self, file_path: str) -> ImpreciseMesh2_5D:
        """Parse a mesh from file"""
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                content = f.read()
        except OSError as e:
            raise ParseError(f"Failed to read mesh file {file_path}: {e}") from e
        return self.parse_content(content)

    def parse_content(self, content: str) -> ImpreciseMesh2_5D:
        self.mesh = None
        try:
            data = json.loads(content, parse_float=str)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid mesh JSON: {e}") from e
        return self.parse_data(data)

    def parse_data(self, data) -> ImpreciseMesh2_5D:
        if not isinstance(data, dict):
            raise ParseError("mesh JSON needs a top-level object")
        raw_vertices = data.get("vertices")
        raw_triangles = data.get("triangles")
        if not isinstance(raw_vertices, list) or not isinstance(raw_triangles, list):
            raise ParseError('mesh JSON needs "vertices" and "triangles" lists')

        try:
            vertices = [self._parse_vertex(i, entry) for i, entry in enumerate(raw_vertices)]
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Malformed number in mesh: {e}") from e
        triangles = [self._parse_triangle(i, entry) for i, entry in enumerate(raw_triangles)]

        self.mesh = ImpreciseMesh2_5D(tuple(vertices), tuple(triangles))
        logger.debug(
            "parsed mesh with %d vertices, %d triangles", self.mesh.n, len(self.mesh.triangles)
        )
        return self.mesh

    def _parse_vertex(self, index: int, entry) -> UncertainVertex2_5D:
        if not isinstance(entry, dict):
            raise ParseError(f"vertex {index} is not an object")
        missing = [key for key in VERTEX_KEYS if key not in entry]
        if missing:
            raise ParseError(f"vertex {index} is missing {', '.join(missing)}")
        for key in VERTEX_KEYS:
            value = entry[key]
            if isinstance(value, bool) or not isinstance(value, (str, int)):
                raise ParseError(f"vertex {index}: {key} must be a number or rational string")
        return UncertainVertex2_5D(entry["x"], entry["y"], entry["low"], entry["high"])

    def _parse_triangle(self, index: int, entry) -> Tuple[int, int, int]:
        if (
            not isinstance(entry, list)
            or len(entry) != 3
            or not all(isinstance(t, int) and not isinstance(t, bool) for t in entry)
        ):
            raise ParseError(f"triangle {index} must be a list of three vertex indices")
        return tuple(entry)


def mesh_to_data(mesh: ImpreciseMesh2_5D) -> Dict[str, List]:
    return {
        "vertices": [
            {
                "x": format_scalar(v.x),
                "y": format_scalar(v.y),
                "low": format_scalar(v.low),
                "high": format_scalar(v.high),
            }
            for v in mesh.vertices
        ],
        "triangles": [list(tri) for tri in mesh.triangles],
    }


def serialize_mesh(mesh: ImpreciseMesh2_5D) -> str:
    return json.dumps(mesh_to_data(mesh), indent=2)


def parse_mesh(path: str) -> ImpreciseMesh2_5D:
    return MeshParser().parse_from_file(path)
