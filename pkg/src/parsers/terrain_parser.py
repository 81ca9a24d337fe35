"""
Imprecise 1.5D terrain JSON parser
Reads {"vertices": [{"x": .., "low": .., "high": ..}, ...]} with exact rational strings
"""

import json
import logging
from typing import Dict, List, Optional

from geometry.exact import format_scalar
from terrain.model import ImpreciseTerrain1D, validate_terrain
from utils.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ("x", "low", "high")


class TerrainParser:
    def __init__(self):
        self.terrain: Optional[ImpreciseTerrain1D] = None
        self.metadata: Dict = {}

    def parse_from_file(self, file_path: str) -> ImpreciseTerrain1D:
        """Parse a terrain from file"""
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                content = f.read()
        except OSError as e:
            raise ParseError(f"Failed to read terrain file {file_path}: {e}") from e
        return self.parse_content(content)

    def parse_content(self, content: str) -> ImpreciseTerrain1D:
        """Parse terrain JSON content"""
        self.terrain = None
        self.metadata = {}
        try:
            # decimal literals stay exact
            data = json.loads(content, parse_float=str)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid terrain JSON: {e}") from e
        return self.parse_data(data)

    def parse_data(self, data) -> ImpreciseTerrain1D:
        if not isinstance(data, dict) or not isinstance(data.get("vertices"), list):
            raise ParseError('terrain JSON needs a top-level object with a "vertices" list')

        entries = []
        for index, entry in enumerate(data["vertices"]):
            entries.append(self._parse_vertex(index, entry))
        self.metadata = {k: v for k, v in data.items() if k != "vertices"}

        try:
            self.terrain = validate_terrain(entries)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Malformed number in terrain: {e}") from e
        logger.debug("parsed terrain with %d intervals", self.terrain.n)
        return self.terrain

    def _parse_vertex(self, index: int, entry) -> Dict:
        if not isinstance(entry, dict):
            raise ParseError(f"vertex {index} is not an object")
        missing = [key for key in REQUIRED_KEYS if key not in entry]
        if missing:
            raise ParseError(f"vertex {index} is missing {', '.join(missing)}")
        vertex = {}
        for key in REQUIRED_KEYS:
            value = entry[key]
            if isinstance(value, bool) or not isinstance(value, (str, int)):
                raise ParseError(f"vertex {index}: {key} must be a number or rational string")
            vertex[key] = value
        return vertex

    def get_stats(self) -> Dict:
        """Get statistics about the parsed terrain"""
        if self.terrain is None:
            return {"intervals": 0, "precise": 0}
        return {
            "intervals": self.terrain.n,
            "precise": sum(1 for v in self.terrain.vertices if v.is_precise),
        }


def terrain_to_data(terrain: ImpreciseTerrain1D) -> Dict[str, List[Dict[str, str]]]:
    return {
        "vertices": [
            {"x": format_scalar(v.x), "low": format_scalar(v.low), "high": format_scalar(v.high)}
            for v in terrain.vertices
        ]
    }


def serialize_terrain(terrain: ImpreciseTerrain1D) -> str:
    return json.dumps(terrain_to_data(terrain), indent=2)


def parse_terrain_1d(path: str) -> ImpreciseTerrain1D:
    return TerrainParser().parse_from_file(path)


__all__ = [
    "TerrainParser",
    "ValidationError",
    "parse_terrain_1d",
    "serialize_terrain",
    "terrain_to_data",
]
