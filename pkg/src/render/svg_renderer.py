"""
SVG figures of 1.5D solutions
Draws the intervals, the chosen realization, the shaded region that sees the
whole realization, and the tower. Output bytes depend only on the input.
"""

import logging
from fractions import Fraction
from typing import List, Sequence

from lxml import etree

from geometry.exact import Point2
from solvers.watchtower_1d import Solution1D
from terrain.model import ImpreciseTerrain1D
from terrain.visibility import boundary_at, visibility_region
from utils.errors import RenderError
from utils.settings import settings

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"


def _svg(tag: str) -> str:
    return f"{{{SVG_NS}}}{tag}"


class _Canvas:
    """Maps terrain coordinates onto the fixed pixel canvas (y grows downwards)"""

    def __init__(self, x_lo: Fraction, x_hi: Fraction, y_lo: Fraction, y_hi: Fraction):
        self.width = int(settings.get("svg.width", 800))
        self.height = int(settings.get("svg.height", 500))
        self.margin = int(settings.get("svg.margin", 40))
        self.decimals = int(settings.get("svg.decimals", 3))
        self.x_lo, self.y_lo = x_lo, y_lo
        span_x = (x_hi - x_lo) or Fraction(1)
        span_y = (y_hi - y_lo) or Fraction(1)
        self.scale_x = Fraction(self.width - 2 * self.margin) / span_x
        self.scale_y = Fraction(self.height - 2 * self.margin) / span_y

    def fmt(self, value: Fraction) -> str:
        return f"{float(value):.{self.decimals}f}"

    def px(self, x: Fraction) -> str:
        return self.fmt(self.margin + (x - self.x_lo) * self.scale_x)

    def py(self, y: Fraction) -> str:
        return self.fmt(self.height - self.margin - (y - self.y_lo) * self.scale_y)

    def points(self, pts: Sequence[Point2]) -> str:
        return " ".join(f"{self.px(p.x)},{self.py(p.y)}" for p in pts)


def _bounds(terrain: ImpreciseTerrain1D, solution: Solution1D):
    ys = [v.low for v in terrain.vertices] + [v.high for v in terrain.vertices]
    ys.append(solution.tower.top.y)
    y_lo, y_hi = min(ys), max(ys)
    pad = (y_hi - y_lo) / 10 or Fraction(1)
    return terrain.xs[0], terrain.xs[-1], y_lo - pad, y_hi + pad


def _region_outline(polyline: List[Point2], x_lo: Fraction, x_hi: Fraction, y_top: Fraction) -> List[Point2]:
    region = visibility_region(polyline)
    corners = [p for p in region.vertices() if x_lo < p.x < x_hi]
    boundary = [Point2(x_lo, boundary_at(region, x_lo))] + corners
    boundary.append(Point2(x_hi, boundary_at(region, x_hi)))
    return boundary + [Point2(x_hi, y_top), Point2(x_lo, y_top)]


def build_svg(terrain: ImpreciseTerrain1D, solution: Solution1D) -> etree._Element:
    x_lo, x_hi, y_lo, y_hi = _bounds(terrain, solution)
    canvas = _Canvas(x_lo, x_hi, y_lo, y_hi)
    polyline = solution.realization.polyline()

    root = etree.Element(
        _svg("svg"),
        nsmap={None: SVG_NS},
        width=str(canvas.width),
        height=str(canvas.height),
        viewBox=f"0 0 {canvas.width} {canvas.height}",
        version="1.1",
    )
    defs = etree.SubElement(root, _svg("defs"))
    clip = etree.SubElement(defs, _svg("clipPath"), id="plot")
    etree.SubElement(
        clip,
        _svg("rect"),
        x=str(canvas.margin),
        y=str(canvas.margin),
        width=str(canvas.width - 2 * canvas.margin),
        height=str(canvas.height - 2 * canvas.margin),
    )

    plot = etree.SubElement(root, _svg("g"), {"clip-path": "url(#plot)"})
    etree.SubElement(
        plot,
        _svg("polygon"),
        points=canvas.points(_region_outline(polyline, x_lo, x_hi, y_hi)),
        fill=settings.get("svg.region_fill", "#f4d58d"),
        stroke=settings.get("svg.region_stroke", "#c28f00"),
    )

    intervals = etree.SubElement(plot, _svg("g"), id="intervals")
    for v in terrain.vertices:
        etree.SubElement(
            intervals,
            _svg("line"),
            x1=canvas.px(v.x), y1=canvas.py(v.low), x2=canvas.px(v.x), y2=canvas.py(v.high),
            stroke=settings.get("svg.interval_color", "#7a7a7a"),
        )

    etree.SubElement(
        plot,
        _svg("polyline"),
        id="realization",
        points=canvas.points(polyline),
        fill="none",
        stroke=settings.get("svg.terrain_color", "#1f4e79"),
    )

    tower = solution.tower
    color = settings.get("svg.tower_color", "#b22222")
    etree.SubElement(
        plot,
        _svg("line"),
        id="tower",
        x1=canvas.px(tower.base.x), y1=canvas.py(tower.base.y),
        x2=canvas.px(tower.top.x), y2=canvas.py(tower.top.y),
        stroke=color,
    )
    # marker keeps a zero-height tower visible
    etree.SubElement(
        plot, _svg("circle"), id="tower-top", cx=canvas.px(tower.top.x), cy=canvas.py(tower.top.y), r="3", fill=color
    )
    return root


def render_svg(terrain: ImpreciseTerrain1D, solution: Solution1D, path: str):
    data = etree.tostring(
        build_svg(terrain, solution), pretty_print=True, xml_declaration=True, encoding="utf-8"
    )
    try:
        with open(path, "wb") as f:
            f.write(data)
    except OSError as e:
        raise RenderError(f"Failed to write {path}: {e}") from e
    logger.debug("figure written to %s", path)
