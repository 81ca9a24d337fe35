"""
Exact rational geometry
Scalars, points, normalized lines and the predicates the solvers build on.
Every value is a fractions.Fraction, so equality is exact and no tolerance is used.
"""

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Union

from utils.errors import CoincidentPoints, ParallelLines, VerticalLine

Scalar = Fraction
ScalarLike = Union[int, Fraction, str]


def to_scalar(value) -> Fraction:
    """Convert an int, Fraction, decimal string or "p/q" string to an exact Fraction"""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        # shortest round-tripping decimal, not the binary expansion
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty scalar string")
        return Fraction(text)
    raise TypeError(f"cannot convert {type(value).__name__} to a scalar")


def format_scalar(value: Fraction) -> str:
    """Canonical text form: "3/2", "-4", "0" """
    return str(Fraction(value))


class Orientation(IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


@dataclass(frozen=True)
class Point2:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        if type(self.x) is not Fraction:
            object.__setattr__(self, "x", to_scalar(self.x))
        if type(self.y) is not Fraction:
            object.__setattr__(self, "y", to_scalar(self.y))

    def mirrored(self) -> "Point2":
        return Point2(-self.x, self.y)

    def __repr__(self):
        return f"Point2({self.x}, {self.y})"


@dataclass(frozen=True)
class Point3:
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", to_scalar(self.x))
        object.__setattr__(self, "y", to_scalar(self.y))
        object.__setattr__(self, "z", to_scalar(self.z))

    @property
    def xy(self) -> Point2:
        return Point2(self.x, self.y)

    def squared_distance(self, other: "Point3") -> Fraction:
        dx, dy, dz = self.x - other.x, self.y - other.y, self.z - other.z
        return dx * dx + dy * dy + dz * dz

    def __repr__(self):
        return f"Point3({self.x}, {self.y}, {self.z})"


def cross(ox, oy, ax, ay, bx, by) -> Fraction:
    """z-component of (a - o) x (b - o)"""
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def orientation(p: Point2, q: Point2, r: Point2) -> Orientation:
    """Sign of the determinant of (q - p, r - p); LEFT is counterclockwise"""
    px, py, qx, qy, rx, ry = p.x, p.y, q.x, q.y, r.x, r.y
    if (
        px.denominator == 1 and py.denominator == 1 and qx.denominator == 1
        and qy.denominator == 1 and rx.denominator == 1 and ry.denominator == 1
    ):
        # plain integer determinant
        px, py, qx, qy, rx, ry = (
            px.numerator, py.numerator, qx.numerator, qy.numerator, rx.numerator, ry.numerator
        )
    det = (qx - px) * (ry - py) - (qy - py) * (rx - px)
    if det > 0:
        return Orientation.LEFT
    if det < 0:
        return Orientation.RIGHT
    return Orientation.COLLINEAR


@dataclass(frozen=True)
class Line2:
    """The line a*x + b*y = c, stored with integer, gcd-reduced coefficients
    whose leading nonzero coefficient is positive"""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a, b, c = to_scalar(self.a), to_scalar(self.b), to_scalar(self.c)
        if a == 0 and b == 0:
            raise ValueError("line needs (a, b) != (0, 0)")
        scale = lcm(a.denominator, b.denominator, c.denominator)
        ia, ib, ic = (int(v * scale) for v in (a, b, c))
        g = gcd(ia, ib, ic)
        ia, ib, ic = ia // g, ib // g, ic // g
        if ia < 0 or (ia == 0 and ib < 0):
            ia, ib, ic = -ia, -ib, -ic
        object.__setattr__(self, "a", Fraction(ia))
        object.__setattr__(self, "b", Fraction(ib))
        object.__setattr__(self, "c", Fraction(ic))

    @classmethod
    def from_slope_intercept(cls, slope: ScalarLike, intercept: ScalarLike) -> "Line2":
        """y = slope * x + intercept"""
        return cls(-to_scalar(slope), Fraction(1), to_scalar(intercept))

    @property
    def is_vertical(self) -> bool:
        return self.b == 0

    @property
    def slope(self) -> Fraction:
        if self.b == 0:
            raise VerticalLine("vertical line has no slope")
        return -self.a / self.b

    @property
    def intercept(self) -> Fraction:
        if self.b == 0:
            raise VerticalLine("vertical line has no intercept")
        return self.c / self.b

    def contains(self, p: Point2) -> bool:
        return self.a * p.x + self.b * p.y == self.c

    def __str__(self):
        return f"{self.a}*x + {self.b}*y = {self.c}"


def line_through(p: Point2, q: Point2) -> Line2:
    if p == q:
        raise CoincidentPoints(f"cannot build a line through {p} twice")
    a = q.y - p.y
    b = p.x - q.x
    return Line2(a, b, a * p.x + b * p.y)


def intersect_lines(l1: Line2, l2: Line2) -> Point2:
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        raise ParallelLines(f"{l1} and {l2} do not meet in a single point")
    x = (l1.c * l2.b - l2.c * l1.b) / det
    y = (l1.a * l2.c - l2.a * l1.c) / det
    return Point2(x, y)


def y_at(line: Line2, x: ScalarLike) -> Fraction:
    if line.b == 0:
        raise VerticalLine(f"{line} is vertical")
    return (line.c - line.a * to_scalar(x)) / line.b


def interpolate_y(p: Point2, q: Point2, x: Fraction) -> Fraction:
    """Height of segment pq at abscissa x (p.x != q.x)"""
    if x == p.x:
        return p.y
    if x == q.x:
        return q.y
    return p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)


def plane_z_at(p: Point3, q: Point3, r: Point3, x: Fraction, y: Fraction) -> Fraction:
    """z of the plane through p, q, r above (x, y); the xy-projections must not be collinear"""
    det = cross(p.x, p.y, q.x, q.y, r.x, r.y)
    if det == 0:
        raise CoincidentPoints("plane through points with collinear projections")
    # barycentric weights of (x, y) in the projected triangle
    wq = cross(p.x, p.y, x, y, r.x, r.y) / det
    wr = cross(p.x, p.y, q.x, q.y, x, y) / det
    wp = 1 - wq - wr
    return wp * p.z + wq * q.z + wr * r.z
