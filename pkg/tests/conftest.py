import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

# Add src directory to Python path, as run.py does
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from terrain.mesh import ImpreciseMesh2_5D, UncertainVertex2_5D  # noqa: E402
from terrain.model import ImpreciseTerrain1D, UncertainVertex1D  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: full-size property sweeps and timing runs; deselect with -m \"not slow\""
    )


def terrain_of(*entries) -> ImpreciseTerrain1D:
    return ImpreciseTerrain1D(tuple(UncertainVertex1D(x, low, high) for x, low, high in entries))


def mesh_of(vertices, triangles) -> ImpreciseMesh2_5D:
    return ImpreciseMesh2_5D(
        tuple(UncertainVertex2_5D(*v) for v in vertices), tuple(tuple(t) for t in triangles)
    )


# lattice points in strictly convex position, counterclockwise around the origin
RING = [(0, -3), (2, -2), (3, 0), (2, 2), (0, 3), (-2, 2), (-3, 0), (-2, -2)]


def _surrounds_origin(points) -> bool:
    return all(p[0] * q[1] - p[1] * q[0] > 0 for p, q in zip(points, points[1:] + points[:1]))


@st.composite
def triangulated_meshes(draw, max_vertices=6, spread=3, max_width=2):
    """Random triangulation of points drawn from RING, either split recursively into
    triangles or fanned around an extra vertex at the origin"""
    size = draw(st.integers(3, max_vertices))
    centered = size >= 4 and draw(st.booleans())
    ring_size = size - 1 if centered else size
    picks = draw(
        st.lists(st.integers(0, len(RING) - 1), min_size=ring_size, max_size=ring_size, unique=True)
    )
    points = [RING[i] for i in sorted(picks)]
    if centered and not _surrounds_origin(points):
        centered = False

    if centered:
        points.append((0, 0))
        triangles = [(ring_size, i, (i + 1) % ring_size) for i in range(ring_size)]
    else:

        def split(i, j):
            if j - i < 2:
                return []
            k = draw(st.integers(i + 1, j - 1))
            return [(i, k, j)] + split(i, k) + split(k, j)

        triangles = split(0, len(points) - 1)

    vertices = []
    for x, y in points:
        low = draw(st.integers(-spread, spread))
        vertices.append((x, y, low, low + draw(st.integers(0, max_width))))
    return mesh_of(vertices, triangles)


@pytest.fixture
def m_terrain():
    """Two fixed peaks around a free valley: optimum 3/2 above x = 2"""
    return terrain_of(
        (0, 0, 0), (1, 1, 1), (2, 0, Fraction(1, 2)), (3, 1, 1), (4, 0, 0)
    )


@pytest.fixture
def m_polyline_terrain():
    """Precise M polyline (0,0) (1,1) (2,0) (3,1) (4,0)"""
    return terrain_of((0, 0, 0), (1, 1, 1), (2, 0, 0), (3, 1, 1), (4, 0, 0))


@pytest.fixture
def ridge_mesh():
    """A ridge between two fixed ends that can drop below both of them"""
    return mesh_of(
        [(0, 0, 0, 0), (2, 1, -1, 5), (2, -1, -1, 5), (4, 0, 0, 0)],
        [(0, 1, 2), (1, 3, 2)],
    )


@pytest.fixture
def double_ridge_mesh():
    """Two fixed ridges: every vertex has something hidden at height 0"""
    return mesh_of(
        [
            (0, 0, 0, 0),
            (1, 1, 10, 10),
            (1, -1, 10, 10),
            (2, 0, 0, 0),
            (3, 1, 10, 10),
            (3, -1, 10, 10),
            (4, 0, 0, 0),
        ],
        [(0, 1, 2), (1, 2, 3), (1, 3, 4), (2, 3, 5), (3, 4, 5), (4, 5, 6)],
    )


@pytest.fixture
def flat_mesh():
    """Every interval contains 0"""
    return mesh_of(
        [(0, 0, -1, 1), (2, 0, -1, 1), (1, 2, -1, 1), (1, -2, -1, 1)],
        [(0, 1, 2), (0, 3, 1)],
    )


@pytest.fixture
def single_triangle():
    return mesh_of([(0, 0, 0, 3), (3, 0, 1, 2), (0, 3, -2, 5)], [(0, 1, 2)])
