"""Environment construction helpers: canonical rooms and seeded generators.

These builders back the test fixtures and the bundled example files. Obstacle
layouts are drawn from a seeded generator, so every consumer reconstructs
identical geometry from (shape, seed) alone.
"""

from __future__ import annotations

import math

import numpy as np
import shapely

from .errors import InvalidInput
from .geometry import Environment, make_environment

_TWO_PI = 2.0 * math.pi


def rectangle_vertices(width: float, height: float, origin=(0.0, 0.0)) -> np.ndarray:
    x0, y0 = origin
    return np.array(
        [[x0, y0], [x0 + width, y0], [x0 + width, y0 + height], [x0, y0 + height]]
    )


def regular_polygon_vertices(
    sides: int, area: float, center=(0.0, 0.0), phase: float = 0.0
) -> np.ndarray:
    """Regular polygon scaled to the requested area."""
    if sides < 3:
        raise InvalidInput("a polygon needs at least 3 sides")
    circumradius = math.sqrt(2.0 * area / (sides * math.sin(_TWO_PI / sides)))
    ang = phase + _TWO_PI * np.arange(sides) / sides
    return np.stack(
        [center[0] + circumradius * np.cos(ang), center[1] + circumradius * np.sin(ang)],
        axis=1,
    )


def empty_square(side: float, name: str = "") -> Environment:
    return make_environment(rectangle_vertices(side, side), name=name or f"square-{side:g}")


def random_convex_obstacle(rng: np.random.Generator, center, radius: float) -> np.ndarray:
    """Convex hull of random points in a disk around ``center``."""
    k = int(rng.integers(6, 11))
    ang = rng.uniform(0.0, _TWO_PI, k)
    rad = radius * np.sqrt(rng.uniform(0.15, 1.0, k))
    pts = np.stack(
        [center[0] + rad * np.cos(ang), center[1] + rad * np.sin(ang)], axis=1
    )
    hull = shapely.MultiPoint(pts).convex_hull
    verts = np.asarray(hull.exterior.coords)[:-1]
    if verts.shape[0] < 3:  # collinear draw: fall back to a triangle
        verts = np.stack(
            [
                center + radius * np.array([math.cos(a), math.sin(a)])
                for a in (0.1, 2.2, 4.3)
            ]
        )
    return verts


def random_obstacles(
    boundary: np.ndarray,
    count: int,
    rng: np.random.Generator,
    radius_range: tuple[float, float],
    margin: float = 0.8,
    gap: float = 0.8,
    max_tries: int = 4000,
) -> list[np.ndarray]:
    """Place non-overlapping convex obstacles strictly inside the boundary.

    Draws are rejected until each obstacle keeps ``margin`` clearance from the
    boundary and ``gap`` from previously placed obstacles, so prefixes of the
    returned list are valid layouts on their own (nested conditions).
    """
    room = shapely.Polygon(boundary)
    placed: list[np.ndarray] = []
    placed_geoms: list[shapely.Polygon] = []
    xmin, ymin, xmax, ymax = room.bounds
    tries = 0
    while len(placed) < count:
        tries += 1
        if tries > max_tries:
            raise InvalidInput(
                f"could not place {count} obstacles (placed {len(placed)})"
            )
        radius = float(rng.uniform(*radius_range))
        center = rng.uniform((xmin + margin + radius, ymin + margin + radius),
                             (xmax - margin - radius, ymax - margin - radius))
        verts = random_convex_obstacle(rng, center, radius)
        geom = shapely.Polygon(verts)
        if not geom.within(room) or room.exterior.distance(geom) < margin:
            continue
        if any(geom.distance(g) < gap for g in placed_geoms):
            continue
        placed.append(verts)
        placed_geoms.append(geom)
    return placed


def living_room(name: str = "living-room") -> Environment:
    """Furnished home-scale physical room, 4.37 m x 6.125 m."""
    boundary = rectangle_vertices(4.37, 6.125)
    couch = rectangle_vertices(1.8, 0.75, origin=(0.45, 4.9))
    table = rectangle_vertices(1.1, 0.7, origin=(1.7, 2.5))
    shelf = rectangle_vertices(0.45, 1.6, origin=(3.5, 0.6))
    return make_environment(boundary, [couch, table, shelf], name=name)


def cluttered_hexagon(
    n_obstacles: int, seed: int, area: float = 900.0, name: str = ""
) -> Environment:
    """Hexagonal hall with seeded random clutter; prefixes nest across counts."""
    boundary = regular_polygon_vertices(6, area, phase=0.3)
    rng = np.random.default_rng(seed)
    obstacles = random_obstacles(
        boundary, n_obstacles, rng, radius_range=(1.2, 2.4), margin=1.0, gap=1.0
    )
    return make_environment(
        boundary, obstacles, name=name or f"hex{area:g}-obs{n_obstacles}-s{seed}"
    )


def sized_environment(area: float, seed: int, n_obstacles: int = 10, name: str = "") -> Environment:
    """Virtual hall of a given area with 10 random obstacles.

    The boundary shape varies with area (square / hexagon / octagon) and the
    obstacle scale follows the boundary scale.
    """
    if area <= 0:
        raise InvalidInput("area must be positive")
    sides = {400.0: 4, 900.0: 6, 1600.0: 8}.get(float(area))
    if sides is None:
        sides = 6
    boundary = regular_polygon_vertices(sides, area, phase=0.2 + 0.1 * sides)
    scale = math.sqrt(area) / 30.0
    rng = np.random.default_rng(seed)
    obstacles = random_obstacles(
        boundary,
        n_obstacles,
        rng,
        radius_range=(1.0 * scale + 0.6, 2.2 * scale + 0.6),
        margin=0.9,
        gap=0.9,
    )
    return make_environment(
        boundary, obstacles, name=name or f"hall{area:g}-s{seed}"
    )


def irregular_room(name: str = "irregular-room") -> Environment:
    """Asymmetric non-convex room with two obstacles; no symmetry ties."""
    boundary = np.array(
        [
            [0.0, 0.0],
            [7.3, 0.4],
            [8.1, 3.9],
            [6.2, 6.8],
            [2.9, 7.4],
            [0.4, 4.6],
        ]
    )
    ob1 = np.array([[2.2, 1.7], [3.4, 1.4], [3.8, 2.6], [2.6, 3.0]])
    ob2 = np.array([[5.0, 4.1], [6.1, 4.4], [5.8, 5.5]])
    return make_environment(boundary, [ob1, ob2], name=name)


def l_shaped_room(name: str = "l-room") -> Environment:
    boundary = np.array(
        [[0.0, 0.0], [8.0, 0.0], [8.0, 3.0], [3.0, 3.0], [3.0, 8.0], [0.0, 8.0]]
    )
    return make_environment(boundary, name=name)


def wall_divided_room(name: str = "divided-room") -> Environment:
    """10x10 room split by a wall with a gap, for planner tests."""
    boundary = rectangle_vertices(10.0, 10.0)
    wall = np.array([[4.7, 0.8], [5.3, 0.8], [5.3, 7.5], [4.7, 7.5]])
    return make_environment(boundary, [wall], name=name)
