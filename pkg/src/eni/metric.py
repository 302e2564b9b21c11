"""Incompatibility scoring between physical and virtual visibility polygons.

The one-directional score phi(virt, phys) is the area of the virtual
visibility polygon that is unreachable from the physical one once both are
translated so their kernels coincide. Orientation is handled by minimizing
phi over a discrete rotation set applied to the physical polygon, and each
virtual sample is paired exhaustively with its best physical sample. The
resulting per-virtual-sample score vector is the metric's output; its mean
and population standard deviation summarize it.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvalidGeometry, InvalidInput, PoseOutOfBounds
from .geometry import (
    Environment,
    SimplePolygon,
    VisibilityPolygon,
    compute_visibility_polygon,
    point_in_free_space,
)
from .geometry import difference_area as _general_difference_area
from .sampling import SampleSet, sample_points

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class RotationSet:
    """Strictly increasing rotation angles in [0, 2*pi)."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        if a.ndim != 1 or a.size == 0:
            raise InvalidInput("rotation set needs at least one angle")
        if np.any(a < 0.0) or np.any(a >= _TWO_PI) or np.any(np.diff(a) <= 0.0):
            raise InvalidInput("angles must be strictly increasing in [0, 2*pi)")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @classmethod
    def uniform(cls, count: int = 10) -> "RotationSet":
        """``count`` evenly spaced angles starting at 0 (default: 36 deg steps)."""
        if count < 1:
            raise InvalidInput("rotation count must be >= 1")
        return cls(_TWO_PI * np.arange(count) / count)

    def __len__(self) -> int:
        return self.angles.size


DEFAULT_ROTATIONS = RotationSet.uniform(10)


@dataclass(frozen=True)
class MatchRecord:
    """Best physical sample and rotation for one virtual sample."""

    virt_index: int
    phys_index: int
    theta_index: int
    score: float


@dataclass
class EniResult:
    """Per-virtual-sample best-match scores with their pairing table."""

    x: np.ndarray
    matches: list[MatchRecord] = field(repr=False)
    mean: float = 0.0
    std: float = 0.0
    phys_samples: SampleSet | None = field(default=None, repr=False)
    virt_samples: SampleSet | None = field(default=None, repr=False)
    thetas: RotationSet = field(default=DEFAULT_ROTATIONS, repr=False)
    env_phys: Environment | None = field(default=None, repr=False)
    env_virt: Environment | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.x.size


def phi(p_virt: VisibilityPolygon, p_phys: VisibilityPolygon) -> float:
    """Virtual area inaccessible from the physical surroundings (m^2).

    Both polygons are translated so their kernels coincide; the score is the
    area of virt minus phys. Asymmetric by design: only the virtual side's
    lost area matters.
    """
    a = p_virt.relative_vertices()
    b = p_phys.relative_vertices()
    v = _kernels.active.star_difference_area(a, b, 0.0)
    if v >= 0.0:
        return float(v)
    # kernel on the polygon boundary etc.: fall back to the general clipper
    return _general_difference_area(
        SimplePolygon(a, validate=False), SimplePolygon(b, validate=False)
    )


def phi_best_rotation(
    p_virt: VisibilityPolygon,
    p_phys: VisibilityPolygon,
    thetas: RotationSet = DEFAULT_ROTATIONS,
) -> tuple[float, int]:
    """Min of phi over rotations of the physical polygon.

    Ties go to the smallest angle index; scores within 1e-9 (relative and
    absolute) count as tied so that rotationally symmetric inputs resolve to
    index 0 instead of chasing float noise.
    """
    a = p_virt.relative_vertices()
    b = p_phys.relative_vertices()
    scores = np.empty(len(thetas))
    pa = None
    for t, theta in enumerate(thetas.angles):
        v = _kernels.active.star_difference_area(a, b, float(theta))
        if v < 0.0:
            if pa is None:
                pa = SimplePolygon(a, validate=False)
            c, s = np.cos(theta), np.sin(theta)
            v = _general_difference_area(
                pa, SimplePolygon(b @ np.array([[c, s], [-s, c]]), validate=False)
            )
        scores[t] = v
    best = float(np.min(scores))
    idx = int(np.argmax(scores <= best + 1e-9 * (1.0 + best)))
    return float(scores[idx]), idx


def summarize(x: np.ndarray) -> tuple[float, float]:
    """Arithmetic mean and population standard deviation of a score vector."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise InvalidInput("cannot summarize an empty score vector")
    return float(np.mean(x)), float(np.std(x))


def compute_eni(
    env_phys: Environment,
    env_virt: Environment,
    target_count: int = 500,
    thetas: RotationSet = DEFAULT_ROTATIONS,
    threads: int | None = None,
) -> EniResult:
    """Full metric: sample both environments, exhaustively pair every virtual
    sample with its most compatible physical sample over the rotation set.

    Identical environment descriptions share one sample set, which pins the
    self-pair result to exactly zero. Ties in the argmin go to the lowest
    physical index, then the lowest rotation index; results are deterministic
    and independent of the thread schedule.
    """
    virt_samples = sample_points(env_virt, target_count)
    if env_phys == env_virt:
        phys_samples = virt_samples
    else:
        phys_samples = sample_points(env_phys, target_count)
    result = compute_eni_from_samples(phys_samples, virt_samples, thetas, threads)
    result.env_phys = env_phys
    result.env_virt = env_virt
    return result


def compute_eni_from_samples(
    phys_samples: SampleSet,
    virt_samples: SampleSet,
    thetas: RotationSet = DEFAULT_ROTATIONS,
    threads: int | None = None,
) -> EniResult:
    """Metric core for pre-computed sample sets."""
    n = len(virt_samples)
    m = len(phys_samples)
    if n == 0 or m == 0:
        raise InvalidInput("both sample sets must be non-empty")

    px, py, pang, offsets, areas = _pack(phys_samples)
    virt_rel = [vp.relative_vertices() for vp in virt_samples.vis_polygons]
    virt_areas = [vp.area for vp in virt_samples.vis_polygons]
    for i, rel in enumerate(virt_rel):
        _require_star(rel, f"virtual sample {i}")

    backend = _kernels.active
    ang = thetas.angles

    def solve(i: int) -> tuple[float, int, int]:
        return backend.best_match(virt_rel[i], virt_areas[i], px, py, pang, offsets, areas, ang)

    workers = threads if threads is not None else _default_threads()
    if workers > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(solve, range(n)))
    else:
        solved = [solve(i) for i in range(n)]

    x = np.array([s[0] for s in solved], dtype=float)
    matches = [
        MatchRecord(virt_index=i, phys_index=int(j), theta_index=int(t), score=float(v))
        for i, (v, j, t) in enumerate(solved)
    ]
    mean, std = summarize(x)
    return EniResult(
        x=x,
        matches=matches,
        mean=mean,
        std=std,
        phys_samples=phys_samples,
        virt_samples=virt_samples,
        thetas=thetas,
    )


def path_eni(
    trace,
    env_phys: Environment,
    env_virt: Environment,
    thetas: RotationSet | None = None,
) -> np.ndarray:
    """Incompatibility along a walked path, one score per recorded pose pair.

    The physical visibility polygon is rotated by the recorded heading offset
    (virtual minus physical heading) so the comparison reflects the user's
    actual orientation; passing a rotation set instead scores each pose pair
    with the best-case rotation.
    """
    if len(trace.virt_positions) == 0:
        raise InvalidInput("trace has no recorded poses")
    scores = np.empty(len(trace.virt_positions))
    cache_phys: dict[tuple[float, float], VisibilityPolygon] = {}
    cache_virt: dict[tuple[float, float], VisibilityPolygon] = {}
    for i, (qp, qv) in enumerate(zip(trace.phys_positions, trace.virt_positions)):
        kp = (float(qp[0]), float(qp[1]))
        kv = (float(qv[0]), float(qv[1]))
        if not point_in_free_space(env_phys, qp):
            raise PoseOutOfBounds(f"physical pose {i} at {kp} is outside free space")
        if not point_in_free_space(env_virt, qv):
            raise PoseOutOfBounds(f"virtual pose {i} at {kv} is outside free space")
        vis_p = cache_phys.get(kp)
        if vis_p is None:
            vis_p = cache_phys[kp] = compute_visibility_polygon(env_phys, qp)
        vis_v = cache_virt.get(kv)
        if vis_v is None:
            vis_v = cache_virt[kv] = compute_visibility_polygon(env_virt, qv)
        if thetas is not None:
            scores[i] = phi_best_rotation(vis_v, vis_p, thetas)[0]
        else:
            offset = float(
                (trace.virt_headings[i] - trace.phys_headings[i]) % _TWO_PI
            )
            a = vis_v.relative_vertices()
            b = vis_p.relative_vertices()
            v = _kernels.active.star_difference_area(a, b, offset)
            if v < 0.0:
                c, s = np.cos(offset), np.sin(offset)
                v = _general_difference_area(
                    SimplePolygon(a, validate=False),
                    SimplePolygon(b @ np.array([[c, s], [-s, c]]), validate=False),
                )
            scores[i] = v
    return scores


# ---------------------------------------------------------------------------
# Packing for the kernel backends
# ---------------------------------------------------------------------------


def _pack(samples: SampleSet):
    """Concatenate kernel-relative vertices of all sample polygons."""
    rels = [vp.relative_vertices() for vp in samples.vis_polygons]
    for j, rel in enumerate(rels):
        _require_star(rel, f"physical sample {j}")
    counts = np.array([r.shape[0] for r in rels], dtype=np.int64)
    offsets = np.zeros(counts.size + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    allv = np.concatenate(rels, axis=0)
    px = np.ascontiguousarray(allv[:, 0])
    py = np.ascontiguousarray(allv[:, 1])
    pang = np.mod(np.arctan2(py, px), _TWO_PI)
    areas = np.array([vp.area for vp in samples.vis_polygons], dtype=float)
    return px, py, pang, offsets, areas


def _require_star(rel: np.ndarray, what: str):
    x, y = rel[:, 0], rel[:, 1]
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    cross = x * y2 - y * x2
    dot = x * x2 + y * y2
    scale = np.sqrt((x * x + y * y) * (x2 * x2 + y2 * y2))
    if np.any(scale < 1e-9) or np.any(cross < -1e-9 * scale) or np.any(
        (np.abs(cross) <= 1e-9 * scale) & (dot < 0.0)
    ):
        raise InvalidGeometry(f"{what}: polygon is not star-shaped about its kernel")


def _default_threads() -> int:
    env = os.environ.get("ENI_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(os.cpu_count() or 1, 8)
