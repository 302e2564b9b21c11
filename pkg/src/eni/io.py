"""Versioned JSON file formats: environments, metric results, viz bundles.

All formats are UTF-8 JSON with full-precision decimal numbers (Python's
shortest round-trip float repr), sorted keys, and a ``format_version`` field.
Unknown fields are rejected loudly so format drift cannot pass silently.
Writes are byte-deterministic for equal inputs.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import EniError, InvariantViolation, ParseError, UnsupportedVersion
from .geometry import Environment, Point2, SimplePolygon, VisibilityPolygon
from .metric import EniResult, MatchRecord, RotationSet
from .sampling import SampleSet
from .simulator import NavigabilityReport, ResetEvent, Trace

FORMAT_VERSION = 1

HISTOGRAM_BINS = 20


# ---------------------------------------------------------------------------
# Plumbing
# ---------------------------------------------------------------------------


def _write_json(path, obj) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _check_keys(obj, what: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(obj, dict):
        raise ParseError(f"{what}: expected an object, got {type(obj).__name__}")
    missing = required - obj.keys()
    if missing:
        raise ParseError(f"{what}: missing fields {sorted(missing)}")
    unknown = obj.keys() - required - optional
    if unknown:
        raise ParseError(f"{what}: unknown fields {sorted(unknown)}")


def _check_version(obj, what: str):
    version = obj.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"{what}: format_version {version} not supported")


def _coords(obj, what: str) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError(f"{what}: expected an array of [x, y] pairs")
    return arr


def _float_list(a) -> list[float]:
    return [float(v) for v in a]


def _point_list(a) -> list[list[float]]:
    return [[float(x), float(y)] for x, y in np.asarray(a, dtype=float)]


# ---------------------------------------------------------------------------
# Environments
# ---------------------------------------------------------------------------


def env_to_obj(env: Environment) -> dict:
    return {
        "name": env.name,
        "boundary": _point_list(env.boundary.vertices),
        "obstacles": [_point_list(ob.vertices) for ob in env.obstacles],
    }


def env_from_obj(obj, what: str = "environment") -> Environment:
    _check_keys(obj, what, {"name", "boundary", "obstacles"})
    boundary = _coords(obj["boundary"], f"{what}.boundary")
    if not isinstance(obj["obstacles"], list):
        raise ParseError(f"{what}.obstacles: expected a list")
    try:
        return Environment(
            SimplePolygon(boundary),
            [
                SimplePolygon(_coords(o, f"{what}.obstacles[{i}]"))
                for i, o in enumerate(obj["obstacles"])
            ],
            name=str(obj["name"]),
        )
    except EniError as exc:
        if isinstance(exc, (ParseError, InvariantViolation)):
            raise
        raise InvariantViolation(f"{what}: {exc}") from exc


def save_environment(path, env: Environment) -> None:
    obj = env_to_obj(env)
    obj["format_version"] = FORMAT_VERSION
    _write_json(path, obj)


def load_environment(path) -> Environment:
    obj = _read_json(path)
    _check_keys(
        obj, str(path), {"name", "boundary", "obstacles"}, optional={"format_version"}
    )
    _check_version(obj, str(path))
    return env_from_obj(
        {k: obj[k] for k in ("name", "boundary", "obstacles")}, what=str(path)
    )


# ---------------------------------------------------------------------------
# Sample sets and metric results
# ---------------------------------------------------------------------------


def _samples_to_obj(samples: SampleSet) -> dict:
    return {
        "max_area_used": float(samples.max_area_used),
        "points": _point_list(samples.points),
        "vis_polygons": [
            {
                "kernel": [vp.kernel.x, vp.kernel.y],
                "vertices": _point_list(vp.polygon.vertices),
            }
            for vp in samples.vis_polygons
        ],
    }


def _samples_from_obj(obj, what: str) -> SampleSet:
    _check_keys(obj, what, {"max_area_used", "points", "vis_polygons"})
    points = _coords(obj["points"], f"{what}.points")
    polys = obj["vis_polygons"]
    if not isinstance(polys, list) or len(polys) != points.shape[0]:
        raise InvariantViolation(f"{what}: points and vis_polygons lengths differ")
    vis = []
    for i, vp_obj in enumerate(polys):
        _check_keys(vp_obj, f"{what}.vis_polygons[{i}]", {"kernel", "vertices"})
        kx, ky = (float(v) for v in vp_obj["kernel"])
        if abs(kx - points[i, 0]) > 1e-12 or abs(ky - points[i, 1]) > 1e-12:
            raise InvariantViolation(f"{what}.vis_polygons[{i}]: kernel != point")
        verts = _coords(vp_obj["vertices"], f"{what}.vis_polygons[{i}].vertices")
        try:
            vis.append(
                VisibilityPolygon(Point2(kx, ky), SimplePolygon(verts, validate=False))
            )
        except EniError as exc:
            raise InvariantViolation(f"{what}.vis_polygons[{i}]: {exc}") from exc
    pts = np.ascontiguousarray(points)
    pts.setflags(write=False)
    return SampleSet(
        points=pts, vis_polygons=vis, max_area_used=float(obj["max_area_used"])
    )


def _matches_to_obj(matches: list[MatchRecord]) -> list[dict]:
    return [
        {
            "virt_index": m.virt_index,
            "phys_index": m.phys_index,
            "theta_index": m.theta_index,
            "score": float(m.score),
        }
        for m in matches
    ]


def _matches_from_obj(obj, what: str, n_virt: int, n_phys: int, n_theta: int):
    if not isinstance(obj, list):
        raise ParseError(f"{what}: expected a list")
    matches = []
    for i, rec in enumerate(obj):
        _check_keys(
            rec, f"{what}[{i}]", {"virt_index", "phys_index", "theta_index", "score"}
        )
        m = MatchRecord(
            virt_index=int(rec["virt_index"]),
            phys_index=int(rec["phys_index"]),
            theta_index=int(rec["theta_index"]),
            score=float(rec["score"]),
        )
        if m.virt_index != i or not (0 <= m.phys_index < n_phys) or not (
            0 <= m.theta_index < n_theta
        ):
            raise InvariantViolation(f"{what}[{i}]: index out of range")
        if m.score < 0.0 or not math.isfinite(m.score):
            raise InvariantViolation(f"{what}[{i}]: invalid score")
        matches.append(m)
    if len(matches) != n_virt:
        raise InvariantViolation(f"{what}: expected {n_virt} records")
    return matches


def save_eni_result(path, result: EniResult) -> None:
    if result.phys_samples is None or result.virt_samples is None:
        raise InvariantViolation("result is missing its sample sets")
    if result.env_phys is None or result.env_virt is None:
        raise InvariantViolation("result is missing its environments")
    obj = {
        "format_version": FORMAT_VERSION,
        "kind": "eni_result",
        "mean": float(result.mean),
        "std": float(result.std),
        "x": _float_list(result.x),
        "matches": _matches_to_obj(result.matches),
        "theta_angles": _float_list(result.thetas.angles),
        "env_phys": env_to_obj(result.env_phys),
        "env_virt": env_to_obj(result.env_virt),
        "phys_samples": _samples_to_obj(result.phys_samples),
        "virt_samples": _samples_to_obj(result.virt_samples),
    }
    _write_json(path, obj)


def load_eni_result(path) -> EniResult:
    obj = _read_json(path)
    what = str(path)
    _check_keys(
        obj,
        what,
        {
            "format_version",
            "kind",
            "mean",
            "std",
            "x",
            "matches",
            "theta_angles",
            "env_phys",
            "env_virt",
            "phys_samples",
            "virt_samples",
        },
    )
    _check_version(obj, what)
    if obj["kind"] != "eni_result":
        raise ParseError(f"{what}: kind {obj['kind']!r} is not 'eni_result'")
    thetas = RotationSet(np.asarray(obj["theta_angles"], dtype=float))
    env_phys = env_from_obj(obj["env_phys"], f"{what}.env_phys")
    env_virt = env_from_obj(obj["env_virt"], f"{what}.env_virt")
    phys_samples = _samples_from_obj(obj["phys_samples"], f"{what}.phys_samples")
    virt_samples = _samples_from_obj(obj["virt_samples"], f"{what}.virt_samples")
    x = np.asarray(obj["x"], dtype=float)
    if x.ndim != 1 or x.size != len(virt_samples):
        raise InvariantViolation(f"{what}: x length != virtual sample count")
    matches = _matches_from_obj(
        obj["matches"], f"{what}.matches", x.size, len(phys_samples), len(thetas)
    )
    for m in matches:
        if abs(m.score - x[m.virt_index]) > 1e-12 * max(1.0, abs(m.score)):
            raise InvariantViolation(f"{what}: matches[{m.virt_index}].score != x")
    return EniResult(
        x=x,
        matches=matches,
        mean=float(obj["mean"]),
        std=float(obj["std"]),
        phys_samples=phys_samples,
        virt_samples=virt_samples,
        thetas=thetas,
        env_phys=env_phys,
        env_virt=env_virt,
    )


# ---------------------------------------------------------------------------
# Visualization bundle
# ---------------------------------------------------------------------------


def histogram_edges(x: np.ndarray, bins: int = HISTOGRAM_BINS) -> np.ndarray:
    """Equal-width bin edges over [0, max(x)] (degenerate all-zero: [0, 1])."""
    top = float(np.max(x)) if x.size else 0.0
    if top <= 0.0:
        top = 1.0
    return np.linspace(0.0, top, bins + 1)


def export_viz_bundle(path, result: EniResult, traces: list[Trace] | None = None) -> None:
    """Self-contained bundle for the interactive compatibility explorer."""
    if result.phys_samples is None or result.virt_samples is None:
        raise InvariantViolation("result is missing its sample sets")
    if result.env_phys is None or result.env_virt is None:
        raise InvariantViolation("result is missing its environments")
    obj = {
        "format_version": FORMAT_VERSION,
        "kind": "viz_bundle",
        "env_phys": env_to_obj(result.env_phys),
        "env_virt": env_to_obj(result.env_virt),
        "phys_points": _point_list(result.phys_samples.points),
        "virt_points": _point_list(result.virt_samples.points),
        "scores": _float_list(result.x),
        "mean": float(result.mean),
        "std": float(result.std),
        "matches": _matches_to_obj(result.matches),
        "histogram": {"bin_edges": _float_list(histogram_edges(result.x))},
        "traces": [_trace_to_obj(t) for t in (traces or [])],
    }
    _write_json(path, obj)


def load_viz_bundle(path) -> dict:
    """Bundle as a validated dict (the UI consumes the raw JSON structure)."""
    obj = _read_json(path)
    what = str(path)
    _check_keys(
        obj,
        what,
        {
            "format_version",
            "kind",
            "env_phys",
            "env_virt",
            "phys_points",
            "virt_points",
            "scores",
            "mean",
            "std",
            "matches",
            "histogram",
            "traces",
        },
    )
    _check_version(obj, what)
    if obj["kind"] != "viz_bundle":
        raise ParseError(f"{what}: kind {obj['kind']!r} is not 'viz_bundle'")
    n = len(obj["virt_points"])
    if len(obj["scores"]) != n or len(obj["matches"]) != n:
        raise InvariantViolation(f"{what}: scores/matches length != virt point count")
    _matches_from_obj(
        obj["matches"], f"{what}.matches", n, len(obj["phys_points"]),
        n_theta=2 ** 31,
    )
    edges = obj["histogram"].get("bin_edges", [])
    if len(edges) != HISTOGRAM_BINS + 1:
        raise InvariantViolation(f"{what}: histogram needs {HISTOGRAM_BINS + 1} edges")
    return obj


# ---------------------------------------------------------------------------
# Traces and simulation reports
# ---------------------------------------------------------------------------


def _trace_to_obj(trace: Trace) -> dict:
    return {
        "controller": trace.controller,
        "dt": float(trace.dt),
        "phys_positions": _point_list(trace.phys_positions),
        "phys_headings": _float_list(trace.phys_headings),
        "virt_positions": _point_list(trace.virt_positions),
        "virt_headings": _float_list(trace.virt_headings),
        "resets": [
            {"position": [float(r.position[0]), float(r.position[1])], "timestep": r.timestep}
            for r in trace.resets
        ],
        "reset_distances": _float_list(trace.reset_distances),
        "total_virtual_distance": float(trace.total_virtual_distance),
    }


def _trace_from_obj(obj, what: str) -> Trace:
    _check_keys(
        obj,
        what,
        {
            "controller",
            "dt",
            "phys_positions",
            "phys_headings",
            "virt_positions",
            "virt_headings",
            "resets",
            "reset_distances",
            "total_virtual_distance",
        },
    )
    resets = [
        ResetEvent(
            position=np.asarray(r["position"], dtype=float), timestep=int(r["timestep"])
        )
        for r in obj["resets"]
    ]
    return Trace(
        phys_positions=_coords(obj["phys_positions"], f"{what}.phys_positions"),
        phys_headings=np.asarray(obj["phys_headings"], dtype=float),
        virt_positions=_coords(obj["virt_positions"], f"{what}.virt_positions"),
        virt_headings=np.asarray(obj["virt_headings"], dtype=float),
        resets=resets,
        reset_distances=[float(v) for v in obj["reset_distances"]],
        total_virtual_distance=float(obj["total_virtual_distance"]),
        controller=str(obj["controller"]),
        dt=float(obj["dt"]),
    )


def save_simulation_report(
    path,
    report: NavigabilityReport,
    traces: list[Trace],
    controller: str,
    paths_requested: int,
    planning_failures: int,
    seed: int,
) -> None:
    obj = {
        "format_version": FORMAT_VERSION,
        "kind": "simulation_report",
        "controller": controller,
        "seed": seed,
        "paths_requested": paths_requested,
        "paths_completed": report.paths,
        "planning_failures": planning_failures,
        "mean_distance_between_resets": float(report.mean_distance),
        "std_distance_between_resets": float(report.std_distance),
        "total_resets": report.total_resets,
        "traces": [_trace_to_obj(t) for t in traces],
    }
    _write_json(path, obj)


def load_simulation_report(path) -> tuple[NavigabilityReport, list[Trace], dict]:
    obj = _read_json(path)
    what = str(path)
    _check_keys(
        obj,
        what,
        {
            "format_version",
            "kind",
            "controller",
            "seed",
            "paths_requested",
            "paths_completed",
            "planning_failures",
            "mean_distance_between_resets",
            "std_distance_between_resets",
            "total_resets",
            "traces",
        },
    )
    _check_version(obj, what)
    if obj["kind"] != "simulation_report":
        raise ParseError(f"{what}: kind {obj['kind']!r} is not 'simulation_report'")
    traces = [
        _trace_from_obj(t, f"{what}.traces[{i}]") for i, t in enumerate(obj["traces"])
    ]
    report = NavigabilityReport(
        mean_distance=float(obj["mean_distance_between_resets"]),
        std_distance=float(obj["std_distance_between_resets"]),
        paths=int(obj["paths_completed"]),
        total_resets=int(obj["total_resets"]),
    )
    return report, traces, obj
