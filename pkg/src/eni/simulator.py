"""Simultaneous physical/virtual walking simulation.

A virtual path is planned with RRT* and smoothed; the agent then walks it at
fixed timestep while a redirection controller maps virtual motion to physical
motion through translation/rotation/curvature gains. When the physical pose
would drop below the clearance threshold the move is aborted and a
reset-to-gradient maneuver reorients the agent in place. Distance walked
between resets, pooled over paths, is the navigability statistic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidInput,
    PlanningFailed,
    PoseOutOfBounds,
    SimulationDiverged,
)
from .geometry import (
    Environment,
    as_xy,
    free_clearance,
    point_in_free_space,
    points_in_free_space,
    ray_clearance,
    segment_clearance,
)

#: simulation timestep (s) and walking speed (m/s)
DT = 0.05
WALK_SPEED = 1.0
#: in-place turn rate during resets (rad/s)
TURN_RATE = math.pi / 2
#: physical clearance below which a reset fires (m)
RESET_THRESHOLD = 0.25
#: agent body radius used for path clearance (m)
AGENT_RADIUS = 0.25

_TWO_PI = 2.0 * math.pi

CONTROLLERS = ("none", "s2c", "apf", "arc")


@dataclass(frozen=True)
class GainLimits:
    """Perceptual redirection limits; identity gains must be inside the range."""

    translation: tuple[float, float] = (0.86, 1.26)
    rotation: tuple[float, float] = (0.67, 1.24)
    curvature_radius_min: float = 7.5

    def __post_init__(self):
        for lo, hi in (self.translation, self.rotation):
            if not (lo <= 1.0 <= hi):
                raise InvalidInput("gain limits must contain 1.0")
        if self.curvature_radius_min <= 0.0:
            raise InvalidInput("curvature_radius_min must be positive")


DEFAULT_GAIN_LIMITS = GainLimits()


@dataclass(frozen=True)
class StepGains:
    """Controller output for one step; curvature_direction is +1 left, -1 right."""

    translation_gain: float = 1.0
    rotation_gain: float = 1.0
    curvature_radius: float = math.inf
    curvature_direction: int = 0

    def clamped(self, limits: GainLimits) -> "StepGains":
        radius = self.curvature_radius
        if self.curvature_direction != 0:
            radius = max(radius, limits.curvature_radius_min)
        return StepGains(
            translation_gain=min(max(self.translation_gain, limits.translation[0]), limits.translation[1]),
            rotation_gain=min(max(self.rotation_gain, limits.rotation[0]), limits.rotation[1]),
            curvature_radius=radius,
            curvature_direction=self.curvature_direction,
        )


@dataclass
class AgentState:
    """Paired physical/virtual pose."""

    phys_pos: np.ndarray
    phys_heading: float
    virt_pos: np.ndarray
    virt_heading: float

    def copy(self) -> "AgentState":
        return AgentState(
            phys_pos=self.phys_pos.copy(),
            phys_heading=self.phys_heading,
            virt_pos=self.virt_pos.copy(),
            virt_heading=self.virt_heading,
        )


def aligned_state(start, heading: float = 0.0, phys_offset=(0.0, 0.0)) -> AgentState:
    """Agent standing at ``start`` in both worlds, physically shifted by offset."""
    v = as_xy(start)
    return AgentState(
        phys_pos=v + as_xy(phys_offset),
        phys_heading=heading,
        virt_pos=v.copy(),
        virt_heading=heading,
    )


@dataclass(frozen=True)
class PathPlan:
    """Collision-free virtual waypoint polyline."""

    waypoints: np.ndarray
    total_length: float


@dataclass(frozen=True)
class ResetEvent:
    position: np.ndarray
    timestep: int


@dataclass
class Trace:
    """Recorded walk: pose pair per timestep plus reset bookkeeping."""

    phys_positions: np.ndarray
    phys_headings: np.ndarray
    virt_positions: np.ndarray
    virt_headings: np.ndarray
    resets: list[ResetEvent] = field(default_factory=list, repr=False)
    reset_distances: list[float] = field(default_factory=list)
    total_virtual_distance: float = 0.0
    controller: str = "none"
    dt: float = DT

    def __len__(self) -> int:
        return self.virt_positions.shape[0]


@dataclass(frozen=True)
class NavigabilityReport:
    """Pooled distance-between-resets statistics across traces."""

    mean_distance: float
    std_distance: float
    paths: int
    total_resets: int


def _wrap_pi(a: float) -> float:
    return (a + math.pi) % _TWO_PI - math.pi


# ---------------------------------------------------------------------------
# Path planning
# ---------------------------------------------------------------------------


def _point_clear(env: Environment, p: np.ndarray, radius: float) -> bool:
    return bool(points_in_free_space(env, p[None, :], clearance=radius)[0])


def _segment_clear(env: Environment, a: np.ndarray, b: np.ndarray, radius: float) -> bool:
    return segment_clearance(env, a, b) >= radius


def _string_pull(env: Environment, pts: list[np.ndarray], radius: float) -> list[np.ndarray]:
    out = [pts[0]]
    i = 0
    while i < len(pts) - 1:
        j = len(pts) - 1
        while j > i + 1 and not _segment_clear(env, pts[i], pts[j], radius):
            j -= 1
        out.append(pts[j])
        i = j
    return out


def plan_virtual_path(
    env_virt: Environment,
    start,
    goal,
    rng_seed: int = 0,
    *,
    iterations: int = 3000,
    step_size: float = 0.5,
    goal_bias: float = 0.1,
    agent_radius: float = AGENT_RADIUS,
    shortcut_attempts: int = 100,
) -> PathPlan:
    """RRT* followed by greedy and seeded-random shortcut smoothing."""
    start = as_xy(start)
    goal = as_xy(goal)
    for name, p in (("start", start), ("goal", goal)):
        if not _point_clear(env_virt, p, agent_radius):
            raise PlanningFailed(f"{name} lacks clearance {agent_radius} in free space")
    if float(np.linalg.norm(goal - start)) < 1e-12:
        return PathPlan(waypoints=start[None, :].copy(), total_length=0.0)
    if _segment_clear(env_virt, start, goal, agent_radius):
        wp = np.stack([start, goal])
        return PathPlan(waypoints=wp, total_length=float(np.linalg.norm(goal - start)))

    rng = np.random.default_rng(rng_seed)
    cap = iterations + 2
    nodes = np.empty((cap, 2))
    parent = np.full(cap, -1, dtype=np.int64)
    cost = np.zeros(cap)
    nodes[0] = start
    n = 1
    goal_parent = -1
    goal_cost = math.inf
    xmin, ymin, xmax, ymax = env_virt.bbox
    gamma = 2.0 * math.sqrt(1.5 * env_virt.free_area / math.pi)

    for _ in range(iterations):
        if rng.random() < goal_bias:
            target = goal
        else:
            target = rng.uniform((xmin, ymin), (xmax, ymax))
        diff = nodes[:n] - target
        d2 = np.einsum("ij,ij->i", diff, diff)
        ni = int(np.argmin(d2))
        dist = math.sqrt(d2[ni])
        if dist < 1e-9:
            continue
        new = nodes[ni] + (min(step_size, dist) / dist) * (target - nodes[ni])
        if not _point_clear(env_virt, new, agent_radius):
            continue
        rn = min(gamma * math.sqrt(math.log(n + 1) / (n + 1)), 4.0 * step_size)
        diff = nodes[:n] - new
        d2 = np.einsum("ij,ij->i", diff, diff)
        near = np.nonzero(d2 <= rn * rn)[0]
        if near.size == 0:
            near = np.array([ni])
        best_par = -1
        best_cost = math.inf
        for j in near:
            c = cost[j] + math.sqrt(d2[j])
            if c < best_cost and _segment_clear(env_virt, nodes[j], new, agent_radius):
                best_par = int(j)
                best_cost = c
        if best_par < 0:
            continue
        nodes[n] = new
        parent[n] = best_par
        cost[n] = best_cost
        for j in near:
            c2 = best_cost + math.sqrt(d2[j])
            if c2 + 1e-12 < cost[j] and _segment_clear(env_virt, new, nodes[j], agent_radius):
                parent[j] = n
                cost[j] = c2
        dgoal = float(np.linalg.norm(goal - new))
        if dgoal <= step_size and best_cost + dgoal < goal_cost:
            if _segment_clear(env_virt, new, goal, agent_radius):
                goal_parent = n
                goal_cost = best_cost + dgoal
        n += 1

    if goal_parent < 0:
        raise PlanningFailed(f"no path found within {iterations} iterations")
    chain = [goal]
    k = goal_parent
    while k >= 0:
        chain.append(nodes[k].copy())
        k = parent[k]
    chain.reverse()

    chain = _string_pull(env_virt, chain, agent_radius)
    for _ in range(shortcut_attempts):
        if len(chain) <= 2:
            break
        i = int(rng.integers(0, len(chain) - 2))
        j = int(rng.integers(i + 2, len(chain)))
        if _segment_clear(env_virt, chain[i], chain[j], agent_radius):
            chain = chain[: i + 1] + chain[j:]
    chain = _string_pull(env_virt, chain, agent_radius)

    wp = np.asarray(chain)
    total = float(np.sum(np.linalg.norm(np.diff(wp, axis=0), axis=1)))
    return PathPlan(waypoints=wp, total_length=total)


# ---------------------------------------------------------------------------
# Controllers
# ---------------------------------------------------------------------------


def _repulsive_gradient(env: Environment, p: np.ndarray) -> np.ndarray:
    """Sum over edges of (unit vector away from edge) / distance^2."""
    p0, p1 = env.edges_p0, env.edges_p1
    d = p1 - p0
    dd = np.maximum(np.einsum("ij,ij->i", d, d), 1e-300)
    t = np.clip(np.einsum("j,ij->i", p, d) - np.einsum("ij,ij->i", p0, d), 0.0, dd) / dd
    closest = p0 + t[:, None] * d
    away = p[None, :] - closest
    dist = np.maximum(np.linalg.norm(away, axis=1), 1e-6)
    return np.sum(away / (dist ** 3)[:, None], axis=0)


def reset_to_gradient(state: AgentState, env_phys: Environment) -> float:
    """New physical heading along the obstacle repulsion gradient.

    Falls back to a 180-degree turn when the surroundings are symmetric enough
    that the gradient vanishes.
    """
    g = _repulsive_gradient(env_phys, state.phys_pos)
    norm = float(np.linalg.norm(g))
    if norm < 1e-9:
        return (state.phys_heading + math.pi) % _TWO_PI
    return math.atan2(float(g[1]), float(g[0])) % _TWO_PI


def _steer_gains(
    heading: float, target_dir: np.ndarray, pending_rotation: float, limits: GainLimits
) -> StepGains:
    """Curvature toward a target direction plus rotation-gain assistance."""
    norm = float(np.linalg.norm(target_dir))
    if norm < 1e-9:
        return StepGains()
    h = np.array([math.cos(heading), math.sin(heading)])
    side = float(h[0] * target_dir[1] - h[1] * target_dir[0])  # >0: target to the left
    misalign = math.atan2(side, float(np.dot(h, target_dir)))
    rotation_gain = 1.0
    if abs(pending_rotation) > 1e-12 and abs(misalign) > 1e-3:
        helps = (pending_rotation > 0) == (misalign > 0)
        rotation_gain = limits.rotation[0] if helps else limits.rotation[1]
    direction = 0
    if abs(misalign) > math.radians(5.0):
        direction = 1 if misalign > 0 else -1
    return StepGains(
        rotation_gain=rotation_gain,
        curvature_radius=limits.curvature_radius_min if direction else math.inf,
        curvature_direction=direction,
    )


def apply_controller(
    controller: str,
    state: AgentState,
    env_phys: Environment,
    env_virt: Environment,
    limits: GainLimits = DEFAULT_GAIN_LIMITS,
    pending_rotation: float = 0.0,
) -> StepGains:
    """Gains for this step; always returned clamped to the limits."""
    if controller == "none":
        return StepGains()
    if controller == "s2c":
        to_center = env_phys.boundary.centroid - state.phys_pos
        if float(np.linalg.norm(to_center)) < 1.25:
            return StepGains()
        return _steer_gains(state.phys_heading, to_center, pending_rotation, limits).clamped(limits)
    if controller == "apf":
        force = _repulsive_gradient(env_phys, state.phys_pos)
        return _steer_gains(state.phys_heading, force, pending_rotation, limits).clamped(limits)
    if controller == "arc":
        return _arc_gains(state, env_phys, env_virt, limits, pending_rotation).clamped(limits)
    raise InvalidInput(f"unknown controller {controller!r} (choose from {CONTROLLERS})")


def _arc_gains(
    state: AgentState,
    env_phys: Environment,
    env_virt: Environment,
    limits: GainLimits,
    pending_rotation: float,
) -> StepGains:
    """Alignment-driven gains from physical-versus-virtual clearance mismatch."""
    d_pf = ray_clearance(env_phys, state.phys_pos, state.phys_heading)
    d_vf = ray_clearance(env_virt, state.virt_pos, state.virt_heading)
    d_pl = ray_clearance(env_phys, state.phys_pos, state.phys_heading + math.pi / 2)
    d_vl = ray_clearance(env_virt, state.virt_pos, state.virt_heading + math.pi / 2)
    d_pr = ray_clearance(env_phys, state.phys_pos, state.phys_heading - math.pi / 2)
    d_vr = ray_clearance(env_virt, state.virt_pos, state.virt_heading - math.pi / 2)

    translation_gain = d_vf / max(d_pf, 1e-9)

    side_error = (d_pl - d_vl) - (d_pr - d_vr)  # >0: surplus physical room on the left
    direction = 0
    if abs(side_error) > 0.1:
        direction = 1 if side_error > 0 else -1

    rotation_gain = 1.0
    if abs(pending_rotation) > 1e-12 and abs(side_error) > 0.1:
        helps = (pending_rotation > 0) == (side_error > 0)
        rotation_gain = limits.rotation[0] if helps else limits.rotation[1]

    return StepGains(
        translation_gain=translation_gain,
        rotation_gain=rotation_gain,
        curvature_radius=limits.curvature_radius_min if direction else math.inf,
        curvature_direction=direction,
    )


# ---------------------------------------------------------------------------
# Walking simulation
# ---------------------------------------------------------------------------


def simulate_path(
    env_phys: Environment,
    env_virt: Environment,
    plan: PathPlan,
    controller: str = "none",
    start_state: AgentState | None = None,
    rng_seed: int = 0,
    *,
    limits: GainLimits = DEFAULT_GAIN_LIMITS,
    dt: float = DT,
    speed: float = WALK_SPEED,
    turn_rate: float = TURN_RATE,
    reset_threshold: float = RESET_THRESHOLD,
    max_steps: int = 10 ** 6,
) -> Trace:
    """Walk the plan in both worlds simultaneously; deterministic per inputs.

    ``rng_seed`` is part of the interface for controllers that may draw random
    steering; the built-in controllers are deterministic and ignore it.
    """
    del rng_seed
    if controller not in CONTROLLERS:
        raise InvalidInput(f"unknown controller {controller!r} (choose from {CONTROLLERS})")
    wp = plan.waypoints
    if start_state is None:
        heading = 0.0
        if wp.shape[0] > 1:
            d = wp[1] - wp[0]
            heading = math.atan2(float(d[1]), float(d[0]))
        start_state = aligned_state(wp[0], heading=heading)
    state = start_state.copy()
    if not point_in_free_space(env_virt, state.virt_pos):
        raise PoseOutOfBounds("virtual start pose is outside free space")
    if not point_in_free_space(env_phys, state.phys_pos):
        raise PoseOutOfBounds("physical start pose is outside free space")

    rows_pp: list[np.ndarray] = [state.phys_pos.copy()]
    rows_ph: list[float] = [state.phys_heading]
    rows_vp: list[np.ndarray] = [state.virt_pos.copy()]
    rows_vh: list[float] = [state.virt_heading]
    resets: list[ResetEvent] = []
    reset_distances: list[float] = []

    seg = 0
    seg_remaining = (
        float(np.linalg.norm(wp[1] - wp[0])) if wp.shape[0] > 1 else 0.0
    )
    dist_since_reset = 0.0
    total_virtual = 0.0
    steps = 0
    escape_next = False  # commit the next move even under threshold (livelock guard)

    while seg < wp.shape[0] - 1:
        steps += 1
        if steps > max_steps:
            raise SimulationDiverged(f"exceeded {max_steps} steps")

        # build this step's micro-actions (turn, move) along the polyline
        actions: list[tuple[float, float]] = []
        budget = speed * dt
        s = seg
        rem = seg_remaining
        h = state.virt_heading
        while budget > 1e-12 and s < wp.shape[0] - 1:
            d = wp[s + 1] - wp[s]
            seg_heading = math.atan2(float(d[1]), float(d[0]))
            turn = _wrap_pi(seg_heading - h)
            move = min(budget, rem)
            actions.append((turn, move))
            h += turn
            budget -= move
            rem -= move
            if rem <= 1e-12:
                s += 1
                rem = (
                    float(np.linalg.norm(wp[s + 1] - wp[s]))
                    if s < wp.shape[0] - 1
                    else 0.0
                )
        if not actions:
            break
        pending_rotation = sum(a[0] for a in actions)

        gains = apply_controller(
            controller, state, env_phys, env_virt, limits, pending_rotation
        ).clamped(limits)

        new = state.copy()
        moved = 0.0
        for turn, move in actions:
            new.virt_heading += turn
            new.phys_heading += turn / gains.rotation_gain
            d_p = move / gains.translation_gain
            bend = 0.0
            if gains.curvature_direction != 0 and math.isfinite(gains.curvature_radius):
                bend = gains.curvature_direction * d_p / gains.curvature_radius
            new.phys_heading += 0.5 * bend
            new.virt_pos = new.virt_pos + move * np.array(
                [math.cos(new.virt_heading), math.sin(new.virt_heading)]
            )
            new.phys_pos = new.phys_pos + d_p * np.array(
                [math.cos(new.phys_heading), math.sin(new.phys_heading)]
            )
            new.phys_heading += 0.5 * bend
            moved += move

        inside = point_in_free_space(env_phys, new.phys_pos)
        clear = free_clearance(env_phys, new.phys_pos) if inside else 0.0
        if clear < reset_threshold and not (escape_next and inside):
            # reset in place of the move
            resets.append(
                ResetEvent(position=state.phys_pos.copy(), timestep=len(rows_pp))
            )
            reset_distances.append(dist_since_reset)
            dist_since_reset = 0.0
            new_heading = reset_to_gradient(state, env_phys)
            turn_amount = abs(_wrap_pi(new_heading - state.phys_heading))
            state.phys_heading = new_heading
            steps += int(turn_amount / (turn_rate * dt))  # time spent turning
            rows_pp.append(state.phys_pos.copy())
            rows_ph.append(state.phys_heading)
            rows_vp.append(state.virt_pos.copy())
            rows_vh.append(state.virt_heading)
            escape_next = True
            continue

        state = new
        seg = s
        seg_remaining = rem
        total_virtual += moved
        dist_since_reset += moved
        escape_next = False
        rows_pp.append(state.phys_pos.copy())
        rows_ph.append(state.phys_heading)
        rows_vp.append(state.virt_pos.copy())
        rows_vh.append(state.virt_heading)

    reset_distances.append(dist_since_reset)
    return Trace(
        phys_positions=np.asarray(rows_pp),
        phys_headings=np.asarray(rows_ph),
        virt_positions=np.asarray(rows_vp),
        virt_headings=np.asarray(rows_vh),
        resets=resets,
        reset_distances=reset_distances,
        total_virtual_distance=total_virtual,
        controller=controller,
        dt=dt,
    )


def navigability(traces: list[Trace]) -> NavigabilityReport:
    """Pool distance-between-resets segments across traces.

    A reset-free trace contributes a single segment of its full length (its
    tail); every trace's segments sum to its total virtual distance.
    """
    if not traces:
        raise InvalidInput("navigability needs at least one trace")
    segments = np.concatenate([np.asarray(t.reset_distances, dtype=float) for t in traces])
    return NavigabilityReport(
        mean_distance=float(np.mean(segments)),
        std_distance=float(np.std(segments)),
        paths=len(traces),
        total_resets=int(sum(len(t.resets) for t in traces)),
    )
