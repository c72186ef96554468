"""
Placement oracle
~~~~~~~~~~~~~~~~

Inserts a new object at stated center-to-center distances from two or three
reference objects.

The new object stands on the floor, so only ``(x, y)`` is unknown. Each 3D
distance ``d`` becomes a planar radius ``sqrt(d² - Δz²)``. Two references give
up to two circle intersections; three references give a least-squares point
from the linearised system, refined with Levenberg-Marquardt
(:func:`scipy.optimize.least_squares`). Candidates must lie inside the room and
must not collide with existing objects.

"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from ..exceptions import InfeasibleError, SolverError
from ..metrics import DEFAULT_COLLISION_EPS
from ..scene_graph import Node, SceneGraph, Vec3, quantize, world_aabb
from ..tasks import PlacementSpec
from .base import SolveResult, describe, move

__all__ = (
    "Candidate",
    "circle_intersections",
    "placement_candidates",
    "placement_residual",
    "solve_placement",
)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITERATIONS = 100
CIRCLE_SLACK = 1e-6


@dataclass(frozen=True)
class Candidate:
    x: float
    y: float
    residual: float
    in_bounds: bool
    collides_with: tuple[int, ...]

    @property
    def feasible(self) -> bool:
        return self.in_bounds and not self.collides_with

    def sort_key(self):
        return round(self.residual, 12), self.x, self.y


def circle_intersections(
    c1: tuple[float, float], r1: float, c2: tuple[float, float], r2: float
) -> list[tuple[float, float]]:
    """Intersection points of two circles, ordered lexicographically.

    :raises InfeasibleError: circles are concentric, disjoint or nested.
    """
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    distance = math.hypot(dx, dy)
    if distance < 1e-12:  # noqa: PLR2004
        raise InfeasibleError("reference circles are concentric")
    if distance > r1 + r2 + CIRCLE_SLACK:
        raise InfeasibleError(
            "reference circles are disjoint", best_residual=distance - r1 - r2
        )
    if distance < abs(r1 - r2) - CIRCLE_SLACK:
        raise InfeasibleError(
            "one reference circle lies inside the other",
            best_residual=abs(r1 - r2) - distance,
        )

    a = (r1 * r1 - r2 * r2 + distance * distance) / (2 * distance)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    ux, uy = dx / distance, dy / distance
    mx, my = c1[0] + a * ux, c1[1] + a * uy
    points = {(mx - h * uy, my + h * ux), (mx + h * uy, my - h * ux)}
    return sorted(points)


def _references(g0: SceneGraph, spec: PlacementSpec, z: float):
    refs = []
    for ref in spec.references:
        if ref.node_id not in g0:
            raise SolverError(f"reference node {ref.node_id} is not in the scene")
        center = g0[ref.node_id].center_location
        refs.append((center, ref.distance))

    radii = []
    for center, distance in refs:
        dz = z - center.z
        squared = distance * distance - dz * dz
        if squared < -CIRCLE_SLACK:
            raise InfeasibleError(
                f"distance {distance:g} is shorter than the height offset {abs(dz):g}",
                best_residual=abs(dz) - distance,
            )
        radii.append(math.sqrt(max(squared, 0.0)))
    return refs, radii


def placement_residual(
    point: tuple[float, float], z: float, refs: list[tuple[Vec3, float]]
) -> float:
    """Root-sum-square violation of the 3D distance constraints."""
    return math.sqrt(
        math.fsum(
            (math.sqrt((point[0] - c.x) ** 2 + (point[1] - c.y) ** 2 + (z - c.z) ** 2) - d) ** 2
            for c, d in refs
        )
    )


def _least_squares_point(
    refs: list[tuple[Vec3, float]],
    radii: list[float],
    z: float,
    tolerance: float,
    max_iterations: int,
) -> tuple[float, float]:
    (c1, _), r1 = refs[0], radii[0]
    rows, rhs = [], []
    for (c, _), r in zip(refs[1:], radii[1:]):
        rows.append([2 * (c.x - c1.x), 2 * (c.y - c1.y)])
        rhs.append(r1 * r1 - r * r + c.x**2 + c.y**2 - c1.x**2 - c1.y**2)
    start, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)

    centers = np.array([[c.x, c.y, c.z] for c, _ in refs])
    distances = np.array([d for _, d in refs])

    def violations(p):
        offsets = centers - np.array([p[0], p[1], z])
        return np.sqrt((offsets**2).sum(axis=1)) - distances

    refined = least_squares(
        violations,
        start,
        method="lm",
        ftol=tolerance,
        xtol=tolerance,
        max_nfev=max_iterations,
    )
    return float(refined.x[0]), float(refined.x[1])


def _make_node(spec: PlacementSpec, x: float, y: float, z: float) -> Node:
    return spec.new_node.moved(Vec3(x, y, z))


def placement_candidates(
    g0: SceneGraph,
    spec: PlacementSpec,
    *,
    eps: float = DEFAULT_COLLISION_EPS,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> list[Candidate]:
    """Every candidate position with its residual and feasibility."""
    z = spec.floor_z + spec.new_node.dimension.z / 2
    refs, radii = _references(g0, spec, z)

    if len(refs) == 2:  # noqa: PLR2004
        points = circle_intersections(
            (refs[0][0].x, refs[0][0].y), radii[0], (refs[1][0].x, refs[1][0].y), radii[1]
        )
    else:
        points = [_least_squares_point(refs, radii, z, tolerance, max_iterations)]

    candidates = []
    for px, py in points:
        node = _make_node(spec, px, py, z)
        x, y = node.center_location.x, node.center_location.y
        box = world_aabb(node)
        collides = tuple(
            other.id
            for other in g0.objects()
            if other.id != node.id and box.intersection_volume(world_aabb(other)) > eps
        )
        candidates.append(
            Candidate(
                x=x,
                y=y,
                residual=placement_residual((x, y), node.center_location.z, refs),
                in_bounds=spec.room_bounds.contains(box),
                collides_with=collides,
            )
        )
    return sorted(candidates, key=Candidate.sort_key)


def solve_placement(
    g0: SceneGraph,
    spec: PlacementSpec,
    *,
    eps: float = DEFAULT_COLLISION_EPS,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> SolveResult:
    """Insert ``spec.new_node`` into ``g0``.

    :raises InfeasibleError: no candidate is in bounds and collision free.
    """
    candidates = placement_candidates(
        g0, spec, eps=eps, tolerance=tolerance, max_iterations=max_iterations
    )
    feasible = [candidate for candidate in candidates if candidate.feasible]
    if not feasible:
        raise InfeasibleError(
            "no in-bounds, collision-free position satisfies the distances",
            best_residual=min(candidate.residual for candidate in candidates),
        )

    best = feasible[0]
    z = quantize(spec.floor_z + spec.new_node.dimension.z / 2)
    node = _make_node(spec, best.x, best.y, z)
    named = ", ".join(
        f"{ref.distance:g} m from {g0[ref.node_id].caption or ref.node_id}"
        for ref in spec.references
    )
    graph, step = move(
        g0,
        node,
        f"Place the {node.caption} at {describe(node.center_location)} so it is {named}.",
    )
    logger.debug("Placed node %d with residual %.3g", node.id, best.residual)
    return SolveResult(graph, best.residual, (step,) if step else ())
