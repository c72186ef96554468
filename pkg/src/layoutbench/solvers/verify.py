"""
Constraint verification
~~~~~~~~~~~~~~~~~~~~~~~

Checks a candidate graph against an instance's spec directly (orders, gaps,
span, lattice cells, distances, collisions) without going through IoU.

"""

import math
from collections.abc import Iterator
from dataclasses import dataclass

from ..exceptions import LayoutBenchError
from ..metrics import DEFAULT_COLLISION_EPS, colliding_pairs, normalize_caption, order_along_axis
from ..scene_graph import SceneGraph, world_aabb
from ..tasks import GridSpec, PlacementSpec, SortSpec, TaskInstance, TaskKind
from .sorting import arrange

__all__ = ("ConstraintCheck", "VerifyReport", "verify")

POSITION_TOLERANCE = 1e-6
DISTANCE_TOLERANCE = 0.01


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    passed: bool
    measured: object
    expected: object
    tolerance: float | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class VerifyReport:
    instance_id: str
    checks: tuple[ConstraintCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[ConstraintCheck]:
        return [check for check in self.checks if not check.passed]

    def __getitem__(self, name: str) -> ConstraintCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "id": self.instance_id,
            "passed": self.passed,
            "checks": [check.as_dict() for check in self.checks],
        }


def _within(name: str, measured: float, expected: float, tolerance: float) -> ConstraintCheck:
    return ConstraintCheck(
        name, abs(measured - expected) <= tolerance, measured, expected, tolerance
    )


def _max_deviation(values) -> float:
    return max(values, default=0.0)


def verify(instance: TaskInstance, candidate: SceneGraph) -> VerifyReport:
    """Per-constraint pass/fail of ``candidate`` for ``instance``."""
    expected_ids = sorted(instance.target_graph.ids)
    checks = [
        ConstraintCheck("nodes", candidate.ids == expected_ids, candidate.ids, expected_ids),
    ]
    pairs = colliding_pairs(candidate, DEFAULT_COLLISION_EPS)
    checks.append(
        ConstraintCheck("collision_free", not pairs, [list(pair) for pair in pairs], [])
    )

    if instance.task is TaskKind.SORTING:
        checks.extend(_verify_sorting(instance.spec, candidate))
    elif instance.task is TaskKind.ALIGNMENT:
        checks.extend(_verify_alignment(instance.spec, instance.initial_graph, candidate))
    else:
        checks.extend(_verify_placement(instance.spec, instance.initial_graph, candidate))

    return VerifyReport(instance.id, tuple(checks))


def _verify_sorting(spec: SortSpec, candidate: SceneGraph) -> Iterator[ConstraintCheck]:
    try:
        groups = arrange(candidate.objects(), spec)
    except LayoutBenchError as ex:
        yield ConstraintCheck("groups", False, str(ex), list(spec.group_order))
        return

    expected_order = [node.id for group in groups for node in group]
    measured_order = order_along_axis(candidate, spec.axis)
    yield ConstraintCheck("order", measured_order == expected_order, measured_order, expected_order)

    # Gaps measured between neighbours along the axis, in their actual order
    axis = spec.axis.index
    by_id = {node.id: node for node in candidate.objects()}
    group_of = {node.id: index for index, group in enumerate(groups) for node in group}
    ordered = [by_id[node_id] for node_id in measured_order]
    boxes = [world_aabb(node) for node in ordered]

    deviations = []
    for (a, box_a), (b, box_b) in zip(zip(ordered, boxes), zip(ordered[1:], boxes[1:])):
        gap = box_b.min[axis] - box_a.max[axis]
        wanted = spec.object_gap if group_of[a.id] == group_of[b.id] else spec.group_gap
        deviations.append(abs(gap - wanted))
    yield _within("gaps", _max_deviation(deviations), 0.0, POSITION_TOLERANCE)

    if boxes:
        start = min(box.min[axis] for box in boxes)
        span = max(box.max[axis] for box in boxes) - start
        yield _within("span", span, spec.total_span, POSITION_TOLERANCE)
        yield _within("span_start", start, spec.span_start, POSITION_TOLERANCE)

    off_axis = spec.off_axis.index
    yield _within(
        "center_line",
        _max_deviation(abs(node.center_location[off_axis] - spec.center_line) for node in ordered),
        0.0,
        POSITION_TOLERANCE,
    )
    yield _within(
        "support",
        _max_deviation(abs(box.min.z - spec.support_z) for box in boxes),
        0.0,
        POSITION_TOLERANCE,
    )


def _verify_alignment(
    spec: GridSpec, initial: SceneGraph, candidate: SceneGraph
) -> Iterator[ConstraintCheck]:
    objects = candidate.objects()

    cell_deviation = 0.0
    yaw_deviation = 0.0
    for (row, col), node_id in spec.cell_assignment.items():
        if node_id not in initial:
            continue
        reference = initial[node_id]
        caption = normalize_caption(reference.caption)
        center = spec.cell_center(row, col, reference.dimension.z)
        same_kind = [node for node in objects if normalize_caption(node.caption) == caption]
        if not same_kind:
            cell_deviation = math.inf
            continue
        nearest = min(same_kind, key=lambda node: ((node.center_location - center).norm(), node.id))
        cell_deviation = max(cell_deviation, (nearest.center_location - center).norm())
        wanted_yaw = spec.rotation_for(row).z
        yaw_deviation = max(yaw_deviation, abs(nearest.rotation.z - wanted_yaw))

    yield _within("lattice", cell_deviation, 0.0, POSITION_TOLERANCE)
    yield _within("rotation", yaw_deviation, 0.0, POSITION_TOLERANCE)

    perturbed = set(spec.perturbed_ids)
    moved = [
        node.id
        for node in initial.objects()
        if node.id not in perturbed
        and (node.id not in candidate or candidate[node.id] != node)
    ]
    yield ConstraintCheck("anchors_unchanged", not moved, moved, [])


def _verify_placement(
    spec: PlacementSpec, initial: SceneGraph, candidate: SceneGraph
) -> Iterator[ConstraintCheck]:
    node_id = spec.new_node.id
    if node_id not in candidate:
        yield ConstraintCheck("inserted", False, None, node_id)
        return
    node = candidate[node_id]
    yield ConstraintCheck("inserted", True, node_id, node_id)

    for ref in spec.references:
        name = f"distance[{ref.node_id}]"
        if ref.node_id not in candidate:
            yield ConstraintCheck(name, False, None, ref.distance, DISTANCE_TOLERANCE)
            continue
        measured = (node.center_location - candidate[ref.node_id].center_location).norm()
        yield _within(name, measured, ref.distance, DISTANCE_TOLERANCE)

    box = world_aabb(node)
    yield ConstraintCheck(
        "in_bounds",
        spec.room_bounds.contains(box),
        [list(box.min), list(box.max)],
        [list(spec.room_bounds.min), list(spec.room_bounds.max)],
    )
    yield _within("support", box.min.z, spec.floor_z, POSITION_TOLERANCE)

    moved = [
        other.id
        for other in initial
        if other.id not in candidate or candidate[other.id] != other
    ]
    yield ConstraintCheck("existing_unchanged", not moved, moved, [])
