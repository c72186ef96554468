"""
Sorting oracle
~~~~~~~~~~~~~~

Groups objects, sorts each group and lays the groups out along one axis with
exact face-to-face gaps, starting at ``span_start``.

"""

import logging

from ..exceptions import InfeasibleError, UnknownGroupLabel
from ..scene_graph import Axis, Node, SceneGraph, quantize
from ..tasks import SortSpec, group_label
from .base import SolveResult, describe, move

__all__ = ("arrange", "solve_sorting")

logger = logging.getLogger(__name__)


def arrange(objects: list[Node], spec: SortSpec) -> list[list[Node]]:
    """Objects partitioned per ``group_order`` and sorted within each group."""
    groups: dict[str, list[Node]] = {label: [] for label in spec.group_order}
    for node in objects:
        label = group_label(node, spec.group_key)
        if label not in groups:
            raise UnknownGroupLabel(label, f"node {node.id} belongs to a group missing from the order")
        groups[label].append(node)

    for label, members in groups.items():
        if not members:
            raise UnknownGroupLabel(label, "group label has no objects in the graph")
        members.sort(key=spec.order_key)

    return list(groups.values())


def solve_sorting(g0: SceneGraph, spec: SortSpec) -> SolveResult:
    """Lay out the objects of ``g0`` as ``spec`` prescribes.

    :raises UnknownGroupLabel: a label is missing from the SortSpec or the graph.
    :raises InfeasibleError: extents and gaps do not fit ``total_span``.
    """
    groups = arrange(g0.objects(), spec)

    required = sum(spec.extent(node) for group in groups for node in group)
    required += spec.group_gap * (len(groups) - 1)
    required += sum(spec.object_gap * (len(group) - 1) for group in groups)
    if required > spec.total_span + 1e-9:
        raise InfeasibleError(
            f"object extents and gaps need {required:.6g} m but the span is "
            f"{spec.total_span:.6g} m",
            best_residual=required - spec.total_span,
        )

    axis, off_axis = spec.axis, spec.off_axis
    graph = g0
    steps = []
    cursor = spec.span_start
    for group_index, group in enumerate(groups):
        if group_index:
            cursor += spec.group_gap
        for index, node in enumerate(group):
            if index:
                cursor += spec.object_gap
            extent = spec.extent(node)
            center = (
                node.center_location.replace_axis(axis, cursor + extent / 2)
                .replace_axis(off_axis, spec.center_line)
                .replace_axis(Axis.Z, spec.support_z + node.dimension.z / 2)
            )
            cursor += extent
            placed = node.moved(center)
            graph, step = move(
                graph,
                placed,
                f"Place the {node.caption} at position {index + 1} of the "
                f"{group_label(node, spec.group_key)} group, centered at "
                f"{describe(placed.center_location)}.",
            )
            if step:
                steps.append(step)

    residual = abs(quantize(cursor - spec.span_start) - spec.total_span)
    logger.debug("Sorting solved with %d moves, span residual %.3g", len(steps), residual)
    return SolveResult(graph, residual, tuple(steps))
