"""
Sorting benchmark
~~~~~~~~~~~~~~~~~

Objects on a table are grouped by an attribute, sorted within each group by a
geometric attribute and laid out along one axis over a fixed span with fixed
face-to-face gaps. The initial graph is a random collision-free scatter of the
same objects on the table.

"""

import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import GenerationError
from ..scene_graph import Axis, Node, NodeType, SceneGraph, Vec3, quantize
from ..tasks import GroupKey, SortKey, SortOrder, SortSpec, TaskInstance, TaskKind, group_label
from .seeding import instance_id, instance_rng
from .templates import render_sorting
from .vocabulary import COLORS, PRIMITIVE_SIZE_CM, SHAPES, SORT_CATEGORIES

__all__ = ("SortingParams", "gen_sorting")

logger = logging.getLogger(__name__)

TABLE_ID = 0
SCATTER_TRIES = 500

VOCABULARY = {
    GroupKey.COLOR: COLORS,
    GroupKey.SHAPE: SHAPES,
    GroupKey.CATEGORY: SORT_CATEGORIES,
}


@dataclass(frozen=True)
class SortingParams:
    n_groups: int = 2
    object_gap: float = 0.05
    group_gap: float = 0.1
    table_length: float = 2.4
    table_width: float = 1.0
    table_height: float = 0.75
    margin: float = 0.05
    clearance: float = 0.01
    axis: str | None = None
    group_key: str | None = None
    sort_key: str | None = None
    sort_order: str | None = None


def _choose(rng: np.random.Generator, options, fixed):
    if fixed is not None:
        return fixed
    return options[int(rng.integers(len(options)))]


def _sample_objects(
    rng: np.random.Generator, n_objects: int, group_key: GroupKey, labels: list[str]
) -> list[tuple[str, tuple[int, int, int]]]:
    membership = list(range(len(labels))) + [
        int(i) for i in rng.integers(len(labels), size=n_objects - len(labels))
    ]
    membership = [membership[i] for i in rng.permutation(n_objects)]

    objects = []
    low, high = PRIMITIVE_SIZE_CM
    for group in membership:
        words = {key: _choose(rng, values, None) for key, values in VOCABULARY.items()}
        words[group_key] = labels[group]
        caption = f"{words[GroupKey.COLOR]} {words[GroupKey.SHAPE]} {words[GroupKey.CATEGORY]}"
        dims = tuple(int(v) for v in rng.integers(low, high + 1, size=3))
        objects.append((caption, dims))
    return objects


def _layout_target(nodes: list[Node], spec: SortSpec) -> list[Node]:
    """Target poses from prefix sums of extents and gaps."""
    ordered = []
    gaps = []
    for label in spec.group_order:
        members = sorted(
            (node for node in nodes if group_label(node, spec.group_key) == label),
            key=spec.order_key,
        )
        if ordered:
            gaps[-1] = spec.group_gap
        for node in members:
            ordered.append(node)
            gaps.append(spec.object_gap)
    gaps[-1] = 0.0

    extents = np.array([spec.extent(node) for node in ordered])
    leads = spec.span_start + np.concatenate(
        ([0.0], np.cumsum(extents[:-1] + np.array(gaps[:-1])))
    )
    centers = leads + extents / 2

    placed = []
    for node, center in zip(ordered, centers):
        position = (
            Vec3(0.0, 0.0, 0.0)
            .replace_axis(spec.axis, float(center))
            .replace_axis(spec.off_axis, spec.center_line)
            .replace_axis(Axis.Z, spec.support_z + node.dimension.z / 2)
        )
        placed.append(node.moved(position))
    return placed


def _scatter(
    rng: np.random.Generator, nodes: list[Node], table: Node, params: SortingParams
) -> list[Node]:
    """Random collision-free poses on the table top (centimetre grid)."""
    top = table.center_location.z + table.dimension.z / 2
    half_x = table.dimension.x / 2
    half_y = table.dimension.y / 2
    placed: list[Node] = []
    for node in nodes:
        dx, dy, dz = node.dimension
        for _ in range(SCATTER_TRIES):
            x = int(rng.integers(round((-half_x + dx / 2) * 100), round((half_x - dx / 2) * 100) + 1)) / 100
            y = int(rng.integers(round((-half_y + dy / 2) * 100), round((half_y - dy / 2) * 100) + 1)) / 100
            if all(
                abs(x - other.center_location.x) >= (dx + other.dimension.x) / 2 + params.clearance
                or abs(y - other.center_location.y) >= (dy + other.dimension.y) / 2 + params.clearance
                for other in placed
            ):
                placed.append(node.moved(Vec3(x, y, top + dz / 2)))
                break
        else:
            raise GenerationError(f"table too crowded to scatter {len(nodes)} objects")
    return placed


def gen_sorting(
    seed: int,
    n_objects: int,
    params: SortingParams | None = None,
    *,
    index: int = 0,
    attempt: int = 0,
) -> TaskInstance:
    """Generate one sorting instance.

    :raises GenerationError: parameters are infeasible (e.g. span exceeds table).
    """
    params = params or SortingParams()
    rng, instance_seed = instance_rng(seed, index, attempt)

    if n_objects < 2:  # noqa: PLR2004
        raise GenerationError("sorting needs at least 2 objects")
    group_key = GroupKey(_choose(rng, list(GroupKey), params.group_key))
    sort_key = SortKey(_choose(rng, list(SortKey), params.sort_key))
    sort_order = SortOrder(_choose(rng, list(SortOrder), params.sort_order))
    axis = Axis(_choose(rng, [Axis.X, Axis.Y], params.axis))

    vocabulary = VOCABULARY[group_key]
    if not 1 <= params.n_groups <= min(n_objects, len(vocabulary)):
        raise GenerationError(
            f"{params.n_groups} {group_key.value} groups need between 1 and "
            f"{min(n_objects, len(vocabulary))} groups for {n_objects} objects"
        )
    labels = [vocabulary[i] for i in rng.choice(len(vocabulary), params.n_groups, replace=False)]

    table_dims = (
        (params.table_length, params.table_width, params.table_height)
        if axis is Axis.X
        else (params.table_width, params.table_length, params.table_height)
    )
    table = Node(
        TABLE_ID,
        NodeType.CONTAINER,
        Vec3(0.0, 0.0, quantize(params.table_height / 2)),
        Vec3(*table_dims),
        caption="table",
    )
    nodes = [
        Node(i, NodeType.OBJECT, Vec3(0.0, 0.0, 0.0), Vec3(*(v / 100 for v in dims)), caption=caption)
        for i, (caption, dims) in enumerate(_sample_objects(rng, n_objects, group_key, labels), 1)
    ]

    members = {label: sum(1 for n in nodes if group_label(n, group_key) == label) for label in labels}
    extents = sum(node.dimension[axis.index] for node in nodes)
    total_span = quantize(
        extents
        + params.group_gap * (len(labels) - 1)
        + sum(params.object_gap * (count - 1) for count in members.values())
    )
    usable = params.table_length - 2 * params.margin
    if total_span > usable:
        raise GenerationError(
            f"span {total_span:g} m exceeds the usable table length {usable:g} m"
        )

    spec = SortSpec(
        group_key=group_key,
        sort_key=sort_key,
        sort_order=sort_order,
        group_order=tuple(labels[i] for i in rng.permutation(len(labels))),
        axis=axis,
        total_span=total_span,
        group_gap=params.group_gap,
        object_gap=params.object_gap,
        support_z=params.table_height,
        span_start=quantize(-total_span / 2),
        center_line=0.0,
    )

    initial = SceneGraph.of([table, *_scatter(rng, nodes, table, params)])
    target = SceneGraph.of([table, *_layout_target(nodes, spec)])

    logger.debug("Generated sorting instance %d (seed %d)", index, seed)
    return TaskInstance(
        id=instance_id(TaskKind.SORTING.value, seed, index),
        task=TaskKind.SORTING,
        seed=instance_seed,
        instruction=render_sorting(spec, rng),
        spec=spec,
        initial_graph=initial,
        target_graph=target,
    )
