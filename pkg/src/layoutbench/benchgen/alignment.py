"""
Alignment benchmark
~~~~~~~~~~~~~~~~~~~

A rows x cols grid of tabletop items, one category per row, with a fraction of
the items displaced and rotated off their cells. The perturbed set is drawn so
the grid stays recoverable from the remaining anchors alone: every row keeps at
least two anchors, row ends are vacant by at most one cell, every column keeps
an anchor and the smallest anchor spacing is one cell.

"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from ..exceptions import GenerationError
from ..scene_graph import Node, NodeType, SceneGraph, Vec3, quantize
from ..tasks import GridSpec, TaskInstance, TaskKind, wrap_degrees
from .seeding import instance_id, instance_rng
from .templates import render_alignment
from .vocabulary import CANONICAL_YAWS, GRID_ITEMS

__all__ = ("AlignmentParams", "gen_alignment", "perturbation_count")

logger = logging.getLogger(__name__)

TABLE_ID = 0


@dataclass(frozen=True)
class AlignmentParams:
    cell_margin_cm: int = 4
    table_border_cm: int = 10
    table_height: float = 0.75
    displacement: tuple[float, float] = (0.3, 1.5)
    yaw_offset: tuple[float, float] = (15.0, 90.0)
    row_clearance: float = 0.25
    max_attempts: int = 200


def perturbation_count(rows: int, cols: int, fraction: float) -> int:
    # Rounded first so that e.g. 0.3 * 10 does not become 4
    return math.ceil(round(fraction * rows * cols, 9))


def recoverable(rows: int, cols: int, perturbed_cells: set[tuple[int, int]]) -> bool:
    """Whether the anchors left by ``perturbed_cells`` pin down the grid."""
    diffs = []
    for row in range(rows):
        anchors = [col for col in range(cols) if (row, col) not in perturbed_cells]
        if len(anchors) < 2 or anchors[0] > 1 or anchors[-1] < cols - 2:  # noqa: PLR2004
            return False
        diffs.extend(b - a for a, b in zip(anchors, anchors[1:]))
    if sorted(diffs)[(len(diffs) - 1) // 2] != 1:
        return False
    return all(
        any((row, col) not in perturbed_cells for row in range(rows)) for col in range(cols)
    )


def _perturbed_cells(
    rng: np.random.Generator, rows: int, cols: int, k: int, attempts: int
) -> set[tuple[int, int]]:
    for _ in range(attempts):
        chosen = rng.choice(rows * cols, k, replace=False)
        cells = {divmod(int(i), cols) for i in chosen}
        if recoverable(rows, cols, cells):
            return cells
    raise GenerationError(
        f"no recoverable choice of {k} displaced cells in a {rows}x{cols} grid"
    )


def _displace(
    rng: np.random.Generator,
    node: Node,
    spec: GridSpec,
    taken_y: list[float],
    params: AlignmentParams,
) -> Node:
    low, high = params.displacement
    center = node.center_location
    for _ in range(params.max_attempts):
        magnitude = rng.uniform(low, high)
        angle = rng.uniform(0.0, 2 * math.pi)
        x = quantize(round((center.x + magnitude * math.cos(angle) * spec.pitch_x) * 1000) / 1000)
        y = quantize(round((center.y + magnitude * math.sin(angle) * spec.pitch_y) * 1000) / 1000)

        normalized = math.hypot((x - center.x) / spec.pitch_x, (y - center.y) / spec.pitch_y)
        if normalized < low:
            continue
        if any(abs(y - spec.row_y(row)) < params.row_clearance * spec.pitch_y for row in range(spec.rows)):
            continue
        if any(abs(y - other) <= 1e-6 for other in taken_y):  # noqa: PLR2004
            continue

        offset = rng.uniform(*params.yaw_offset) * (1 if rng.integers(2) else -1)
        yaw = quantize(wrap_degrees(node.yaw + offset))
        taken_y.append(y)
        return node.moved(Vec3(x, y, center.z), Vec3(0.0, 0.0, yaw))
    raise GenerationError(f"could not displace node {node.id} off the grid")


def gen_alignment(
    seed: int,
    rows: int,
    cols: int,
    perturb_fraction: float,
    params: AlignmentParams | None = None,
    *,
    index: int = 0,
    attempt: int = 0,
) -> TaskInstance:
    """Generate one alignment instance.

    :raises GenerationError: the grid cannot stay recoverable with this many
        displaced objects.
    """
    params = params or AlignmentParams()
    rng, instance_seed = instance_rng(seed, index, attempt)

    if rows < 1 or cols < 2 or rows > len(GRID_ITEMS):  # noqa: PLR2004
        raise GenerationError(
            f"grid must have 1 to {len(GRID_ITEMS)} rows and at least 2 columns"
        )
    if not 0 <= perturb_fraction < 1:
        raise GenerationError("perturbation fraction must be in [0, 1)")
    k = perturbation_count(rows, cols, perturb_fraction)
    if k > rows * (cols - 2):
        raise GenerationError(
            f"displacing {k} of {rows}x{cols} objects leaves a row with fewer than 2 anchors"
        )
    if 2 * k > rows * cols:
        raise GenerationError(f"displacing {k} of {rows * cols} objects leaves too few anchors")

    categories = [GRID_ITEMS[int(i)] for i in rng.choice(len(GRID_ITEMS), rows, replace=False)]
    dims_cm = [item.sample_cm(rng) for item in categories]
    yaws = [CANONICAL_YAWS[int(rng.integers(len(CANONICAL_YAWS)))] for _ in categories]

    # Square cells fit every row whatever its canonical yaw
    pitch_x_cm = pitch_y_cm = max(max(length, width) for length, width, _ in dims_cm) + params.cell_margin_cm

    spec = GridSpec(
        rows=rows,
        cols=cols,
        origin=Vec3(
            quantize(-(cols - 1) * pitch_x_cm / 200),
            quantize(-(rows - 1) * pitch_y_cm / 200),
            params.table_height,
        ),
        pitch_x=pitch_x_cm / 100,
        pitch_y=pitch_y_cm / 100,
        cell_assignment={(r, c): 1 + r * cols + c for r in range(rows) for c in range(cols)},
        canonical_rotation={item.name: yaw for item, yaw in zip(categories, yaws)},
        row_groups=tuple(item.name for item in categories),
        support_z=params.table_height,
    )

    table = Node(
        TABLE_ID,
        NodeType.CONTAINER,
        Vec3(0.0, 0.0, quantize(params.table_height / 2)),
        Vec3(
            ((cols - 1) * pitch_x_cm + pitch_x_cm + 2 * params.table_border_cm) / 100,
            ((rows - 1) * pitch_y_cm + pitch_y_cm + 2 * params.table_border_cm) / 100,
            params.table_height,
        ),
        caption="table",
    )
    target_nodes = [
        Node(
            node_id,
            NodeType.OBJECT,
            spec.cell_center(r, c, dims_cm[r][2] / 100),
            Vec3(*(v / 100 for v in dims_cm[r])),
            rotation=spec.rotation_for(r),
            caption=categories[r].name,
        )
        for (r, c), node_id in spec.cell_assignment.items()
    ]
    target = SceneGraph.of([table, *target_nodes])

    cells = _perturbed_cells(rng, rows, cols, k, params.max_attempts)
    perturbed_ids = tuple(sorted(spec.cell_assignment[cell] for cell in cells))
    taken_y: list[float] = []
    initial = target
    for node_id in perturbed_ids:
        initial = initial.with_node(_displace(rng, target[node_id], spec, taken_y, params))

    spec = replace(spec, perturbed_ids=perturbed_ids)

    logger.debug("Generated %dx%d alignment instance %d with %d displaced", rows, cols, index, k)
    return TaskInstance(
        id=instance_id(TaskKind.ALIGNMENT.value, seed, index),
        task=TaskKind.ALIGNMENT,
        seed=instance_seed,
        instruction=render_alignment(spec, rng),
        spec=spec,
        initial_graph=initial,
        target_graph=target,
    )
