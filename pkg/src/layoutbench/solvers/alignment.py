"""
Alignment oracle
~~~~~~~~~~~~~~~~

Restores displaced objects of a grid layout.

Without a hint the grid is inferred from the scene:

1. Object centers are clustered by y (gap threshold is half the median
   nearest-neighbour spacing); clusters with two or more members are rows.
2. The column pitch is the lower median of consecutive x differences pooled
   over all rows, the first column sits at the smallest row member x.
3. Row members more than ``outlier_fraction`` of a pitch away from a lattice
   point, and every object off a row line, are outliers.
4. Each vacant cell is filled by interpolating between the row's anchors or,
   past the end of a row, by extending one pitch beyond the end anchor.
   Outliers fill the free cells of their own category in id order.

"""

import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..exceptions import InfeasibleError, InsufficientAnchors, SolverError
from ..metrics import normalize_caption
from ..scene_graph import Node, SceneGraph, Vec3
from ..tasks import GridSpec
from .base import SolveResult, describe, move

__all__ = ("DEFAULT_OUTLIER_FRACTION", "solve_alignment")

logger = logging.getLogger(__name__)

DEFAULT_OUTLIER_FRACTION = 0.25
MIN_CLUSTER_GAP = 1e-6


@dataclass
class _Row:
    y: float
    members: list[Node]
    anchors: dict[int, Node]

    def modal(self, attribute):
        counts = Counter(attribute(node) for node in self.anchors.values())
        best = max(counts.values())
        return min(value for value, count in counts.items() if count == best)


def _lower_median(values: list[float]) -> float:
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def _cluster_rows(objects: list[Node]) -> tuple[list[list[Node]], list[Node]]:
    """Split objects into rows (clusters of >= 2) and stragglers."""
    ordered = sorted(objects, key=lambda node: (node.center_location.y, node.id))
    ys = np.array([node.center_location.y for node in ordered])

    gaps = np.diff(ys)
    nearest = np.minimum(
        np.concatenate(([np.inf], gaps)), np.concatenate((gaps, [np.inf]))
    )
    threshold = max(0.5 * float(np.median(nearest)), MIN_CLUSTER_GAP)

    clusters = [[ordered[0]]]
    for gap, node in zip(gaps, ordered[1:]):
        if gap > threshold:
            clusters.append([])
        clusters[-1].append(node)

    rows = [cluster for cluster in clusters if len(cluster) >= 2]  # noqa: PLR2004
    stragglers = [node for cluster in clusters if len(cluster) < 2 for node in cluster]  # noqa: PLR2004
    return rows, stragglers


def solve_alignment(
    g0: SceneGraph,
    hint: GridSpec | None = None,
    outlier_fraction: float = DEFAULT_OUTLIER_FRACTION,
) -> SolveResult:
    """Put displaced grid objects back on their lattice cells.

    :raises InsufficientAnchors: a row keeps fewer than two in-place objects.
    :raises InfeasibleError: a vacancy lies more than one pitch past a row end.
    """
    if hint is not None:
        return _solve_with_hint(g0, hint)

    objects = g0.objects()
    if not objects:
        return SolveResult(g0, 0.0, ())
    if len(objects) < 2:  # noqa: PLR2004
        raise InsufficientAnchors(objects[0].center_location.y, 1)

    clusters, outliers = _cluster_rows(objects)
    if not clusters:
        raise InsufficientAnchors(objects[0].center_location.y, 1)

    diffs = []
    for members in clusters:
        xs = sorted(node.center_location.x for node in members)
        diffs.extend(b - a for a, b in zip(xs, xs[1:]))
    pitch = _lower_median(diffs)
    if pitch <= 1e-9:  # noqa: PLR2004
        raise SolverError("cannot infer a positive column pitch")

    if len(objects) % len(clusters):
        raise SolverError(
            f"{len(objects)} objects do not fill {len(clusters)} rows evenly"
        )
    n_cols = len(objects) // len(clusters)
    x0 = min(node.center_location.x for members in clusters for node in members)

    rows = []
    for members in clusters:
        y = Counter(node.center_location.y for node in members).most_common(1)[0][0]
        row = _Row(y, members, {})
        candidates = []
        for node in members:
            offset = (node.center_location.x - x0) / pitch
            col = round(offset)
            deviation = abs(offset - col) * pitch
            if node.center_location.y != y or not 0 <= col < n_cols:
                outliers.append(node)
            elif deviation > outlier_fraction * pitch:
                outliers.append(node)
            else:
                candidates.append((col, deviation, node.id, node))
        for col, _, _, node in sorted(candidates, key=lambda item: item[:3]):
            if col in row.anchors:
                outliers.append(node)
            else:
                row.anchors[col] = node
        if len(row.anchors) < 2:  # noqa: PLR2004
            raise InsufficientAnchors(y, len(row.anchors))
        rows.append(row)

    # Vacant cells with their restored positions
    vacancies = []
    residual = 0.0
    for row_index, row in enumerate(rows):
        anchor_cols = sorted(row.anchors)
        category = normalize_caption(row.modal(lambda node: node.caption or ""))
        for col in range(n_cols):
            if col in row.anchors:
                continue
            x, how = _restore_x(row, anchor_cols, col, pitch)
            residual = max(residual, abs(x - (x0 + col * pitch)))
            vacancies.append((row_index, col, x, category, how))

    if len(vacancies) != len(outliers):
        raise SolverError(
            f"{len(outliers)} misplaced objects for {len(vacancies)} free cells"
        )

    free_cells: dict[str, list[int]] = {}
    for slot, (_, _, _, category, _) in enumerate(vacancies):
        free_cells.setdefault(category, []).append(slot)

    # Identical objects fill the free cells of their category in id order
    assigned: dict[int, int] = {}
    for node in sorted(outliers, key=lambda node: node.id):
        slots = free_cells.get(normalize_caption(node.caption or ""))
        if slots:
            assigned[node.id] = slots.pop(0)

    graph = g0
    steps = []
    for node in sorted(outliers, key=lambda node: node.id):
        if node.id not in assigned:
            raise SolverError(f"no free grid cell of the same category for node {node.id}")
        row_index, col, x, _, how = vacancies[assigned[node.id]]
        row = rows[row_index]
        z = row.modal(lambda anchor: anchor.center_location.z)
        rotation = row.modal(lambda anchor: tuple(anchor.rotation))
        placed = node.moved(Vec3(x, row.y, z), Vec3(*rotation))
        graph, step = move(
            graph,
            placed,
            f"The {node.caption} is out of line; {how} gives row {row_index + 1}, "
            f"column {col + 1} at {describe(placed.center_location)}.",
        )
        if step:
            steps.append(step)

    logger.debug(
        "Alignment restored %d of %d objects (pitch %.6g, residual %.3g)",
        len(steps),
        len(objects),
        pitch,
        residual,
    )
    return SolveResult(graph, residual, tuple(steps))


def _restore_x(row: _Row, anchor_cols: list[int], col: int, pitch: float):
    first, last = anchor_cols[0], anchor_cols[-1]
    if first < col < last:
        left = max(c for c in anchor_cols if c < col)
        right = min(c for c in anchor_cols if c > col)
        x_left = row.anchors[left].center_location.x
        x_right = row.anchors[right].center_location.x
        x = x_left + (col - left) * (x_right - x_left) / (right - left)
        return x, "interpolating between its neighbours"

    if col < first - 1 or col > last + 1:
        raise InfeasibleError(
            f"row at y={row.y:g} needs an extension of {max(first - col, col - last)} cells"
        )
    if col < first:
        return row.anchors[first].center_location.x - pitch, "extending the row end"
    return row.anchors[last].center_location.x + pitch, "extending the row end"


def _solve_with_hint(g0: SceneGraph, hint: GridSpec) -> SolveResult:
    cell_of = hint.cell_of
    graph = g0
    steps = []
    for node_id in hint.perturbed_ids:
        row, col = cell_of[node_id]
        node = g0[node_id]
        placed = node.moved(
            hint.cell_center(row, col, node.dimension.z), hint.rotation_for(row)
        )
        graph, step = move(
            graph,
            placed,
            f"Return the {node.caption} to row {row + 1}, column {col + 1} at "
            f"{describe(placed.center_location)}.",
        )
        if step:
            steps.append(step)
    return SolveResult(graph, 0.0, tuple(steps))
