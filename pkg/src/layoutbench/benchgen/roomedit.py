"""
Room editing benchmark
~~~~~~~~~~~~~~~~~~~~~~

A furnished room and an instruction to insert one more piece of furniture at
given centre-to-centre distances from its nearest neighbours. The stated
distances are rounded to centimetres; the target position is whatever the
placement oracle finds for the rounded distances, and scenes where that is not
a unique, accurate fix are resampled.

"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import GenerationError, InfeasibleError
from ..scene_graph import Aabb, Node, NodeType, SceneGraph, Vec3, quantize
from ..solvers.placement import placement_candidates, solve_placement
from ..tasks import PlacementSpec, Reference, TaskInstance, TaskKind
from .seeding import instance_id, instance_rng
from .templates import render_roomedit
from .vocabulary import FURNITURE, Category

__all__ = ("RoomeditParams", "gen_roomedit")

logger = logging.getLogger(__name__)

FLOOR_ID = 0
FLOOR_THICKNESS = 0.1


@dataclass(frozen=True)
class RoomeditParams:
    room_length: float = 6.0
    room_width: float = 5.0
    room_height: float = 3.0
    clearance: float = 0.1
    accept_residual: float = 1e-3
    max_shift: float = 0.01
    placement_tries: int = 200
    position_tries: int = 50
    max_attempts: int = 20


def _sample_position(
    rng: np.random.Generator,
    dims: Vec3,
    placed: list[Node],
    params: RoomeditParams,
) -> Vec3 | None:
    """Random free floor position on the centimetre grid, or None."""
    half_x = params.room_length / 2 - dims.x / 2
    half_y = params.room_width / 2 - dims.y / 2
    if half_x < 0 or half_y < 0:
        return None
    for _ in range(params.placement_tries):
        x = int(rng.integers(-math.floor(half_x * 100), math.floor(half_x * 100) + 1)) / 100
        y = int(rng.integers(-math.floor(half_y * 100), math.floor(half_y * 100) + 1)) / 100
        if all(
            abs(x - other.center_location.x) >= (dims.x + other.dimension.x) / 2 + params.clearance
            or abs(y - other.center_location.y) >= (dims.y + other.dimension.y) / 2 + params.clearance
            for other in placed
        ):
            return Vec3(x, y, quantize(dims.z / 2))
    return None


def _furnish(
    rng: np.random.Generator, categories: list[Category], params: RoomeditParams
) -> list[Node] | None:
    placed: list[Node] = []
    for node_id, item in enumerate(categories, 1):
        dims = Vec3(*(v / 100 for v in item.sample_cm(rng)))
        position = _sample_position(rng, dims, placed, params)
        if position is None:
            return None
        placed.append(Node(node_id, NodeType.OBJECT, position, dims, caption=item.name))
    return placed


def nearest_references(nodes: list[Node], point: Vec3, count: int) -> tuple[Reference, ...]:
    """The ``count`` nodes nearest to ``point`` with distances rounded to centimetres."""
    ranked = sorted(nodes, key=lambda node: ((node.center_location - point).norm(), node.id))
    return tuple(
        Reference(node.id, round((node.center_location - point).norm(), 2))
        for node in ranked[:count]
    )


def _try_insert(
    rng: np.random.Generator,
    g0: SceneGraph,
    spec_node: Node,
    n_refs: int,
    bounds: Aabb,
    params: RoomeditParams,
) -> tuple[PlacementSpec, SceneGraph] | None:
    existing = list(g0.objects())
    position = _sample_position(rng, spec_node.dimension, existing, params)
    if position is None:
        return None

    references = nearest_references(existing, position, n_refs)
    if any(ref.distance <= 0 for ref in references):
        return None
    spec = PlacementSpec(new_node=spec_node, references=references, room_bounds=bounds, floor_z=0.0)

    try:
        candidates = placement_candidates(g0, spec)
    except InfeasibleError:
        return None
    feasible = [candidate for candidate in candidates if candidate.feasible]
    if len(feasible) != 1:
        return None
    best = feasible[0]
    if best.residual >= params.accept_residual:
        return None
    if math.hypot(best.x - position.x, best.y - position.y) > params.max_shift:
        return None

    return spec, solve_placement(g0, spec).graph


def gen_roomedit(
    seed: int,
    n_existing: int,
    n_refs: int,
    params: RoomeditParams | None = None,
    *,
    index: int = 0,
    attempt: int = 0,
) -> TaskInstance:
    """Generate one room editing instance.

    :raises GenerationError: no scene with a unique, accurate placement was
        found within the retry budget.
    """
    params = params or RoomeditParams()
    rng, instance_seed = instance_rng(seed, index, attempt)

    if n_refs not in (2, 3):  # noqa: PLR2004
        raise GenerationError("room editing needs 2 or 3 references")
    if not n_refs <= n_existing < len(FURNITURE):
        raise GenerationError(
            f"existing objects must be between {n_refs} and {len(FURNITURE) - 1}"
        )

    floor = Node(
        FLOOR_ID,
        NodeType.CONTAINER,
        Vec3(0.0, 0.0, -FLOOR_THICKNESS / 2),
        Vec3(params.room_length, params.room_width, FLOOR_THICKNESS),
        caption="floor",
    )
    bounds = Aabb(
        Vec3(-params.room_length / 2, -params.room_width / 2, 0.0),
        Vec3(params.room_length / 2, params.room_width / 2, params.room_height),
    )

    for _ in range(params.max_attempts):
        chosen = [FURNITURE[int(i)] for i in rng.choice(len(FURNITURE), n_existing + 1, replace=False)]
        existing = _furnish(rng, chosen[:-1], params)
        if existing is None:
            continue

        g0 = SceneGraph.of([floor, *existing])
        new_item = chosen[-1]
        new_node = Node(
            n_existing + 1,
            NodeType.OBJECT,
            Vec3(0.0, 0.0, 0.0),
            Vec3(*(v / 100 for v in new_item.sample_cm(rng))),
            caption=new_item.name,
        )
        for _ in range(params.position_tries):
            inserted = _try_insert(rng, g0, new_node, n_refs, bounds, params)
            if inserted is None:
                continue
            spec, target = inserted
            captions = {node.id: node.caption for node in existing}
            logger.debug("Generated room editing instance %d (seed %d)", index, seed)
            return TaskInstance(
                id=instance_id(TaskKind.ROOMEDIT.value, seed, index),
                task=TaskKind.ROOMEDIT,
                seed=instance_seed,
                instruction=render_roomedit(spec, captions, rng),
                spec=spec,
                initial_graph=g0,
                target_graph=target,
            )

    raise GenerationError(
        f"no unambiguous placement with {n_refs} references in {params.max_attempts} rooms"
    )
