"""
Metrics
~~~~~~~

Geometric scoring of a predicted scene graph against a ground truth graph.

Boxes are compared with 3D IoU computed from the overlap of the 1-D extents on
each axis. Predicted nodes are paired with ground truth nodes first by unique
caption and then greedily by descending IoU (one-to-one). The pairing feeds the
IoU reward, IoU@x, the center distance and the per-scene records aggregated into
an :class:`EvalReport`.

"""

import logging
import math
import re
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import GeometryError
from .scene_graph import Aabb, Axis, SceneGraph, world_aabb

__all__ = (
    "EvalReport",
    "MatchPair",
    "MatchSource",
    "Matching",
    "SceneScores",
    "ScoreStatus",
    "aggregate",
    "aggregate_by_task",
    "center_distance",
    "collision_score",
    "edit_distance",
    "intersection_volume",
    "iou3d",
    "iou_at",
    "iou_reward",
    "levenshtein",
    "match_nodes",
    "normalize_caption",
    "order_along_axis",
    "score_scene",
)

logger = logging.getLogger(__name__)

DEFAULT_COLLISION_EPS = 1e-6
DEFAULT_IOU_THRESHOLDS = (0.5,)

_WHITESPACE = re.compile(r"\s+")


def intersection_volume(a: Aabb, b: Aabb) -> float:
    """Volume shared by two boxes (m³)."""
    return a.intersection_volume(b)


def iou3d(a: Aabb, b: Aabb) -> float:
    """Intersection over union of two boxes.

    :raises GeometryError: either box has zero volume.
    """
    volume_a = a.volume
    volume_b = b.volume
    if volume_a <= 0 or volume_b <= 0:
        raise GeometryError("IoU is undefined for a zero-volume box")

    inter = a.intersection_volume(b)
    return min(1.0, inter / (volume_a + volume_b - inter))


def _iou_matrix(left: Sequence[Aabb], right: Sequence[Aabb]) -> np.ndarray:
    """Pairwise IoU of two box lists."""
    if not left or not right:
        return np.zeros((len(left), len(right)))

    l_min = np.array([tuple(box.min) for box in left])[:, None, :]
    l_max = np.array([tuple(box.max) for box in left])[:, None, :]
    r_min = np.array([tuple(box.min) for box in right])[None, :, :]
    r_max = np.array([tuple(box.max) for box in right])[None, :, :]

    overlap = np.maximum(0.0, np.minimum(l_max, r_max) - np.maximum(l_min, r_min))
    inter = overlap[..., 0] * overlap[..., 1] * overlap[..., 2]

    l_size = l_max - l_min
    r_size = r_max - r_min
    l_volume = l_size[..., 0] * l_size[..., 1] * l_size[..., 2]
    r_volume = r_size[..., 0] * r_size[..., 1] * r_size[..., 2]
    return np.minimum(1.0, inter / (l_volume + r_volume - inter))


def normalize_caption(caption: str | None) -> str | None:
    """Lower case, trimmed and whitespace collapsed caption."""
    if caption is None:
        return None
    text = _WHITESPACE.sub(" ", caption.strip().lower())
    return text or None


class MatchSource(str, Enum):
    CAPTION = "caption"
    GEOMETRY = "geometry"


@dataclass(frozen=True)
class MatchPair:
    pred_id: int
    gt_id: int
    iou: float
    matched_by: MatchSource


@dataclass(frozen=True)
class Matching:
    """One-to-one pairing between predicted and ground truth nodes."""

    pairs: tuple[MatchPair, ...] = ()
    unmatched_pred: tuple[int, ...] = ()
    unmatched_gt: tuple[int, ...] = ()

    @classmethod
    def unmatched(cls, pred: SceneGraph, gt: SceneGraph) -> "Matching":
        return cls((), tuple(pred.ids), tuple(gt.ids))

    def as_dict(self) -> dict:
        return {
            "pairs": [
                [pair.pred_id, pair.gt_id, pair.iou, pair.matched_by.value]
                for pair in self.pairs
            ],
            "unmatched_pred": list(self.unmatched_pred),
            "unmatched_gt": list(self.unmatched_gt),
        }


def _unique_captions(graph: SceneGraph) -> dict[str, int]:
    captions = {node.id: normalize_caption(node.caption) for node in graph}
    counts = Counter(caption for caption in captions.values() if caption)
    return {
        caption: node_id
        for node_id, caption in captions.items()
        if caption and counts[caption] == 1
    }


def match_nodes(pred: SceneGraph, gt: SceneGraph) -> Matching:
    """Pair predicted nodes with ground truth nodes.

    Captions unique in both graphs are matched first; remaining nodes are
    paired greedily by descending IoU (> 0), ties broken by ``(pred_id, gt_id)``.
    """
    pairs: list[MatchPair] = []

    gt_captions = _unique_captions(gt)
    for caption, pred_id in _unique_captions(pred).items():
        gt_id = gt_captions.get(caption)
        if gt_id is not None:
            iou = iou3d(world_aabb(pred[pred_id]), world_aabb(gt[gt_id]))
            pairs.append(MatchPair(pred_id, gt_id, iou, MatchSource.CAPTION))

    used_pred = {pair.pred_id for pair in pairs}
    used_gt = {pair.gt_id for pair in pairs}
    rest_pred = [node_id for node_id in pred.ids if node_id not in used_pred]
    rest_gt = [node_id for node_id in gt.ids if node_id not in used_gt]

    matrix = _iou_matrix(
        [world_aabb(pred[node_id]) for node_id in rest_pred],
        [world_aabb(gt[node_id]) for node_id in rest_gt],
    )
    candidates = sorted(
        (-float(matrix[i, j]), rest_pred[i], rest_gt[j])
        for i, j in zip(*np.nonzero(matrix > 0))
    )
    for neg_iou, pred_id, gt_id in candidates:
        if pred_id in used_pred or gt_id in used_gt:
            continue
        used_pred.add(pred_id)
        used_gt.add(gt_id)
        pairs.append(MatchPair(pred_id, gt_id, -neg_iou, MatchSource.GEOMETRY))

    pairs.sort(key=lambda pair: pair.pred_id)
    return Matching(
        tuple(pairs),
        tuple(node_id for node_id in pred.ids if node_id not in used_pred),
        tuple(node_id for node_id in gt.ids if node_id not in used_gt),
    )


def iou_reward(
    pred: SceneGraph, gt: SceneGraph, matching: Matching | None = None
) -> float:
    """Sum of matched pair IoUs over the number of predicted nodes."""
    if not len(pred):
        logger.warning("IoU reward of an empty prediction is 0")
        return 0.0
    matching = matching or match_nodes(pred, gt)
    return math.fsum(pair.iou for pair in matching.pairs) / len(pred)


def collision_score(graph: SceneGraph, eps: float = DEFAULT_COLLISION_EPS) -> float:
    """Normalized collision-free score ``clamp(1 - |C| / N, 0, 1)``.

    ``C`` is the set of unordered pairs of non-container nodes whose shared volume
    exceeds ``eps``; ``N`` the number of non-container nodes.
    """
    objects = graph.objects()
    if not objects:
        return 1.0

    inter = _intersection_matrix([world_aabb(node) for node in objects])
    colliding = int(np.count_nonzero(np.triu(inter > eps, k=1)))
    return min(1.0, max(0.0, 1.0 - colliding / len(objects)))


def _intersection_matrix(boxes: Sequence[Aabb]) -> np.ndarray:
    mins = np.array([tuple(box.min) for box in boxes])
    maxs = np.array([tuple(box.max) for box in boxes])
    overlap = np.maximum(
        0.0,
        np.minimum(maxs[:, None, :], maxs[None, :, :])
        - np.maximum(mins[:, None, :], mins[None, :, :]),
    )
    return overlap[..., 0] * overlap[..., 1] * overlap[..., 2]


def colliding_pairs(
    graph: SceneGraph, eps: float = DEFAULT_COLLISION_EPS
) -> list[tuple[int, int]]:
    """Id pairs of colliding non-container nodes."""
    objects = graph.objects()
    if not objects:
        return []
    inter = _intersection_matrix([world_aabb(node) for node in objects])
    rows, cols = np.nonzero(np.triu(inter > eps, k=1))
    return [(objects[i].id, objects[j].id) for i, j in zip(rows, cols)]


def center_distance(
    pred: SceneGraph, gt: SceneGraph, matching: Matching | None = None
) -> float | None:
    """Mean centroid distance over matched pairs; ``None`` without pairs."""
    matching = matching or match_nodes(pred, gt)
    if not matching.pairs:
        return None
    return math.fsum(
        (pred[pair.pred_id].center_location - gt[pair.gt_id].center_location).norm()
        for pair in matching.pairs
    ) / len(matching.pairs)


def iou_at(
    pred: SceneGraph,
    gt: SceneGraph,
    threshold: float,
    matching: Matching | None = None,
) -> float:
    """Fraction of predicted nodes whose matched IoU reaches ``threshold``."""
    if not len(pred):
        return 0.0
    matching = matching or match_nodes(pred, gt)
    hits = sum(1 for pair in matching.pairs if pair.iou >= threshold)
    return hits / len(pred)


def order_along_axis(graph: SceneGraph, axis: Axis) -> list[int]:
    """Non-container ids ordered by center coordinate, ties by id."""
    index = Axis(axis).index
    return [
        node.id
        for node in sorted(
            graph.objects(), key=lambda node: (node.center_location[index], node.id)
        )
    ]


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Unit cost insert/delete/substitute distance between two sequences."""
    rows, cols = len(a) + 1, len(b) + 1
    table = np.zeros((rows, cols), dtype=np.int64)
    table[:, 0] = np.arange(rows)
    table[0, :] = np.arange(cols)
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i, j] = min(
                table[i - 1, j] + 1,
                table[i, j - 1] + 1,
                table[i - 1, j - 1] + cost,
            )
    return int(table[-1, -1])


def edit_distance(pred: SceneGraph, gt: SceneGraph, axis: Axis) -> float:
    """Levenshtein distance between the object orders along ``axis``."""
    return float(levenshtein(order_along_axis(pred, axis), order_along_axis(gt, axis)))


## Per scene records and aggregation


class ScoreStatus(str, Enum):
    OK = "ok"
    MISSING = "missing"
    FAILED = "failed"


@dataclass(frozen=True)
class SceneScores:
    """Metrics for one scene."""

    id: str
    task: str
    status: ScoreStatus
    iou: float
    iou_at: Mapping[float, float]
    center_dist: float | None
    collision_free: float
    edit_dist: float | None = None
    matched: int = 0
    unmatched_pred: int = 0
    unmatched_gt: int = 0
    note: str | None = None

    @classmethod
    def zero(
        cls,
        scene_id: str,
        task: str,
        status: ScoreStatus,
        thresholds: Iterable[float] = DEFAULT_IOU_THRESHOLDS,
        note: str | None = None,
        gt_nodes: int = 0,
    ) -> "SceneScores":
        """Record for a missing or failed prediction."""
        return cls(
            id=scene_id,
            task=task,
            status=status,
            iou=0.0,
            iou_at={threshold: 0.0 for threshold in thresholds},
            center_dist=None,
            collision_free=0.0,
            unmatched_gt=gt_nodes,
            note=note,
        )

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "task": self.task,
            "status": self.status.value,
            "iou": self.iou,
            "iou_at": {f"{k:g}": v for k, v in self.iou_at.items()},
            "center_dist": self.center_dist,
            "collision_free": self.collision_free,
            "edit_dist": self.edit_dist,
            "matched": self.matched,
            "unmatched_pred": self.unmatched_pred,
            "unmatched_gt": self.unmatched_gt,
            "note": self.note,
        }


def score_scene(
    scene_id: str,
    task: str,
    pred: SceneGraph,
    gt: SceneGraph,
    *,
    thresholds: Iterable[float] = DEFAULT_IOU_THRESHOLDS,
    eps: float = DEFAULT_COLLISION_EPS,
    axis: Axis | None = None,
) -> SceneScores:
    """Score a single prediction; ``axis`` enables the edit distance."""
    matching = match_nodes(pred, gt)
    return SceneScores(
        id=scene_id,
        task=task,
        status=ScoreStatus.OK,
        iou=iou_reward(pred, gt, matching),
        iou_at={x: iou_at(pred, gt, x, matching) for x in thresholds},
        center_dist=center_distance(pred, gt, matching),
        collision_free=collision_score(pred, eps),
        edit_dist=None if axis is None else edit_distance(pred, gt, axis),
        matched=len(matching.pairs),
        unmatched_pred=len(matching.unmatched_pred),
        unmatched_gt=len(matching.unmatched_gt),
    )


def _mean(values: list[float]) -> float | None:
    return math.fsum(values) / len(values) if values else None


@dataclass(frozen=True)
class EvalReport:
    """Arithmetic means of per-scene records."""

    mean_iou: float
    iou_at: Mapping[float, float]
    center_dist: float | None
    collision_free: float
    edit_dist: float | None
    per_scene: tuple[SceneScores, ...] = field(default=())

    @property
    def scenes(self) -> int:
        return len(self.per_scene)

    def count(self, status: ScoreStatus) -> int:
        return sum(1 for record in self.per_scene if record.status is status)

    @property
    def center_dist_count(self) -> int:
        return sum(1 for r in self.per_scene if r.center_dist is not None)

    @property
    def edit_dist_count(self) -> int:
        return sum(1 for r in self.per_scene if r.edit_dist is not None)


def aggregate(
    records: Iterable[SceneScores],
    thresholds: Iterable[float] = DEFAULT_IOU_THRESHOLDS,
) -> EvalReport:
    """Aggregate per-scene records; reduction order is by scene id."""
    ordered = tuple(sorted(records, key=lambda record: record.id))
    thresholds = tuple(thresholds)
    return EvalReport(
        mean_iou=_mean([r.iou for r in ordered]) or 0.0,
        iou_at={x: _mean([r.iou_at.get(x, 0.0) for r in ordered]) or 0.0 for x in thresholds},
        center_dist=_mean([r.center_dist for r in ordered if r.center_dist is not None]),
        collision_free=_mean([r.collision_free for r in ordered]) or 0.0,
        edit_dist=_mean([r.edit_dist for r in ordered if r.edit_dist is not None]),
        per_scene=ordered,
    )


def aggregate_by_task(
    records: Iterable[SceneScores],
    thresholds: Iterable[float] = DEFAULT_IOU_THRESHOLDS,
) -> dict[str, EvalReport]:
    """One :class:`EvalReport` per task, tasks in name order."""
    grouped: dict[str, list[SceneScores]] = {}
    for record in records:
        grouped.setdefault(record.task, []).append(record)
    thresholds = tuple(thresholds)
    return {task: aggregate(grouped[task], thresholds) for task in sorted(grouped)}
