"""
Pipelines
~~~~~~~~~

The work behind each command, independent of argument parsing. Per-instance work
goes through :func:`~layoutbench.multiprocessing.ordered_map` so results come back
in input order whatever the pool size; reductions then run over records sorted
by id.

"""

import logging
import math
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import partial

from ..exceptions import LayoutBenchError, UnknownPredictionIds
from ..metrics import EvalReport, SceneScores, ScoreStatus, aggregate_by_task, score_scene
from ..multiprocessing import ordered_map
from ..rewards import RewardReport, composite_reward, render_trace
from ..solvers import VerifyReport, solve, verify
from ..solvers.verify import ConstraintCheck
from ..tasks import TaskInstance, TaskKind
from .config import RunConfig
from .records import PredictionRecord, RecordStatus

__all__ = (
    "RewardSummary",
    "SolveOutcome",
    "evaluate",
    "score_one",
    "score_traces",
    "solve_all",
    "solve_one",
    "summarize_rewards",
    "verify_all",
)

logger = logging.getLogger(__name__)


def check_ids(manifest_ids: Iterable[str], prediction_ids: Iterable[str]):
    """
    :raises UnknownPredictionIds: a prediction id is not in the manifest.
    """
    known = set(manifest_ids)
    unknown = sorted({record_id for record_id in prediction_ids if record_id not in known})
    if unknown:
        raise UnknownPredictionIds(unknown)


## Solve


@dataclass(frozen=True)
class SolveOutcome:
    record: PredictionRecord
    trace: str | None = None


def solve_one(
    instance: TaskInstance, *, use_hints: bool = False, traces: bool = False, **options
) -> SolveOutcome:
    """Run the oracle for one instance; a solver error becomes a failed record."""
    try:
        result = solve(instance, use_hints=use_hints, **options)
    except LayoutBenchError as ex:
        logger.warning("%s: solver failed: %s", instance.id, ex)
        return SolveOutcome(PredictionRecord.failed(instance.id, str(ex)))

    logger.debug("%s: solved in %d step(s), residual %.3g", instance.id, len(result.steps), result.residual)
    trace = render_trace(result.steps, result.graph) if traces else None
    record = PredictionRecord(instance.id, final_graph=result.graph, residual=result.residual)
    return SolveOutcome(record, trace)


def solve_all(
    instances: Sequence[TaskInstance],
    *,
    use_hints: bool = False,
    traces: bool = False,
    processes: int = 1,
    **options,
) -> list[SolveOutcome]:
    worker = partial(solve_one, use_hints=use_hints, traces=traces, **options)
    return ordered_map(worker, instances, processes)


## Evaluate


def _score_prediction(
    pair: tuple[TaskInstance, PredictionRecord | None], config: RunConfig
) -> SceneScores:
    instance, record = pair
    task = instance.task.value
    target = instance.target_graph
    zero = partial(SceneScores.zero, instance.id, task, thresholds=config.iou_thresholds, gt_nodes=len(target))

    if record is None:
        return zero(ScoreStatus.MISSING)
    if record.status is RecordStatus.FAILED:
        return zero(ScoreStatus.FAILED, note=record.note)

    graph = record.graph()
    if graph is None:
        return zero(ScoreStatus.FAILED, note="no readable answer graph")

    axis = None
    if instance.task is TaskKind.SORTING:
        axis = config.sort_axis or instance.spec.axis
    return score_scene(
        instance.id,
        task,
        graph,
        target,
        thresholds=config.iou_thresholds,
        eps=config.collision_eps,
        axis=axis,
    )


def evaluate(
    instances: Sequence[TaskInstance],
    predictions: Sequence[PredictionRecord],
    config: RunConfig,
) -> dict[str, EvalReport]:
    """Score every manifest instance; missing predictions score zero.

    :raises UnknownPredictionIds: predictions reference ids not in the manifest.
    """
    check_ids((instance.id for instance in instances), (record.id for record in predictions))
    by_id = {record.id: record for record in predictions}
    pairs = [(instance, by_id.get(instance.id)) for instance in instances]

    records = ordered_map(partial(_score_prediction, config=config), pairs, config.parallelism)
    counts = Counter(record.status for record in records)
    logger.info(
        "Scored %d scene(s): %d ok, %d missing, %d failed",
        len(records),
        counts[ScoreStatus.OK],
        counts[ScoreStatus.MISSING],
        counts[ScoreStatus.FAILED],
    )
    return aggregate_by_task(records, config.iou_thresholds)


## Score


def score_one(item: tuple[str, str], targets: Mapping[str, TaskInstance], config: RunConfig) -> RewardReport:
    record_id, raw_text = item
    return composite_reward(
        raw_text,
        targets[record_id].target_graph,
        lambda1=config.lambda1,
        lambda2=config.lambda2,
        eps=config.collision_eps,
        rubric=config.rubric,
    )


def score_traces(
    traces: Sequence[tuple[str, str]],
    instances: Sequence[TaskInstance],
    config: RunConfig,
) -> list[tuple[str, RewardReport]]:
    """Composite reward of every rollout, in trace file order.

    :raises UnknownPredictionIds: a trace names an id not in the manifest.
    """
    check_ids((instance.id for instance in instances), (record_id for record_id, _ in traces))
    targets = {instance.id: instance for instance in instances}
    reports = ordered_map(partial(score_one, targets=targets, config=config), traces, config.parallelism)
    return [(record_id, report) for (record_id, _), report in zip(traces, reports)]


@dataclass(frozen=True)
class RewardSummary:
    count: int
    mean: float | None
    minimum: float | None
    maximum: float | None

    def as_dict(self) -> dict:
        return {"count": self.count, "mean": self.mean, "min": self.minimum, "max": self.maximum}


def summarize_rewards(scored: Sequence[tuple[str, RewardReport]]) -> RewardSummary:
    values = [report.composite for _, report in scored]
    if not values:
        return RewardSummary(0, None, None, None)
    return RewardSummary(len(values), math.fsum(values) / len(values), min(values), max(values))


## Verify


def _verify_prediction(pair: tuple[TaskInstance, PredictionRecord | None]) -> VerifyReport:
    instance, record = pair
    graph = None if record is None else record.graph()
    if graph is None:
        reason = "missing" if record is None else (record.note or "no readable answer graph")
        return VerifyReport(instance.id, (ConstraintCheck("prediction", False, reason, "graph"),))
    return verify(instance, graph)


def verify_all(
    instances: Sequence[TaskInstance],
    predictions: Sequence[PredictionRecord],
    processes: int = 1,
) -> list[VerifyReport]:
    """Constraint reports for every manifest instance, in manifest order.

    :raises UnknownPredictionIds: predictions reference ids not in the manifest.
    """
    check_ids((instance.id for instance in instances), (record.id for record in predictions))
    by_id = {record.id: record for record in predictions}
    return ordered_map(
        _verify_prediction, [(instance, by_id.get(instance.id)) for instance in instances], processes
    )
