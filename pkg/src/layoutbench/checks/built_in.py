"""
Builtin Checks
~~~~~~~~~~~~~~

Invariant suites for the library modules plus oracle closure over freshly
generated instances. Each check names the property it covers as
``"<module>.<property>"``.

"""

import logging
from functools import cache
from itertools import product

import numpy as np

from .. import grpo, metrics, rewards
from ..benchgen import generate
from ..scene_graph import Aabb, Node, NodeType, SceneGraph, Vec3, parse_scene_graph, serialize_scene_graph
from ..solvers import solve, verify
from ..tasks import TaskKind
from .messages import CheckMessage, Error
from .registry import Tags, register

logger = logging.getLogger(__name__)

IOU_TOLERANCE = 0.01
CLOSURE_MIN_IOU = 0.999
PLACEMENT_MAX_RESIDUAL = 1e-3
MAX_REPORTED = 5


def _box(lo, size) -> Aabb:
    lo = Vec3(*map(float, lo))
    return Aabb(lo, lo + Vec3(*map(float, size)))


def _random_pairs(rng: np.random.Generator, count: int):
    """Box pairs covering disjoint, touching, partial and nested overlaps."""
    for _ in range(count):
        lo = rng.uniform(-1.0, 1.0, 3)
        size = rng.uniform(0.1, 1.0, 3)
        other_size = size * rng.uniform(0.3, 1.5, 3)
        shift = size * rng.uniform(-1.2, 1.2, 3)
        yield _box(lo, size), _box(lo + shift, other_size)


def _monte_carlo_iou(a: Aabb, b: Aabb, rng: np.random.Generator, samples: int) -> float:
    lo = np.minimum(tuple(a.min), tuple(b.min))
    hi = np.maximum(tuple(a.max), tuple(b.max))
    points = rng.uniform(lo, hi, (samples, 3))

    def inside(box: Aabb) -> np.ndarray:
        return np.all((points >= tuple(box.min)) & (points <= tuple(box.max)), axis=1)

    in_a, in_b = inside(a), inside(b)
    either = np.count_nonzero(in_a | in_b)
    return np.count_nonzero(in_a & in_b) / either if either else 0.0


def _errors(obj: str, failures: list[str], hint: str | None = None) -> list[CheckMessage]:
    messages = [Error(failure, hint, obj) for failure in failures[:MAX_REPORTED]]
    if len(failures) > MAX_REPORTED:
        messages.append(Error(f"... and {len(failures) - MAX_REPORTED} more", obj=obj))
    return messages


@register(Tags.metrics)
def iou_oracle(settings, **_):
    """IoU agrees with a voxel Monte-Carlo estimate."""
    rng = np.random.Generator(np.random.PCG64(settings.SEED))
    failures = []
    for a, b in _random_pairs(rng, settings.SELFTEST_IOU_PAIRS):
        expected = _monte_carlo_iou(a, b, rng, settings.SELFTEST_IOU_SAMPLES)
        measured = metrics.iou3d(a, b)
        if abs(measured - expected) > IOU_TOLERANCE:
            failures.append(f"iou3d gave {measured:.4f}, oracle {expected:.4f} for {a} / {b}")
    return _errors("metrics.iou_oracle", failures, "Check the per-axis overlap arithmetic in iou3d.")


@register(Tags.metrics)
def iou_symmetry(settings, **_):
    """IoU is symmetric, 1 on identical boxes and the overlap never exceeds either volume."""
    rng = np.random.Generator(np.random.PCG64(settings.SEED))
    failures = []
    for a, b in _random_pairs(rng, settings.SELFTEST_IOU_PAIRS):
        if metrics.iou3d(a, b) != metrics.iou3d(b, a):
            failures.append(f"iou3d not symmetric for {a} / {b}")
        if metrics.iou3d(a, a) != 1.0:
            failures.append(f"iou3d of {a} with itself is not 1")
        if metrics.intersection_volume(a, b) > min(a.volume, b.volume) + 1e-12:
            failures.append(f"intersection of {a} / {b} exceeds a box volume")
    return _errors("metrics.iou_symmetry", failures)


def _cube(node_id: int, x: float) -> Node:
    return Node(node_id, NodeType.OBJECT, Vec3(x, 0.0, 0.05), Vec3(0.1, 0.1, 0.1), caption=f"cube {node_id}")


@register(Tags.metrics)
def collision_cases(settings, **_):
    """Hand built scenes with 0, 1 and 3 colliding pairs."""
    cases = (
        ("no pairs", (0.0, 0.5, 1.0), 1.0),
        ("one pair", (0.0, 0.05, 1.0), 1.0 - 1.0 / 3.0),
        ("three pairs", (0.0, 0.02, 0.04), 0.0),
    )
    failures = []
    for name, xs, expected in cases:
        graph = SceneGraph.of(_cube(node_id, x) for node_id, x in enumerate(xs, 1))
        measured = metrics.collision_score(graph, settings.COLLISION_EPS)
        if abs(measured - expected) > 1e-9:
            failures.append(f"{name}: collision score {measured:.6f}, expected {expected:.6f}")
    return _errors("metrics.collision_cases", failures)


@cache
def _reference_distance(a: str, b: str) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        _reference_distance(a[1:], b) + 1,
        _reference_distance(a, b[1:]) + 1,
        _reference_distance(a[1:], b[1:]) + (a[0] != b[0]),
    )


@register(Tags.metrics)
def levenshtein_exhaustive(settings, **_):
    """Edit distance matches a recursive oracle on every sequence pair up to length 4."""
    words = ["".join(letters) for size in range(5) for letters in product("abc", repeat=size)]
    table = np.array([[metrics.levenshtein(a, b) for b in words] for a in words])

    failures = []
    for i, j in zip(*np.nonzero(table != [[_reference_distance(a, b) for b in words] for a in words])):
        failures.append(f"levenshtein({words[i]!r}, {words[j]!r}) = {table[i, j]}")
    if not np.array_equal(table, table.T):
        failures.append("distance table is not symmetric")
    if np.any(table[:, None, :] > table[:, :, None] + table[None, :, :]):
        failures.append("triangle inequality violated")
    return _errors("metrics.levenshtein", failures)


@register(Tags.grpo)
def grpo_identities(settings, **_):
    """Advantage normalisation, zero-variance guard, clip factor and reward-shift invariance."""
    failures = []

    advantages = grpo.group_advantages([1.0, 2.0, 3.0], settings.GRPO_STD_FLOOR)
    if not np.allclose(advantages, [-1.224745, 0.0, 1.224745], atol=1e-6):
        failures.append(f"advantages of [1, 2, 3] are {advantages.tolist()}")

    if np.any(grpo.group_advantages([1.0, 1.0, 1.0], settings.GRPO_STD_FLOOR) != 0.0):
        failures.append("equal rewards do not give zero advantages")

    cfg = grpo.GrpoConfig(clip_eps=0.2, kl_beta=0.0, std_floor=settings.GRPO_STD_FLOOR)
    ln2 = float(np.log(2.0))
    group = grpo.RolloutGroup([0.0, 1.0], [[0.0], [ln2]], [[0.0], [0.0]], [[0.0], [ln2]])
    result = grpo.grpo_objective(group, cfg)
    expected = 1.2 * result.advantages[1]
    if abs(result.token_terms[1][0] - expected) > 1e-12:
        failures.append(f"clipped term {result.token_terms[1][0]} != 1.2 * advantage")

    rng = np.random.Generator(np.random.PCG64(settings.SEED))
    cfg = grpo.GrpoConfig(settings.GRPO_CLIP_EPS, settings.GRPO_KL_BETA, settings.GRPO_STD_FLOOR)
    for _ in range(20):
        size = int(rng.integers(2, 8))
        lengths = rng.integers(1, 12, size)
        logp = [[rng.normal(-1.0, 0.3, n) for n in lengths] for _ in range(3)]
        rewards_ = rng.normal(0.0, 1.0, size)
        shift = float(rng.uniform(-5.0, 5.0))
        base = grpo.grpo_objective(grpo.RolloutGroup(rewards_, *logp), cfg).objective
        moved = grpo.grpo_objective(grpo.RolloutGroup(rewards_ + shift, *logp), cfg).objective
        if not np.isfinite(base) or abs(base - moved) > 1e-12:
            failures.append(f"objective changed from {base} to {moved} under a reward shift of {shift}")
            break

    return _errors("grpo.identities", failures)


@register(Tags.rewards)
def format_rubric(settings, **_):
    """Canonical trace scores 1, no reasoning tags 0.3 and empty output 0."""
    graph = SceneGraph.of([_cube(1, 0.0), _cube(2, 0.5)])
    rubric = rewards.FormatRubric.from_mapping(settings.FORMAT_RUBRIC)
    trace = rewards.canonical_trace(graph)
    untagged = trace.replace(rewards.OPEN_TAG, "").replace(rewards.CLOSE_TAG, "")

    failures = []
    for name, text, expected in (("canonical", trace, 1.0), ("untagged", untagged, 0.3), ("empty", "", 0.0)):
        measured = rewards.format_score(rewards.parse_trace(text), rubric)
        if abs(measured - expected) > 1e-9:
            failures.append(f"{name} trace scored {measured}, expected {expected}")
    return _errors("rewards.format_rubric", failures, "Only meaningful with the default FORMAT_RUBRIC.")


def _instances(task: TaskKind, settings):
    return generate(task, settings.SELFTEST_INSTANCES, settings.SEED)


@register(Tags.scene_graph)
def round_trip(settings, **_):
    """Parsing serialised generated graphs gives back the same graph and bytes."""
    failures = []
    for task in TaskKind:
        for instance in _instances(task, settings):
            for graph in (instance.initial_graph, instance.target_graph):
                text = serialize_scene_graph(graph)
                parsed = parse_scene_graph(text)
                if parsed != graph or serialize_scene_graph(parsed) != text:
                    failures.append(f"{instance.id}: graph does not round trip")
    return _errors("scene_graph.round_trip", failures)


@register(Tags.closure)
def oracle_closure(settings, **_):
    """Solvers reproduce generated targets and pass constraint verification."""
    failures = []
    for task in TaskKind:
        for instance in _instances(task, settings):
            result = solve(instance)
            scores = metrics.score_scene(instance.id, task.value, result.graph, instance.target_graph)
            if scores.iou < CLOSURE_MIN_IOU:
                failures.append(f"{instance.id}: IoU {scores.iou:.6f} against the target")
            report = verify(instance, result.graph)
            if not report.passed:
                names = ", ".join(check.name for check in report.failures)
                failures.append(f"{instance.id}: failed constraints {names}")
            if task is TaskKind.ROOMEDIT and result.residual >= PLACEMENT_MAX_RESIDUAL:
                failures.append(f"{instance.id}: placement residual {result.residual:.3g}")
        logger.debug("Closure checked for %s", task.value)
    return _errors("solvers.oracle_closure", failures)
