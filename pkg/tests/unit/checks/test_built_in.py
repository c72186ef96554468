import numpy as np
import pytest
from layoutbench import metrics
from layoutbench.checks import built_in
from layoutbench.conf import settings
from layoutbench.scene_graph import Aabb, Vec3


@pytest.mark.parametrize(
    "check",
    (
        built_in.iou_oracle,
        built_in.iou_symmetry,
        built_in.collision_cases,
        built_in.levenshtein_exhaustive,
        built_in.grpo_identities,
        built_in.format_rubric,
        built_in.round_trip,
    ),
)
def test_check_passes(check):
    actual = check(settings=settings)

    assert actual == []


def test_oracle_closure():
    actual = built_in.oracle_closure(settings=settings)

    assert actual == []


def test_iou_oracle__detects_faulty_iou(monkeypatch):
    monkeypatch.setattr(metrics, "iou3d", lambda a, b: 0.5)

    actual = built_in.iou_oracle(settings=settings)

    assert actual
    assert all(message.obj == "metrics.iou_oracle" for message in actual)
    assert all(message.is_serious() for message in actual)


def test_collision_cases__detects_faulty_score(monkeypatch):
    monkeypatch.setattr(metrics, "collision_score", lambda graph, eps: 1.0)

    actual = built_in.collision_cases(settings=settings)

    assert [message.msg for message in actual] == [
        "one pair: collision score 1.000000, expected 0.666667",
        "three pairs: collision score 1.000000, expected 0.000000",
    ]


def test_errors__truncated():
    failures = [f"failure {index}" for index in range(8)]

    actual = built_in._errors("metrics.sample", failures)

    assert len(actual) == built_in.MAX_REPORTED + 1
    assert actual[-1].msg == "... and 3 more"


def test_monte_carlo_iou__identical_boxes():
    rng = np.random.Generator(np.random.PCG64(0))
    box = Aabb(Vec3(0.0, 0.0, 0.0), Vec3(1.0, 1.0, 1.0))

    assert built_in._monte_carlo_iou(box, box, rng, 1000) == 1.0
