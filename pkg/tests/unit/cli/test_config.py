from dataclasses import asdict

import pytest
from layoutbench.cli.config import ReportFormat, RunConfig
from layoutbench.conf import settings
from layoutbench.exceptions import InvalidConfiguration
from layoutbench.rewards import FormatRubric
from layoutbench.scene_graph import Axis


class TestRunConfig:
    @pytest.mark.parametrize(
        "kwargs",
        (
            {"iou_thresholds": ()},
            {"iou_thresholds": (0.0,)},
            {"iou_thresholds": (0.5, 1.0)},
            {"parallelism": 0},
            {"collision_eps": -1e-6},
        ),
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidConfiguration):
            RunConfig(**kwargs)

    def test_from_settings__defaults(self):
        actual = RunConfig.from_settings()

        assert actual == RunConfig(seed=settings.SEED)

    def test_from_settings__flags_win(self):
        with settings.modify() as patch:
            patch.REWARD_LAMBDA1 = 0.9

            actual = RunConfig.from_settings(
                lambda1=0.1,
                iou_thresholds=[0.75, 0.25, 0.25],
                sort_axis="x",
                report_format="json",
                parallelism=3,
            )

        assert actual.lambda1 == 0.1
        assert actual.iou_thresholds == (0.25, 0.75)
        assert actual.sort_axis is Axis.X
        assert actual.report_format is ReportFormat.JSON
        assert actual.parallelism == 3

    def test_from_settings__settings_used(self):
        with settings.modify() as patch:
            patch.REWARD_LAMBDA2 = 0.5
            patch.IOU_THRESHOLDS = [0.25, 0.5]
            patch.FORMAT_RUBRIC = {"tags": 0.6}
            patch.REPORT_FORMAT = "csv"

            actual = RunConfig.from_settings()

        assert actual.lambda2 == 0.5
        assert actual.iou_thresholds == (0.25, 0.5)
        assert actual.rubric == FormatRubric(tags=0.6)
        assert actual.report_format is ReportFormat.CSV

    @pytest.mark.parametrize(
        "key, value",
        (("REPORT_FORMAT", "xml"), ("SORT_AXIS", "w"), ("FORMAT_RUBRIC", {"bonus": 1.0}), ("SEED", "abc")),
    )
    def test_from_settings__invalid_setting(self, key, value):
        with settings.modify() as patch:
            setattr(patch, key, value)

            with pytest.raises(InvalidConfiguration, match="invalid run configuration"):
                RunConfig.from_settings()

    def test_as_dict(self):
        actual = RunConfig(sort_axis=Axis.Y).as_dict()

        assert actual == {
            "lambda1": 0.2,
            "lambda2": 0.2,
            "collision_eps": 1e-6,
            "iou_thresholds": [0.5],
            "sort_axis": "y",
            "report_format": "text-table",
            "parallelism": 1,
            "seed": 0,
            "rubric": asdict(FormatRubric()),
        }
