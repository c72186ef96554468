"""
Run configuration
~~~~~~~~~~~~~~~~~

:class:`RunConfig` is built from settings with command line flags applied on
top; a flag left at ``None`` keeps the settings value.

"""

from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any

from ..conf import settings
from ..exceptions import InvalidConfiguration
from ..rewards import FormatRubric
from ..scene_graph import Axis

__all__ = ("ReportFormat", "RunConfig")


class ReportFormat(str, Enum):
    TEXT_TABLE = "text-table"
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class RunConfig:
    lambda1: float = 0.2
    lambda2: float = 0.2
    collision_eps: float = 1e-6
    iou_thresholds: tuple[float, ...] = (0.5,)
    sort_axis: Axis | None = None
    report_format: ReportFormat = ReportFormat.TEXT_TABLE
    parallelism: int = 1
    seed: int = 0
    rubric: FormatRubric = field(default_factory=FormatRubric)

    def __post_init__(self):
        if not self.iou_thresholds:
            raise InvalidConfiguration("at least one IoU threshold is required")
        for threshold in self.iou_thresholds:
            if not 0 < threshold < 1:
                raise InvalidConfiguration(f"IoU threshold {threshold} is outside (0, 1)")
        if self.parallelism < 1:
            raise InvalidConfiguration("parallelism must be at least 1")
        if self.collision_eps < 0:
            raise InvalidConfiguration("collision eps must not be negative")

    @classmethod
    def from_settings(
        cls,
        *,
        lambda1: float | None = None,
        lambda2: float | None = None,
        collision_eps: float | None = None,
        iou_thresholds: Sequence[float] | None = None,
        sort_axis: Axis | str | None = None,
        report_format: ReportFormat | str | None = None,
        parallelism: int | None = None,
        seed: int | None = None,
    ) -> "RunConfig":
        """Settings values overridden by any flag that was given.

        :raises InvalidConfiguration: a resulting value is out of range.
        """

        def pick(flag, key):
            return getattr(settings, key) if flag is None else flag

        try:
            axis = pick(sort_axis, "SORT_AXIS")
            return cls(
                lambda1=float(pick(lambda1, "REWARD_LAMBDA1")),
                lambda2=float(pick(lambda2, "REWARD_LAMBDA2")),
                collision_eps=float(pick(collision_eps, "COLLISION_EPS")),
                iou_thresholds=tuple(
                    sorted({float(x) for x in pick(iou_thresholds, "IOU_THRESHOLDS")})
                ),
                sort_axis=None if axis is None else Axis(axis),
                report_format=ReportFormat(pick(report_format, "REPORT_FORMAT")),
                parallelism=int(pick(parallelism, "PARALLELISM")),
                seed=int(pick(seed, "SEED")),
                rubric=FormatRubric.from_mapping(settings.FORMAT_RUBRIC),
            )
        except (TypeError, ValueError) as ex:
            raise InvalidConfiguration(f"invalid run configuration: {ex}") from None

    def as_dict(self) -> dict[str, Any]:
        """Effective configuration as embedded in reports."""
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "collision_eps": self.collision_eps,
            "iou_thresholds": list(self.iou_thresholds),
            "sort_axis": None if self.sort_axis is None else self.sort_axis.value,
            "report_format": self.report_format.value,
            "parallelism": self.parallelism,
            "seed": self.seed,
            "rubric": asdict(self.rubric),
        }
