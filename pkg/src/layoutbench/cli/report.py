"""
Evaluation Report
~~~~~~~~~~~~~~~~~

Renders per-task :class:`~layoutbench.metrics.EvalReport` objects as a text
table, JSON or CSV. Column names follow the headers used when publishing
results so tables can be read side by side.

Every format carries the effective run configuration; the table and CSV start
with a ``# config: {...}`` line.

"""

import csv
import json
import sys
from collections.abc import Callable, Mapping
from typing import Any, TextIO

from colorama import Fore, Style

from ..metrics import EvalReport, ScoreStatus
from ..tasks import TaskKind
from .config import ReportFormat, RunConfig

__all__ = ("EvalReportWriter", "columns_for", "write_report")

MEAN_IOU = "Mean IoU"
CTR_DIST = "Ctr. Dist."
COL_FREE = "Col. Free"
EDIT_DIST = "Edit Dist."

Column = tuple[str, Callable[[EvalReport], float | None]]


def _iou_at(threshold: float) -> Column:
    return f"IoU@{threshold:g}", lambda report: report.iou_at.get(threshold)


def columns_for(task: str, thresholds: tuple[float, ...]) -> list[Column]:
    """Headline columns reported for ``task``."""
    if task == TaskKind.SORTING.value:
        return [
            (MEAN_IOU, lambda report: report.mean_iou),
            (CTR_DIST, lambda report: report.center_dist),
            (COL_FREE, lambda report: report.collision_free),
            (EDIT_DIST, lambda report: report.edit_dist),
        ]
    return [
        (MEAN_IOU, lambda report: report.mean_iou),
        *(_iou_at(threshold) for threshold in thresholds),
        (CTR_DIST, lambda report: report.center_dist),
    ]


def _round(value: Any, digits: int = 6) -> Any:
    if isinstance(value, float):
        result = round(value, digits)
        return 0.0 if result == 0 else result
    if isinstance(value, dict):
        return {key: _round(item, digits) for key, item in value.items()}
    if isinstance(value, list):
        return [_round(item, digits) for item in value]
    return value


class EvalReportWriter:
    """Writes a set of per-task reports in one format."""

    def __init__(self, config: RunConfig, *, no_color: bool = False, f_out: TextIO = sys.stdout):
        self.config = config
        self.no_color = no_color
        self.f_out = f_out

    def counts(self, report: EvalReport) -> dict[str, int]:
        return {
            "scenes": report.scenes,
            "missing": report.count(ScoreStatus.MISSING),
            "failed": report.count(ScoreStatus.FAILED),
        }

    def config_line(self) -> str:
        """Effective configuration as a single ``#`` comment line."""
        document = json.dumps(self.config.as_dict(), sort_keys=True, separators=(",", ":"))
        return f"# config: {document}\n"

    def write(self, reports: Mapping[str, EvalReport]):
        handler = {
            ReportFormat.TEXT_TABLE: self.write_table,
            ReportFormat.JSON: self.write_json,
            ReportFormat.CSV: self.write_csv,
        }[self.config.report_format]
        handler(reports)

    def write_table(self, reports: Mapping[str, EvalReport]):
        thresholds = self.config.iou_thresholds
        if self.no_color:
            heading, header, reset = "", "", ""
        else:
            heading, header, reset = Fore.GREEN + Style.BRIGHT, Style.BRIGHT, Style.RESET_ALL

        self.f_out.write(self.config_line())
        if not reports:
            self.f_out.write("No scenes evaluated.\n")

        for task, report in reports.items():
            counts = self.counts(report)
            self.f_out.write(
                f"{heading}{task}{reset}  scenes={counts['scenes']} "
                f"missing={counts['missing']} failed={counts['failed']}\n"
            )
            columns = columns_for(task, thresholds)
            cells = ["-" if (value := getter(report)) is None else f"{value:.3f}" for _, getter in columns]
            widths = [max(len(name), len(cell)) for (name, _), cell in zip(columns, cells)]
            self.f_out.write(
                header + "  ".join(name.rjust(width) for (name, _), width in zip(columns, widths)) + reset + "\n"
            )
            self.f_out.write("  ".join(cell.rjust(width) for cell, width in zip(cells, widths)) + "\n\n")

    def write_json(self, reports: Mapping[str, EvalReport]):
        thresholds = self.config.iou_thresholds
        tasks = {}
        for task, report in reports.items():
            tasks[task] = {
                "headline": {name: getter(report) for name, getter in columns_for(task, thresholds)},
                **self.counts(report),
                "center_dist_scenes": report.center_dist_count,
                "edit_dist_scenes": report.edit_dist_count,
                "scenes_detail": [record.as_dict() for record in report.per_scene],
            }
        document = {"config": self.config.as_dict(), "tasks": _round(tasks)}
        json.dump(document, self.f_out, sort_keys=True, indent=2)
        self.f_out.write("\n")

    def write_csv(self, reports: Mapping[str, EvalReport]):
        thresholds = self.config.iou_thresholds
        names = [MEAN_IOU, *(f"IoU@{x:g}" for x in thresholds), CTR_DIST, COL_FREE, EDIT_DIST]
        self.f_out.write(self.config_line())
        writer = csv.writer(self.f_out, lineterminator="\n")
        writer.writerow(["Task", "Scenes", "Missing", "Failed", *names])
        for task, report in reports.items():
            values = {name: getter(report) for name, getter in columns_for(task, thresholds)}
            counts = self.counts(report)
            writer.writerow(
                [
                    task,
                    counts["scenes"],
                    counts["missing"],
                    counts["failed"],
                    *("" if values.get(name) is None else f"{values[name]:.6f}" for name in names),
                ]
            )


def write_report(
    reports: Mapping[str, EvalReport],
    config: RunConfig,
    *,
    no_color: bool = False,
    f_out: TextIO = sys.stdout,
):
    EvalReportWriter(config, no_color=no_color, f_out=f_out).write(reports)
