"""
Prediction records
~~~~~~~~~~~~~~~~~~

Predictions and trace files are JSON Lines with one record per instance::

    {"id":"sorting-42-000000","final_graph":{...},"status":"ok"}
    {"id":"sorting-42-000001","raw_text":"<think>..."}

A record carries ``raw_text``, ``final_graph`` or both. A solver failure is kept
as a record with ``status`` ``failed`` and a ``note``.

"""

import json
import logging
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

from ..benchgen.dataset import iter_lines, write_lines
from ..exceptions import DatasetError, LayoutBenchError
from ..rewards import parse_trace
from ..scene_graph import SceneGraph, canonical_json, graph_from_mapping, node_to_mapping

__all__ = ("PredictionRecord", "RecordStatus", "iter_traces", "read_predictions", "write_predictions")

logger = logging.getLogger(__name__)

_ID_RE = re.compile(r'"id"\s*:\s*"((?:[^"\\]|\\.)*)"')


class RecordStatus(str, Enum):
    OK = "ok"
    FAILED = "failed"


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    raw_text: str | None = None
    final_graph: SceneGraph | None = None
    status: RecordStatus = RecordStatus.OK
    note: str | None = None
    residual: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "status", RecordStatus(self.status))
        if self.status is RecordStatus.OK and self.raw_text is None and self.final_graph is None:
            raise ValueError("a prediction needs raw_text or final_graph")

    @classmethod
    def failed(cls, record_id: str, note: str) -> "PredictionRecord":
        return cls(record_id, status=RecordStatus.FAILED, note=note)

    def graph(self) -> SceneGraph | None:
        """The predicted graph; extracted from ``raw_text`` when not given directly."""
        if self.final_graph is not None:
            return self.final_graph
        if self.raw_text is not None:
            return parse_trace(self.raw_text).answer_graph
        return None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"id": self.id}
        if self.raw_text is not None:
            data["raw_text"] = self.raw_text
        if self.final_graph is not None:
            data["final_graph"] = {str(node.id): node_to_mapping(node) for node in self.final_graph}
        data["status"] = self.status.value
        if self.note is not None:
            data["note"] = self.note
        if self.residual is not None:
            data["residual"] = self.residual
        return data

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, data: Any) -> "PredictionRecord":
        """Build a record; an unusable graph gives a failed record.

        :raises ValueError: ``data`` has no usable ``id``.
        """
        if not isinstance(data, dict) or not isinstance(data.get("id"), str):
            raise ValueError("record needs a string id")
        record_id = data["id"]

        status = data.get("status", RecordStatus.OK.value)
        if status == RecordStatus.FAILED.value:
            return cls.failed(record_id, str(data.get("note") or "failed upstream"))

        raw_text = data.get("raw_text")
        if raw_text is not None and not isinstance(raw_text, str):
            return cls.failed(record_id, "raw_text is not a string")

        final_graph = None
        if data.get("final_graph") is not None:
            try:
                final_graph = graph_from_mapping(data["final_graph"])
            except LayoutBenchError as ex:
                return cls.failed(record_id, f"unreadable final_graph: {ex}")

        if raw_text is None and final_graph is None:
            return cls.failed(record_id, "record has neither raw_text nor final_graph")
        residual = data.get("residual")
        if isinstance(residual, bool) or not isinstance(residual, (int, float)):
            residual = None
        return cls(record_id, raw_text, final_graph, residual=residual)


def _salvage_id(line: str) -> str | None:
    match = _ID_RE.search(line)
    if match is None:
        return None
    try:
        return json.loads(f'"{match.group(1)}"')
    except ValueError:
        return None


def _decode_lines(path: Path | str) -> Iterator[tuple[int, str, Any, str | None]]:
    """Yield ``(line number, id, value, problem)``; unreadable lines keep a salvaged id.

    A line whose id cannot be recovered is skipped with a warning.
    """
    for line_no, line in iter_lines(path):
        try:
            value = json.loads(line)
        except (ValueError, RecursionError) as ex:
            problem = f"invalid JSON: {getattr(ex, 'msg', ex)}"
        else:
            if isinstance(value, dict) and isinstance(value.get("id"), str):
                yield line_no, value["id"], value, None
                continue
            problem = "record needs a string id"

        record_id = _salvage_id(line)
        if record_id is None:
            logger.warning("%s:%d: skipped unreadable record (%s)", path, line_no, problem)
            continue
        yield line_no, record_id, None, problem


def read_predictions(path: Path | str) -> list[PredictionRecord]:
    """Read a predictions or trace file in line order.

    Unreadable lines become failed records when their id can be recovered.

    :raises DatasetError: the file is unreadable or an id repeats.
    """
    records = []
    seen = set()
    for line_no, record_id, value, problem in _decode_lines(path):
        if problem is None:
            record = PredictionRecord.from_dict(value)
        else:
            record = PredictionRecord.failed(record_id, f"unreadable record: {problem}")
        if record.id in seen:
            raise DatasetError(path, f"duplicate prediction id {record.id!r}", line_no)
        seen.add(record.id)
        if record.status is RecordStatus.FAILED:
            logger.warning("%s:%d: %s marked failed (%s)", path, line_no, record.id, record.note)
        records.append(record)
    return records


def iter_traces(path: Path | str) -> Iterator[tuple[str, str]]:
    """Yield ``(id, raw_text)`` per line; an id may repeat (one line per rollout).

    A missing or non-string ``raw_text``, or an unreadable line with a
    recoverable id, is yielded as ``""`` so it scores as garbage.

    :raises DatasetError: the file is unreadable.
    """
    for _, record_id, value, problem in _decode_lines(path):
        raw_text = None if problem else value.get("raw_text")
        yield record_id, raw_text if isinstance(raw_text, str) else ""


def write_predictions(records: Iterable[PredictionRecord], path: Path | str) -> int:
    """Write records sorted by id."""
    ordered = sorted(records, key=lambda record: record.id)
    return write_lines(path, (record.to_json() for record in ordered))
