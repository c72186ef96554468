"""
Dataset files
~~~~~~~~~~~~~

Datasets are JSON Lines manifests with one canonical :class:`TaskInstance`
record per line, ordered by instance id.

"""

import json
import logging
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any

from ..exceptions import DatasetError, LayoutBenchError
from ..tasks import TaskInstance

__all__ = ("iter_jsonl", "iter_lines", "read_dataset", "write_dataset", "write_lines")

logger = logging.getLogger(__name__)


def write_lines(path: Path | str, lines: Iterable[str]) -> int:
    """Write one record per line; returns the number of records.

    :raises DatasetError: file could not be written.
    """
    count = 0
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for line in lines:
                f.write(line)
                f.write("\n")
                count += 1
    except OSError as ex:
        raise DatasetError(path, ex.strerror or str(ex)) from ex
    return count


def iter_lines(path: Path | str) -> Iterator[tuple[int, str]]:
    """Yield ``(line number, text)`` for every non-blank line.

    :raises DatasetError: file is unreadable.
    """
    try:
        f = open(path, encoding="utf-8")  # noqa: SIM115
    except OSError as ex:
        raise DatasetError(path, ex.strerror or str(ex)) from ex

    with f:
        try:
            for line_no, line in enumerate(f, 1):
                if line.strip():
                    yield line_no, line
        except UnicodeDecodeError as ex:
            raise DatasetError(path, f"not UTF-8: {ex.reason}") from None


def iter_jsonl(path: Path | str) -> Iterator[tuple[int, Any]]:
    """Yield ``(line number, decoded value)`` for every non-blank line.

    :raises DatasetError: file is unreadable or a line is not JSON.
    """
    for line_no, line in iter_lines(path):
        try:
            value = json.loads(line)
        except json.JSONDecodeError as ex:
            raise DatasetError(path, f"invalid JSON: {ex.msg}", line_no) from None
        yield line_no, value


def write_dataset(instances: Iterable[TaskInstance], path: Path | str) -> int:
    """Write instances sorted by id; returns the number written."""
    ordered = sorted(instances, key=lambda instance: instance.id)
    count = write_lines(path, (instance.to_json() for instance in ordered))
    logger.info("Wrote %d instances to %s", count, path)
    return count


def read_dataset(path: Path | str) -> list[TaskInstance]:
    """Read and validate every record of a manifest.

    :raises DatasetError: a record is malformed; the message names its line.
    """
    instances = []
    seen = set()
    for line_no, value in iter_jsonl(path):
        try:
            instance = TaskInstance.from_dict(value)
        except LayoutBenchError as ex:
            raise DatasetError(path, str(ex), line_no) from None
        if instance.id in seen:
            raise DatasetError(path, f"duplicate instance id {instance.id!r}", line_no)
        seen.add(instance.id)
        instances.append(instance)
    return instances
