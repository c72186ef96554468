"""
Rewards
~~~~~~~

Reasoning trace parsing, format scoring and the composite training reward.

A canonical trace looks like::

    <think>
    Step 1: Move the red cube to the left end of the table.
    ```json
    {"3":{...}}
    ```
    </think>
    Final Scene Graph
    ```json
    {"0":{...},"1":{...}}
    ```

Fences are only recognised at the start of a line. Every fenced ``json`` block
inside ``<think>`` is parsed (but not scored for geometry); the last fenced block
after ``</think>`` is the answer graph.

The composite reward is ``iou + lambda1 * coll + lambda2 * fmt``.

"""

import json
import logging
import math
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, fields
from enum import Enum
from typing import Any, Protocol

from .exceptions import LayoutBenchError
from .metrics import DEFAULT_COLLISION_EPS, Matching, collision_score, iou_reward, match_nodes
from .scene_graph import SceneGraph, parse_scene_graph, serialize_scene_graph

__all__ = (
    "Defect",
    "FormatRubric",
    "JsonBlock",
    "RewardReport",
    "TraceDocument",
    "canonical_trace",
    "composite_reward",
    "format_score",
    "parse_trace",
    "render_trace",
)

logger = logging.getLogger(__name__)

OPEN_TAG = "<think>"
CLOSE_TAG = "</think>"
ANSWER_HEADING = "Final Scene Graph"
DEFAULT_LAMBDA1 = 0.2
DEFAULT_LAMBDA2 = 0.2

_FENCE = re.compile(r"^```json[ \t]*\r?\n(.*?)^```[ \t]*\r?$", re.MULTILINE | re.DOTALL)


class Defect(str, Enum):
    MISSING_OPEN_TAG = "missing_open_tag"
    MISSING_CLOSE_TAG = "missing_close_tag"
    MISNESTED_TAGS = "misnested_tags"
    NO_THINK_JSON = "no_think_json"
    INVALID_THINK_JSON = "invalid_think_json"
    NO_ANSWER_JSON = "no_answer_json"
    INVALID_ANSWER_JSON = "invalid_answer_json"
    INVALID_ANSWER_GRAPH = "invalid_answer_graph"
    EXTRA_TEXT_AFTER_ANSWER = "extra_text_after_answer"


@dataclass(frozen=True)
class JsonBlock:
    """A fenced json block; ``span`` is the byte range of its body."""

    text: str
    span: tuple[int, int]
    valid: bool
    value: Any = None


@dataclass(frozen=True)
class TraceDocument:
    think_section: str | None
    think_json_blocks: tuple[JsonBlock, ...]
    answer_section: str | None
    answer_block: JsonBlock | None
    answer_graph: SceneGraph | None
    defects: tuple[Defect, ...]
    tags_present: bool = False

    def has(self, defect: Defect) -> bool:
        return defect in self.defects


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8", errors="replace"))


def _blocks(text: str, base: int, source: str) -> list[JsonBlock]:
    blocks = []
    for match in _FENCE.finditer(text):
        body = match.group(1)
        start = base + match.start(1)
        span = (_byte_offset(source, start), _byte_offset(source, start + len(body)))
        try:
            value = json.loads(body)
        except (ValueError, RecursionError):
            blocks.append(JsonBlock(body, span, False))
        else:
            blocks.append(JsonBlock(body, span, True, value))
    return blocks


def parse_trace(text: str | bytes) -> TraceDocument:
    """Parse raw model output into a :class:`TraceDocument`.

    Never raises; every problem is recorded as a defect.
    """
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8", errors="replace")

    defects: list[Defect] = []
    open_at = text.find(OPEN_TAG)
    close_at = text.find(CLOSE_TAG, open_at + len(OPEN_TAG) if open_at >= 0 else 0)

    if open_at < 0:
        defects.append(Defect.MISSING_OPEN_TAG)
    if CLOSE_TAG not in text:
        defects.append(Defect.MISSING_CLOSE_TAG)

    tags_present = open_at >= 0 and CLOSE_TAG in text
    if tags_present and (
        close_at < 0 or text.count(OPEN_TAG) != 1 or text.count(CLOSE_TAG) != 1
    ):
        defects.append(Defect.MISNESTED_TAGS)

    # Think section
    think_section = None
    think_blocks: list[JsonBlock] = []
    if open_at >= 0 and close_at >= 0:
        start = open_at + len(OPEN_TAG)
        think_section = text[start:close_at]
        think_blocks = _blocks(think_section, start, text)

    if not think_blocks:
        defects.append(Defect.NO_THINK_JSON)
    elif not all(block.valid for block in think_blocks):
        defects.append(Defect.INVALID_THINK_JSON)

    # Answer section
    if close_at >= 0:
        answer_start = close_at + len(CLOSE_TAG)
    elif CLOSE_TAG in text:
        answer_start = text.rfind(CLOSE_TAG) + len(CLOSE_TAG)
    else:
        answer_start = 0
    answer_section = text[answer_start:]

    answer_blocks = list(_FENCE.finditer(answer_section))
    answer_block = None
    answer_graph = None
    if not answer_blocks:
        defects.append(Defect.NO_ANSWER_JSON)
    else:
        last = answer_blocks[-1]
        answer_block = _blocks(last.group(0), answer_start + last.start(), text)[0]
        if not answer_block.valid:
            defects.append(Defect.INVALID_ANSWER_JSON)
        else:
            try:
                answer_graph = parse_scene_graph(answer_block.text)
            except (TypeError, ValueError, LayoutBenchError, RecursionError) as ex:
                logger.debug("Answer block is not a scene graph: %s", ex)
                defects.append(Defect.INVALID_ANSWER_GRAPH)

        if answer_section[last.end() :].strip():
            defects.append(Defect.EXTRA_TEXT_AFTER_ANSWER)

    return TraceDocument(
        think_section=think_section,
        think_json_blocks=tuple(think_blocks),
        answer_section=answer_section,
        answer_block=answer_block,
        answer_graph=answer_graph,
        defects=tuple(defects),
        tags_present=tags_present,
    )


@dataclass(frozen=True)
class FormatRubric:
    """Additive format rubric weights."""

    tags: float = 0.4
    tags_misnested: float = 0.2
    think_json: float = 0.3
    think_json_invalid: float = 0.1
    answer_json: float = 0.3
    answer_json_invalid: float = 0.1
    trailing_text_penalty: float = 0.1

    @classmethod
    def from_mapping(cls, values: Mapping[str, float] | None) -> "FormatRubric":
        if not values:
            return cls()
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown rubric keys: {', '.join(sorted(unknown))}")
        return cls(**{key: float(value) for key, value in values.items()})


def format_score(doc: TraceDocument, rubric: FormatRubric | None = None) -> float:
    """Score conformance to the reasoning-and-answer pattern in ``[0, 1]``."""
    rubric = rubric or FormatRubric()
    parts = []

    if doc.tags_present:
        parts.append(
            rubric.tags_misnested if doc.has(Defect.MISNESTED_TAGS) else rubric.tags
        )

    if any(block.valid for block in doc.think_json_blocks):
        parts.append(rubric.think_json)
    elif doc.think_json_blocks:
        parts.append(rubric.think_json_invalid)

    if doc.answer_block is not None:
        parts.append(
            rubric.answer_json if doc.answer_block.valid else rubric.answer_json_invalid
        )

    if doc.has(Defect.EXTRA_TEXT_AFTER_ANSWER):
        parts.append(-rubric.trailing_text_penalty)

    return round(min(1.0, max(0.0, math.fsum(parts))), 9)


@dataclass(frozen=True)
class RewardReport:
    iou: float
    coll: float
    fmt: float
    lambda1: float
    lambda2: float
    composite: float
    matching: Matching
    defects: tuple[Defect, ...] = ()

    def as_dict(self) -> dict:
        return {
            "composite": self.composite,
            "iou": self.iou,
            "coll": self.coll,
            "fmt": self.fmt,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "defects": [defect.value for defect in self.defects],
            "matched": len(self.matching.pairs),
        }


def composite_reward(
    pred_text: str | bytes,
    gt: SceneGraph,
    lambda1: float = DEFAULT_LAMBDA1,
    lambda2: float = DEFAULT_LAMBDA2,
    eps: float = DEFAULT_COLLISION_EPS,
    rubric: FormatRubric | None = None,
) -> RewardReport:
    """Composite reward of a raw model output against the target graph."""
    doc = parse_trace(pred_text)
    fmt = format_score(doc, rubric)

    graph = doc.answer_graph
    if graph is None:
        iou = coll = 0.0
        matching = Matching((), (), tuple(gt.ids))
    else:
        matching = match_nodes(graph, gt)
        iou = iou_reward(graph, gt, matching)
        coll = collision_score(graph, eps)

    return RewardReport(
        iou=iou,
        coll=coll,
        fmt=fmt,
        lambda1=lambda1,
        lambda2=lambda2,
        composite=iou + lambda1 * coll + lambda2 * fmt,
        matching=matching,
        defects=doc.defects,
    )


class TraceStep(Protocol):
    node_id: int
    reason: str


def _fenced(graph: SceneGraph) -> str:
    return f"```json\n{serialize_scene_graph(graph)}\n```\n"


def render_trace(steps: Sequence[TraceStep] | Iterable[TraceStep], graph: SceneGraph) -> str:
    """Render edit steps and the final graph in the canonical trace grammar.

    Each step is written as ``Step i: <reason>`` followed by the sub-graph of the
    node it moves (as it appears in ``graph``).
    """
    lines = [OPEN_TAG, "\n"]
    steps = list(steps)
    if not steps:
        lines.append("Step 1: Every object already satisfies the instruction.\n")
        lines.append(_fenced(graph))
    for index, step in enumerate(steps, 1):
        lines.append(f"Step {index}: {step.reason}\n")
        lines.append(_fenced(graph.subgraph([step.node_id])))
    lines.append(f"{CLOSE_TAG}\n{ANSWER_HEADING}\n")
    lines.append(_fenced(graph))
    return "".join(lines)


def canonical_trace(graph: SceneGraph) -> str:
    """One step trace whose answer is ``graph``."""
    return render_trace((), graph)
