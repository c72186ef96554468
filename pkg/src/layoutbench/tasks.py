"""
Tasks
~~~~~

Constraint specs and benchmark instances shared by the generators and solvers.

Each :class:`TaskInstance` carries the instruction, a structured spec, the
initial graph and the target graph. Instances serialize to one canonical JSON
line::

    {"id":..,"task":..,"seed":..,"instruction":..,"spec":{..},
     "initial_graph":{..},"target_graph":{..}}

"""

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any, Union

from .exceptions import InvalidSpec, LayoutBenchError, UnknownGroupLabel
from .scene_graph import (
    Aabb,
    Axis,
    Node,
    NodeType,
    SceneGraph,
    Vec3,
    canonical_json,
    graph_from_mapping,
    quantize,
    serialize_scene_graph,
)

__all__ = (
    "GridSpec",
    "GroupKey",
    "PlacementSpec",
    "Reference",
    "SortKey",
    "SortOrder",
    "SortSpec",
    "TaskInstance",
    "TaskKind",
    "group_label",
    "sort_value",
)


class TaskKind(str, Enum):
    SORTING = "sorting"
    ALIGNMENT = "alignment"
    ROOMEDIT = "roomedit"


class GroupKey(str, Enum):
    SHAPE = "shape"
    COLOR = "color"
    CATEGORY = "category"


class SortKey(str, Enum):
    HEIGHT = "height"
    WIDTH = "width"
    VOLUME = "volume"


class SortOrder(str, Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


# Position of each attribute in a "<color> <shape> <category>" caption
_CAPTION_FIELDS = {GroupKey.COLOR: 0, GroupKey.SHAPE: 1, GroupKey.CATEGORY: 2}


def group_label(node: Node, key: GroupKey) -> str:
    """Attribute of a sorting object named by ``key``, read from its caption."""
    key = GroupKey(key)
    words = (node.caption or "").lower().split()
    if len(words) != len(_CAPTION_FIELDS):
        raise UnknownGroupLabel(
            node.caption or "", f"caption of node {node.id} does not name a {key.value}"
        )
    return words[_CAPTION_FIELDS[key]]


def sort_value(node: Node, key: SortKey) -> float:
    dim = node.dimension
    key = SortKey(key)
    if key is SortKey.HEIGHT:
        return dim.z
    if key is SortKey.WIDTH:
        return dim.y
    return dim.x * dim.y * dim.z


def _require(condition: bool, message: str):
    if not condition:
        raise InvalidSpec(message)


def _vec(value: Sequence[float]) -> Vec3:
    return Vec3.of([float(v) for v in value])


@dataclass(frozen=True)
class SortSpec:
    """Group, sort and lay out objects along one axis of a table."""

    group_key: GroupKey
    sort_key: SortKey
    sort_order: SortOrder
    group_order: tuple[str, ...]
    axis: Axis
    total_span: float
    group_gap: float
    object_gap: float
    support_z: float
    span_start: float = 0.0
    center_line: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "group_key", GroupKey(self.group_key))
        object.__setattr__(self, "sort_key", SortKey(self.sort_key))
        object.__setattr__(self, "sort_order", SortOrder(self.sort_order))
        object.__setattr__(self, "axis", Axis(self.axis))
        object.__setattr__(self, "group_order", tuple(self.group_order))
        _require(self.axis is not Axis.Z, "sort axis must be x or y")
        _require(
            len(set(self.group_order)) == len(self.group_order),
            "group labels must be distinct",
        )
        _require(self.group_gap >= 0 and self.object_gap >= 0, "gaps must be >= 0")
        _require(self.total_span > 0, "total span must be positive")

    @property
    def off_axis(self) -> Axis:
        return Axis.Y if self.axis is Axis.X else Axis.X

    def extent(self, node: Node) -> float:
        """Size of ``node`` along the sort axis."""
        return node.dimension[self.axis.index]

    def order_key(self, node: Node):
        value = sort_value(node, self.sort_key)
        if self.sort_order is SortOrder.DESCENDING:
            value = -value
        return value, node.id

    def to_dict(self) -> dict[str, Any]:
        return {
            "group_key": self.group_key.value,
            "sort_key": self.sort_key.value,
            "sort_order": self.sort_order.value,
            "group_order": list(self.group_order),
            "axis": self.axis.value,
            "total_span": self.total_span,
            "group_gap": self.group_gap,
            "object_gap": self.object_gap,
            "support_z": self.support_z,
            "span_start": self.span_start,
            "center_line": self.center_line,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SortSpec":
        return cls(
            group_key=data["group_key"],
            sort_key=data["sort_key"],
            sort_order=data["sort_order"],
            group_order=tuple(str(label) for label in data["group_order"]),
            axis=data["axis"],
            total_span=float(data["total_span"]),
            group_gap=float(data["group_gap"]),
            object_gap=float(data["object_gap"]),
            support_z=float(data["support_z"]),
            span_start=float(data.get("span_start", 0.0)),
            center_line=float(data.get("center_line", 0.0)),
        )


@dataclass(frozen=True)
class GridSpec:
    """Rows x cols lattice; rows run along x, row ``r`` sits at ``origin.y + r * pitch_y``."""

    rows: int
    cols: int
    origin: Vec3
    pitch_x: float
    pitch_y: float
    cell_assignment: Mapping[tuple[int, int], int]
    canonical_rotation: Mapping[str, float]
    perturbed_ids: tuple[int, ...] = ()
    row_groups: tuple[str, ...] = ()
    support_z: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "cell_assignment", dict(sorted(self.cell_assignment.items()))
        )
        object.__setattr__(self, "perturbed_ids", tuple(sorted(self.perturbed_ids)))
        object.__setattr__(self, "row_groups", tuple(self.row_groups))
        _require(self.rows > 0 and self.cols > 0, "grid must have rows and cols")
        _require(self.pitch_x > 0 and self.pitch_y > 0, "pitch must be positive")
        _require(
            len(self.cell_assignment) <= self.rows * self.cols,
            "more assigned cells than grid cells",
        )
        _require(
            all(0 <= r < self.rows and 0 <= c < self.cols for r, c in self.cell_assignment),
            "cell outside the grid",
        )
        _require(
            set(self.perturbed_ids) <= set(self.cell_assignment.values()),
            "perturbed ids must be assigned to cells",
        )

    @property
    def cell_of(self) -> dict[int, tuple[int, int]]:
        return {node_id: cell for cell, node_id in self.cell_assignment.items()}

    def row_y(self, row: int) -> float:
        return quantize(self.origin.y + row * self.pitch_y)

    def cell_center(self, row: int, col: int, height: float) -> Vec3:
        return Vec3(
            quantize(self.origin.x + col * self.pitch_x),
            self.row_y(row),
            quantize(self.support_z + height / 2),
        )

    def rotation_for(self, row: int) -> Vec3:
        yaw = self.canonical_rotation.get(self.row_groups[row], 0.0) if self.row_groups else 0.0
        return Vec3(0.0, 0.0, yaw)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "origin": self.origin,
            "pitch_x": self.pitch_x,
            "pitch_y": self.pitch_y,
            "cell_assignment": [[r, c, i] for (r, c), i in self.cell_assignment.items()],
            "canonical_rotation": dict(sorted(self.canonical_rotation.items())),
            "perturbed_ids": list(self.perturbed_ids),
            "row_groups": list(self.row_groups),
            "support_z": self.support_z,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GridSpec":
        return cls(
            rows=int(data["rows"]),
            cols=int(data["cols"]),
            origin=_vec(data["origin"]),
            pitch_x=float(data["pitch_x"]),
            pitch_y=float(data["pitch_y"]),
            cell_assignment={(int(r), int(c)): int(i) for r, c, i in data["cell_assignment"]},
            canonical_rotation={
                str(k): float(v) for k, v in data["canonical_rotation"].items()
            },
            perturbed_ids=tuple(int(i) for i in data.get("perturbed_ids", ())),
            row_groups=tuple(str(g) for g in data.get("row_groups", ())),
            support_z=float(data.get("support_z", 0.0)),
        )


@dataclass(frozen=True)
class Reference:
    node_id: int
    distance: float


@dataclass(frozen=True)
class PlacementSpec:
    """Insert ``new_node`` at stated center distances from reference nodes."""

    new_node: Node
    references: tuple[Reference, ...]
    room_bounds: Aabb
    floor_z: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "references", tuple(self.references))
        _require(
            2 <= len(self.references) <= 3,  # noqa: PLR2004
            "placement needs 2 or 3 references",
        )
        _require(
            all(ref.distance > 0 for ref in self.references),
            "reference distances must be positive",
        )

    def to_dict(self) -> dict[str, Any]:
        node = self.new_node
        new_node: dict[str, Any] = {
            "id": node.id,
            "node_type": node.node_type.value,
            "dimension": node.dimension,
            "rotation": node.rotation,
        }
        if node.caption is not None:
            new_node["caption"] = node.caption
        return {
            "new_node": new_node,
            "references": [[ref.node_id, ref.distance] for ref in self.references],
            "room_bounds": {"min": self.room_bounds.min, "max": self.room_bounds.max},
            "floor_z": self.floor_z,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PlacementSpec":
        raw = data["new_node"]
        node = Node(
            id=int(raw["id"]),
            node_type=NodeType(raw.get("node_type", "object")),
            center_location=Vec3(0.0, 0.0, 0.0),
            dimension=_vec(raw["dimension"]),
            rotation=_vec(raw.get("rotation", (0, 0, 0))),
            caption=raw.get("caption"),
        )
        bounds = data["room_bounds"]
        return cls(
            new_node=node,
            references=tuple(
                Reference(int(node_id), float(distance))
                for node_id, distance in data["references"]
            ),
            room_bounds=Aabb(_vec(bounds["min"]), _vec(bounds["max"])),
            floor_z=float(data.get("floor_z", 0.0)),
        )


Spec = Union[SortSpec, GridSpec, PlacementSpec]

SPEC_TYPES: dict[TaskKind, type] = {
    TaskKind.SORTING: SortSpec,
    TaskKind.ALIGNMENT: GridSpec,
    TaskKind.ROOMEDIT: PlacementSpec,
}


@dataclass(frozen=True)
class TaskInstance:
    """One benchmark instance."""

    id: str
    task: TaskKind
    seed: int
    instruction: str
    spec: Spec
    initial_graph: SceneGraph
    target_graph: SceneGraph

    def __post_init__(self):
        object.__setattr__(self, "task", TaskKind(self.task))
        _require(
            isinstance(self.spec, SPEC_TYPES[self.task]),
            f"{self.task.value} instance needs a {SPEC_TYPES[self.task].__name__}",
        )

    def to_json(self) -> str:
        """Canonical single-line JSON record."""
        head = canonical_json(
            {
                "id": self.id,
                "task": self.task.value,
                "seed": self.seed,
                "instruction": self.instruction,
            }
        )
        return (
            f"{head[:-1]}"
            f',"spec":{canonical_json(self.spec.to_dict())}'
            f',"initial_graph":{serialize_scene_graph(self.initial_graph)}'
            f',"target_graph":{serialize_scene_graph(self.target_graph)}}}'
        )

    @classmethod
    def from_json(cls, text: str) -> "TaskInstance":
        """Parse and validate one record.

        :raises LayoutBenchError: record is malformed.
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as ex:
            raise InvalidSpec(f"record is not valid JSON: {ex.msg}") from None
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: Any) -> "TaskInstance":
        if not isinstance(data, Mapping):
            raise InvalidSpec("record is not a JSON object")
        try:
            task = TaskKind(data["task"])
            seed = int(data["seed"])
            if seed < 0 or seed >= 2**64:
                raise InvalidSpec("seed is not a 64-bit unsigned integer")
            return cls(
                id=str(data["id"]),
                task=task,
                seed=seed,
                instruction=str(data["instruction"]),
                spec=SPEC_TYPES[task].from_dict(data["spec"]),
                initial_graph=graph_from_mapping(data["initial_graph"]),
                target_graph=graph_from_mapping(data["target_graph"]),
            )
        except LayoutBenchError:
            raise
        except KeyError as ex:
            raise InvalidSpec(f"record is missing field {ex.args[0]!r}") from None
        except (TypeError, ValueError) as ex:
            raise InvalidSpec(f"record is malformed: {ex}") from None


def wrap_degrees(value: float) -> float:
    """Wrap an angle into ``[-180, 180)``."""
    return (value + 180.0) % 360.0 - 180.0
