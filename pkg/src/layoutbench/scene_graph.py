"""
Scene Graph
~~~~~~~~~~~

Bounding-box scene graphs, their canonical JSON form and derived geometry.

A scene graph is a dictionary of nodes keyed by integer id. Each node is either
an *object* or a *container* (a support region such as a table top or a floor)
and carries a center location, axis-aligned dimensions (length, width, height),
a rotation (roll, pitch, yaw in degrees) and an optional caption::

    >>> graph = parse_scene_graph(
    ...     '{"0":{"node_type":"object","center_location":[0,0,0.5],'
    ...     '"dimension":[1,1,1],"rotation":[0,0,0],"caption":"box"}}'
    ... )
    >>> world_aabb(graph[0]).max
    Vec3(x=0.5, y=0.5, z=1.0)

Boxes always span ``center ± dimension / 2``; rotation is metadata and never
changes a box.

Edges (contact and containment) are derived from geometry with
:func:`derive_edges` and are never serialized.

"""

import json
import math
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from .exceptions import GraphParseError, GraphValidationError

__all__ = (
    "Aabb",
    "Axis",
    "Edge",
    "Node",
    "NodeType",
    "Relation",
    "SceneGraph",
    "Vec3",
    "canonical_json",
    "derive_edges",
    "format_number",
    "graph_from_mapping",
    "parse_scene_graph",
    "quantize",
    "serialize_scene_graph",
    "world_aabb",
)

DECIMALS = 6
FIELD_ORDER = ("node_type", "center_location", "dimension", "rotation", "caption")
REQUIRED_FIELDS = ("node_type", "center_location", "dimension", "rotation")

DEFAULT_CONTAINMENT_THRESHOLD = 0.95
DEFAULT_CONTACT_GAP = 0.01

_KEY_RE = re.compile(r"[0-9]+")


def quantize(value: float) -> float:
    """Round a coordinate onto the canonical 6 decimal grid."""
    result = round(value, DECIMALS)
    return 0.0 if result == 0 else result


def format_number(value: float) -> str:
    """Canonical number text; at most 6 decimals with trailing zeros trimmed."""
    text = f"{value:.{DECIMALS}f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


class Axis(str, Enum):
    """Coordinate axis."""

    X = "x"
    Y = "y"
    Z = "z"

    @property
    def index(self) -> int:
        return "xyz".index(self.value)


class NodeType(str, Enum):
    OBJECT = "object"
    CONTAINER = "container"


class Relation(str, Enum):
    CONTACT = "contact"
    CONTAINMENT = "containment"


@dataclass(frozen=True)
class Vec3:
    """Three component vector; meters or degrees depending on use."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for value in (self.x, self.y, self.z):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"expected a number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"component is not finite: {value!r}")

    @classmethod
    def of(cls, values: Sequence[float]) -> "Vec3":
        if isinstance(values, (str, bytes)) or len(values) != 3:  # noqa: PLR2004
            raise ValueError("expected an array of 3 numbers")
        return cls(*values)

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y
        yield self.z

    def __getitem__(self, index: int) -> float:
        return (self.x, self.y, self.z)[index]

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, factor: float) -> "Vec3":
        return Vec3(self.x * factor, self.y * factor, self.z * factor)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def quantized(self) -> "Vec3":
        return Vec3(quantize(self.x), quantize(self.y), quantize(self.z))

    def replace_axis(self, axis: Axis, value: float) -> "Vec3":
        return replace(self, **{axis.value: value})


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned box given by its min and max corners."""

    min: Vec3
    max: Vec3

    def __post_init__(self):
        if any(lo > hi for lo, hi in zip(self.min, self.max)):
            raise ValueError("box min must not exceed max")

    @property
    def size(self) -> Vec3:
        return self.max - self.min

    @property
    def volume(self) -> float:
        size = self.size
        return size.x * size.y * size.z

    def overlap(self, other: "Aabb", axis: int) -> float:
        """Signed overlap of the 1-D extents on one axis."""
        return min(self.max[axis], other.max[axis]) - max(
            self.min[axis], other.min[axis]
        )

    def intersection_volume(self, other: "Aabb") -> float:
        ox = max(0.0, self.overlap(other, 0))
        oy = max(0.0, self.overlap(other, 1))
        oz = max(0.0, self.overlap(other, 2))
        return ox * oy * oz

    def contains(self, other: "Aabb", tolerance: float = 1e-9) -> bool:
        return all(
            lo - tolerance <= olo and ohi <= hi + tolerance
            for lo, hi, olo, ohi in zip(self.min, self.max, other.min, other.max)
        )

    def translated(self, offset: Vec3) -> "Aabb":
        return Aabb(self.min + offset, self.max + offset)


@dataclass(frozen=True)
class Node:
    """One object or support region."""

    id: int
    node_type: NodeType
    center_location: Vec3
    dimension: Vec3
    rotation: Vec3 = Vec3(0.0, 0.0, 0.0)
    caption: str | None = None
    extra: Mapping[str, Any] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id < 0:
            raise GraphValidationError(self.id, "id", "must be a non-negative integer")
        if not isinstance(self.node_type, NodeType):
            try:
                object.__setattr__(self, "node_type", NodeType(self.node_type))
            except (TypeError, ValueError):
                raise GraphValidationError(
                    self.id, "node_type", f"unknown node type {self.node_type!r}"
                ) from None
        if any(quantize(value) <= 0 for value in self.dimension):
            raise GraphValidationError(
                self.id, "dimension", "components must be positive at 6 decimals"
            )
        if any(not -180 <= value <= 180 for value in self.rotation):  # noqa: PLR2004
            raise GraphValidationError(
                self.id, "rotation", "components must lie in [-180, 180]"
            )
        if self.caption is not None and not isinstance(self.caption, str):
            raise GraphValidationError(self.id, "caption", "must be a string or null")

    @property
    def is_container(self) -> bool:
        return self.node_type is NodeType.CONTAINER

    @property
    def yaw(self) -> float:
        return self.rotation.z

    @property
    def aabb(self) -> Aabb:
        return world_aabb(self)

    def moved(self, center: Vec3, rotation: Vec3 | None = None) -> "Node":
        """Copy of the node at a new (quantized) pose."""
        return replace(
            self,
            center_location=center.quantized(),
            rotation=(rotation or self.rotation).quantized(),
        )


@dataclass(frozen=True)
class Edge:
    parent: int
    child: int
    relation: Relation

    def sort_key(self):
        return self.parent, self.child, self.relation.value


@dataclass(frozen=True)
class SceneGraph:
    """Integer keyed map of nodes plus (optionally) derived edges."""

    nodes: Mapping[int, Node] = field(default_factory=dict)
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        nodes = dict(self.nodes)
        for key, node in nodes.items():
            if key != node.id:
                raise GraphValidationError(key, "id", f"key does not match {node.id}")
        object.__setattr__(self, "nodes", {key: nodes[key] for key in sorted(nodes)})
        for edge in self.edges:
            if edge.parent == edge.child:
                raise GraphValidationError(edge.parent, "edges", "self edge")
            for end in (edge.parent, edge.child):
                if end not in nodes:
                    raise GraphValidationError(end, "edges", "unknown edge endpoint")
        object.__setattr__(self, "edges", tuple(self.edges))

    @classmethod
    def of(cls, nodes: Iterable[Node]) -> "SceneGraph":
        return cls({node.id: node for node in nodes})

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes.values())

    def __contains__(self, node_id: int) -> bool:
        return node_id in self.nodes

    def __getitem__(self, node_id: int) -> Node:
        return self.nodes[node_id]

    @property
    def ids(self) -> list[int]:
        return list(self.nodes)

    def objects(self) -> list[Node]:
        """Non-container nodes in id order."""
        return [node for node in self if not node.is_container]

    def containers(self) -> list[Node]:
        return [node for node in self if node.is_container]

    def with_node(self, node: Node) -> "SceneGraph":
        """Copy with the node added or replaced; edges are dropped."""
        nodes = dict(self.nodes)
        nodes[node.id] = node
        return SceneGraph(nodes)

    def without(self, node_id: int) -> "SceneGraph":
        return SceneGraph({k: v for k, v in self.nodes.items() if k != node_id})

    def subgraph(self, node_ids: Iterable[int]) -> "SceneGraph":
        wanted = set(node_ids)
        return SceneGraph({k: v for k, v in self.nodes.items() if k in wanted})

    def translated(self, offset: Vec3) -> "SceneGraph":
        return SceneGraph(
            {
                k: replace(v, center_location=v.center_location + offset)
                for k, v in self.nodes.items()
            },
            self.edges,
        )


def world_aabb(node: Node) -> Aabb:
    """Axis-aligned box of ``node``; rotation is ignored."""
    half = node.dimension.scaled(0.5)
    center = node.center_location
    return Aabb(center - half, center + half)


def _top(box: Aabb) -> float:
    return box.max.z


def derive_edges(
    graph: SceneGraph,
    containment_threshold: float = DEFAULT_CONTAINMENT_THRESHOLD,
    contact_gap: float = DEFAULT_CONTACT_GAP,
) -> SceneGraph:
    """Populate contact and containment edges from node geometry.

    A containment edge ``p -> c`` requires ``p`` to be a container holding at least
    ``containment_threshold`` of the volume of ``c``. A contact edge requires the
    boxes to overlap in their x and y projections with the top of ``p`` within
    ``contact_gap`` of the bottom of ``c``. A pair never gets both.
    """
    boxes = {node.id: world_aabb(node) for node in graph}
    edges = []
    for parent in graph:
        p_box = boxes[parent.id]
        for child in graph:
            if child.id == parent.id:
                continue
            c_box = boxes[child.id]

            if parent.is_container:
                inside = p_box.intersection_volume(c_box) / c_box.volume
                if inside >= containment_threshold:
                    edges.append(Edge(parent.id, child.id, Relation.CONTAINMENT))
                    continue

            if (
                p_box.overlap(c_box, 0) > 0
                and p_box.overlap(c_box, 1) > 0
                and abs(_top(p_box) - c_box.min.z) <= contact_gap + 1e-12
            ):
                edges.append(Edge(parent.id, child.id, Relation.CONTACT))

    edges.sort(key=Edge.sort_key)
    return SceneGraph(graph.nodes, tuple(edges))


## Serialization


def canonical_json(value: Any) -> str:
    """Compact JSON with canonical number formatting; mapping order preserved."""
    if value is None or isinstance(value, bool):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize non-finite number {value!r}")
        return format_number(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, Enum):
        return canonical_json(value.value)
    if isinstance(value, Vec3):
        return canonical_json(list(value))
    if isinstance(value, Mapping):
        items = (
            f"{json.dumps(str(key), ensure_ascii=False)}:{canonical_json(item)}"
            for key, item in value.items()
        )
        return "{" + ",".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(canonical_json(item) for item in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def node_to_mapping(node: Node) -> dict[str, Any]:
    """Fields of ``node`` in canonical order (extras last)."""
    data: dict[str, Any] = {
        "node_type": node.node_type.value,
        "center_location": node.center_location,
        "dimension": node.dimension,
        "rotation": node.rotation,
    }
    if node.caption is not None:
        data["caption"] = node.caption
    data.update(node.extra)
    return data


def serialize_scene_graph(graph: SceneGraph) -> str:
    """Canonical JSON text of ``graph``; keys ascending, fixed field order."""
    return canonical_json(
        {str(node.id): node_to_mapping(node) for node in graph}
    )


class _Pairs(list):
    """JSON object as its raw key/value pairs (keeps duplicates visible)."""


def _plain(value: Any) -> Any:
    if isinstance(value, _Pairs):
        return {key: _plain(item) for key, item in value}
    if isinstance(value, list):
        return [_plain(item) for item in value]
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"number is not finite: {value!r}")
        return quantize(value)
    return value


class _BadNumber(Exception):
    def __init__(self, token: str, message: str):
        super().__init__(message)
        self.token = token
        self.message = message


_TOKEN_RE = re.compile(r'"(?:[^"\\]|\\.)*"|[^\s"\[\]{},:]+')


def _token_offset(text: str, token: str) -> int:
    """Byte offset of the first ``token`` outside a string literal."""
    for match in _TOKEN_RE.finditer(text):
        if match.group() == token:
            return len(text[: match.start()].encode("utf-8"))
    return len(text.encode("utf-8"))


def _parse_int(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise _BadNumber(token, "integer has too many digits") from None


def _parse_float(token: str) -> float:
    value = float(token)
    if not math.isfinite(value):
        raise _BadNumber(token, "number out of range")
    return value


def _parse_constant(token: str):
    raise _BadNumber(token, f"non-finite number {token}")


def _items(value: Any) -> Iterable[tuple[str, Any]]:
    if isinstance(value, _Pairs):
        return value
    if isinstance(value, Mapping):
        return value.items()
    raise TypeError


def _vector(node_id, name: str, value: Any) -> Vec3:
    try:
        return Vec3.of(value).quantized()
    except (TypeError, ValueError) as ex:
        raise GraphValidationError(node_id, name, str(ex)) from None


def _build_node(node_id: int, value: Any) -> Node:
    try:
        pairs = list(_items(value))
    except TypeError:
        raise GraphValidationError(node_id, "node", "expected an object") from None

    fields: dict[str, Any] = {}
    for name, item in pairs:
        if name in fields:
            raise GraphValidationError(node_id, name, "duplicate field")
        fields[name] = item

    for name in REQUIRED_FIELDS:
        if name not in fields:
            raise GraphValidationError(node_id, name, "missing required field")

    extra = {}
    for name, item in fields.items():
        if name not in FIELD_ORDER:
            try:
                extra[name] = _plain(item)
            except ValueError as ex:
                raise GraphValidationError(node_id, name, str(ex)) from None
    return Node(
        id=node_id,
        node_type=fields["node_type"],
        center_location=_vector(node_id, "center_location", fields["center_location"]),
        dimension=_vector(node_id, "dimension", fields["dimension"]),
        rotation=_vector(node_id, "rotation", fields["rotation"]),
        caption=fields.get("caption"),
        extra=extra,
    )


def graph_from_mapping(value: Any) -> SceneGraph:
    """Build a graph from decoded JSON (a mapping or raw key/value pairs)."""
    try:
        pairs = list(_items(value))
    except TypeError:
        raise GraphValidationError(None, "graph", "expected a JSON object") from None

    nodes: dict[int, Node] = {}
    for key, item in pairs:
        if not isinstance(key, str) or not _KEY_RE.fullmatch(key):
            raise GraphValidationError(key, "id", "key is not a decimal integer")
        node_id = int(key)
        if node_id in nodes:
            raise GraphValidationError(node_id, "id", "duplicate key")
        nodes[node_id] = _build_node(node_id, item)
    return SceneGraph(nodes)


def parse_scene_graph(text: str | bytes) -> SceneGraph:
    """Parse scene graph JSON text.

    :raises GraphParseError: text is not valid JSON; carries the byte offset.
    :raises GraphValidationError: a node is malformed; names node id and field.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as ex:
            raise GraphParseError("invalid UTF-8", ex.start) from None

    try:
        value = json.loads(
            text,
            object_pairs_hook=_Pairs,
            parse_int=_parse_int,
            parse_float=_parse_float,
            parse_constant=_parse_constant,
        )
    except json.JSONDecodeError as ex:
        offset = len(text[: ex.pos].encode("utf-8"))
        raise GraphParseError(ex.msg, offset) from None
    except _BadNumber as ex:
        raise GraphParseError(ex.message, _token_offset(text, ex.token)) from None

    return graph_from_mapping(value)
