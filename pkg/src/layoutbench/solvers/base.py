"""
Solver results
~~~~~~~~~~~~~~

"""

from collections.abc import Iterable
from dataclasses import dataclass

from ..scene_graph import Node, SceneGraph, Vec3, format_number

__all__ = ("Pose", "SolveResult", "SolveStep", "replay")


@dataclass(frozen=True)
class Pose:
    center: Vec3
    rotation: Vec3

    @classmethod
    def of(cls, node: Node) -> "Pose":
        return cls(node.center_location, node.rotation)


@dataclass(frozen=True)
class SolveStep:
    """One graph edit; ``node`` is the node after the edit."""

    node: Node
    old_pose: Pose | None
    reason: str

    @property
    def node_id(self) -> int:
        return self.node.id

    @property
    def new_pose(self) -> Pose:
        return Pose.of(self.node)

    def as_dict(self) -> dict:
        def pose(value: Pose | None):
            if value is None:
                return None
            return {"center": list(value.center), "rotation": list(value.rotation)}

        return {
            "node_id": self.node_id,
            "old_pose": pose(self.old_pose),
            "new_pose": pose(self.new_pose),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class SolveResult:
    graph: SceneGraph
    residual: float
    steps: tuple[SolveStep, ...] = ()


def replay(graph: SceneGraph, steps: Iterable[SolveStep]) -> SceneGraph:
    """Apply steps in order."""
    for step in steps:
        graph = graph.with_node(step.node)
    return graph


def describe(center: Vec3) -> str:
    return "(" + ", ".join(format_number(v) for v in center) + ")"


def move(graph: SceneGraph, node: Node, reason: str) -> tuple[SceneGraph, SolveStep | None]:
    """Replace ``node`` in ``graph``; no step when the pose is unchanged."""
    old = graph[node.id] if node.id in graph else None
    if old is not None and Pose.of(old) == Pose.of(node):
        return graph, None
    step = SolveStep(node, Pose.of(old) if old is not None else None, reason)
    return graph.with_node(node), step
