"""
Model prompts
~~~~~~~~~~~~~

Renders the text a policy model sees for an instance: the question, the initial
scene graph and the expected answer format. The target graph is never included.

"""

from ..rewards import ANSWER_HEADING, CLOSE_TAG, OPEN_TAG
from ..scene_graph import format_number, serialize_scene_graph
from ..tasks import GridSpec, PlacementSpec, TaskInstance

__all__ = ("render_prompt",)

PREAMBLE = (
    "You edit 3D indoor scenes described as scene graphs. Each node has a "
    "node_type, a center_location and dimension in metres and a rotation in "
    "degrees; rotation[2] is the yaw about the vertical axis."
)

FORMAT_NOTE = (
    f"Reason step by step inside {OPEN_TAG} ... {CLOSE_TAG}. Each step starts with "
    '"Step i:", explains one change and shows the changed nodes as a ```json '
    f"sub-graph. After {CLOSE_TAG} write the heading \"{ANSWER_HEADING}\" followed by "
    "the complete edited scene graph in a ```json block, using the same schema as "
    "the input. Keep every object collision free and on its support surface."
)


def _distance_rules(instance: TaskInstance) -> str:
    spec: PlacementSpec = instance.spec
    graph = instance.initial_graph
    lines = [f"The new node gets id {spec.new_node.id}. Distances are centre to centre:"]
    for ref in spec.references:
        caption = graph[ref.node_id].caption or f"node {ref.node_id}"
        lines.append(f"- {format_number(ref.distance)} m from the {caption} (id {ref.node_id})")
    lines.append("Check every distance explicitly in your reasoning.")
    return "\n".join(lines)


def _grid_rules(instance: TaskInstance) -> str:
    spec: GridSpec = instance.spec
    return (
        f"The objects belong to a {spec.rows} x {spec.cols} grid. In your steps, "
        "output updates only for mispositioned items; objects already on the grid "
        "must keep their exact pose."
    )


def render_prompt(instance: TaskInstance) -> str:
    """Model input for ``instance``."""
    sections = [
        PREAMBLE,
        f"Question: {instance.instruction}",
        f"Initial scene graph:\n```json\n{serialize_scene_graph(instance.initial_graph)}\n```",
    ]
    if isinstance(instance.spec, PlacementSpec):
        sections.append(_distance_rules(instance))
    elif isinstance(instance.spec, GridSpec):
        sections.append(_grid_rules(instance))
    sections.append(FORMAT_NOTE)
    return "\n\n".join(sections) + "\n"
