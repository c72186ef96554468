"""
Instruction templates
~~~~~~~~~~~~~~~~~~~~~

Fixed, versioned template library per task. A generator picks a variant with its
own random stream so instructions are reproducible from the seed.

Bump ``TEMPLATE_VERSION`` whenever a template string changes.

"""

import numpy as np

from ..scene_graph import format_number
from ..tasks import GridSpec, PlacementSpec, SortSpec

TEMPLATE_VERSION = "1"

SORTING_TEMPLATES = (
    "Group the objects on the table by {group_key} and place the groups from "
    "{start} to {end} in the order {group_order}. Within each group, sort the objects "
    "by {sort_key} in {sort_order} order. Lay everything out along the {axis} axis "
    "over a total span of {span} m, leaving {group_gap} m between groups and "
    "{object_gap} m between neighbouring objects, all resting on the table top.",
    "Sort the objects by {group_key}: the groups must appear from {start} to {end} "
    "as {group_order}. Inside every group order the objects by {sort_key} "
    "({sort_order}). Use the {axis} axis, a total span of {span} m, {group_gap} m "
    "gaps between groups and {object_gap} m gaps between objects of the same group.",
    "Arrange the items into {group_key} groups ordered {group_order} from {start} "
    "to {end}, each group sorted by {sort_key} in {sort_order} order. The row runs "
    "along the {axis} axis and spans exactly {span} m with {group_gap} m between "
    "groups and {object_gap} m between adjacent items.",
)

ALIGNMENT_TEMPLATES = (
    "The objects on the table were arranged in a clean {rows} x {cols} grid, but "
    "some of them have been moved out of place. Restore the displaced objects to "
    "their grid cells while leaving correctly placed objects unchanged.",
    "Several items have drifted away from their {rows} x {cols} grid layout. Put "
    "every displaced item back into its grid cell with its original orientation, "
    "while leaving correctly placed objects unchanged.",
)

ROOMEDIT_TEMPLATES = (
    "Place a {caption} in the room so that it is {distances}.",
    "Add a {caption} to the room. It should be {distances}.",
    "Insert a {caption} at a spot that is {distances}.",
)

_DIRECTIONS = {"x": ("left", "right"), "y": ("front", "back")}


def _pick(rng: np.random.Generator, templates: tuple[str, ...]) -> str:
    return templates[int(rng.integers(len(templates)))]


def _join(items: list[str]) -> str:
    if len(items) < 2:  # noqa: PLR2004
        return "".join(items)
    return ", ".join(items[:-1]) + " and " + items[-1]


def render_sorting(spec: SortSpec, rng: np.random.Generator) -> str:
    start, end = _DIRECTIONS[spec.axis.value]
    return _pick(rng, SORTING_TEMPLATES).format(
        group_key=spec.group_key.value,
        group_order=", ".join(spec.group_order),
        sort_key=spec.sort_key.value,
        sort_order=spec.sort_order.value,
        axis=spec.axis.value,
        start=start,
        end=end,
        span=format_number(spec.total_span),
        group_gap=format_number(spec.group_gap),
        object_gap=format_number(spec.object_gap),
    )


def render_alignment(spec: GridSpec, rng: np.random.Generator) -> str:
    return _pick(rng, ALIGNMENT_TEMPLATES).format(rows=spec.rows, cols=spec.cols)


def render_roomedit(
    spec: PlacementSpec, captions: dict[int, str], rng: np.random.Generator
) -> str:
    distances = _join(
        [
            f"{format_number(ref.distance)} m from the {captions[ref.node_id]}"
            for ref in spec.references
        ]
    )
    return _pick(rng, ROOMEDIT_TEMPLATES).format(
        caption=spec.new_node.caption, distances=distances
    )
