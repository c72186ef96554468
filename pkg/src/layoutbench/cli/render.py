"""
Top-down rendering
~~~~~~~~~~~~~~~~~~

Orthographic SVG of a scene graph seen from above: one rectangle per node
footprint, containers as outlines, objects filled and labelled with their
caption. World ``+y`` points up the page. Output is deterministic.

"""

from xml.sax.saxutils import escape, quoteattr

from ..scene_graph import SceneGraph, format_number, world_aabb

__all__ = ("render_svg",)

SCALE = 200.0
"""Pixels per meter."""
MARGIN = 40.0
EMPTY_EXTENT = 1.0
FONT_SIZE = 10

PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7")


def _num(value: float) -> str:
    return format_number(round(value, 2))


def render_svg(graph: SceneGraph, title: str | None = None) -> str:
    """SVG text of the top-down view of ``graph``."""
    boxes = {node.id: world_aabb(node) for node in graph}
    if boxes:
        min_x = min(box.min.x for box in boxes.values())
        max_x = max(box.max.x for box in boxes.values())
        min_y = min(box.min.y for box in boxes.values())
        max_y = max(box.max.y for box in boxes.values())
    else:
        min_x = min_y = -EMPTY_EXTENT / 2
        max_x = max_y = EMPTY_EXTENT / 2

    width = (max_x - min_x) * SCALE + 2 * MARGIN
    height = (max_y - min_y) * SCALE + 2 * MARGIN

    def px(x: float) -> float:
        return (x - min_x) * SCALE + MARGIN

    def py(y: float) -> float:
        return (max_y - y) * SCALE + MARGIN

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(width)} {_num(height)}">',
        f'<rect x="0" y="0" width="{_num(width)}" height="{_num(height)}" fill="#ffffff"/>',
    ]
    if title:
        lines.append(f"<title>{escape(title)}</title>")

    # Axes through the world origin, clamped to the drawing
    origin_x = min(max(px(0.0), MARGIN), width - MARGIN)
    origin_y = min(max(py(0.0), MARGIN), height - MARGIN)
    lines.append(
        f'<g class="axes" stroke="#999999" stroke-width="1">'
        f'<line x1="{_num(MARGIN / 2)}" y1="{_num(origin_y)}" x2="{_num(width - MARGIN / 2)}" y2="{_num(origin_y)}"/>'
        f'<line x1="{_num(origin_x)}" y1="{_num(height - MARGIN / 2)}" x2="{_num(origin_x)}" y2="{_num(MARGIN / 2)}"/>'
        "</g>"
    )
    lines.append(
        f'<text x="{_num(width - MARGIN / 2)}" y="{_num(origin_y - 4)}" font-size="{FONT_SIZE}" '
        f'text-anchor="end">x</text>'
    )
    lines.append(f'<text x="{_num(origin_x + 4)}" y="{_num(MARGIN / 2 + FONT_SIZE)}" font-size="{FONT_SIZE}">y</text>')

    # Containers first so objects draw on top
    ordered = sorted(graph, key=lambda node: (not node.is_container, node.id))
    for node in ordered:
        box = boxes[node.id]
        x, y = px(box.min.x), py(box.max.y)
        w, h = (box.max.x - box.min.x) * SCALE, (box.max.y - box.min.y) * SCALE
        geometry = f'x="{_num(x)}" y="{_num(y)}" width="{_num(w)}" height="{_num(h)}"'
        if node.is_container:
            lines.append(
                f'<rect class="container" data-id="{node.id}" {geometry} '
                f'fill="none" stroke="#333333" stroke-width="2" stroke-dasharray="6 3"/>'
            )
            continue
        colour = PALETTE[node.id % len(PALETTE)]
        lines.append(
            f'<rect class="object" data-id="{node.id}" {geometry} '
            f'fill="{colour}" fill-opacity="0.6" stroke="#222222" stroke-width="1"/>'
        )
        label = node.caption or str(node.id)
        lines.append(
            f'<text x="{_num(x + w / 2)}" y="{_num(y + h / 2 + FONT_SIZE / 3)}" font-size="{FONT_SIZE}" '
            f'text-anchor="middle" data-label={quoteattr(label)}>{escape(label)}</text>'
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
