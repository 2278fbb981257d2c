"""Deterministic SVG rendering of instances and happy sets.

Conventions: graph edges solid black, happy-set edges dashed, visibility
edges (optional) light gray, vertices as circles and unhappy vertices as
squares.  Output is byte-identical across runs for identical inputs.
"""

from typing import Iterable, Optional

from .model import Edge, Instance, verify_happy_set, visibility_graph

_SVG_OPEN = '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vb}">'


def render_svg(
    inst: Instance,
    happy: Optional[Iterable[Edge]] = None,
    show_vis: bool = False,
) -> str:
    """Render to an SVG 1.1 document string.

    A happy set failing verification is still drawn, under a warning banner.
    """
    pts = inst.graph.points
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    span = max(max_x - min_x, max_y - min_y, 1)
    margin = max(1, span // 20)  # 5% of the bounding box

    def fy(y: int) -> int:
        # SVG's y axis points down; mirror inside the original bounding box
        return (min_y + max_y) - y

    vb = f"{min_x - margin} {min_y - margin} {max_x - min_x + 2 * margin} {max_y - min_y + 2 * margin}"
    stroke = max(1, span // 400)
    radius = max(1, span // 100)
    parts = [_SVG_OPEN.format(vb=vb)]

    warning = None
    happy_edges: list[Edge] = sorted(happy) if happy is not None else []
    if happy is not None:
        report = verify_happy_set(inst, happy_edges)
        if not report.ok:
            warning = f"happy set failed verification ({len(report.failures)} failures)"

    if show_vis:
        for u, v in sorted(visibility_graph(inst.graph)):
            parts.append(
                f'<line class="vis-edge" x1="{pts[u].x}" y1="{fy(pts[u].y)}" '
                f'x2="{pts[v].x}" y2="{fy(pts[v].y)}" stroke="#bbbbbb" '
                f'stroke-width="{stroke}"/>'
            )
    for u, v in sorted(inst.graph.edges):
        parts.append(
            f'<line class="g-edge" x1="{pts[u].x}" y1="{fy(pts[u].y)}" '
            f'x2="{pts[v].x}" y2="{fy(pts[v].y)}" stroke="#000000" '
            f'stroke-width="{2 * stroke}"/>'
        )
    for u, v in happy_edges:
        parts.append(
            f'<line class="happy-edge" x1="{pts[u].x}" y1="{fy(pts[u].y)}" '
            f'x2="{pts[v].x}" y2="{fy(pts[v].y)}" stroke="#cc2222" '
            f'stroke-width="{2 * stroke}" stroke-dasharray="{4 * stroke} {3 * stroke}"/>'
        )
    for i, p in enumerate(pts):
        if i in inst.unhappy:
            side = 2 * radius
            parts.append(
                f'<rect class="vertex unhappy" x="{p.x - radius}" y="{fy(p.y) - radius}" '
                f'width="{side}" height="{side}" fill="#cc2222"/>'
            )
        else:
            parts.append(
                f'<circle class="vertex" cx="{p.x}" cy="{fy(p.y)}" r="{radius}" '
                f'fill="#000000"/>'
            )
    if warning:
        parts.append(
            f'<text class="warning" x="{min_x}" y="{min_y - margin // 2}" '
            f'font-size="{max(margin, 1)}" fill="#cc2222">{warning}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
