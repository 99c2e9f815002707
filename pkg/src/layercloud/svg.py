"""Deterministic SVG rendering of representations.

One rectangle per vertex (layer 0 at the bottom), gap spans shaded gray, lost
edges drawn as dashed red segments between rectangle centers.  Output depends
only on the graph and representation, so files are golden-testable.
"""

from __future__ import annotations

from fractions import Fraction

from .model import LayeredGraph, Representation, VertexId, contact_report

UNIT = 40
MARGIN = 12


def _fmt(value: float) -> str:
    return f"{value:g}"


def render_svg(g: LayeredGraph, r: Representation) -> str:
    """Render a representation; the drawing is shifted so it starts at 0."""
    report = contact_report(g, r)
    left = min(r.x[v] for v in g.vertices())
    right = max(r.x[v] + g.width(v) for v in g.vertices())
    width_px = float(right - left) * UNIT + 2 * MARGIN
    height_px = g.num_layers * UNIT + 2 * MARGIN

    def x_px(value: Fraction) -> float:
        return MARGIN + float(value - left) * UNIT

    def y_px(layer: int) -> float:
        return MARGIN + (g.num_layers - 1 - layer) * UNIT

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width_px)}" '
        f'height="{_fmt(height_px)}" viewBox="0 0 {_fmt(width_px)} {_fmt(height_px)}">',
        f'<rect x="0" y="0" width="{_fmt(width_px)}" height="{_fmt(height_px)}" fill="white"/>',
    ]
    for i in range(g.num_layers):
        for j in range(g.layer_size(i) - 1):
            u, v = VertexId(i, j), VertexId(i, j + 1)
            gap = r.x[v] - (r.x[u] + g.width(u))
            if gap > 0:
                parts.append(
                    f'<rect class="gap" x="{_fmt(x_px(r.x[u] + g.width(u)))}" '
                    f'y="{_fmt(y_px(i))}" width="{_fmt(float(gap) * UNIT)}" '
                    f'height="{UNIT}" fill="#d9d9d9"/>'
                )
    for v in sorted(g.vertices()):
        parts.append(
            f'<rect class="vertex" x="{_fmt(x_px(r.x[v]))}" y="{_fmt(y_px(v.layer))}" '
            f'width="{_fmt(float(g.width(v)) * UNIT)}" height="{UNIT}" '
            f'fill="#7da7d9" stroke="black" stroke-width="1">'
            f"<title>{v}</title></rect>"
        )
    for u, v in sorted(report.lost):
        ux = x_px(r.x[u] + g.width(u) / 2)
        uy = y_px(u.layer) + UNIT / 2
        vx = x_px(r.x[v] + g.width(v) / 2)
        vy = y_px(v.layer) + UNIT / 2
        parts.append(
            f'<line class="lost" x1="{_fmt(ux)}" y1="{_fmt(uy)}" x2="{_fmt(vx)}" '
            f'y2="{_fmt(vy)}" stroke="#c0392b" stroke-width="2" stroke-dasharray="6 3"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
