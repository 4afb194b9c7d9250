"""DOT and SVG views of a network over its point set.

Both renderers are deterministic: nodes and edges are emitted in sorted
order and all SVG geometry is computed in integer arithmetic, so equal
inputs give byte-equal documents.  Edge ownership follows the figure
convention of an arrow pointing away from the buyer; nearest-neighbour
edges are drawn red.
"""

from __future__ import annotations

import logging

from .geometry import build_nng
from .metric import EuclideanSpace, Space
from .network import Network, Variant, undirected_edge

logger = logging.getLogger(__name__)


class RenderError(Exception):
    pass


def _node_name(space: Space, u: int) -> str:
    if space.labels is not None:
        return space.labels[u]
    return str(u)


def to_dot(network: Network, space: Space, highlight_nng: bool = True) -> str:
    """GraphViz text.  Undirected edges with a known owner get a direction
    attribute so the arrow points away from the buyer."""
    nng = build_nng(space).undirected_edges if highlight_nng else frozenset()
    directed = network.variant is Variant.DIRECTED
    out = ["digraph navgame {" if directed else "graph navgame {"]
    out.append('  node [shape=circle, fontsize=10];')
    for u in range(network.n):
        out.append(f'  {u} [label="{_node_name(space, u)}"];')
    connector = "->" if directed else "--"
    for e in sorted(network.edges):
        attrs = []
        if not directed and undirected_edge(*e) in nng:
            attrs.append("color=red")
            attrs.append("penwidth=2.0")
        if not directed and network.ownership is not None:
            owner = network.ownership[e]
            attrs.append("dir=forward" if owner == e[0] else "dir=back")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        out.append(f"  {e[0]} {connector} {e[1]}{suffix};")
    out.append("}")
    return "\n".join(out) + "\n"


def _planar_coordinates(space: EuclideanSpace) -> list[tuple[int, int]]:
    if space.dimension == 1:
        return [(p[0], 0) for p in space.points]
    if space.dimension > 2:
        logger.warning(
            "projecting %dD points onto their first two coordinates",
            space.dimension,
        )
    return [(p[0], p[1]) for p in space.points]


def render_svg(
    network: Network,
    space: Space,
    size: int = 800,
    margin: int = 50,
) -> str:
    """SVG 1.1 document.  Needs point coordinates, so euclidean only;
    dimensions above two are projected (with a warning)."""
    if not isinstance(space, EuclideanSpace):
        raise RenderError(
            "general metric spaces have no canonical layout; use to_dot"
        )
    pts = _planar_coordinates(space)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span_x = max(max(xs) - min(xs), 1)
    span_y = max(max(ys) - min(ys), 1)
    span = max(span_x, span_y)
    inner = size - 2 * margin

    def place(p: tuple[int, int]) -> tuple[int, int]:
        x = margin + (p[0] - min(xs)) * inner // span
        # flip y so larger coordinates point up, as on paper
        y = size - margin - (p[1] - min(ys)) * inner // span
        return x, y

    placed = [place(p) for p in pts]
    nng = build_nng(space).undirected_edges
    directed = network.variant is Variant.DIRECTED

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if directed:
        out.append(
            '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" '
            'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
            '<path d="M 0 0 L 10 5 L 0 10 z" fill="#333333"/></marker></defs>'
        )
    for e in sorted(network.edges):
        (x1, y1), (x2, y2) = placed[e[0]], placed[e[1]]
        is_nng = undirected_edge(*e) in nng
        stroke = "#d62728" if is_nng else "#333333"
        width = "3" if is_nng else "1"
        extra = ' marker-end="url(#arrow)"' if directed else ""
        out.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )
        if not directed and network.ownership is not None:
            owner = network.ownership[e]
            other = e[1] if owner == e[0] else e[0]
            (ox, oy), (vx, vy) = placed[owner], placed[other]
            # ownership dot sits near the buyer's end of the edge
            mx = (7 * ox + 3 * vx) // 10
            my = (7 * oy + 3 * vy) // 10
            out.append(f'<circle cx="{mx}" cy="{my}" r="3" fill="{stroke}"/>')
    for u, (x, y) in enumerate(placed):
        out.append(f'<circle cx="{x}" cy="{y}" r="5" fill="#1f77b4"/>')
        out.append(
            f'<text x="{x + 8}" y="{y - 8}" font-size="12" '
            f'font-family="sans-serif">{_node_name(space, u)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
