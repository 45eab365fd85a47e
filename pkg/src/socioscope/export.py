"""Sociogram exports for external renderers (Graphviz dot, plain edge lists)."""

from __future__ import annotations

from .model import Sociogram

FORMATS = ("dot", "edge-list")
_MAX_PENWIDTH = 6.0


class UnsupportedFormat(ValueError):
    pass


def to_dot(sociogram: Sociogram) -> str:
    """Graphviz source; edge pen width is proportional to weight.

    Conversation graphs render as digraphs with arrowheads, the undirected
    kinds as plain graphs. Node and edge order follow the roster, so the
    output is deterministic.
    """
    graph_kw, arrow = ("digraph", "->") if sociogram.directed else ("graph", "--")
    lines = [f"{graph_kw} {sociogram.kind} {{"]
    for pid in sociogram.roster:
        lines.append(f'  "{pid}";')
    edges = sociogram.sorted_edges()
    max_w = max((w for _, _, w in edges), default=1.0)
    for a, b, w in edges:
        pen = _MAX_PENWIDTH * w / max_w
        lines.append(f'  "{a}" {arrow} "{b}" [weight={w:.6g}, penwidth={pen:.3f}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_edge_list(sociogram: Sociogram) -> str:
    """One edge per line: source, target, weight (tab separated, roster order)."""
    lines = [f"{a}\t{b}\t{w:.6g}" for a, b, w in sociogram.sorted_edges()]
    return "\n".join(lines) + ("\n" if lines else "")


def export_sociogram(sociogram: Sociogram, fmt: str) -> str:
    if fmt == "dot":
        return to_dot(sociogram)
    if fmt == "edge-list":
        return to_edge_list(sociogram)
    raise UnsupportedFormat(f"unsupported export format {fmt!r}; known: {FORMATS}")
