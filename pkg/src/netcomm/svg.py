"""SVG figure emission: network views, community-size bar charts."""

from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

from .community import Partition, community_sizes
from .errors import InputError
from .graph import Graph, induced_subgraph
from .ingest import CHARACTERISTICS, AttributeTable
from .layout import fruchterman_reingold

# Categorical palette, cycled by category index.
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
           "#aec7e8", "#ffbb78")
NULL_FILL = "#c8c8c8"
SVG_NS = "http://www.w3.org/2000/svg"


def _doc(width, height):
    ET.register_namespace("", SVG_NS)
    root = ET.Element(f"{{{SVG_NS}}}svg", {
        "width": str(width), "height": str(height),
        "viewBox": f"0 0 {width} {height}", "version": "1.1",
    })
    return root


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _categories(g: Graph, color_by):
    """Per-vertex category name (None = null) plus the legend order."""
    if color_by is None:
        return ["all"] * g.n_vertices, ["all"]
    if isinstance(color_by, Partition):
        if len(color_by.membership) != g.n_vertices:
            raise InputError("partition does not cover the drawn vertices")
        cats = [str(int(c)) for c in color_by.membership]
        order = [str(c) for c in range(color_by.n_communities)]
        return cats, order
    attrs, characteristic = color_by
    if characteristic not in CHARACTERISTICS:
        raise InputError(f"unknown characteristic {characteristic!r}")
    cats = [attrs.get(lab, characteristic) for lab in g.labels]
    order = sorted({c for c in cats if c is not None})
    return cats, order


def render_svg(g: Graph, layout: np.ndarray, color_by=None, size_by=None,
               min_radius: float = 4.0, max_radius: float = 14.0,
               width: int = 800, height: int = 800) -> str:
    """One circle per vertex and one line per edge over the given unit
    square layout.  color_by is a Partition or an (AttributeTable,
    characteristic) pair; size_by maps vertex id to a score (radius affine
    in score) or None for uniform radii.  Null attribute values draw in a
    reserved gray style.  A legend is always included."""
    layout = np.asarray(layout, np.float64)
    if layout.shape != (g.n_vertices, 2):
        raise InputError("layout does not cover the drawn vertices")
    cats, order = _categories(g, color_by)
    color_of = {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(order)}

    if size_by is None:
        radii = np.full(g.n_vertices, (min_radius + max_radius) / 2.0)
    else:
        scores = np.array([float(size_by[v]) for v in range(g.n_vertices)])
        span = scores.max() - scores.min() if len(scores) else 0.0
        if span > 0:
            radii = min_radius + (scores - scores.min()) / span * (max_radius - min_radius)
        else:
            radii = np.full(g.n_vertices, (min_radius + max_radius) / 2.0)

    margin = max_radius + 6.0
    sx = width - 2 * margin
    sy = height - 2 * margin

    root = _doc(width, height)
    edges_el = ET.SubElement(root, f"{{{SVG_NS}}}g",
                             {"stroke": "#999999", "stroke-width": "1",
                              "stroke-opacity": "0.6"})
    px = margin + layout[:, 0] * sx
    py = margin + (1.0 - layout[:, 1]) * sy  # SVG y axis points down
    for u, v in zip(g.edges_u, g.edges_v):
        ET.SubElement(edges_el, f"{{{SVG_NS}}}line", {
            "x1": _fmt(px[u]), "y1": _fmt(py[u]),
            "x2": _fmt(px[v]), "y2": _fmt(py[v])})
    nodes_el = ET.SubElement(root, f"{{{SVG_NS}}}g", {"stroke": "#333333"})
    for v in range(g.n_vertices):
        cat = cats[v]
        fill = NULL_FILL if cat is None else color_of[cat]
        circle = {"cx": _fmt(px[v]), "cy": _fmt(py[v]),
                  "r": _fmt(radii[v]), "fill": fill}
        if cat is None:
            circle["stroke-dasharray"] = "2,2"
        el = ET.SubElement(nodes_el, f"{{{SVG_NS}}}circle", circle)
        title = ET.SubElement(el, f"{{{SVG_NS}}}title")
        title.text = g.labels[v]

    legend = ET.SubElement(root, f"{{{SVG_NS}}}g", {"font-size": "11",
                                                    "font-family": "sans-serif"})
    entries = list(order)
    if any(c is None for c in cats):
        entries.append(None)
    for i, cat in enumerate(entries):
        y = 14 + i * 16
        ET.SubElement(legend, f"{{{SVG_NS}}}rect", {
            "x": "8", "y": str(y - 9), "width": "10", "height": "10",
            "fill": NULL_FILL if cat is None else color_of[cat]})
        label = ET.SubElement(legend, f"{{{SVG_NS}}}text",
                              {"x": "22", "y": str(y)})
        label.text = "null" if cat is None else str(cat)
    return _serialize(root)


def _serialize(root) -> str:
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            + ET.tostring(root, encoding="unicode") + "\n")


def community_size_csv(p: Partition) -> str:
    lines = ["rank,size"]
    for rank, size in enumerate(community_sizes(p), start=1):
        lines.append(f"{rank},{size}")
    return "\n".join(lines) + "\n"


def community_size_chart(p: Partition, width: int = 640,
                         height: int = 360) -> str:
    """Bar chart of community sizes, largest first."""
    sizes = community_sizes(p)
    root = _doc(width, height)
    margin = 30.0
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    top = max(sizes) if sizes else 1
    bars = ET.SubElement(root, f"{{{SVG_NS}}}g", {"fill": PALETTE[0]})
    n = max(len(sizes), 1)
    bw = plot_w / n
    for i, s in enumerate(sizes):
        h = plot_h * s / top
        ET.SubElement(bars, f"{{{SVG_NS}}}rect", {
            "x": _fmt(margin + i * bw + bw * 0.1),
            "y": _fmt(margin + plot_h - h),
            "width": _fmt(bw * 0.8), "height": _fmt(h)})
    axis = ET.SubElement(root, f"{{{SVG_NS}}}g", {"stroke": "#333333"})
    ET.SubElement(axis, f"{{{SVG_NS}}}line", {
        "x1": _fmt(margin), "y1": _fmt(margin + plot_h),
        "x2": _fmt(margin + plot_w), "y2": _fmt(margin + plot_h)})
    caption = ET.SubElement(root, f"{{{SVG_NS}}}text", {
        "x": _fmt(margin), "y": "18", "font-size": "12",
        "font-family": "sans-serif"})
    caption.text = f"community sizes (largest {top})" if sizes else "no communities"
    return _serialize(root)


def community_attribute_views(g: Graph, p: Partition, attrs: AttributeTable,
                              community: int, iterations: int = 200,
                              seed: int | None = None,
                              size_by=None) -> dict[str, str]:
    """Induced-subgraph views of one community, one SVG per socioacademic
    characteristic."""
    if community < 0 or community >= p.n_communities:
        raise InputError(f"no community {community}")
    members = p.members(community)
    sub, _ = induced_subgraph(g, members)
    layout = fruchterman_reingold(sub, iterations=iterations, seed=seed)
    views = {}
    for char in CHARACTERISTICS:
        sub_sizes = None
        if size_by is not None:
            sub_sizes = {i: size_by[v] for i, v in enumerate(members)}
        views[char] = render_svg(sub, layout, color_by=(attrs, char),
                                 size_by=sub_sizes)
    return views
