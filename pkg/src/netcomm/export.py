"""Graph serialization: canonical JSON (lossless round-trip), GraphML, DOT.

JSON schema (format "netcomm-graph", version 1):

    {
      "format": "netcomm-graph",
      "version": 1,
      "vertices": [{"id": int, "label": str,
                    "community": int?,            # when a partition is given
                    "department": str|null?, ...  # when attributes are given
                   }, ...],
      "edges": [{"source": int, "target": int,
                 "weight": float, "events": int}, ...]
    }

Vertex ids are dense 0..n-1 in vertex order; edges reference ids with
source < target, sorted.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET

from .community import Partition
from .errors import InputError
from .graph import Graph
from .ingest import CHARACTERISTICS, AttributeTable

FORMATS = ("json", "graphml", "dot")


def graph_to_json(g: Graph, p: Partition | None = None,
                  attrs: AttributeTable | None = None) -> str:
    vertices = []
    for v in range(g.n_vertices):
        rec: dict = {"id": v, "label": g.labels[v]}
        if p is not None:
            rec["community"] = int(p.membership[v])
        if attrs is not None:
            for ch in CHARACTERISTICS:
                rec[ch] = attrs.get(g.labels[v], ch)
        vertices.append(rec)
    edges = [{"source": int(u), "target": int(v),
              "weight": float(w), "events": int(e)}
             for u, v, w, e in zip(g.edges_u, g.edges_v, g.weights, g.events)]
    doc = {"format": "netcomm-graph", "version": 1,
           "vertices": vertices, "edges": edges}
    return json.dumps(doc, separators=(",", ":")) + "\n"


def graph_from_json(text: str):
    """Parse the JSON schema back into (Graph, Partition|None,
    AttributeTable|None)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid graph JSON: {exc.msg}") from None
    if not isinstance(doc, dict) or doc.get("format") != "netcomm-graph":
        raise InputError("not a netcomm-graph JSON document")
    verts = doc.get("vertices")
    edges = doc.get("edges")
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise InputError("graph JSON needs 'vertices' and 'edges' lists")
    labels = [None] * len(verts)
    membership = [None] * len(verts)
    attr_rows: dict = {}
    has_membership = False
    has_attrs = False
    for rec in verts:
        try:
            vid = int(rec["id"])
            labels[vid] = str(rec["label"])
        except (KeyError, TypeError, ValueError, IndexError):
            raise InputError(f"bad vertex record: {rec!r}") from None
        if "community" in rec:
            has_membership = True
            membership[vid] = int(rec["community"])
        if any(ch in rec for ch in CHARACTERISTICS):
            has_attrs = True
            attr_rows[labels[vid]] = {ch: rec.get(ch) for ch in CHARACTERISTICS}
    if any(lab is None for lab in labels):
        raise InputError("vertex ids must be dense 0..n-1")
    eu, ev, ws, events = [], [], [], []
    for rec in edges:
        try:
            eu.append(int(rec["source"]))
            ev.append(int(rec["target"]))
            ws.append(float(rec["weight"]))
            events.append(int(rec.get("events", 1)))
        except (KeyError, TypeError, ValueError):
            raise InputError(f"bad edge record: {rec!r}") from None
    g = Graph(labels, eu, ev, ws, events)
    part = None
    if has_membership:
        if any(c is None for c in membership):
            raise InputError("partial community annotation")
        part = Partition.from_membership(membership, labels)
    table = AttributeTable(rows=attr_rows) if has_attrs else None
    return g, part, table


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: Graph, p: Partition | None = None,
                 attrs: AttributeTable | None = None) -> str:
    lines = ["graph netcomm {"]
    for v in range(g.n_vertices):
        parts = []
        if p is not None:
            parts.append(f"community={int(p.membership[v])}")
        if attrs is not None:
            for ch in CHARACTERISTICS:
                val = attrs.get(g.labels[v], ch)
                if val is not None:
                    parts.append(f"{ch}={_dot_quote(val)}")
        suffix = f" [{', '.join(parts)}]" if parts else ""
        lines.append(f"  {_dot_quote(g.labels[v])}{suffix};")
    for u, v, w in zip(g.edges_u, g.edges_v, g.weights):
        lines.append(f"  {_dot_quote(g.labels[u])} -- {_dot_quote(g.labels[v])}"
                     f" [weight={w:g}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_graphml(g: Graph, p: Partition | None = None,
                     attrs: AttributeTable | None = None) -> str:
    ns = "http://graphml.graphdrawing.org/xmlns"
    ET.register_namespace("", ns)
    root = ET.Element(f"{{{ns}}}graphml")

    def key(kid, target, name, dtype):
        ET.SubElement(root, f"{{{ns}}}key", {
            "id": kid, "for": target, "attr.name": name, "attr.type": dtype})

    key("k_label", "node", "label", "string")
    if p is not None:
        key("k_community", "node", "community", "int")
    if attrs is not None:
        for ch in CHARACTERISTICS:
            key(f"k_{ch}", "node", ch, "string")
    key("k_weight", "edge", "weight", "double")
    key("k_events", "edge", "events", "long")

    graph_el = ET.SubElement(root, f"{{{ns}}}graph",
                             {"id": "G", "edgedefault": "undirected"})

    def data(parent, kid, value):
        el = ET.SubElement(parent, f"{{{ns}}}data", {"key": kid})
        el.text = str(value)

    for v in range(g.n_vertices):
        node = ET.SubElement(graph_el, f"{{{ns}}}node", {"id": f"n{v}"})
        data(node, "k_label", g.labels[v])
        if p is not None:
            data(node, "k_community", int(p.membership[v]))
        if attrs is not None:
            for ch in CHARACTERISTICS:
                val = attrs.get(g.labels[v], ch)
                if val is not None:
                    data(node, f"k_{ch}", val)
    for e, (u, v) in enumerate(zip(g.edges_u, g.edges_v)):
        edge = ET.SubElement(graph_el, f"{{{ns}}}edge",
                             {"id": f"e{e}", "source": f"n{u}", "target": f"n{v}"})
        data(edge, "k_weight", float(g.weights[e]))
        data(edge, "k_events", int(g.events[e]))
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            + ET.tostring(root, encoding="unicode") + "\n")


def export_graph(g: Graph, p: Partition | None = None,
                 attrs: AttributeTable | None = None,
                 fmt: str = "json") -> str:
    if fmt == "json":
        return graph_to_json(g, p, attrs)
    if fmt == "dot":
        return graph_to_dot(g, p, attrs)
    if fmt == "graphml":
        return graph_to_graphml(g, p, attrs)
    raise InputError(f"unsupported export format {fmt!r}")
