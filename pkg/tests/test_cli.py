import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

import netcomm
from netcomm.cli import main

from conftest import b6_rows, clique_chain_rows


def write_edges(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# src dst weight\n")
        for a, b, w in rows:
            fh.write(f"{a}\t{b}\t{w}\n")


def write_attrs(path, mapping):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("id,department,affiliation,origin,position\n")
        for label, dep in mapping.items():
            fh.write(f"{label},{dep},,,\n")


@pytest.fixture
def b6_graph_json(tmp_path):
    edges = tmp_path / "b6.tsv"
    write_edges(edges, b6_rows())
    out = tmp_path / "b6.json"
    assert main(["build", "--edges", str(edges), "--out", str(out)]) == 0
    return out


@pytest.fixture
def chain_graph_json(tmp_path):
    edges = tmp_path / "chain.tsv"
    write_edges(edges, clique_chain_rows())
    out = tmp_path / "chain.json"
    assert main(["build", "--edges", str(edges), "--out", str(out)]) == 0
    return out


def test_build_from_publications(tmp_path):
    pubs = tmp_path / "pubs.jsonl"
    records = [
        {"id": "p1", "year": 2001, "kind": "conference", "authors": ["x", "y", "z"]},
        {"id": "p2", "year": 2002, "kind": "journal", "authors": ["z", "w"]},
        {"id": "p3", "year": 2003, "kind": "book", "authors": ["solo"]},
    ]
    pubs.write_text("\n".join(json.dumps(r) for r in records) + "\n",
                    encoding="utf-8")
    out = tmp_path / "g.json"
    assert main(["build", "--pubs", str(pubs), "--out", str(out)]) == 0
    g, _, _ = netcomm.graph_from_json(out.read_text(encoding="utf-8"))
    assert g.n_vertices == 5
    assert g.n_edges == 4
    assert g.degree[g.vertex_id("z")] == 3
    assert (tmp_path / "g.json.manifest.json").exists()


def test_build_requires_exactly_one_input(tmp_path):
    out = tmp_path / "g.json"
    assert main(["build", "--out", str(out)]) == 2
    assert main(["build", "--pubs", "a", "--edges", "b", "--out", str(out)]) == 2


def test_build_missing_file(tmp_path):
    assert main(["build", "--edges", str(tmp_path / "nope.tsv"),
                 "--out", str(tmp_path / "g.json")]) == 2


def test_build_parse_error_line_number(tmp_path, capsys):
    edges = tmp_path / "bad.tsv"
    edges.write_text("a\tb\t1\nc\tc\t1\n", encoding="utf-8")
    assert main(["build", "--edges", str(edges),
                 "--out", str(tmp_path / "g.json")]) == 2
    assert "line 2" in capsys.readouterr().err


def test_detect_eb_two_communities(b6_graph_json, tmp_path):
    out = tmp_path / "m.csv"
    assert main(["detect", str(b6_graph_json), "--algo", "eb",
                 "--out", str(out)]) == 0
    part = netcomm.Partition.from_csv(out.read_text(encoding="utf-8"))
    assert part.n_communities == 2


def test_detect_lev_deterministic(b6_graph_json, tmp_path):
    out1, out2 = tmp_path / "m1.csv", tmp_path / "m2.csv"
    assert main(["detect", str(b6_graph_json), "--algo", "lev", "--out", str(out1)]) == 0
    assert main(["detect", str(b6_graph_json), "--algo", "lev", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_detect_spinglass_needs_seed(b6_graph_json, tmp_path):
    assert main(["detect", str(b6_graph_json), "--algo", "spinglass",
                 "--out", str(tmp_path / "m.csv")]) == 2


def test_detect_spinglass_disconnected_exit3(tmp_path, capsys):
    edges = tmp_path / "split.tsv"
    write_edges(edges, [("1", "2", 1), ("1", "3", 1), ("2", "3", 1),
                        ("4", "5", 1), ("4", "6", 1), ("5", "6", 1)])
    gpath = tmp_path / "g.json"
    assert main(["build", "--edges", str(edges), "--out", str(gpath)]) == 0
    rc = main(["detect", str(gpath), "--algo", "spinglass", "--seed", "1",
               "--out", str(tmp_path / "m.csv")])
    assert rc == 3
    assert "connected" in capsys.readouterr().err


def test_detect_spinglass_largest_component(tmp_path, capsys):
    edges = tmp_path / "two.tsv"
    write_edges(edges, [("1", "2", 1), ("1", "3", 1), ("2", "3", 1),
                        ("4", "5", 1)])
    gpath = tmp_path / "g.json"
    assert main(["build", "--edges", str(edges), "--out", str(gpath)]) == 0
    out = tmp_path / "m.csv"
    rc = main(["detect", str(gpath), "--algo", "spinglass", "--seed", "1",
               "--largest-component", "--out", str(out)])
    assert rc == 0
    assert "excluded 2 vertices" in capsys.readouterr().out
    part = netcomm.Partition.from_csv(out.read_text(encoding="utf-8"))
    assert len(part.labels) == 3


def test_detect_walktrap_dendrogram_and_sizes(b6_graph_json, tmp_path):
    out = tmp_path / "m.csv"
    dend = tmp_path / "d.json"
    sizes = tmp_path / "sizes.csv"
    chart = tmp_path / "sizes.svg"
    assert main(["detect", str(b6_graph_json), "--algo", "walktrap",
                 "--out", str(out), "--dendrogram", str(dend),
                 "--sizes-csv", str(sizes), "--sizes-svg", str(chart)]) == 0
    d = json.loads(dend.read_text(encoding="utf-8"))
    assert d["leaves"] == 6
    assert len(d["merges"]) == 5
    assert sizes.read_text(encoding="utf-8") == "rank,size\n1,3\n2,3\n"
    ET.fromstring(chart.read_text(encoding="utf-8"))


def test_chisq_planted_grid(chain_graph_json, tmp_path, capsys):
    mem = tmp_path / "m.csv"
    assert main(["detect", str(chain_graph_json), "--algo", "walktrap",
                 "--out", str(mem)]) == 0
    attrs = tmp_path / "attrs.csv"
    write_attrs(attrs, {str(i): ["Alpha", "Beta", "Gamma"][i // 6]
                        for i in range(18)})
    out = tmp_path / "report.json"
    rc = main(["chisq", str(chain_graph_json), "--membership", f"wt={mem}",
               "--attrs", str(attrs), "--characteristic", "department",
               "--replicates", "999", "--seed", "5", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["department"]["wt"]["p"] <= 0.01
    grid = capsys.readouterr().out
    assert "department" in grid and "wt" in grid


def test_chisq_unknown_characteristic(chain_graph_json, tmp_path):
    rc = main(["chisq", str(chain_graph_json), "--membership", "x=whatever",
               "--attrs", "nope.csv", "--characteristic", "shoe_size",
               "--seed", "1", "--out", str(tmp_path / "r.json")])
    assert rc == 2


def test_chisq_mismatched_labels(chain_graph_json, tmp_path, capsys):
    mem = tmp_path / "m.csv"
    mem.write_text("id,community\nghost,0\n0,1\n", encoding="utf-8")
    attrs = tmp_path / "attrs.csv"
    write_attrs(attrs, {"0": "A"})
    rc = main(["chisq", str(chain_graph_json), "--membership", f"bad={mem}",
               "--attrs", str(attrs), "--seed", "1",
               "--out", str(tmp_path / "r.json")])
    assert rc == 2
    assert "ghost" in capsys.readouterr().err


def test_stats_b6(b6_graph_json, tmp_path):
    out = tmp_path / "stats.json"
    assert main(["stats", str(b6_graph_json), "--out", str(out)]) == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["vertices"] == 6
    assert doc["edges"] == 7
    assert doc["component_sizes"] == [6]
    assert doc["connectedness"] == 1.0
    assert doc["clustering_coefficient"] == 0.6
    assert doc["maximal_cliques"] == 2


def test_layout_color_by_without_attrs(b6_graph_json, tmp_path):
    rc = main(["layout", str(b6_graph_json), "--seed", "1",
               "--color-by", "department", "--out", str(tmp_path / "x.svg")])
    assert rc == 2


def test_layout_svg_radii_monotone_in_centrality(b6_graph_json, tmp_path):
    out = tmp_path / "fig.svg"
    assert main(["layout", str(b6_graph_json), "--seed", "4",
                 "--size-by", "centrality", "--out", str(out)]) == 0
    root = ET.fromstring(out.read_text(encoding="utf-8"))
    circles = root.findall(".//{http://www.w3.org/2000/svg}circle")
    assert len(circles) == 6
    g, _, _ = netcomm.graph_from_json(
        b6_graph_json.read_text(encoding="utf-8"))
    scores = netcomm.eigenvector_centrality(g)
    radii = [float(c.get("r")) for c in circles]
    pairs = sorted(zip([scores[v] for v in range(6)], radii))
    assert all(r1 <= r2 + 1e-9 for (_, r1), (_, r2) in zip(pairs, pairs[1:]))


def test_layout_focus_community_views(chain_graph_json, tmp_path):
    mem = tmp_path / "m.csv"
    assert main(["detect", str(chain_graph_json), "--algo", "eb",
                 "--out", str(mem)]) == 0
    attrs = tmp_path / "attrs.csv"
    write_attrs(attrs, {str(i): ["Alpha", "Beta", "Gamma"][i // 6]
                        for i in range(18)})
    prefix = tmp_path / "community0"
    rc = main(["layout", str(chain_graph_json), "--seed", "2",
               "--membership", str(mem), "--attrs", str(attrs),
               "--focus-community", "0", "--out", str(tmp_path / "unused.svg"),
               "--out-prefix", str(prefix)])
    assert rc == 0
    for ch in netcomm.CHARACTERISTICS:
        doc = (tmp_path / f"community0.{ch}.svg").read_text(encoding="utf-8")
        circles = ET.fromstring(doc).findall(
            ".//{http://www.w3.org/2000/svg}circle")
        assert len(circles) == 6


def test_determinism_detect_chisq_layout(chain_graph_json, tmp_path):
    attrs = tmp_path / "attrs.csv"
    write_attrs(attrs, {str(i): ["Alpha", "Beta", "Gamma"][i // 6]
                        for i in range(18)})
    outputs = {}
    for run in (1, 2):
        mem = tmp_path / f"m{run}.csv"
        rep = tmp_path / f"r{run}.json"
        svg = tmp_path / f"f{run}.svg"
        assert main(["detect", str(chain_graph_json), "--algo", "spinglass",
                     "--seed", "9", "--out", str(mem)]) == 0
        assert main(["chisq", str(chain_graph_json), "--membership",
                     f"sg={mem}", "--attrs", str(attrs), "--seed", "9",
                     "--replicates", "499", "--out", str(rep)]) == 0
        assert main(["layout", str(chain_graph_json), "--seed", "9",
                     "--out", str(svg)]) == 0
        outputs[run] = (mem.read_bytes(), rep.read_bytes(), svg.read_bytes())
    assert outputs[1] == outputs[2]


def test_manifest_records_seed_and_inputs(b6_graph_json, tmp_path):
    out = tmp_path / "m.csv"
    assert main(["detect", str(b6_graph_json), "--algo", "spinglass",
                 "--seed", "17", "--out", str(out)]) == 0
    manifest = json.loads((tmp_path / "m.csv.manifest.json")
                          .read_text(encoding="utf-8"))
    assert manifest["command"] == "detect"
    assert manifest["seed"] == 17
    assert str(b6_graph_json) in manifest["inputs"]
    assert manifest["version"] == netcomm.__version__


def test_pipeline_golden(tmp_path, capsys):
    # build -> detect (all four) -> chisq completes without intervention.
    edges = tmp_path / "chain.tsv"
    write_edges(edges, clique_chain_rows())
    gpath = tmp_path / "g.json"
    assert main(["build", "--edges", str(edges), "--out", str(gpath)]) == 0
    attrs = tmp_path / "attrs.csv"
    write_attrs(attrs, {str(i): ["Alpha", "Beta", "Gamma"][i // 6]
                        for i in range(18)})
    memberships = []
    for algo in netcomm.ALGORITHMS:
        mem = tmp_path / f"{algo}.csv"
        argv = ["detect", str(gpath), "--algo", algo, "--out", str(mem)]
        if algo == "spinglass":
            argv += ["--seed", "3"]
        assert main(argv) == 0
        memberships.append(f"{algo}={mem}")
    out = tmp_path / "report.json"
    argv = ["chisq", str(gpath), "--attrs", str(attrs), "--seed", "8",
            "--replicates", "499", "--out", str(out)]
    for m in memberships:
        argv += ["--membership", m]
    assert main(argv) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert set(report) == set(netcomm.CHARACTERISTICS)
    for algo in netcomm.ALGORITHMS:
        assert report["department"][algo]["p"] <= 0.01
