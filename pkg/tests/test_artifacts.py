import csv
import xml.etree.ElementTree as ET
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symvenn.artifacts import (
    LayoutOptions,
    bitstring,
    census_report,
    dual_graph,
    export_dual,
    render_svg,
)
from symvenn.core import ClusterForm
from symvenn.report import write_report
from symvenn.validate import InvalidDiagramError

from conftest import M4_ALPHA, known_valid_forms

SVG = "{http://www.w3.org/2000/svg}"
SMALL = [f for f in known_valid_forms() if f.n <= 7]


@pytest.mark.parametrize("mode", ["radial", "cylindrical"])
@pytest.mark.parametrize("smoothing", ["polyline", "curve"])
@pytest.mark.parametrize("shade", [False, True])
def test_svg_structure(mode, smoothing, shade):
    form = ClusterForm(7, M4_ALPHA)
    svg = render_svg(form, LayoutOptions(mode=mode, smoothing=smoothing, shade_by_cardinality=shade))
    root = ET.fromstring(svg.split("\n", 1)[1])
    paths = root.findall(f".//{SVG}path")
    assert len(paths) == 7
    assert sorted(p.get("id") for p in paths) == [f"C{i}" for i in range(1, 8)]
    faces = root.findall(f".//{SVG}polygon")
    # every bounded face except the innermost disk is a polygon
    assert len(faces) == ((2**7 - 2) if shade else 0)


def test_cylinder_alias():
    form = ClusterForm(5, ())
    assert render_svg(form, LayoutOptions(mode="cylinder")) == render_svg(
        form, LayoutOptions(mode="cylindrical")
    )


@settings(max_examples=20, deadline=None)
@given(
    st.sampled_from(SMALL),
    st.sampled_from(["radial", "cylindrical"]),
    st.booleans(),
    st.sampled_from(["polyline", "curve"]),
)
def test_render_is_byte_deterministic(form, mode, shade, smoothing):
    opts = LayoutOptions(mode=mode, shade_by_cardinality=shade, smoothing=smoothing)
    first = render_svg(form, opts)
    assert render_svg(form, LayoutOptions(mode=mode, shade_by_cardinality=shade, smoothing=smoothing)) == first


def test_render_options_validated():
    with pytest.raises(ValueError):
        LayoutOptions(mode="spiral")
    with pytest.raises(ValueError):
        LayoutOptions(smoothing="spline")
    with pytest.raises(ValueError):
        render_svg(ClusterForm(7, M4_ALPHA), LayoutOptions(ring_spacing=200))


def test_render_refuses_invalid():
    with pytest.raises(InvalidDiagramError):
        render_svg(ClusterForm(7, (4, 3, 2, 3)))


@pytest.mark.parametrize("form", known_valid_forms(), ids=lambda f: f"n{f.n}-{len(f.alpha)}")
def test_dual_graph_shape(form):
    g = dual_graph(form)
    n = form.n
    assert len(g.vertices) == 2**n
    assert len(g.edges) == 2 * (2**n - 2)
    assert len(set(g.edges)) == len(g.edges)
    assert g.hypercube_edges()
    assert g.is_connected()


def test_n3_dual_is_cube():
    cube = sorted(
        " ".join(sorted((bitstring(a, 3), bitstring(b, 3))))
        for a, b in combinations(range(8), 2)
        if bin(a ^ b).count("1") == 1
    )
    assert export_dual(ClusterForm(3, ()), "edges").splitlines() == cube


def test_dual_formats():
    form = ClusterForm(5, ())
    edges = export_dual(form, "edges")
    lines = edges.splitlines()
    assert lines == sorted(lines) and edges.endswith("\n")
    assert all(len(a) == len(b) == 5 for a, b in (ln.split() for ln in lines))
    dot = export_dual(form, "dot")
    assert dot.startswith("graph ") and dot.rstrip().endswith("}")
    assert dot.count(" -- ") == len(lines)
    assert dot.count(";") == 32 + len(lines)
    with pytest.raises(ValueError):
        export_dual(form, "graphml")


def test_bitstring_order():
    # curve 1 is the leftmost character
    assert bitstring(0b001, 3) == "100"
    assert bitstring(0b110, 3) == "011"


@pytest.mark.parametrize("form", known_valid_forms(), ids=lambda f: f"n{f.n}-{len(f.alpha)}")
def test_census_report(form):
    rep = census_report(form)
    n = form.n
    assert rep.region_counts == {k: comb(n, k) // n for k in range(1, n)}
    assert rep.consistent
    assert rep.crosscut_count == (6 if n == 3 else n)
    assert rep.crosscut_symmetric


def test_report_files(tmp_path):
    rep = census_report(ClusterForm(7, M4_ALPHA))
    paths = write_report(rep, str(tmp_path / "a"))
    assert [p.rsplit("/", 1)[1] for p in paths] == ["census.csv", "census.png"]
    rows = list(csv.DictReader(open(paths[0])))
    assert [int(r["regions_per_cluster"]) for r in rows] == [1, 3, 5, 5, 3, 1]
    assert [int(r["R_k"]) for r in rows] == [1, 2, 3, 2, 1, 0]
    png = open(paths[1], "rb").read()
    assert png[:8] == b"\x89PNG\r\n\x1a\n"
    again = write_report(rep, str(tmp_path / "b"))
    assert open(again[1], "rb").read() == png
    assert open(again[0]).read() == open(paths[0]).read()
