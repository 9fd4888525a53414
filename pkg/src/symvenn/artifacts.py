"""Schematic SVG drawings, hypercube dual graphs and census reports."""

from __future__ import annotations

import colorsys
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .core import ClusterForm, k_point_table
from .validate import (
    FormOrSigma,
    InvalidDiagramError,
    check_crosscut_symmetry,
    check_polar_symmetry,
    canonical_start,
    find_crosscuts,
    full_sequence,
    resolve,
    validate_symmetric,
)


def _checked(obj: FormOrSigma, n=None):
    n, sigma, form = resolve(obj, n)
    report = validate_symmetric(sigma, n)
    if not report.valid:
        raise InvalidDiagramError(f"refusing to export: {report.describe()}")
    start = canonical_start(n) if form is not None else list(range(n))
    return n, sigma, form, start


@dataclass
class LayoutOptions:
    mode: str = "radial"
    size: float = 800.0
    ring_spacing: float | None = None
    smoothing: str = "polyline"
    shade_by_cardinality: bool = False
    palette: Sequence[str] | None = None
    stroke_width: float = 1.2

    def __post_init__(self):
        if self.mode == "cylinder":
            self.mode = "cylindrical"
        if self.mode not in ("radial", "cylindrical"):
            raise ValueError(f"unknown layout mode {self.mode!r}")
        if self.smoothing not in ("polyline", "curve"):
            raise ValueError(f"unknown smoothing {self.smoothing!r}")


def default_palette(count: int) -> list[str]:
    out = []
    for i in range(count):
        r, g, b = colorsys.hls_to_rgb(0.61 - 0.5 * i / max(1, count - 1), 0.62, 0.55)
        out.append(f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}")
    return out


def curve_colors(n: int) -> list[str]:
    out = []
    for i in range(n):
        r, g, b = colorsys.hls_to_rgb(i / n, 0.38, 0.75)
        out.append(f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}")
    return out


@dataclass
class StrandLayout:
    """Rank of every curve between crossings, plus where each crossing sits."""

    n: int
    full: tuple[int, ...]
    ranks: list[list[int]]  # ranks[t][curve] before crossing t; index len(full) wraps
    tracks: list[list[tuple[int, int, int]]]  # per curve: (t, rank before, rank after)

    @property
    def swap_count(self) -> int:
        return sum(len(track) for track in self.tracks) // 2


def strand_layout(n: int, sigma: Sequence[int], start: Sequence[int]) -> StrandLayout:
    full = full_sequence(n, sigma)
    rank_of = [0] * n
    for r, label in enumerate(start):
        rank_of[label] = r + 1
    vec = list(start)
    ranks = []
    tracks: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for t, x in enumerate(full):
        ranks.append(list(rank_of))
        a, b = vec[x - 1], vec[x]
        tracks[a].append((t, x, x + 1))
        tracks[b].append((t, x + 1, x))
        vec[x - 1], vec[x] = b, a
        rank_of[a], rank_of[b] = x + 1, x
    ranks.append(list(rank_of))
    return StrandLayout(n, full, ranks, tracks)


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


class _Radial:
    def __init__(self, n: int, total: int, opts: LayoutOptions):
        self.c = opts.size / 2
        outer = opts.size * 0.46
        spacing = opts.ring_spacing or outer / (n + 1.5)
        if spacing * n > outer:
            raise ValueError("ring spacing too large for the canvas")
        self.outer = outer
        self.spacing = spacing
        self.total = total

    def radius(self, rank: float) -> float:
        return self.outer - (rank - 1) * self.spacing

    def angle(self, t: float) -> float:
        # 12 o'clock origin, clockwise
        return 2 * math.pi * t / self.total

    def point(self, t: float, rank: float) -> tuple[float, float]:
        a, r = self.angle(t), self.radius(rank)
        return self.c + r * math.sin(a), self.c - r * math.cos(a)


class _Cylinder:
    def __init__(self, n: int, total: int, opts: LayoutOptions):
        self.margin = 20.0
        self.width = opts.size * 2
        self.dx = (self.width - 2 * self.margin) / total
        self.dy = opts.ring_spacing or (opts.size - 2 * self.margin) / (n + 1)
        if self.dy * (n + 1) > opts.size:
            raise ValueError("ring spacing too large for the canvas")
        self.height = opts.size

    def point(self, t: float, rank: float) -> tuple[float, float]:
        return self.margin + t * self.dx, self.margin + rank * self.dy


def _curve_path(track, geom, opts: LayoutOptions, radial: bool, total: int) -> str:
    h = 0.3
    pts = []
    for t, r0, r1 in track:
        pts.append((t + 0.5 - h, r0, t + 0.5 + h, r1))
    out = []
    if radial:
        first = pts[0]
        x, y = geom.point(first[2], first[3])
        out.append(f"M{_fmt(x)},{_fmt(y)}")
        seq = pts[1:] + [(pts[0][0] + total, pts[0][1], pts[0][2] + total, pts[0][3])]
        prev_t, prev_r = first[2], first[3]
        for t0, r0, t1, r1 in seq:
            rad = geom.radius(prev_r)
            large = 1 if geom.angle(t0) - geom.angle(prev_t) > math.pi else 0
            x, y = geom.point(t0, r0)
            out.append(f"A{_fmt(rad)},{_fmt(rad)} 0 {large} 1 {_fmt(x)},{_fmt(y)}")
            out.append(_swap(geom, t0, r0, t1, r1, opts.smoothing))
            prev_t, prev_r = t1, r1
        out.append("Z")
    else:
        r_start = track[-1][2]
        x, y = geom.point(0, r_start)
        out.append(f"M{_fmt(x)},{_fmt(y)}")
        for t0, r0, t1, r1 in pts:
            x, y = geom.point(t0, r0)
            out.append(f"L{_fmt(x)},{_fmt(y)}")
            out.append(_swap(geom, t0, r0, t1, r1, opts.smoothing))
        x, y = geom.point(total, track[-1][2])
        out.append(f"L{_fmt(x)},{_fmt(y)}")
    return " ".join(out)


def _swap(geom, t0, r0, t1, r1, smoothing) -> str:
    x1, y1 = geom.point(t1, r1)
    if smoothing == "curve":
        tm = (t0 + t1) / 2
        ax, ay = geom.point(tm, r0)
        bx, by = geom.point(tm, r1)
        return f"C{_fmt(ax)},{_fmt(ay)} {_fmt(bx)},{_fmt(by)} {_fmt(x1)},{_fmt(y1)}"
    return f"L{_fmt(x1)},{_fmt(y1)}"


def _faces(layout: StrandLayout):
    """``(gap, t_open, t_close)`` for every bounded face, from the sweep intervals."""
    total = len(layout.full)
    by_gap: dict[int, list[int]] = {}
    for t, x in enumerate(layout.full):
        by_gap.setdefault(x, []).append(t)
    faces = []
    for gap, ts in sorted(by_gap.items()):
        for i, t in enumerate(ts):
            nxt = ts[(i + 1) % len(ts)]
            if nxt <= t:
                nxt += total
            faces.append((gap, t, nxt))
    return faces


def _face_polygon(geom, radial: bool, gap: int, t0: int, t1: int, total: int) -> str:
    a0, a1 = t0 + 0.5, t1 + 0.5
    steps = max(2, int((a1 - a0) * 64 / total) + 2) if radial else 2
    ts = [a0 + (a1 - a0) * i / (steps - 1) for i in range(steps)]
    pts = [geom.point(t, gap) for t in ts] + [geom.point(t, gap + 1) for t in reversed(ts)]
    if not radial and a1 > total:
        # faces that wrap around the cylinder are clipped at the right edge
        pts = [geom.point(min(t, total), r) for t, r in
               [(a0, gap), (total, gap), (total, gap + 1), (a0, gap + 1)]]
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)


def render_svg(obj: FormOrSigma, options: LayoutOptions | None = None, n=None) -> str:
    """Standalone SVG 1.1 drawing; one ``<path>`` per curve."""
    opts = options or LayoutOptions()
    n, sigma, form, start = _checked(obj, n)
    layout = strand_layout(n, sigma, start)
    total = len(layout.full)
    radial = opts.mode == "radial"
    geom = _Radial(n, total, opts) if radial else _Cylinder(n, total, opts)
    width = opts.size if radial else geom.width
    height = opts.size if radial else geom.height
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f"<title>Simple symmetric {n}-Venn diagram ({opts.mode})</title>",
        f"<desc>curves={n} crossings={layout.swap_count}</desc>",
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    if opts.shade_by_cardinality:
        palette = list(opts.palette or default_palette(n + 1))
        lines.append('<g class="faces" stroke="none">')
        for gap, t0, t1 in _faces(layout):
            color = palette[gap % len(palette)]
            pts = _face_polygon(geom, radial, gap, t0, t1, total)
            lines.append(f'<polygon class="face k{gap}" fill="{color}" points="{pts}"/>')
        if radial:
            r = geom.radius(n)
            lines.append(
                f'<circle class="face k{n}" cx="{_fmt(geom.c)}" cy="{_fmt(geom.c)}" '
                f'r="{_fmt(r)}" fill="{palette[n % len(palette)]}"/>'
            )
        lines.append("</g>")
    colors = curve_colors(n)
    lines.append(f'<g class="curves" fill="none" stroke-width="{_fmt(opts.stroke_width)}">')
    for curve, track in enumerate(layout.tracks):
        d = _curve_path(track, geom, opts, radial, total)
        lines.append(f'<path class="curve" id="C{curve + 1}" stroke="{colors[curve]}" d="{d}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def bitstring(mask: int, n: int) -> str:
    """Curve 1 is the leftmost character."""
    return "".join("1" if mask >> j & 1 else "0" for j in range(n))


@dataclass
class DualGraph:
    n: int
    vertices: list[int]
    edges: list[tuple[int, int]]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_connected(self) -> bool:
        adj = self.adjacency()
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    def max_degree(self) -> int:
        return max(len(ns) for ns in self.adjacency().values())

    def hypercube_edges(self) -> bool:
        return all(bin(a ^ b).count("1") == 1 for a, b in self.edges)

    def edge_lines(self) -> list[str]:
        rows = []
        for a, b in self.edges:
            sa, sb = sorted((bitstring(a, self.n), bitstring(b, self.n)))
            rows.append(f"{sa} {sb}")
        return sorted(rows)

    def to_edge_list(self) -> str:
        return "".join(row + "\n" for row in self.edge_lines())

    def to_dot(self) -> str:
        out = [f"graph venn{self.n}_dual {{"]
        for v in self.vertices:
            out.append(f'  "{bitstring(v, self.n)}";')
        for row in self.edge_lines():
            a, b = row.split()
            out.append(f'  "{a}" -- "{b}";')
        out.append("}")
        return "\n".join(out) + "\n"


def dual_graph(obj: FormOrSigma, n=None) -> DualGraph:
    """Faces as vertices, one edge per curve segment (collected as segments end)."""
    n, sigma, _, start = _checked(obj, n)
    vec = list(start)
    prefix = [0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] | (1 << vec[i])
    edges: list[tuple[int, int]] = []
    for x in full_sequence(n, sigma):
        # segments ending here: rank x curve (gaps x-1|x) and rank x+1 curve (gaps x|x+1)
        for a, b in ((prefix[x - 1], prefix[x]), (prefix[x], prefix[x + 1])):
            edges.append((min(a, b), max(a, b)))
        vec[x - 1], vec[x] = vec[x], vec[x - 1]
        prefix[x] = prefix[x - 1] | (1 << vec[x - 1])
    dupes = [e for e, c in Counter(edges).items() if c > 1]
    if dupes:
        raise AssertionError(f"dual graph has parallel edges, e.g. {dupes[0]}")
    return DualGraph(n, list(range(1 << n)), sorted(edges))


def export_dual(obj: FormOrSigma, fmt: str = "dot", n=None) -> str:
    graph = dual_graph(obj, n)
    if fmt == "dot":
        return graph.to_dot()
    if fmt in ("edges", "edge-list"):
        return graph.to_edge_list()
    raise ValueError(f"unknown dual format {fmt!r}")


@dataclass
class CensusReport:
    n: int
    region_counts: dict[int, int]
    expected_region_counts: dict[int, int]
    left_kpoints: dict[int, int] = field(default_factory=dict)
    expected_left_kpoints: dict[int, int] = field(default_factory=dict)
    crosscut_count: int = 0
    crosscut_symmetric: bool = False
    polar_symmetric: bool = False

    def rows(self) -> list[dict]:
        out = []
        for k in range(1, self.n):
            out.append(
                {
                    "k": k,
                    "regions_per_cluster": self.region_counts.get(k, 0),
                    "binom_over_n": self.expected_region_counts[k],
                    "left_kpoints": self.left_kpoints.get(k, ""),
                    "R_k": self.expected_left_kpoints.get(k, ""),
                }
            )
        return out

    @property
    def consistent(self) -> bool:
        return (
            self.region_counts == self.expected_region_counts
            and (not self.left_kpoints or self.left_kpoints == self.expected_left_kpoints)
        )


def census_report(obj: FormOrSigma, n=None) -> CensusReport:
    n, sigma, form, _ = _checked(obj, n)
    counts = Counter(sigma)
    region_counts = {k: counts.get(k, 0) for k in range(1, n)}
    expected = {k: comb(n, k) // n for k in range(1, n)}
    report = CensusReport(n, region_counts, expected)
    if form is not None:
        left = Counter(sigma[: form.crosscut_position])
        table = k_point_table(n)
        report.left_kpoints = {k: left.get(k, 0) for k in range(1, n)}
        report.expected_left_kpoints = {row.k: row.r for row in table.rows}
    report.crosscut_count = len(find_crosscuts(sigma, n))
    report.crosscut_symmetric = check_crosscut_symmetry(form if form else sigma, n)
    report.polar_symmetric = check_polar_symmetry(sigma, n)
    return report
