"""SVG figures: trajectory families in the Poincare disk, filling faces, rectangles."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .billiards import CyclicFamily
from .filling import FillingReport, face_outline, klein_point
from .hypgeo import _klein_to_poincare
from .polygon import IdealPolygon

PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]
FACE_FILL = {"a": "#c6dbef", "b": "#c7e9c0", "c": "#fdd0a2", "violation": "#ff0000"}


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _path(points) -> str:
    it = iter(points)
    x, y = next(it)
    parts = [f"M {_fmt(x)} {_fmt(-y)}"]
    parts += [f"L {_fmt(x)} {_fmt(-y)}" for x, y in it]
    return " ".join(parts)


def geodesic_samples(k1: complex, k2: complex, samples: int = 48):
    """Points along the geodesic between two Klein-model points, in the Poincare disk."""
    out = []
    for i in range(samples):
        s = i / (samples - 1)
        # cosine spacing puts more samples near the ends, where arcs bend most
        s = 0.5 - 0.5 * math.cos(math.pi * s)
        z = _klein_to_poincare(k1 + s * (k2 - k1))
        out.append((z.real, z.imag))
    return out


def _header(title: str, size: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        'viewBox="-1.08 -1.08 2.16 2.16">',
        f"<title>{escape(title)}</title>",
    ]


def _polygon_elements(P: IdealPolygon) -> list[str]:
    out = ['<circle class="boundary" cx="0" cy="0" r="1" />']
    k = P.k
    for i in range(k):
        a, b = P.theta[i], P.theta[(i + 1) % k]
        k1 = complex(math.cos(a), math.sin(a))
        k2 = complex(math.cos(b), math.sin(b))
        out.append(f'<path class="side side-{i + 1}" d="{_path(geodesic_samples(k1, k2, 96))}" />')
    for i, t in enumerate(P.theta):
        out.append(
            f'<circle class="vertex vertex-{i + 1}" cx="{_fmt(math.cos(t))}" '
            f'cy="{_fmt(-math.sin(t))}" r="0.018" />'
        )
    return out


def render(P: IdealPolygon, family: CyclicFamily, size: int = 600, samples: int = 48,
           title: str | None = None) -> str:
    """SVG of an ideal polygon with every trajectory of a cyclic family."""
    if samples < 32:
        raise ValueError("need at least 32 samples per arc")
    if title is None:
        title = f"closed billiard trajectories cyclically related to {family.sequence.labels}"
    css = [
        ".boundary { fill: none; stroke: #999999; stroke-width: 0.004; }",
        ".side { fill: none; stroke: #000000; stroke-width: 0.008; }",
        ".vertex { fill: #000000; }",
        ".traj { fill: none; stroke-width: 0.006; stroke-linejoin: round; }",
    ]
    for i in range(len(family.trajectories)):
        css.append(f".traj-{i} {{ stroke: {PALETTE[i % len(PALETTE)]}; }}")
    lines = _header(title, size)
    lines.append("<style>" + " ".join(css) + "</style>")
    lines += _polygon_elements(P)
    for i, tr in enumerate(family.trajectories):
        labels = ",".join(str(x) for x in tr.sequence.labels)
        lines.append(f'<g class="traj traj-{i}" data-sequence="{labels}">')
        kp = [klein_point(P, h) for h in tr.hits]
        n = len(kp)
        for j in range(n):
            pts = geodesic_samples(kp[j], kp[(j + 1) % n], samples)
            lines.append(f'<path d="{_path(pts)}" />')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_faces(P: IdealPolygon, family: CyclicFamily, report: FillingReport,
                 size: int = 600) -> str:
    """SVG overlay of the complementary faces coloured by their type."""
    lines = _header(f"faces of {family.sequence.labels}", size)
    css = [".boundary { fill: none; stroke: #999999; stroke-width: 0.004; }",
           ".side { fill: none; stroke: #000000; stroke-width: 0.008; }",
           ".vertex { fill: #000000; }",
           ".face { stroke: #333333; stroke-width: 0.003; }"]
    for kind, colour in FACE_FILL.items():
        css.append(f".face-{kind} {{ fill: {colour}; }}")
    lines.append("<style>" + " ".join(css) + "</style>")
    for face in report.faces:
        pts = face_outline(report, face)
        lines.append(f'<path class="face face-{face.type}" d="{_path(pts)} Z" />')
    lines += _polygon_elements(P)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_rectangle(n: int, m: int, c: float = 1.0, size: int = 600) -> str:
    """SVG of the table ``P_c`` with the four cyclically related closed paths."""
    from .euclid import folded_path

    w, h = c, 1.0 / c
    span = max(w, h)
    pad = 0.05 * span
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_fmt(-pad)} {_fmt(-h - pad)} {_fmt(span + 2 * pad)} {_fmt(span + 2 * pad)}">',
        f"<title>rectangle billiards, class ({n}, {m}), c = {c:g}</title>",
        "<style>.table { fill: none; stroke: #000000; stroke-width: %s; } "
        ".traj { fill: none; stroke-width: %s; }</style>" % (_fmt(0.01 * span), _fmt(0.006 * span)),
        f'<rect class="table" x="0" y="{_fmt(-h)}" width="{_fmt(w)}" height="{_fmt(h)}" />',
    ]
    # start points off the symmetry lines so the four paths stay distinct
    offsets = [(0.13, 0.29), (0.31, 0.17), (0.71, 0.83), (0.89, 0.61)]
    for i, (p, q) in enumerate([(n, m), (-m, n), (-n, -m), (m, -n)]):
        start = (offsets[i][0] * w, offsets[i][1] * h)
        pts = folded_path(p, q, c, start)
        lines.append(
            f'<path class="traj traj-{i}" stroke="{PALETTE[i]}" d="{_path(pts)}" />'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
