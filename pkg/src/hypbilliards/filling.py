"""Filling checks for families of closed billiard trajectories.

All arcs and polygon sides are straight chords in the Klein model, so the
arrangement is a straight-line planar graph there.  Its combinatorics are
the same as in the Poincare disk because the change of model is a
homeomorphism of the disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .billiards import CyclicFamily, Trajectory
from .hypgeo import DiskPoint, _klein_to_poincare
from .polygon import BoundaryCoordinate, IdealPolygon, separates

TOL_T = 1e-9
TOL_NODE = 1e-9


class ArrangementError(ArithmeticError):
    pass


def klein_point(P: IdealPolygon, bc: BoundaryCoordinate) -> complex:
    F, D = P.hyperboloid_frames
    x = math.cosh(bc.t) * F[bc.side - 1] + math.sinh(bc.t) * D[bc.side - 1]
    return complex(x[1] / x[0], x[2] / x[0])


@dataclass(frozen=True)
class ArcSegment:
    """Geodesic chord of a trajectory between two consecutive hits."""

    e1: BoundaryCoordinate
    e2: BoundaryCoordinate
    owner: int = 0
    k1: complex = field(default=0j, compare=False, repr=False)
    k2: complex = field(default=0j, compare=False, repr=False)

    def __post_init__(self):
        if _same(self.e1, self.e2):
            raise ValueError("arc endpoints coincide")
        if self.e1.side == self.e2.side:
            # such a chord runs along the side instead of through the interior
            raise ValueError("arc endpoints lie on the same side")


def _same(b1: BoundaryCoordinate, b2: BoundaryCoordinate, tol: float = TOL_T) -> bool:
    return b1.side == b2.side and abs(b1.t - b2.t) <= tol


def arcs_of(tr: Trajectory, owner: int = 0) -> list[ArcSegment]:
    P = tr.polygon
    hits = tr.hits
    n = len(hits)
    kp = [klein_point(P, h) for h in hits]
    return [
        ArcSegment(hits[j], hits[(j + 1) % n], owner, kp[j], kp[(j + 1) % n])
        for j in range(n)
    ]


def interlace(s1: ArcSegment, s2: ArcSegment) -> bool:
    """Do the endpoints of the two arcs alternate along the polygon boundary?"""
    for a in (s1.e1, s1.e2):
        for b in (s2.e1, s2.e2):
            if _same(a, b):
                raise ValueError("arcs share an endpoint")
    return separates(s1.e1.key(), s1.e2.key(), s2.e1.key(), s2.e2.key())


def _klein_crossing(s1: ArcSegment, s2: ArcSegment):
    """Parameters ``(lam, mu, point)`` of the crossing of two chords, or None."""
    r = s1.k2 - s1.k1
    s = s2.k2 - s2.k1
    den = r.real * s.imag - r.imag * s.real
    if den == 0.0:
        return None
    q = s2.k1 - s1.k1
    lam = (q.real * s.imag - q.imag * s.real) / den
    mu = (q.real * r.imag - q.imag * r.real) / den
    if not (0.0 < lam < 1.0 and 0.0 < mu < 1.0):
        return None
    return lam, mu, s1.k1 + lam * r


def intersects(s1: ArcSegment, s2: ArcSegment):
    """Interior crossing point of two arcs as a DiskPoint, or None."""
    for a in (s1.e1, s1.e2):
        for b in (s2.e1, s2.e2):
            if _same(a, b):
                raise ValueError("arcs share an endpoint")
    hit = _klein_crossing(s1, s2)
    if hit is None:
        return None
    return DiskPoint.from_complex(_klein_to_poincare(hit[2]))


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry

    def classes(self):
        return len({self.find(x) for x in range(len(self.parent))})


def _family_arcs(family) -> list[ArcSegment]:
    trs = family.trajectories if isinstance(family, CyclicFamily) else family
    out = []
    for i, tr in enumerate(trs):
        out.extend(arcs_of(tr, i))
    return out


def connectivity(family) -> bool:
    """Is the union of the family's trajectories connected?

    Union-find over arcs: consecutive arcs share a hit point, arcs with a
    common endpoint touch, and interlacing arcs cross.
    """
    return connectivity_of_arcs(_family_arcs(family))


def non_adjacent_sides(tr: Trajectory) -> bool:
    """Does the trajectory meet two sides that are not adjacent?"""
    k = tr.polygon.k
    sides = sorted({h.side for h in tr.hits})
    for i, x in enumerate(sides):
        for y in sides[i + 1:]:
            if (y - x) % k not in (1, k - 1):
                return True
    return False


# -- arrangement -------------------------------------------------------------

@dataclass
class Face:
    type: str
    boundary_runs: int
    contains_whole_side: bool
    vertices_in_run: int = 0
    nodes: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "boundary_runs": self.boundary_runs,
            "contains_whole_side": self.contains_whole_side,
        }


@dataclass
class FillingReport:
    connected: bool
    faces: list
    fills: bool
    n_vertices: int = 0
    n_edges: int = 0
    n_faces: int = 0
    concurrent_merges: int = 0
    snapped: int = 0
    node_positions: list = field(default_factory=list, repr=False)

    @property
    def euler(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def counts(self) -> dict:
        out = {"a": 0, "b": 0, "c": 0, "violation": 0}
        for f in self.faces:
            out[f.type] += 1
        return out

    def to_json(self) -> dict:
        return {
            "fills": self.fills,
            "connected": self.connected,
            "faces": [f.to_json() for f in self.faces],
            "face_counts": self.counts(),
            "V": self.n_vertices,
            "E": self.n_edges,
            "F": self.n_faces,
            "euler": self.euler,
            "concurrent_merges": self.concurrent_merges,
            "snapped": self.snapped,
        }


def _dedupe(arcs):
    out = []
    for a in arcs:
        for b in out:
            if (_same(a.e1, b.e1) and _same(a.e2, b.e2)) or (
                _same(a.e1, b.e2) and _same(a.e2, b.e1)
            ):
                break
        else:
            out.append(a)
    return out


def arrangement(P: IdealPolygon, arcs: list[ArcSegment]) -> FillingReport:
    """Trace the faces cut out of ``P`` by the arcs and classify each one."""
    arcs = _dedupe(arcs)
    k = P.k
    pos: list[complex] = []
    is_vertex: list[bool] = []

    # boundary nodes: ideal vertices and distinct hit points, in boundary order
    by_side: dict[int, list[BoundaryCoordinate]] = {i: [] for i in range(1, k + 1)}
    for a in arcs:
        for e in (a.e1, a.e2):
            if not any(_same(e, f) for f in by_side[e.side]):
                by_side[e.side].append(e)
    boundary_cycle: list[int] = []
    node_of: dict[tuple, int] = {}
    for i in range(1, k + 1):
        theta = P.theta[i - 1]
        pos.append(complex(math.cos(theta), math.sin(theta)))
        is_vertex.append(True)
        boundary_cycle.append(len(pos) - 1)
        for e in sorted(by_side[i], key=lambda b: b.t):
            pos.append(klein_point(P, e))
            is_vertex.append(False)
            node_of[e.key()] = len(pos) - 1
            boundary_cycle.append(len(pos) - 1)
    rank = {node: r for r, node in enumerate(boundary_cycle)}

    def node(e):
        for f in by_side[e.side]:
            if _same(e, f):
                return node_of[f.key()]
        raise AssertionError("unregistered boundary point")

    ends = [(node(a.e1), node(a.e2)) for a in arcs]
    along: list[list[tuple[float, int]]] = [[] for _ in arcs]
    merges = 0
    snapped = 0
    interior_start = len(pos)
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if set(ends[i]) & set(ends[j]):
                continue
            r = [rank[x] for x in ends[i] + ends[j]]
            crossing = separates(r[0], r[1], r[2], r[3])
            hit = _klein_crossing(arcs[i], arcs[j])
            if crossing != (hit is not None):
                raise ArrangementError(
                    f"interlacing and geometric crossing disagree for arcs {i}, {j}"
                )
            if hit is None:
                continue
            lam, mu, p = hit
            for q in range(interior_start, len(pos)):
                if abs(pos[q] - p) <= TOL_NODE:
                    nid = q
                    merges += 1
                    break
            else:
                pos.append(p)
                is_vertex.append(False)
                nid = len(pos) - 1
            for s, par in ((i, lam), (j, mu)):
                if min(par, 1.0 - par) * abs(arcs[s].k2 - arcs[s].k1) <= TOL_NODE:
                    snapped += 1
                along[s].append((par, nid))

    edges: set[tuple[int, int]] = set()
    kinds: dict[tuple[int, int], str] = {}

    def add(u, v, kind):
        if u == v:
            return
        key = (min(u, v), max(u, v))
        if key not in edges:
            edges.add(key)
            kinds[(u, v)] = kind
            kinds[(v, u)] = kind

    for s, (u, v) in enumerate(ends):
        chain = [u] + [nid for _, nid in sorted(along[s])] + [v]
        for x, y in zip(chain, chain[1:]):
            add(x, y, "arc")
    nb = len(boundary_cycle)
    forward = set()
    for r in range(nb):
        u, v = boundary_cycle[r], boundary_cycle[(r + 1) % nb]
        add(u, v, "boundary")
        forward.add((u, v))

    nbrs: dict[int, list[int]] = {x: [] for x in range(len(pos))}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for u, lst in nbrs.items():
        lst.sort(key=lambda v: math.atan2((pos[v] - pos[u]).imag, (pos[v] - pos[u]).real))
    index = {(u, v): i for u, lst in nbrs.items() for i, v in enumerate(lst)}

    seen = set()
    faces = []
    n_faces = 0
    for start in kinds:
        if start in seen:
            continue
        cycle = []
        he = start
        while he not in seen:
            seen.add(he)
            cycle.append(he)
            u, v = he
            lst = nbrs[v]
            w = lst[(index[(v, u)] - 1) % len(lst)]
            he = (v, w)
        n_faces += 1
        if any(kinds[h] == "boundary" and h not in forward for h in cycle):
            continue  # outside the polygon
        faces.append(_classify_face(cycle, kinds, is_vertex))

    connected = connectivity_of_arcs(arcs)
    ok = connected and all(f.type != "violation" for f in faces)
    return FillingReport(
        connected=connected,
        faces=faces,
        fills=ok,
        n_vertices=len(pos),
        n_edges=len(edges),
        n_faces=n_faces,
        concurrent_merges=merges,
        snapped=snapped,
        node_positions=pos,
    )


def _classify_face(cycle, kinds, is_vertex) -> Face:
    flags = [kinds[h] == "boundary" for h in cycle]
    nodes = [h[0] for h in cycle]
    if all(flags):
        nv = sum(is_vertex[x] for x in nodes)
        return Face("violation", 1, nv >= 2, nv, nodes)
    # rotate so the cycle starts just after an arc edge
    first = flags.index(False)
    flags = flags[first + 1:] + flags[:first + 1]
    cyc = cycle[first + 1:] + cycle[:first + 1]
    runs = []
    current = None
    for h, b in zip(cyc, flags):
        if b:
            if current is None:
                current = []
                runs.append(current)
            current.append(h)
        else:
            current = None
    if not runs:
        return Face("a", 0, False, 0, nodes)
    # ideal vertices strictly inside a run
    counts = [sum(is_vertex[h[1]] for h in run[:-1]) for run in runs]
    whole = any(c >= 2 for c in counts)
    if len(runs) > 1 or whole:
        return Face("violation", len(runs), whole, max(counts), nodes)
    kind = "b" if counts[0] == 0 else "c"
    return Face(kind, 1, False, counts[0], nodes)


def connectivity_of_arcs(arcs: list[ArcSegment]) -> bool:
    if not arcs:
        return False
    dsu = _DSU(len(arcs))
    for i, a in enumerate(arcs):
        for j in range(i + 1, len(arcs)):
            b = arcs[j]
            shared = any(_same(x, y) for x in (a.e1, a.e2) for y in (b.e1, b.e2))
            if shared or interlace(a, b):
                dsu.union(i, j)
    return dsu.classes() == 1


def fills(P0: IdealPolygon, family) -> FillingReport:
    """Filling verdict for a family of trajectories in ``P0``.

    The verdict requires the union of trajectories to be connected and every
    complementary face to be bounded by trajectory arcs only (a), by arcs and
    part of one side (b), or by arcs and a neighbourhood of one ideal vertex
    (c).
    """
    trs = family.trajectories if isinstance(family, CyclicFamily) else tuple(family)
    for tr in trs:
        if tuple(tr.polygon.theta) != tuple(P0.theta):
            raise ValueError("trajectory lives in a different polygon")
    arcs = _family_arcs(trs)
    if not arcs:
        return FillingReport(connected=False, faces=[], fills=False)
    return arrangement(P0, arcs)


def face_outline(report: FillingReport, face: Face, samples: int = 16) -> np.ndarray:
    """Poincare-disk polyline around a face, for plotting."""
    pos = report.node_positions
    pts = []
    nodes = face.nodes
    for u, v in zip(nodes, nodes[1:] + nodes[:1]):
        for s in np.linspace(0.0, 1.0, samples, endpoint=False):
            z = _klein_to_poincare(pos[u] + s * (pos[v] - pos[u]))
            pts.append((z.real, z.imag))
    return np.array(pts)


__all__ = [
    "ArcSegment",
    "ArrangementError",
    "Face",
    "FillingReport",
    "arcs_of",
    "arrangement",
    "connectivity",
    "face_outline",
    "fills",
    "interlace",
    "intersects",
    "non_adjacent_sides",
]
