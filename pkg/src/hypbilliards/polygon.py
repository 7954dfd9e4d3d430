"""Labelled ideal polygons, side coordinates and the moduli chart."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .hypgeo import (
    TWO_PI,
    DiskPoint,
    Geodesic,
    IdealPoint,
    Isometry,
    mobius_sending,
    reflect,
    uhp_to_disk,
)

DELTA_GAP = 1e-6
T_MAX = 1e6


class DegeneratePolygonError(ValueError):
    pass


def _gaps(theta):
    k = len(theta)
    return [(theta[(i + 1) % k] - theta[i]) % TWO_PI for i in range(k)]


@dataclass(frozen=True)
class IdealPolygon:
    """Ideal k-gon with vertices ``exp(i*theta_j)`` in anti-clockwise order.

    Side ``i`` (1-based) joins vertex ``i`` to vertex ``i+1`` (mod k).
    """

    theta: tuple

    def __post_init__(self):
        theta = tuple(float(t) % TWO_PI for t in self.theta)
        if len(theta) < 3:
            raise DegeneratePolygonError("an ideal polygon needs at least 3 vertices")
        gaps = _gaps(theta)
        if min(gaps) <= DELTA_GAP:
            raise DegeneratePolygonError(f"vertex gap {min(gaps):.3g} below {DELTA_GAP}")
        # anti-clockwise order means the gaps wind around the circle exactly once
        if abs(sum(gaps) - TWO_PI) > 1e-9:
            raise DegeneratePolygonError("vertices are not in anti-clockwise cyclic order")
        object.__setattr__(self, "theta", theta)

    @property
    def k(self) -> int:
        return len(self.theta)

    @property
    def vertices(self) -> list[IdealPoint]:
        return [IdealPoint(t) for t in self.theta]

    @cached_property
    def gaps(self) -> list[float]:
        return _gaps(self.theta)

    def _check_label(self, i):
        if not 1 <= i <= self.k:
            raise ValueError(f"side label {i} outside 1..{self.k}")

    def side(self, i: int) -> Geodesic:
        self._check_label(i)
        return Geodesic.from_angles(self.theta[i - 1], self.theta[i % self.k])

    @cached_property
    def balanced(self) -> tuple[Isometry, "IdealPolygon"]:
        """``(B, B(P))`` with ``B`` chosen so that the smallest vertex gap is as wide as
        the candidates allow.

        Candidates send three vertices to their regular positions.  Reflections in
        sides with short gaps have entries of size ``1/gap``, and long products of
        them cancel badly, so holonomy traces are computed in this copy.
        """
        best = (Isometry.identity(), self)
        base = score = min(self.gaps)
        k = self.k
        if k <= 12:
            triples = itertools.combinations(range(k), 3)
        else:
            triples = ((i, (i + k // 3) % k, (i + 2 * k // 3) % k) for i in range(k))
        verts = self.vertices
        for tri in triples:
            tri = sorted(tri)
            m = mobius_sending([verts[i] for i in tri], [IdealPoint(TWO_PI * i / k) for i in tri])
            try:
                Q = IdealPolygon(tuple(m(v).theta for v in verts))
            except DegeneratePolygonError:
                continue
            # demand a clear gain so that nearly balanced polygons are left alone
            if min(Q.gaps) > max(score, 1.5 * base):
                best, score = (m, Q), min(Q.gaps)
        return best

    @cached_property
    def reflections(self) -> list[Isometry]:
        return [reflect(self.side(i)) for i in range(1, self.k + 1)]

    @cached_property
    def side_frames(self) -> list[Isometry]:
        """Isometries sending side i onto the half-plane axis (0, inf), foot to ``i``.

        The start vertex goes to 0 and the end vertex to infinity, so the
        arc-length coordinate along the side is ``log(Im z)`` in the frame.
        """
        frames = []
        for i in range(1, self.k + 1):
            g = self.side(i)
            p1, q1 = g.p.homogeneous()
            p2, q2 = g.q.homogeneous()
            m = np.array([[q1, -p1], [q2, -p2]])
            if np.linalg.det(m) < 0:
                m[0] = -m[0]
            frame = Isometry(tuple(m.ravel()))
            # closest point of the axis to the image of the disk centre is i*|w|
            r = abs(frame.act_uhp(1j))
            s = 1.0 / math.sqrt(r)
            frames.append(Isometry((s, 0.0, 0.0, 1.0 / s)) @ frame)
        return frames

    @cached_property
    def hyperboloid_frames(self) -> tuple[np.ndarray, np.ndarray]:
        """Foot points and unit tangents of the sides on the hyperboloid.

        Side i is ``cosh(t) F[i-1] + sinh(t) D[i-1]``.
        """
        F = np.empty((self.k, 3))
        D = np.empty((self.k, 3))
        for i, (start, gap) in enumerate(zip(self.theta, self.gaps)):
            half = 0.5 * gap
            phi = start + half
            cot = math.cos(half) / math.sin(half)
            F[i] = (1.0 / math.sin(half), cot * math.cos(phi), cot * math.sin(phi))
            D[i] = (0.0, -math.sin(phi), math.cos(phi))
        return F, D

    def boundary_point(self, bc: "BoundaryCoordinate") -> DiskPoint:
        self._check_label(bc.side)
        frame = self.side_frames[bc.side - 1]
        return uhp_to_disk(frame.inverse().act_uhp(1j * math.exp(bc.t)))

    def coordinate_of(self, side: int, x: DiskPoint) -> "BoundaryCoordinate":
        """Inverse of :meth:`boundary_point` for a point on the given side."""
        self._check_label(side)
        from .hypgeo import disk_to_uhp

        w = self.side_frames[side - 1].act_uhp(disk_to_uhp(x))
        return BoundaryCoordinate(side, math.log(abs(w)))

    def apply(self, m: Isometry) -> "IdealPolygon":
        """Image of the polygon under an orientation-preserving isometry, labels kept."""
        if m.reversing:
            raise ValueError("orientation-reversing maps do not preserve the labelling")
        return IdealPolygon(tuple(m(v).theta for v in self.vertices))

    def to_json(self) -> dict:
        return {"k": self.k, "theta": list(self.theta)}

    @classmethod
    def from_json(cls, obj: dict) -> "IdealPolygon":
        theta = obj["theta"]
        if "k" in obj and int(obj["k"]) != len(theta):
            raise ValueError(f"k = {obj['k']} but {len(theta)} angles given")
        return cls(tuple(theta))


@dataclass(frozen=True)
class BoundaryCoordinate:
    """Signed arc length ``t`` along side ``side``, measured from its foot point."""

    side: int
    t: float

    def __post_init__(self):
        if not math.isfinite(self.t) or abs(self.t) >= T_MAX:
            raise ValueError(f"side coordinate {self.t} escapes to a cusp")

    def key(self) -> tuple[int, float]:
        return (self.side, self.t)


def regular(k: int) -> IdealPolygon:
    if k < 3:
        raise ValueError("k must be at least 3")
    return IdealPolygon(tuple(TWO_PI * j / k for j in range(k)))


def cyclic_order(b1, b2, b3, b4, tol: float = 0.0) -> bool:
    """True if ``{b1, b3}`` separates ``{b2, b4}`` along the polygon boundary."""
    keys = [b.key() for b in (b1, b2, b3, b4)]
    for i in range(4):
        for j in range(i + 1, 4):
            if keys[i][0] == keys[j][0] and abs(keys[i][1] - keys[j][1]) <= tol:
                raise ValueError("boundary coordinates coincide")
    return separates(keys[0], keys[2], keys[1], keys[3])


def separates(e1, e2, f1, f2) -> bool:
    """Chord test on linearly ordered boundary keys: does {e1,e2} split {f1,f2}?"""
    lo, hi = (e1, e2) if e1 < e2 else (e2, e1)
    return (lo < f1 < hi) != (lo < f2 < hi)


# -- moduli chart ------------------------------------------------------------

@dataclass(frozen=True)
class ModuliChart:
    """Chart point for ideal k-gons modulo orientation-preserving isometries.

    Vertices 1, 2, 3 sit at angles 0, 2pi/k, 4pi/k.  The remaining ``k-2``
    gaps share the arc from ``4pi/k`` to ``2pi`` in proportion to
    ``exp(log_gaps[j])`` and ``1`` for the last gap, so the regular polygon
    is the origin.
    """

    k: int
    log_gaps: tuple

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("k must be at least 3")
        lg = tuple(float(x) for x in self.log_gaps)
        if len(lg) != self.k - 3:
            raise ValueError(f"expected {self.k - 3} chart coordinates, got {len(lg)}")
        if not all(math.isfinite(x) for x in lg):
            raise ValueError("chart coordinates must be finite")
        object.__setattr__(self, "log_gaps", lg)

    @classmethod
    def regular(cls, k: int) -> "ModuliChart":
        return cls(k, (0.0,) * (k - 3))

    @property
    def gaps(self) -> list[float]:
        budget = TWO_PI - 2 * TWO_PI / self.k
        top = max((0.0,) + self.log_gaps)
        w = [math.exp(x - top) for x in self.log_gaps] + [math.exp(-top)]
        s = math.fsum(w)
        return [budget * x / s for x in w]

    def distance(self, other: "ModuliChart") -> float:
        if other.k != self.k:
            raise ValueError("charts for different k")
        return max((abs(a - b) for a, b in zip(self.log_gaps, other.log_gaps)), default=0.0)


def from_chart(c: ModuliChart) -> IdealPolygon:
    step = TWO_PI / c.k
    theta = [0.0, step, 2 * step]
    for g in c.gaps[:-1]:
        theta.append(theta[-1] + g)
    if min(c.gaps) <= DELTA_GAP:
        raise DegeneratePolygonError("chart point yields a degenerate gap")
    return IdealPolygon(tuple(theta))


def normalize(P: IdealPolygon) -> IdealPolygon:
    """Move vertices 1, 2, 3 to the regular positions 0, 2pi/k, 4pi/k."""
    step = TWO_PI / P.k
    src = P.vertices[:3]
    dst = [IdealPoint(0.0), IdealPoint(step), IdealPoint(2 * step)]
    m = mobius_sending(src, dst)
    theta = [0.0, step, 2 * step] + [m(v).theta for v in P.vertices[3:]]
    return IdealPolygon(tuple(theta))


def to_chart(P: IdealPolygon) -> ModuliChart:
    Q = normalize(P)
    gaps = Q.gaps[2:]
    if min(gaps) <= DELTA_GAP:
        raise DegeneratePolygonError("degenerate gap after normalisation")
    last = gaps[-1]
    return ModuliChart(P.k, tuple(math.log(g / last) for g in gaps[:-1]))


def cross_ratio(a: IdealPoint, b: IdealPoint, c: IdealPoint, d: IdealPoint) -> float:
    """Real cross-ratio ``(a-c)(b-d)/((a-d)(b-c))`` of four boundary points."""
    # chord lengths |e^{ix} - e^{iy}| = 2|sin((x-y)/2)|, with signs from the ordering
    def s(x, y):
        return math.sin(0.5 * (x.theta - y.theta))

    return (s(a, c) * s(b, d)) / (s(a, d) * s(b, c))
