"""Hyperbolic plane primitives.

Isometries are stored as real 2x2 matrices acting on the upper half-plane,
optionally preceded by complex conjugation (orientation-reversing maps).
Points are exchanged with the outside world in the Poincare disk.  The two
models are related by the Cayley map ``z -> i(1+z)/(1-z)``.

Boundary points of the upper half-plane are handled in homogeneous
coordinates ``(x, y) ~ x/y`` so that the point at infinity is ``(1, 0)``
and never a large float.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

EPS_ANGLE = 1e-12
EPS_DET = 1e-12
EPS_TR = 1e-9
EPS_ID = 1e-10


class NotHyperbolicError(ValueError):
    """Raised when an operation needs a hyperbolic isometry and gets something else."""


class SingularMatrixError(ValueError, ArithmeticError):
    """Matrix with vanishing determinant, from bad input or from overflow in long products."""


class DegenerateGeodesicError(ValueError):
    pass


class _Infinity:
    """The boundary point at infinity of the upper half-plane."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def _wrap(theta):
    theta = math.fmod(theta, TWO_PI)
    if theta < 0.0:
        theta += TWO_PI
    if theta >= TWO_PI:
        theta = 0.0
    return theta


def angle_distance(a, b):
    """Distance between two angles on the circle, in [0, pi]."""
    d = abs(_wrap(a) - _wrap(b))
    return min(d, TWO_PI - d)


@dataclass(frozen=True, eq=False)
class IdealPoint:
    """The boundary point ``exp(i*theta)`` of the Poincare disk."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", _wrap(float(self.theta)))

    def __eq__(self, other):
        if not isinstance(other, IdealPoint):
            return NotImplemented
        return angle_distance(self.theta, other.theta) <= EPS_ANGLE

    __hash__ = None

    @property
    def z(self) -> complex:
        return cmath.exp(1j * self.theta)

    def homogeneous(self) -> tuple[float, float]:
        """Homogeneous upper half-plane coordinates of this point."""
        half = 0.5 * self.theta
        return (-math.cos(half), math.sin(half))

    @classmethod
    def from_homogeneous(cls, x: float, y: float) -> "IdealPoint":
        return cls(2.0 * math.atan2(y, -x))


@dataclass(frozen=True)
class DiskPoint:
    u: float
    v: float

    def __post_init__(self):
        if self.u * self.u + self.v * self.v >= 1.0:
            raise ValueError(f"({self.u}, {self.v}) is not inside the unit disk")

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(z.real, z.imag)


@dataclass(frozen=True, eq=False)
class Geodesic:
    """Complete geodesic between two ideal points, oriented from ``p`` to ``q``."""

    p: IdealPoint
    q: IdealPoint

    def __post_init__(self):
        if angle_distance(self.p.theta, self.q.theta) <= EPS_ANGLE:
            raise DegenerateGeodesicError("geodesic endpoints coincide")

    def __eq__(self, other):
        if not isinstance(other, Geodesic):
            return NotImplemented
        return (self.p == other.p and self.q == other.q) or (
            self.p == other.q and self.q == other.p
        )

    __hash__ = None

    @classmethod
    def from_angles(cls, a: float, b: float) -> "Geodesic":
        return cls(IdealPoint(a), IdealPoint(b))

    def reversed(self) -> "Geodesic":
        return Geodesic(self.q, self.p)

    def contains(self, x: DiskPoint, tol: float = 1e-10) -> bool:
        """True if the disk point lies on this geodesic."""
        a, b = self.p.z, self.q.z
        k = _poincare_to_klein(x.z)
        # Klein chord: cross product of (b - a) and (k - a) vanishes
        cross = (b - a).real * (k - a).imag - (b - a).imag * (k - a).real
        return abs(cross) <= tol * max(1.0, abs(b - a))


# -- model changes -----------------------------------------------------------

def disk_to_uhp(p):
    """Cayley map from the disk model to the upper half-plane.

    Accepts a DiskPoint (returns a complex number), an IdealPoint (returns a
    float or ``INFINITY``) or a plain complex number.
    """
    if isinstance(p, IdealPoint):
        x, y = p.homogeneous()
        if y == 0.0:
            return INFINITY
        return x / y
    z = p.z if isinstance(p, DiskPoint) else complex(p)
    return 1j * (1 + z) / (1 - z)


def uhp_to_disk(w):
    """Inverse Cayley map.  Real input and ``INFINITY`` give IdealPoints."""
    if w is INFINITY:
        return IdealPoint(0.0)
    if isinstance(w, (int, float)):
        return IdealPoint.from_homogeneous(float(w), 1.0)
    w = complex(w)
    if w.imag <= 0.0:
        raise ValueError("point is not in the open upper half-plane")
    return DiskPoint.from_complex((w - 1j) / (w + 1j))


def _poincare_to_klein(z: complex) -> complex:
    return 2.0 * z / (1.0 + abs(z) ** 2)


def _klein_to_poincare(k: complex) -> complex:
    r2 = k.real * k.real + k.imag * k.imag
    return k / (1.0 + math.sqrt(max(0.0, 1.0 - r2)))


def distance(p: DiskPoint, q: DiskPoint) -> float:
    """Hyperbolic distance (curvature -1) between two disk points."""
    zp, zq = p.z, q.z
    num = abs(zp - zq)
    den = math.sqrt((1.0 - abs(zp) ** 2) * (1.0 - abs(zq) ** 2))
    return 2.0 * math.asinh(num / den)


def uhp_distance(z: complex, w: complex) -> float:
    return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


# -- isometries --------------------------------------------------------------

_EPS = 2.0 ** -52


def _normalize(m):
    a, b, c, d = m
    det = a * d - b * c
    if det == 0.0:
        raise SingularMatrixError("singular matrix")
    # ad - bc carries rounding error ~eps(|ad| + |bc|); rescaling by a det that
    # is 1 up to that noise would only inject the noise into every entry
    if abs(abs(det) - 1.0) > 8.0 * _EPS * (abs(a * d) + abs(b * c)):
        s = 1.0 / math.sqrt(abs(det))
        a, b, c, d = a * s, b * s, c * s, d * s
    # +-m act identically; pick a representative with nonnegative trace
    if a + d < 0.0 or (a + d == 0.0 and (a < 0.0 or (a == 0.0 and b < 0.0))):
        a, b, c, d = -a, -b, -c, -d
    return (a, b, c, d)


@dataclass(frozen=True)
class Isometry:
    """Isometry ``z -> m(z)`` or, if ``reversing``, ``z -> m(conj(z))``.

    ``m = (a, b, c, d)`` is normalised to ``|det| = 1`` with ``det = +1``
    for orientation-preserving and ``det = -1`` for reversing maps.
    """

    m: tuple
    reversing: bool = False

    def __post_init__(self):
        m = _normalize(tuple(float(x) for x in self.m))
        det = m[0] * m[3] - m[1] * m[2]
        noise = 8.0 * _EPS * (abs(m[0] * m[3]) + abs(m[1] * m[2]))
        # for huge entries the computed det is rounding noise; the flag is then authoritative
        if (det < 0) != self.reversing and abs(det) > noise:
            raise ValueError("determinant sign does not match the orientation flag")
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> "Isometry":
        return cls((1.0, 0.0, 0.0, 1.0))

    @classmethod
    def from_matrix(cls, m) -> "Isometry":
        """Isometry from a real matrix; negative determinant means reversing."""
        m = np.asarray(m, dtype=float).ravel()
        return cls(tuple(m), bool(m[0] * m[3] - m[1] * m[2] < 0))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.m).reshape(2, 2)

    @property
    def det(self) -> float:
        a, b, c, d = self.m
        return a * d - b * c

    @property
    def trace(self) -> float:
        return self.m[0] + self.m[3]

    def __matmul__(self, other: "Isometry") -> "Isometry":
        # conjugation commutes with real matrices, so orientations just XOR
        a, b, c, d = self.m
        e, f, g, h = other.m
        prod = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return Isometry(prod, self.reversing != other.reversing)

    def compose(self, other: "Isometry") -> "Isometry":
        return self @ other

    def inverse(self) -> "Isometry":
        a, b, c, d = self.m
        det = a * d - b * c
        return Isometry((d / det, -b / det, -c / det, a / det), self.reversing)

    def __pow__(self, n: int) -> "Isometry":
        if n < 0:
            return self.inverse() ** (-n)
        out = Isometry.identity()
        for _ in range(n):
            out = out @ self
        return out

    # actions

    def act_uhp(self, z: complex) -> complex:
        if self.reversing:
            z = z.conjugate()
        a, b, c, d = self.m
        return (a * z + b) / (c * z + d)

    def act_homogeneous(self, x: float, y: float) -> tuple[float, float]:
        # conjugation fixes real boundary points
        a, b, c, d = self.m
        return (a * x + b * y, c * x + d * y)

    def __call__(self, p):
        if isinstance(p, IdealPoint):
            return IdealPoint.from_homogeneous(*self.act_homogeneous(*p.homogeneous()))
        if isinstance(p, DiskPoint):
            return uhp_to_disk(self.act_uhp(disk_to_uhp(p)))
        if isinstance(p, Geodesic):
            return Geodesic(self(p.p), self(p.q))
        raise TypeError(f"cannot apply an isometry to {type(p).__name__}")

    def sup_distance(self, other: "Isometry") -> float:
        """Sup-norm distance between matrices after sign normalisation."""
        if self.reversing != other.reversing:
            return math.inf
        d1 = max(abs(x - y) for x, y in zip(self.m, other.m))
        d2 = max(abs(x + y) for x, y in zip(self.m, other.m))
        return min(d1, d2)


def rotation(angle: float) -> Isometry:
    """Anti-clockwise rotation of the disk about its centre."""
    # in the upper half-plane this fixes i: (cos, sin; -sin, cos) at half angle
    h = 0.5 * angle
    return Isometry((math.cos(h), math.sin(h), -math.sin(h), math.cos(h)))


def translation_along_real_diameter(dist: float) -> Isometry:
    """Hyperbolic translation of the disk along the diameter (-1, 1)."""
    # the diameter (-1, 1) is the imaginary axis of the half-plane, traversed 0 -> inf
    e = math.exp(0.5 * dist)
    return Isometry((e, 0.0, 0.0, 1.0 / e))


def mobius_sending(src, dst) -> Isometry:
    """Orientation-preserving isometry sending three ideal points onto three others.

    Both triples must have the same cyclic orientation.
    """
    def to_standard(pts):
        (p1, q1), (p2, q2), (p3, q3) = (p.homogeneous() for p in pts)
        r1 = (q1, -p1)
        r2 = (q2, -p2)
        s1 = r1[0] * p3 + r1[1] * q3
        s2 = r2[0] * p3 + r2[1] * q3
        return np.array([[s2 * r1[0], s2 * r1[1]], [s1 * r2[0], s1 * r2[1]]])

    a = to_standard(src)
    b = to_standard(dst)
    m = np.linalg.solve(b, a)
    if np.linalg.det(m) <= 0:
        raise ValueError("point triples have opposite orientation")
    return Isometry(tuple(m.ravel()))


def reflect(g: Geodesic) -> Isometry:
    """Reflection in the geodesic ``g``."""
    p1, q1 = g.p.homogeneous()
    p2, q2 = g.q.homogeneous()
    # M0 sends g.p -> 0, g.q -> inf; reflection is M0^-1 J M0 with J(z) = -conj(z)
    m0 = np.array([[q1, -p1], [q2, -p2]])
    j = np.array([[-1.0, 0.0], [0.0, 1.0]])
    m = np.linalg.solve(m0, j @ m0)
    return Isometry(tuple(m.ravel()), True)


def classify(h: Isometry) -> str:
    if h.reversing:
        return "orientation-reversing"
    if h.sup_distance(Isometry.identity()) <= EPS_ID:
        return "identity"
    tr = abs(h.trace)
    if tr < 2.0 - EPS_TR:
        return "elliptic"
    if tr <= 2.0 + EPS_TR:
        return "parabolic"
    return "hyperbolic"


def translation_length(h: Isometry) -> float:
    kind = classify(h)
    if kind != "hyperbolic":
        raise NotHyperbolicError(f"no translation length for {kind} isometry")
    return 2.0 * math.acosh(0.5 * abs(h.trace))


def axis(h: Isometry) -> Geodesic:
    """Translation axis of a hyperbolic isometry, oriented repelling -> attracting."""
    kind = classify(h)
    if kind != "hyperbolic":
        raise NotHyperbolicError(f"{kind} isometry has no axis")
    a, b, c, d = h.m
    tr = a + d
    disc = math.sqrt(tr * tr - 4.0)
    sign = 1.0 if tr >= 0 else -1.0
    big = 0.5 * (tr + sign * disc)
    small = 1.0 / big

    def eigvec(lam):
        v1 = (b, lam - a)
        v2 = (lam - d, c)
        n1 = v1[0] ** 2 + v1[1] ** 2
        n2 = v2[0] ** 2 + v2[1] ** 2
        return v1 if n1 >= n2 else v2

    attracting = IdealPoint.from_homogeneous(*eigvec(big))
    repelling = IdealPoint.from_homogeneous(*eigvec(small))
    return Geodesic(repelling, attracting)


def endpoints_interlace(a1: float, a2: float, b1: float, b2: float) -> bool:
    """True if the angle pair ``{b1, b2}`` separates ``{a1, a2}`` on the circle."""
    lo, hi = sorted((_wrap(a1), _wrap(a2)))

    def inside(x):
        x = _wrap(x)
        return lo < x < hi

    return inside(b1) != inside(b2)


def geodesic_intersection(g1: Geodesic, g2: Geodesic):
    """Interior intersection point of two geodesics, or None if they are disjoint."""
    if g1 == g2:
        raise DegenerateGeodesicError("coincident geodesics")
    angles = [g1.p.theta, g1.q.theta, g2.p.theta, g2.q.theta]
    if not endpoints_interlace(*angles):
        return None
    a, b = g1.p.z, g1.q.z
    c, d = g2.p.z, g2.q.z
    k = _chord_intersection(a, b, c, d)
    if k is None:
        return None
    return DiskPoint.from_complex(_klein_to_poincare(k))


def _chord_intersection(a: complex, b: complex, c: complex, d: complex):
    """Intersection of the straight lines ab and cd (Klein model chords)."""
    r = b - a
    s = d - c
    den = r.real * s.imag - r.imag * s.real
    if den == 0.0:
        return None
    qp = c - a
    lam = (qp.real * s.imag - qp.imag * s.real) / den
    return a + lam * r
