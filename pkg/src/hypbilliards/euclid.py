"""Billiards in Euclidean rectangles ``[0, c] x [0, 1/c]`` of area one.

A closed trajectory is determined up to free homotopy by a vector
``(n c, m / c)``; its three cyclically related partners are the quarter
turns ``(-m c, n / c)``, ``(-n c, -m / c)`` and ``(m c, -n / c)``.  Each
trajectory has the Euclidean length of its vector.  The flat torus obtained
by doubling the table plays no computational role here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RectangleTable:
    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("side parameter c must be positive")

    @property
    def width(self) -> float:
        return self.c

    @property
    def height(self) -> float:
        return 1.0 / self.c

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class HomotopyClass:
    n: int
    m: int

    def __post_init__(self):
        if self.n == 0 and self.m == 0:
            raise ValueError("(n, m) = (0, 0) is not a closed trajectory")

    def vector(self, c: float) -> tuple[float, float]:
        return (self.n * c, self.m / c)

    def related(self) -> list[tuple[int, int]]:
        """Coefficients of the four cyclically related vectors, as (x/c, y*c)."""
        n, m = self.n, self.m
        return [(n, m), (-m, n), (-n, -m), (m, -n)]


def family_vectors(n: int, m: int, c: float) -> list[tuple[float, float]]:
    HomotopyClass(n, m)
    return [(n * c, m / c), (-m * c, n / c), (-n * c, -m / c), (m * c, -n / c)]


def family_lengths(n: int, m: int, c: float) -> tuple[list[float], float]:
    """Lengths of the four cyclically related trajectories and their sum."""
    RectangleTable(c)
    lengths = [math.hypot(x, y) for x, y in family_vectors(n, m, c)]
    return lengths, math.fsum(lengths)


def total_length(n: int, m: int, c: float) -> float:
    """Closed form ``2 sqrt(n^2 c^2 + m^2/c^2) + 2 sqrt(m^2 c^2 + n^2/c^2)``."""
    RectangleTable(c)
    return 2.0 * math.sqrt(n * n * c * c + m * m / (c * c)) + 2.0 * math.sqrt(
        m * m * c * c + n * n / (c * c)
    )


def golden_section(f, a: float, b: float, tol: float = 1e-12) -> float:
    """Minimiser of a unimodal ``f`` on ``[a, b]``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class CMinimum:
    c: float
    value: float
    degenerate: bool


def minimize_c(n: int, m: int, lo: float = -5.0, hi: float = 5.0) -> CMinimum:
    """Minimise ``L_{n,m}(c)`` by golden section over ``log c`` in ``[lo, hi]``.

    ``degenerate`` flags ``n*m == 0``, where only one of the two square roots
    couples both side lengths.
    """
    HomotopyClass(n, m)
    u = golden_section(lambda s: total_length(n, m, math.exp(s)), lo, hi)
    c = math.exp(u)
    return CMinimum(c, total_length(n, m, c), n * m == 0)


@dataclass(frozen=True)
class ScanResult:
    holds: bool
    quartic_holds: bool
    equality_points: list
    rows: list

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "quartic_holds": self.quartic_holds,
            "equality_points": self.equality_points,
            "table": [{"c": c, "L": L} for c, L in self.rows],
        }


def inequality_scan(n: int, m: int, grid, tol: float = 1e-12) -> ScanResult:
    """Check ``L(c) >= L(1)`` and ``c^4 + c^-4 >= 2`` at every grid point.

    ``equality_points`` lists the grid values where ``L(c) = L(1)`` within
    ``tol`` (relative).
    """
    base = total_length(n, m, 1.0)
    rows = []
    holds = True
    quartic = True
    equal = []
    for c in grid:
        c = float(c)
        L = total_length(n, m, c)
        rows.append((c, L))
        if L < base * (1.0 - tol):
            holds = False
        if c ** 4 + c ** -4 < 2.0 * (1.0 - tol):
            quartic = False
        if abs(L - base) <= tol * base:
            equal.append(c)
    return ScanResult(holds, quartic, equal, rows)


def folded_path(n: int, m: int, c: float, start=(0.0, 0.0)):
    """Vertices of the billiard path in ``P_c`` for direction ``(n c, m / c)``.

    The straight line of displacement ``2 (n c, m / c)`` closes up on the
    doubled torus; reflecting it back into the table gives the closed path.
    """
    w, h = c, 1.0 / c
    dx, dy = 2.0 * n * c, 2.0 * m / c
    x0, y0 = start
    breaks = {0.0, 1.0}
    for d, p0, size in ((dx, x0, w), (dy, y0, h)):
        if d != 0.0:
            lo, hi = sorted((p0 / size, (p0 + d) / size))
            for j in range(math.ceil(lo), math.floor(hi) + 1):
                s = (j * size - p0) / d
                if 0.0 < s < 1.0:
                    breaks.add(s)
    pts = []
    for s in sorted(breaks):
        pts.append((_fold(x0 + s * dx, w), _fold(y0 + s * dy, h)))
    return pts


def _fold(x: float, size: float) -> float:
    r = math.fmod(x, 2.0 * size)
    if r < 0:
        r += 2.0 * size
    return r if r <= size else 2.0 * size - r
