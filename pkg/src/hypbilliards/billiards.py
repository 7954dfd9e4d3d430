"""Billiard sequences, unfolded holonomies and closed trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .hypgeo import (
    Geodesic,
    Isometry,
    NotHyperbolicError,
    axis,
    classify,
    translation_length,
)
from .polygon import T_MAX, BoundaryCoordinate, IdealPolygon


class InvalidSequenceError(ValueError):
    def __init__(self, message, rule=None):
        super().__init__(message)
        self.rule = rule


class TrajectoryError(ArithmeticError):
    """Numerical breakdown while constructing a trajectory."""


@dataclass(frozen=True)
class Verdict:
    valid: bool
    rule: str | None = None
    reason: str = ""

    def __bool__(self):
        return self.valid

    def to_json(self) -> dict:
        out = {"valid": self.valid}
        if not self.valid:
            out["rule"] = self.rule
            out["reason"] = self.reason
        return out


def validate(labels, k: int) -> Verdict:
    """Check whether a cyclic word codes a closed billiard trajectory.

    Rule (a): cyclically consecutive labels differ.
    Rule (b): a word using exactly two labels must not use neighbouring
    sides (labels differing by 1 mod k).
    """
    labels = [int(x) for x in labels]
    if k < 3:
        raise ValueError("k must be at least 3")
    if not labels:
        raise ValueError("empty sequence")
    bad = [x for x in labels if not 1 <= x <= k]
    if bad:
        raise ValueError(f"labels {bad} outside 1..{k}")
    n = len(labels)
    for j in range(n):
        if labels[j] == labels[(j + 1) % n]:
            return Verdict(False, "a", f"a_{j} = a_{(j + 1) % n} = {labels[j]}")
    used = set(labels)
    if len(used) == 2:
        x, y = sorted(used)
        if (y - x) % k in (1, k - 1):
            return Verdict(False, "b", f"only labels {x} and {y}, which are neighbours")
    return Verdict(True)


def canonical_rotation(labels) -> tuple:
    labels = tuple(labels)
    return min(labels[i:] + labels[:i] for i in range(len(labels)))


@dataclass(frozen=True, eq=False)
class BilliardSequence:
    """Billiard word ``a_0 ... a_{n-1}`` over side labels ``1..k``.

    Equality and hashing ignore cyclic rotation of the word.
    """

    labels: tuple
    k: int

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        verdict = validate(labels, self.k)
        if not verdict:
            raise InvalidSequenceError(
                f"{labels} is not a billiard sequence for k={self.k}: "
                f"rule ({verdict.rule}) {verdict.reason}",
                verdict.rule,
            )

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def canonical(self) -> tuple:
        return canonical_rotation(self.labels)

    def __eq__(self, other):
        if not isinstance(other, BilliardSequence):
            return NotImplemented
        return self.k == other.k and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.k, self.canonical))

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return len(self.labels)

    def doubled(self) -> "BilliardSequence":
        return BilliardSequence(self.labels + self.labels, self.k)


def _as_sequence(a, k) -> BilliardSequence:
    if isinstance(a, BilliardSequence):
        if a.k != k:
            raise ValueError(f"sequence is for k={a.k}, polygon has k={k}")
        return a
    return BilliardSequence(tuple(a), k)


def shift(a: BilliardSequence, i: int) -> BilliardSequence:
    """Relabel every side ``s`` as ``s + i`` (mod k, labels in 1..k)."""
    k = a.k
    return BilliardSequence(tuple((x - 1 + i) % k + 1 for x in a.labels), k)


# -- holonomy and trajectory -------------------------------------------------

def partial_holonomies(P: IdealPolygon, a) -> list[Isometry]:
    """``T_0 = id, T_{j+1} = T_j o R_{a_j}`` for ``j = 0..n-1``."""
    a = _as_sequence(a, P.k)
    out = [Isometry.identity()]
    for s in a.labels:
        out.append(out[-1] @ P.reflections[s - 1])
    return out


def holonomy(P: IdealPolygon, a) -> Isometry:
    """``T_n``, evaluated in the balanced copy of ``P`` and conjugated back."""
    B, N = P.balanced
    h = partial_holonomies(N, _as_sequence(a, P.k))[-1]
    return h if N is P else B.inverse() @ h @ B


def closed_holonomy(h: Isometry) -> Isometry:
    """``h`` itself if it preserves orientation, else ``h o h``."""
    return h @ h if h.reversing else h


@dataclass(frozen=True)
class Trajectory:
    polygon: IdealPolygon = field(repr=False)
    sequence: BilliardSequence
    hits: tuple
    length: float
    holonomy: Isometry = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.hits)

    def hit_points(self):
        return [self.polygon.boundary_point(h) for h in self.hits]

    def segment_lengths(self) -> list[float]:
        F, D = self.polygon.hyperboloid_frames
        idx = [h.side - 1 for h in self.hits]
        pts = [np.cosh(h.t) * F[i] + np.sinh(h.t) * D[i] for h, i in zip(self.hits, idx)]
        n = len(pts)
        out = []
        for j in range(n):
            d = pts[j] - pts[(j + 1) % n]
            quad = max(0.0, -d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
            out.append(2.0 * math.asinh(0.5 * math.sqrt(quad)))
        return out

    def reflection_errors(self) -> list[float]:
        """Deviation from equal incidence/reflection angles at each hit (radians)."""
        P = self.polygon
        n = self.n
        uhp_hits = [
            P.side_frames[h.side - 1].inverse().act_uhp(1j * math.exp(h.t)) for h in self.hits
        ]
        errs = []
        for j, h in enumerate(self.hits):
            frame = P.side_frames[h.side - 1]
            # move the hit to i, keeping the side on the imaginary axis
            e = math.exp(-0.5 * h.t)
            m = Isometry((e, 0.0, 0.0, 1.0 / e)) @ frame
            prev = m.act_uhp(uhp_hits[(j - 1) % n])
            nxt = m.act_uhp(uhp_hits[(j + 1) % n])
            # to the disk: hit at 0, side along the real diameter
            dp = (prev - 1j) / (prev + 1j)
            dn = (nxt - 1j) / (nxt + 1j)
            err = math.atan2(dn.imag, dn.real) + math.atan2(dp.imag, dp.real) - math.pi
            err = (err + math.pi) % (2 * math.pi) - math.pi
            errs.append(abs(err))
        return errs

    def to_json(self) -> dict:
        return {
            "sequence": list(self.sequence.labels),
            "hits": [{"side": h.side, "t": h.t} for h in self.hits],
            "length": self.length,
        }


def trajectory(P: IdealPolygon, a) -> Trajectory:
    """Closed billiard trajectory with billiard sequence ``a`` in ``P``.

    The unfolded trajectory is the axis of the holonomy (squared when the
    word has odd length); hit ``j`` is where ``T_j^{-1}(axis)`` crosses
    side ``a_j``.
    """
    a = _as_sequence(a, P.k)
    B, N = P.balanced
    Ts = partial_holonomies(N, a)
    h = Ts[-1]
    H = closed_holonomy(h)
    kind = classify(H)
    if kind != "hyperbolic":
        raise TrajectoryError(f"holonomy of {a.labels} is {kind}, not hyperbolic")
    ell = translation_length(H)
    if h.reversing:
        ell *= 0.5
    ax = axis(H)
    ends = (ax.p.homogeneous(), ax.q.homogeneous())
    hits = []
    for j, s in enumerate(a.labels):
        m = N.side_frames[s - 1] @ Ts[j].inverse()
        (x1, y1), (x2, y2) = (m.act_homogeneous(*e) for e in ends)
        prod = (x1 * x2) * (y1 * y2)
        if not prod < 0.0:
            raise TrajectoryError(f"unfolded axis misses side {s} at step {j}")
        t = 0.5 * math.log(-(x1 * x2) / (y1 * y2))
        if abs(t) >= T_MAX:
            raise TrajectoryError(f"hit {j} escaped into a cusp (t = {t})")
        hits.append(t)
    if N is not P:
        Binv = B.inverse()
        hits = [
            P.coordinate_of(s, Binv(N.boundary_point(BoundaryCoordinate(s, t)))).t
            for s, t in zip(a.labels, hits)
        ]
        h = Binv @ h @ B
    hits = _polish(P, a.labels, hits)
    return Trajectory(P, a, tuple(BoundaryCoordinate(s, t) for s, t in zip(a.labels, hits)), ell, h)


POLISH_LIMIT = 1e-6


def _polish(P: IdealPolygon, labels, t):
    """Newton steps on the cyclic path length, starting from the folded hits.

    The gradient of the length in the side coordinates vanishes exactly when
    the reflection law holds, so this removes the rounding left by the matrix
    products.  A correction above ``POLISH_LIMIT`` means the folded hits were
    not near the critical point and is reported as a failure.
    """
    F, D = P.hyperboloid_frames
    idx = [s - 1 for s in labels]
    F, D = F[idx], D[idx]
    t0 = np.array(t, dtype=float)
    t = t0.copy()
    n = len(t)
    sig = np.array([-1.0, 1.0, 1.0])
    for _ in range(4):
        ch, sh = np.cosh(t)[:, None], np.sinh(t)[:, None]
        p = ch * F + sh * D
        dp = sh * F + ch * D
        g = np.zeros(n)
        H = np.zeros((n, n))
        for j in range(n):
            k = (j + 1) % n
            diff = p[j] - p[k]
            quad = max(float(diff @ (sig * diff)), 0.0)
            d = 2.0 * math.asinh(0.5 * math.sqrt(quad))
            sd = math.sinh(d)
            if sd < 1e-300:
                raise TrajectoryError("degenerate segment while polishing hits")
            u = math.cosh(d)
            uj = -float(dp[j] @ (sig * p[k]))
            uk = -float(p[j] @ (sig * dp[k]))
            ujk = -float(dp[j] @ (sig * dp[k]))
            g[j] += uj / sd
            g[k] += uk / sd
            s3 = sd ** 3
            H[j, j] += u / sd - u * uj * uj / s3
            H[k, k] += u / sd - u * uk * uk / s3
            H[j, k] += ujk / sd - u * uj * uk / s3
            H[k, j] += ujk / sd - u * uj * uk / s3
        try:
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            raise TrajectoryError("singular Hessian while polishing hits") from None
        t = t + step
        if np.abs(step).max() < 1e-15:
            break
    if np.abs(t - t0).max() > POLISH_LIMIT:
        raise TrajectoryError(
            f"folded hits are {np.abs(t - t0).max():.2e} away from the reflection law"
        )
    return [float(x) for x in t]


def length_variational(P: IdealPolygon, a, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Independent length oracle: minimise the closed path length over side points."""
    return variational_minimizer(P, a, tol, max_iter)[1]


def variational_minimizer(P: IdealPolygon, a, tol: float = 1e-12, max_iter: int = 100_000):
    """Return ``(t, length)`` minimising the cyclic path length, from ``t = 0``."""
    a = _as_sequence(a, P.k)
    F, D = P.hyperboloid_frames
    idx = [s - 1 for s in a.labels]
    t, value, sweeps, converged = kernels.coordinate_descent(
        F[idx], D[idx], np.zeros(a.n), tol, max_iter
    )
    if not converged:
        raise TrajectoryError(f"coordinate descent did not converge in {sweeps} sweeps")
    return t, value


def path_length(P: IdealPolygon, a, t) -> float:
    a = _as_sequence(a, P.k)
    F, D = P.hyperboloid_frames
    idx = [s - 1 for s in a.labels]
    return kernels.cyclic_length(F[idx], D[idx], np.asarray(t, dtype=float))


# -- families ----------------------------------------------------------------

@dataclass(frozen=True)
class CyclicFamily:
    polygon: IdealPolygon = field(repr=False)
    sequence: BilliardSequence
    trajectories: tuple

    @property
    def lengths(self) -> list[float]:
        return [tr.length for tr in self.trajectories]

    @property
    def average_length(self) -> float:
        return math.fsum(self.lengths) / len(self.trajectories)

    def to_json(self) -> dict:
        return {
            "sequence": list(self.sequence.labels),
            "polygon": self.polygon.to_json(),
            "trajectories": [tr.to_json() for tr in self.trajectories],
            "average_length": self.average_length,
        }


def cyclic_family(P: IdealPolygon, a) -> CyclicFamily:
    """The k trajectories realising ``shift(a, i)`` for ``i = 0..k-1``."""
    a = _as_sequence(a, P.k)
    trs = tuple(trajectory(P, shift(a, i)) for i in range(P.k))
    return CyclicFamily(P, a, trs)


def family_lengths(P: IdealPolygon, a) -> list[float]:
    """Lengths of the cyclically related trajectories from traces alone."""
    a = _as_sequence(a, P.k)
    out = []
    for i in range(P.k):
        h = partial_holonomies(P.balanced[1], shift(a, i))[-1]
        H = closed_holonomy(h)
        try:
            ell = translation_length(H)
        except NotHyperbolicError as exc:
            raise TrajectoryError(str(exc)) from exc
        out.append(0.5 * ell if h.reversing else ell)
    return out


def average_length(P: IdealPolygon, a) -> float:
    """Mean length of the k cyclically related closed trajectories."""
    lengths = family_lengths(P, a)
    return math.fsum(lengths) / len(lengths)


def geodesic_of(tr: Trajectory) -> Geodesic:
    """Unfolded axis carrying the trajectory."""
    return axis(closed_holonomy(tr.holonomy))


__all__ = [
    "BilliardSequence",
    "CyclicFamily",
    "InvalidSequenceError",
    "Trajectory",
    "TrajectoryError",
    "Verdict",
    "average_length",
    "canonical_rotation",
    "closed_holonomy",
    "cyclic_family",
    "family_lengths",
    "holonomy",
    "length_variational",
    "partial_holonomies",
    "path_length",
    "shift",
    "trajectory",
    "validate",
    "variational_minimizer",
]
