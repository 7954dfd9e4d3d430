"""Pure-Python hot loops; mirror of ``_ckernels.pyx``.

Points on side ``j`` are ``cosh(t) F[j] + sinh(t) D[j]`` on the hyperboloid
``-x0^2 + x1^2 + x2^2 = -1``.
"""

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
T_ESCAPE = 60.0


class CuspEscape(ArithmeticError):
    pass


def _point(F, D, t):
    c = math.cosh(t)
    s = math.sinh(t)
    return (c * F[0] + s * D[0], c * F[1] + s * D[1], c * F[2] + s * D[2])


def _dist(p, q):
    d0 = p[0] - q[0]
    d1 = p[1] - q[1]
    d2 = p[2] - q[2]
    quad = d1 * d1 + d2 * d2 - d0 * d0
    if quad < 0.0:
        quad = 0.0
    return 2.0 * math.asinh(0.5 * math.sqrt(quad))


def cyclic_length(F, D, t):
    """Length of the closed polygonal path through the side points ``t``."""
    F = np.asarray(F, dtype=float).tolist()
    D = np.asarray(D, dtype=float).tolist()
    t = np.asarray(t, dtype=float).tolist()
    n = len(t)
    pts = [_point(F[j], D[j], t[j]) for j in range(n)]
    return math.fsum(_dist(pts[j], pts[(j + 1) % n]) for j in range(n))


def golden_section(g, a, b, fa, fb, mid, fmid, tol):
    """Minimise a unimodal ``g`` on ``[a, b]`` given an interior ``mid``
    with ``g(mid) <= min(g(a), g(b))``.  Returns ``(x, g(x))``."""
    best, fbest = mid, fmid
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = g(c)
    fd = g(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = g(d)
        for x, fx in ((c, fc), (d, fd)):
            if fx < fbest:
                best, fbest = x, fx
    return best, fbest


def _bracket(g, s0, f0, h):
    """Expand around ``s0`` until the minimum of convex ``g`` is bracketed."""
    a, fa = s0 - h, g(s0 - h)
    b, fb = s0 + h, g(s0 + h)
    mid, fmid = s0, f0
    while fa < fmid:
        h *= 2.0
        b, fb, mid, fmid = mid, fmid, a, fa
        a = mid - h
        if a < -T_ESCAPE:
            raise CuspEscape("line search ran into a cusp")
        fa = g(a)
    while fb < fmid:
        h *= 2.0
        a, fa, mid, fmid = mid, fmid, b, fb
        b = mid + h
        if b > T_ESCAPE:
            raise CuspEscape("line search ran into a cusp")
        fb = g(b)
    return a, fa, b, fb, mid, fmid


def coordinate_descent(F, D, t0, tol=1e-12, max_sweeps=100_000):
    """Minimise the cyclic path length one side coordinate at a time.

    Each coordinate is updated by a golden-section line search; a move is
    kept only if it strictly lowers the objective.  Stops once no coordinate
    moves by ``tol`` or more during a full sweep.

    Returns ``(t, value, sweeps, converged)``.
    """
    F = np.asarray(F, dtype=float).tolist()
    D = np.asarray(D, dtype=float).tolist()
    t = [float(x) for x in t0]
    n = len(t)
    pts = [_point(F[j], D[j], t[j]) for j in range(n)]
    steps = [0.5] * n
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        sweeps += 1
        biggest = 0.0
        for j in range(n):
            prev = pts[(j - 1) % n]
            nxt = pts[(j + 1) % n]
            Fj, Dj = F[j], D[j]

            def g(s):
                p = _point(Fj, Dj, s)
                return _dist(prev, p) + _dist(p, nxt)

            s0 = t[j]
            f0 = g(s0)
            a, fa, b, fb, mid, fmid = _bracket(g, s0, f0, steps[j])
            s, fs = golden_section(g, a, b, fa, fb, mid, fmid, tol)
            if fs < f0:
                move = abs(s - s0)
                biggest = max(biggest, move)
                steps[j] = max(4.0 * move, 1e-9)
                t[j] = s
                pts[j] = _point(Fj, Dj, s)
            else:
                steps[j] = max(0.25 * steps[j], 1e-9)
        if biggest < tol:
            converged = True
            break
    value = math.fsum(_dist(pts[j], pts[(j + 1) % n]) for j in range(n))
    return np.array(t), value, sweeps, converged
