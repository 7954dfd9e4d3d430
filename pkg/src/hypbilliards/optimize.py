"""Minimise the average length over the moduli chart.

The objective is ``average_length(from_chart(x), a)`` on the ``k-3`` log-gap
coordinates; the regular polygon is ``x = 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .billiards import BilliardSequence, TrajectoryError, average_length
from .polygon import DegeneratePolygonError, ModuliChart, from_chart

log = logging.getLogger(__name__)


class FiniteDifferenceError(ValueError):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    tol_f: float = 1e-12
    tol_x: float = 1e-10
    max_iter: int = 20_000
    restarts: int = 8
    seed: int = 0
    fd_step: float = 1e-5
    start_scale: float = 0.5

    def __post_init__(self):
        for name in ("tol_f", "tol_x", "fd_step", "start_scale"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass
class MinimizationResult:
    chart_min: ModuliChart
    value: float
    grad_norm: float
    hess_min_eig: float | None
    distance_to_regular: float
    converged: bool
    runs: list = field(default_factory=list)
    history: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "k": self.chart_min.k,
            "chart_min": list(self.chart_min.log_gaps),
            "value": self.value,
            "grad_norm": self.grad_norm,
            "hess_min_eig": self.hess_min_eig,
            "distance_to_regular": self.distance_to_regular,
            "converged": self.converged,
            "runs": self.runs,
        }


class Objective:
    """Average length as a function of chart coordinates."""

    def __init__(self, k: int, a):
        self.k = k
        self.a = a if isinstance(a, BilliardSequence) else BilliardSequence(tuple(a), k)
        self.evaluations = 0

    def polygon(self, x):
        return from_chart(ModuliChart(self.k, tuple(x)))

    def __call__(self, x) -> float:
        self.evaluations += 1
        return average_length(self.polygon(x), self.a)

    def safe(self, x) -> float:
        try:
            return self(x)
        except (DegeneratePolygonError, TrajectoryError, ValueError, OverflowError):
            return math.inf


def _admissible(obj: Objective, x, margin: float) -> bool:
    for i in range(len(x)):
        for sgn in (1.0, -1.0):
            y = np.array(x, dtype=float)
            y[i] += sgn * margin
            try:
                obj.polygon(y)
            except (DegeneratePolygonError, ValueError):
                return False
    return True


def _step_for(obj: Objective, x, h: float) -> float:
    for _ in range(11):
        if _admissible(obj, x, 10.0 * h):
            return h
        h *= 0.5
    raise FiniteDifferenceError("finite-difference stencil leaves the admissible region")


def gradient_fd(k: int, a, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of the average length in chart coordinates."""
    obj = a if isinstance(a, Objective) else Objective(k, a)
    x = np.asarray(x, dtype=float)
    h = _step_for(obj, x, h)
    g = np.empty(len(x))
    for i in range(len(x)):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (obj(xp) - obj(xm)) / (2.0 * h)
    return g


def hessian_fd(k: int, a, x, h: float = 1e-5, symmetrize: bool = True) -> np.ndarray:
    """Central-difference Hessian; symmetrised as ``(H + H^T)/2`` by default."""
    obj = a if isinstance(a, Objective) else Objective(k, a)
    x = np.asarray(x, dtype=float)
    h = _step_for(obj, x, h)
    d = len(x)
    f0 = obj(x)
    H = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            if i == j:
                xp = x.copy()
                xm = x.copy()
                xp[i] += h
                xm[i] -= h
                H[i, i] = (obj(xp) - 2.0 * f0 + obj(xm)) / (h * h)
                continue
            vals = []
            for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                y = x.copy()
                y[i] += si * h
                y[j] += sj * h
                vals.append(obj(y))
            H[i, j] = (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h * h)
    if symmetrize:
        H = 0.5 * (H + H.T)
    return H


def _nelder_mead(obj: Objective, x0, cfg: OptimizerConfig):
    d = len(x0)
    simplex = np.vstack([x0] + [x0 + 0.25 * e for e in np.eye(d)])
    best = [math.inf]
    history = []

    def f(x):
        val = obj.safe(x)
        if val < best[0]:
            best[0] = val
        return val

    def callback(xk):
        history.append(best[0])

    res = minimize(
        f,
        x0,
        method="Nelder-Mead",
        callback=callback,
        options={
            "xatol": cfg.tol_x,
            "fatol": cfg.tol_f,
            "maxiter": cfg.max_iter,
            "maxfev": 4 * cfg.max_iter,
            "initial_simplex": simplex,
        },
    )
    return res, history


def minimize_average_length(k: int, a, cfg: OptimizerConfig | None = None) -> MinimizationResult:
    """Search the moduli chart for the polygon of least average length.

    Nelder-Mead is started from the regular point and from ``cfg.restarts``
    seeded random points; the best run wins.
    """
    cfg = cfg or OptimizerConfig()
    obj = Objective(k, a)
    if k < 3:
        raise ValueError("k must be at least 3")
    if k == 3:
        chart = ModuliChart.regular(3)
        return MinimizationResult(chart, obj([]), 0.0, None, 0.0, True)

    d = k - 3
    rng = np.random.default_rng(cfg.seed)
    starts = [np.zeros(d)] + [rng.normal(0.0, cfg.start_scale, d) for _ in range(cfg.restarts)]
    runs = []
    best = None
    history = []
    for i, x0 in enumerate(starts):
        res, hist = _nelder_mead(obj, x0, cfg)
        runs.append(
            {
                "start": [float(v) for v in x0],
                "x": [float(v) for v in res.x],
                "value": float(res.fun),
                "success": bool(res.success),
                "iterations": int(res.nit),
            }
        )
        log.debug("run %d: f=%.17g at %s (%s)", i, res.fun, res.x, res.message)
        if best is None or res.fun < best.fun:
            best = res
            history = hist

    x = np.asarray(best.x, dtype=float)
    chart = ModuliChart(k, tuple(x))
    g = gradient_fd(k, obj, x, cfg.fd_step)
    H = hessian_fd(k, obj, x, cfg.fd_step)
    grad_norm = float(np.linalg.norm(g))
    hmin = float(np.linalg.eigvalsh(H).min())
    converged = bool(best.success) and grad_norm < 1e-6
    return MinimizationResult(
        chart_min=chart,
        value=float(best.fun),
        grad_norm=grad_norm,
        hess_min_eig=hmin,
        distance_to_regular=chart.distance(ModuliChart.regular(k)),
        converged=converged,
        runs=runs,
        history=history,
    )


@dataclass
class RegularMinimumReport:
    k: int
    sequence: tuple
    passed: bool
    distance_to_regular: float
    grad_norm_regular: float
    hess_min_eig_regular: float | None
    value_regular: float
    value_min: float
    failures: list
    result: MinimizationResult = field(repr=False)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "sequence": list(self.sequence),
            "passed": self.passed,
            "distance_to_regular": self.distance_to_regular,
            "grad_norm_regular": self.grad_norm_regular,
            "hess_min_eig_regular": self.hess_min_eig_regular,
            "value_regular": self.value_regular,
            "value_min": self.value_min,
            "failures": self.failures,
            "minimization": self.result.to_json(),
        }


def verify_regular_minimum(k: int, a, cfg: OptimizerConfig | None = None) -> RegularMinimumReport:
    cfg = cfg or OptimizerConfig()
    obj = Objective(k, a)
    res = minimize_average_length(k, obj.a, cfg)
    x0 = np.zeros(k - 3)
    failures = []
    if k == 3:
        gnorm, hmin = 0.0, None
    else:
        gnorm = float(np.linalg.norm(gradient_fd(k, obj, x0, cfg.fd_step)))
        hmin = float(np.linalg.eigvalsh(hessian_fd(k, obj, x0, cfg.fd_step)).min())
        if not res.distance_to_regular < 1e-4:
            failures.append(f"distance_to_regular = {res.distance_to_regular:.3e} >= 1e-4")
        if not gnorm < 1e-6:
            failures.append(f"grad_norm at regular = {gnorm:.3e} >= 1e-6")
        if not hmin > 0:
            failures.append(f"smallest Hessian eigenvalue at regular = {hmin:.3e} <= 0")
    return RegularMinimumReport(
        k=k,
        sequence=obj.a.labels,
        passed=not failures,
        distance_to_regular=res.distance_to_regular,
        grad_norm_regular=gnorm,
        hess_min_eig_regular=hmin,
        value_regular=obj(x0),
        value_min=res.value,
        failures=failures,
        result=res,
    )
