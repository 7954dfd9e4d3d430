"""Command-line front end.

Exit status: 0 on success, 2 when an input fails validation (bad
arguments, malformed JSON, an invalid billiard sequence), 1 on numerical
failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field

from . import euclid, jsonio
from .billiards import (
    BilliardSequence,
    InvalidSequenceError,
    TrajectoryError,
    cyclic_family,
    length_variational,
    trajectory,
    validate,
)
from .filling import ArrangementError, fills
from .kernels import CuspEscape
from .optimize import OptimizerConfig, minimize_average_length, verify_regular_minimum
from .polygon import DegeneratePolygonError, IdealPolygon, ModuliChart, from_chart, regular
from .render import render, render_faces, render_rectangle

COMMANDS = ("validate", "trace", "avg-length", "minimize", "filling", "euclid", "render")

log = logging.getLogger("hypbilliards")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    k: int | None = None
    seq: tuple | None = None
    polygon: str | None = None
    chart: tuple | None = None
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "json"
    n: int | None = None
    m: int | None = None
    c: float = 1.0
    verify: bool = False
    oracle: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in ("json", "svg"):
            raise UsageError("format must be json or svg")
        for name, val in self.tolerances.items():
            if not val > 0:
                raise UsageError(f"tolerance {name} must be positive")
        if self.command == "euclid":
            if self.n is None or self.m is None:
                raise UsageError("euclid needs --n and --m")
            if not self.c > 0:
                raise UsageError("--c must be positive")
        else:
            if self.seq is None:
                raise UsageError(f"{self.command} needs --seq")
            if self.k is None and self.polygon is None:
                raise UsageError(f"{self.command} needs --k or --polygon")
        if self.format == "svg" and self.command not in ("render", "filling", "euclid"):
            raise UsageError(f"{self.command} has no SVG output")


def _polygon(cfg: RunConfig) -> IdealPolygon:
    if cfg.polygon is not None:
        P = IdealPolygon.from_json(jsonio.load(cfg.polygon))
        if cfg.k is not None and cfg.k != P.k:
            raise UsageError(f"--k {cfg.k} disagrees with polygon file (k = {P.k})")
        return P
    if cfg.chart is not None:
        return from_chart(ModuliChart(cfg.k, cfg.chart))
    return regular(cfg.k)


def _optimizer_config(cfg: RunConfig) -> OptimizerConfig:
    t = cfg.tolerances
    kwargs = {"seed": cfg.seed}
    for key in ("tol_f", "tol_x", "fd_step"):
        if key in t:
            kwargs[key] = t[key]
    if "restarts" in t:
        kwargs["restarts"] = int(t["restarts"])
    if "max_iter" in t:
        kwargs["max_iter"] = int(t["max_iter"])
    return OptimizerConfig(**kwargs)


def _euclid(cfg: RunConfig):
    n, m = cfg.n, cfg.m
    if cfg.format == "svg":
        return 0, render_rectangle(n, m, cfg.c)
    lengths, total = euclid.family_lengths(n, m, cfg.c)
    grid = [10.0 ** (t / 10.0) for t in range(-20, 21)]
    scan = euclid.inequality_scan(n, m, grid)
    cmin = euclid.minimize_c(n, m)
    return 0, {
        "n": n,
        "m": m,
        "c": cfg.c,
        "lengths": lengths,
        "L": total,
        "L_at_1": euclid.total_length(n, m, 1.0),
        "c_star": cmin.c,
        "degenerate": cmin.degenerate,
        "inequality_holds": scan.holds and scan.quartic_holds,
        "table": [{"c": c, "L": L} for c, L in scan.rows],
    }


def _dispatch(cfg: RunConfig):
    if cfg.command == "euclid":
        return _euclid(cfg)
    k = cfg.k
    if cfg.command == "validate":
        verdict = validate(cfg.seq, k if k is not None else _polygon(cfg).k)
        return (0 if verdict.valid else 2), verdict.to_json()

    P = _polygon(cfg)
    a = BilliardSequence(cfg.seq, P.k)
    if cfg.command == "trace":
        tr = trajectory(P, a)
        out = tr.to_json()
        if cfg.oracle:
            out["length_variational"] = length_variational(P, a)
        return 0, out
    if cfg.command == "avg-length":
        fam = cyclic_family(P, a)
        return 0, {
            "sequence": list(a.labels),
            "polygon": P.to_json(),
            "lengths": fam.lengths,
            "average_length": fam.average_length,
        }
    if cfg.command == "filling":
        fam = cyclic_family(P, a)
        report = fills(P, fam)
        if cfg.format == "svg":
            return 0, render_faces(P, fam, report)
        return 0, report.to_json()
    if cfg.command == "render":
        return 0, render(P, cyclic_family(P, a))
    if cfg.command == "minimize":
        ocfg = _optimizer_config(cfg)
        if cfg.verify:
            rep = verify_regular_minimum(P.k, a, ocfg)
            return (0 if rep.passed else 1), rep.to_json()
        res = minimize_average_length(P.k, a, ocfg)
        return (0 if res.converged else 1), res.to_json()
    raise UsageError(f"unknown command {cfg.command!r}")


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns the exit status and the serialised output."""
    try:
        status, payload = _dispatch(cfg)
    except InvalidSequenceError as exc:
        status, payload = 2, {"error": "invalid-sequence", "rule": exc.rule, "message": str(exc)}
    except jsonio.MalformedInputError as exc:
        status, payload = 2, {
            "error": "malformed-json",
            "byte_offset": exc.byte_offset,
            "message": str(exc),
        }
    except (UsageError, DegeneratePolygonError, OSError, KeyError) as exc:
        status, payload = 2, {"error": "invalid-input", "message": str(exc)}
    except (TrajectoryError, ArrangementError, CuspEscape, ArithmeticError) as exc:
        status, payload = 1, {"error": "numeric-failure", "message": str(exc)}
    except ValueError as exc:
        status, payload = 2, {"error": "invalid-input", "message": str(exc)}
    if isinstance(payload, str):
        return status, payload
    return status, jsonio.dumps(payload)


def _labels(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad label list {text!r}") from None


def _floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypbilliards",
        description="Closed billiard trajectories in ideal hyperbolic polygons.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seq=True):
        p.add_argument("--k", type=int)
        if seq:
            p.add_argument("--seq", type=_labels, required=True,
                           help="comma-separated side labels, e.g. 1,2,4,1,3")
        p.add_argument("--polygon", help="polygon JSON file {\"k\": .., \"theta\": [..]}")
        p.add_argument("--chart", type=_floats, help="comma-separated log-gap chart coordinates")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="write output here instead of standard output")
        p.add_argument("--format", choices=("json", "svg"), default="json")
        p.add_argument("--tol-f", type=float, dest="tol_f")
        p.add_argument("--tol-x", type=float, dest="tol_x")
        p.add_argument("--tol-fd", type=float, dest="fd_step", help="finite-difference step")
        p.add_argument("--restarts", type=int)
        p.add_argument("--max-iter", type=int, dest="max_iter")

    for name, text in (
        ("validate", "check the billiard-sequence rules"),
        ("trace", "closed trajectory for a sequence"),
        ("avg-length", "average length of the cyclically related family"),
        ("filling", "filling report for the rotated family"),
        ("render", "SVG of the polygon and the whole family"),
    ):
        common(sub.add_parser(name, help=text))
    sub.choices["trace"].add_argument("--oracle", action="store_true",
                                      help="also report the variational length")
    p = sub.add_parser("minimize", help="minimise the average length over polygons")
    common(p)
    p.add_argument("--verify", action="store_true",
                   help="check that the regular polygon is the minimiser")
    p = sub.add_parser("euclid", help="rectangle billiards of area one")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "svg"), default="json")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    seed = getattr(ns, "seed", None)
    if seed is None:
        seed = int(os.environ.get("BILLIARDS_SEED", "0"))
    tolerances = {}
    for key in ("tol_f", "tol_x", "fd_step", "restarts", "max_iter"):
        val = getattr(ns, key, None)
        if val is not None:
            tolerances[key] = val
    return RunConfig(
        command=ns.command,
        k=getattr(ns, "k", None),
        seq=getattr(ns, "seq", None),
        polygon=getattr(ns, "polygon", None),
        chart=getattr(ns, "chart", None),
        seed=seed,
        tolerances=tolerances,
        output=ns.out,
        format=ns.format,
        n=getattr(ns, "n", None),
        m=getattr(ns, "m", None),
        c=getattr(ns, "c", 1.0),
        verify=getattr(ns, "verify", False),
        oracle=getattr(ns, "oracle", False),
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
    except (UsageError, ValueError) as exc:
        print(jsonio.dumps({"error": "invalid-input", "message": str(exc)}), end="")
        return 2
    try:
        status, text = run(cfg)
    except Exception as exc:  # exit-code contract: anything unexpected is a numeric failure
        log.exception("unexpected failure")
        status, text = 1, jsonio.dumps({"error": "internal", "message": str(exc)})
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
