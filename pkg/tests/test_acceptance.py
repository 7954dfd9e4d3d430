"""Acceptance criteria 1-11, one PASS/FAIL line each in the terminal output."""

import itertools
import math
import subprocess
import sys
import time
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from conftest import random_sequence, rules_by_hand, shift_classes
from hypbilliards.billiards import (
    BilliardSequence,
    average_length,
    cyclic_family,
    holonomy,
    length_variational,
    shift,
    trajectory,
    validate,
)
from hypbilliards.euclid import inequality_scan, minimize_c, total_length
from hypbilliards.filling import fills, non_adjacent_sides
from hypbilliards.hypgeo import IdealPoint, mobius_sending, translation_length
from hypbilliards.optimize import OptimizerConfig, minimize_average_length, verify_regular_minimum
from hypbilliards.polygon import ModuliChart, from_chart, regular

WORD = (1, 2, 4, 1, 3)
MINIMUM_CASES = [
    (4, (1, 2, 4, 1, 3)),
    (4, (1, 3)),
    (5, (1, 3, 5, 2, 4)),
    (5, (1, 4, 2, 5, 3)),
    (6, (1, 4, 2, 6, 3, 5)),
]


def emit(request, n, ok, detail, elapsed):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  ({elapsed:.2f} s)  {detail}"
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None:
        tr.write_line("")
        tr.write_line(line)
    else:
        print(line)


@pytest.fixture(scope="module")
def random_cases():
    """200 (polygon, sequence) pairs with k <= 6, n <= 8 on random chart points."""
    rng = np.random.default_rng(1111)
    cases = []
    while len(cases) < 200:
        k = int(rng.integers(3, 7))
        x = rng.normal(0.0, 0.7, k - 3)
        P = from_chart(ModuliChart(k, tuple(x)))
        cases.append((P, random_sequence(rng, k, 8)))
    return cases


@pytest.fixture(scope="module")
def sweep():
    """Filling sweep over k in {3,4,5}, n <= 7, one family per shift class."""
    t0 = time.perf_counter()
    rows = []
    for k in (3, 4, 5):
        P = regular(k)
        for key in shift_classes(k, 7):
            fam = cyclic_family(P, key)
            rows.append((k, key, fam, fills(P, fam)))
    return rows, time.perf_counter() - t0


def test_criterion_01_validation_sweep(request):
    t0 = time.perf_counter()
    mismatches = []
    words = 0
    for k in (3, 4, 5):
        for n in range(1, 7):
            for w in itertools.product(range(1, k + 1), repeat=n):
                words += 1
                if bool(validate(w, k)) != rules_by_hand(w, k):
                    mismatches.append((k, w))
    fig = [WORD, (2, 3, 1, 2, 4), (3, 4, 2, 3, 1), (4, 1, 3, 4, 2)]
    fig_ok = all(validate(w, 4).valid for w in fig)
    shifts_ok = [shift(BilliardSequence(WORD, 4), i).labels for i in range(4)] == fig
    dt = time.perf_counter() - t0
    ok = not mismatches and fig_ok and shifts_ok and dt < 1.0
    emit(request, 1, ok, f"{words} words, {len(mismatches)} mismatches, shifts of (1,2,4,1,3) valid: {fig_ok}", dt)
    assert ok


def test_criterion_02_trace_vs_oracle(request, random_cases):
    t0 = time.perf_counter()
    worst = 0.0
    for P, a in random_cases:
        worst = max(worst, abs(trajectory(P, a).length - length_variational(P, a)))
    dt = time.perf_counter() - t0
    ok = worst < 1e-7 and dt < 60.0
    emit(request, 2, ok, f"200 cases, max |trace - variational| = {worst:.2e} (< 1e-7)", dt)
    assert ok


def test_criterion_03_reflection_law(request, random_cases):
    t0 = time.perf_counter()
    worst = 0.0
    hits = 0
    for P, a in random_cases:
        errs = trajectory(P, a).reflection_errors()
        hits += len(errs)
        worst = max(worst, max(errs))
    dt = time.perf_counter() - t0
    ok = worst < 1e-8
    emit(request, 3, ok, f"{hits} hits, max angle defect = {worst:.2e} rad (< 1e-8)", dt)
    assert ok


def test_criterion_04_regular_symmetry(request, random_cases):
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    seqs = {(len(P.theta), a) for P, a in random_cases}
    for k in range(3, 7):
        seqs |= {(k, w) for w in shift_classes(k, 5)}
    for k, a in sorted(seqs):
        lengths = cyclic_family(regular(k), a).lengths
        worst = max(worst, max(lengths) - min(lengths))
        count += 1
    dt = time.perf_counter() - t0
    ok = worst < 1e-9
    emit(request, 4, ok, f"{count} sequences, max spread of family lengths = {worst:.2e} (< 1e-9)", dt)
    assert ok


def test_criterion_05_mobius_invariance(request):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst = 0.0
    done = 0
    while done < 50:
        k = int(rng.integers(4, 7))
        P = from_chart(ModuliChart(k, tuple(rng.normal(0, 0.5, k - 3))))
        a = random_sequence(rng, k, 6)
        src = [IdealPoint(x) for x in np.sort(rng.uniform(0, 2 * math.pi, 3))]
        dst = [IdealPoint(x) for x in np.sort(rng.uniform(0, 2 * math.pi, 3))]
        M = mobius_sending(src, dst)
        try:
            Q = P.apply(M)
        except ValueError:
            continue  # image squeezed a gap below the floor
        worst = max(worst, abs(average_length(Q, a) - average_length(P, a)))
        done += 1
    dt = time.perf_counter() - t0
    ok = worst < 1e-10
    emit(request, 5, ok, f"50 maps, max |L_av(M P) - L_av(P)| = {worst:.2e} (< 1e-10)", dt)
    assert ok


def test_criterion_06_odd_doubling(request, random_cases):
    t0 = time.perf_counter()
    worst_sq = worst_aa = 0.0
    odd = 0
    for P, a in random_cases:
        if len(a) % 2 == 0:
            continue
        odd += 1
        h = holonomy(P, a)
        ell = trajectory(P, a).length
        l2 = translation_length(h @ h)
        worst_sq = max(worst_sq, abs(l2 - 2 * ell))
        laa = translation_length(holonomy(P, a + a))
        worst_aa = max(worst_aa, abs(laa - l2))
    dt = time.perf_counter() - t0
    ok = odd > 0 and worst_sq < 1e-9 and worst_aa < 1e-9
    emit(request, 6, ok, f"{odd} odd words, |l(h^2) - 2L| <= {worst_sq:.2e}, |l(aa) - l(h^2)| <= {worst_aa:.2e}", dt)
    assert ok


def test_criterion_07_filling_sweep(request, sweep):
    rows, dt = sweep
    t0 = time.perf_counter()
    bad = [(k, key) for k, key, fam, rep in rows
           if not (rep.connected and rep.fills and rep.counts()["violation"] == 0)]
    euler_bad = [(k, key) for k, key, fam, rep in rows if rep.euler != 2]
    dt += time.perf_counter() - t0
    ok = not bad and not euler_bad and dt < 300.0
    emit(request, 7, ok, f"{len(rows)} families, {len(bad)} not filling, {len(euler_bad)} with V-E+F != 2", dt)
    assert ok


def test_criterion_08_non_adjacent_sides(request, sweep):
    rows, dt = sweep
    t0 = time.perf_counter()
    checked = failed = 0
    k3_failed = k3_total = 0
    for k, key, fam, rep in rows:
        for tr in fam.trajectories:
            if k == 3:
                k3_total += 1
                k3_failed += not non_adjacent_sides(tr)
                continue
            checked += 1
            failed += not non_adjacent_sides(tr)
    dt = time.perf_counter() - t0
    ok = failed == 0
    emit(request, 8, ok,
         f"k=4,5: {checked} trajectories, {failed} without two non-adjacent sides; "
         f"k=3: {k3_failed}/{k3_total} fail (no two sides of a triangle are non-adjacent)", dt)
    assert ok


@pytest.mark.xfail(strict=True, reason="every pair of sides of a triangle is adjacent")
def test_criterion_08_literal_triangles(sweep):
    rows, _ = sweep
    assert all(non_adjacent_sides(tr) for k, key, fam, rep in rows if k == 3 for tr in fam.trajectories)


def test_criterion_09_regular_minimum(request):
    t0 = time.perf_counter()
    details = []
    ok = True
    for k, a in MINIMUM_CASES:
        rep = verify_regular_minimum(k, a, OptimizerConfig(seed=0))
        other = minimize_average_length(k, a, OptimizerConfig(seed=1))
        spread = rep.result.chart_min.distance(other.chart_min)
        good = rep.passed and rep.result.converged and spread < 1e-6
        ok &= good
        details.append(
            f"k={k} {a}: dist={rep.distance_to_regular:.1e} grad={rep.grad_norm_regular:.1e} "
            f"hmin={rep.hess_min_eig_regular:.3f} seed-spread={spread:.1e}"
        )
    dt = time.perf_counter() - t0
    ok &= dt < 600.0
    emit(request, 9, ok, "; ".join(details), dt)
    assert ok


def test_criterion_10_rectangles(request):
    t0 = time.perf_counter()
    grid = [10.0 ** (t / 10.0) for t in range(-20, 21)]
    problems = []
    for n, m in itertools.product(range(1, 6), repeat=2):
        if abs(total_length(n, m, 1.0) - 4 * math.sqrt(n * n + m * m)) > 1e-12:
            problems.append(("L(1)", n, m))
        if n * m != 0 and abs(minimize_c(n, m).c - 1.0) >= 1e-6:
            problems.append(("c*", n, m))
        scan = inequality_scan(n, m, grid)
        if not (scan.holds and scan.quartic_holds and scan.equality_points == [1.0]):
            problems.append(("scan", n, m))
    dt = time.perf_counter() - t0
    ok = not problems and dt < 1.0
    emit(request, 10, ok, f"5x5 grid, 41 values of c, problems: {problems or 'none'}", dt)
    assert ok


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "hypbilliards", *args], capture_output=True)


def test_criterion_11_cli(request):
    import json

    t0 = time.perf_counter()
    r1 = _cli("validate", "--k", "4", "--seq", "1,2,4,1,3")
    r2 = _cli("validate", "--k", "4", "--seq", "1,2")
    r3 = _cli("minimize", "--k", "4", "--seq", "1,2,4,1,3")
    ok1 = r1.returncode == 0 and json.loads(r1.stdout) == {"valid": True}
    ok2 = r2.returncode == 2 and json.loads(r2.stdout)["rule"] == "b"
    ok3 = r3.returncode == 0 and json.loads(r3.stdout)["distance_to_regular"] < 1e-4
    s1 = _cli("render", "--k", "4", "--seq", ",".join(map(str, WORD)))
    s2 = _cli("render", "--k", "4", "--seq", ",".join(map(str, WORD)))
    same = s1.returncode == 0 and s1.stdout == s2.stdout
    try:
        root = ET.fromstring(s1.stdout)
        xml_ok = root.tag.endswith("svg")
    except ET.ParseError:
        xml_ok = False
    dt = time.perf_counter() - t0
    ok = ok1 and ok2 and ok3 and same and xml_ok
    emit(request, 11, ok,
         f"validate ok/rule b/minimize: {ok1}/{ok2}/{ok3}; render byte-identical: {same}, XML: {xml_ok}", dt)
    assert ok
