import itertools
import math

import pytest

from conftest import random_polygon, random_sequence
from hypbilliards.billiards import cyclic_family, trajectory
from hypbilliards.filling import (
    ArcSegment,
    arcs_of,
    connectivity,
    fills,
    interlace,
    intersects,
    klein_point,
    non_adjacent_sides,
)
from hypbilliards.hypgeo import _poincare_to_klein
from hypbilliards.polygon import BoundaryCoordinate, regular

WORD = (1, 2, 4, 1, 3)


def arc(P, s1, t1, s2, t2, owner=0):
    e1, e2 = BoundaryCoordinate(s1, t1), BoundaryCoordinate(s2, t2)
    return ArcSegment(e1, e2, owner, klein_point(P, e1), klein_point(P, e2))


def segment_cross(p1, p2, q1, q2):
    """Plain 2-D segment intersection, written out independently."""
    d1, d2 = p2 - p1, q2 - q1
    den = d1.real * d2.imag - d1.imag * d2.real
    if abs(den) < 1e-15:
        return None
    w = q1 - p1
    s = (w.real * d2.imag - w.imag * d2.real) / den
    u = (w.real * d1.imag - w.imag * d1.real) / den
    if 1e-12 < s < 1 - 1e-12 and 1e-12 < u < 1 - 1e-12:
        return p1 + s * d1
    return None


def expected_faces(chords):
    """Bounded faces of a chord arrangement: 1 + chords + sum over crossing points of (m - 1)."""
    pts = []
    for (a, b), (c, d) in itertools.combinations(chords, 2):
        x = segment_cross(a, b, c, d)
        if x is not None:
            pts.append(x)
    clusters = []
    for x in pts:
        for cl in clusters:
            if abs(cl[0] - x) < 1e-9:
                cl[1] += 1
                break
        else:
            clusters.append([x, 1])
    extra = 0
    for _, pairs in clusters:
        m = round((1 + math.sqrt(1 + 8 * pairs)) / 2)
        extra += m - 1
    return 1 + len(chords) + extra


def distinct_chords(family):
    out = []
    for i, tr in enumerate(family.trajectories):
        for a in arcs_of(tr, i):
            if not any(abs(a.k1 - p) + abs(a.k2 - q) < 1e-9 or abs(a.k1 - q) + abs(a.k2 - p) < 1e-9
                       for p, q in out):
                out.append((a.k1, a.k2))
    return out


def test_interlace_examples():
    P = regular(4)
    s1 = arc(P, 1, 0.0, 3, 0.0)
    s2 = arc(P, 2, 0.0, 4, 0.0)
    assert interlace(s1, s2)
    x = intersects(s1, s2)
    assert abs(x.z) < 1e-12
    s3 = arc(P, 1, -0.5, 2, 0.5)
    s4 = arc(P, 3, -0.5, 4, 0.5)
    assert not interlace(s3, s4) and intersects(s3, s4) is None
    s5 = arc(P, 1, 0.0, 2, 0.3)
    with pytest.raises(ValueError):
        interlace(s1, s5)
    with pytest.raises(ValueError):
        arc(P, 1, 0.0, 1, 0.0)
    with pytest.raises(ValueError):
        arc(P, 1, 0.0, 1, 2.0)


def test_interlace_equals_intersection_random(rng):
    P = random_polygon(rng, 6)
    for _ in range(10_000):
        ends = [(int(rng.integers(1, 7)), float(rng.normal(0, 3))) for _ in range(4)]
        try:
            a = arc(P, *ends[0], *ends[1])
            b = arc(P, *ends[2], *ends[3])
            il = interlace(a, b)
        except ValueError:
            continue
        x = intersects(a, b)
        assert (x is not None) == il
        if x is not None:
            kx = _poincare_to_klein(x.z)
            for s in (a, b):
                p, q = s.k1, s.k2
                # in the Klein model the crossing lies on the straight chord
                cross = (q - p).real * (kx - p).imag - (q - p).imag * (kx - p).real
                assert abs(cross) < 1e-9


def test_connectivity_examples():
    P = regular(4)
    assert connectivity(cyclic_family(P, WORD))
    assert connectivity(cyclic_family(P, (1, 3)))
    assert connectivity([trajectory(P, WORD)])


def test_non_adjacent_sides_examples():
    P = regular(4)
    assert non_adjacent_sides(trajectory(P, (1, 3)))
    assert non_adjacent_sides(trajectory(P, WORD))
    assert not non_adjacent_sides(trajectory(regular(3), (1, 2, 3)))


def test_two_perpendicular_chords():
    P = regular(4)
    rep = fills(P, cyclic_family(P, (1, 3)))
    assert rep.fills and rep.connected
    assert [f.type for f in rep.faces] == ["c"] * 4
    assert all(f.vertices_in_run == 1 for f in rep.faces)
    assert (rep.n_vertices, rep.n_edges, rep.n_faces) == (9, 12, 5)


def test_quadrilateral_word_family_fills():
    P = regular(4)
    fam = cyclic_family(P, WORD)
    rep = fills(P, fam)
    assert rep.fills and rep.euler == 2
    assert rep.counts()["violation"] == 0
    assert len(rep.faces) == expected_faces(distinct_chords(fam))


def test_face_count_matches_chord_formula(rng):
    for k in (3, 4, 5, 6):
        P = regular(k)
        for _ in range(6):
            fam = cyclic_family(P, random_sequence(rng, k, 7))
            rep = fills(P, fam)
            assert rep.euler == 2
            assert len(rep.faces) == expected_faces(distinct_chords(fam))


def test_empty_family_does_not_fill():
    rep = fills(regular(4), [])
    assert not rep.fills


def test_report_json_fields():
    P = regular(4)
    js = fills(P, cyclic_family(P, (1, 3))).to_json()
    assert js["fills"] is True and js["euler"] == 2
    assert js["face_counts"] == {"a": 0, "b": 0, "c": 4, "violation": 0}
