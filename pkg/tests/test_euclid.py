import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypbilliards.euclid import (
    HomotopyClass,
    RectangleTable,
    family_lengths,
    folded_path,
    inequality_scan,
    minimize_c,
    total_length,
)

ints = st.integers(-6, 6)
cs = st.floats(1e-3, 1e3)


def test_family_length_examples():
    assert family_lengths(1, 0, 1.0)[1] == pytest.approx(4.0, abs=1e-15)
    assert family_lengths(1, 1, 1.0)[1] == pytest.approx(4 * math.sqrt(2), abs=1e-14)
    assert family_lengths(1, 1, 2.0)[1] == pytest.approx(4 * math.sqrt(4.25), abs=1e-14)
    assert family_lengths(1, 1, 2.0)[1] == pytest.approx(8.2462113, abs=1e-7)


def test_errors():
    with pytest.raises(ValueError):
        family_lengths(1, 1, 0.0)
    with pytest.raises(ValueError):
        RectangleTable(-1.0)
    with pytest.raises(ValueError):
        HomotopyClass(0, 0)
    assert RectangleTable(3.0).area == pytest.approx(1.0)


@given(ints, ints, cs)
def test_sum_matches_closed_form(n, m, c):
    if n == 0 and m == 0:
        return
    lengths, total = family_lengths(n, m, c)
    assert len(lengths) == 4
    assert total == pytest.approx(total_length(n, m, c), rel=1e-12)


@given(ints, ints, cs)
def test_symmetries(n, m, c):
    if n == 0 and m == 0:
        return
    assert total_length(n, m, c) == pytest.approx(total_length(n, m, 1 / c), rel=1e-12)
    assert total_length(n, m, c) == pytest.approx(total_length(m, n, c), rel=1e-12)


def test_coercive():
    for n, m in ((1, 2), (3, 1), (2, 2)):
        base = total_length(n, m, 1.0)
        assert total_length(n, m, 1e-4) > 1e3 * base
        assert total_length(n, m, 1e4) > 1e3 * base


@pytest.mark.parametrize("n,m", [(1, 2), (3, 5), (1, 1), (4, 1)])
def test_minimizer_is_square(n, m):
    res = minimize_c(n, m)
    assert abs(res.c - 1) < 1e-6 and not res.degenerate


def test_degenerate_class_flagged():
    res = minimize_c(1, 0)
    assert res.degenerate


def test_inequality_scan_example():
    scan = inequality_scan(1, 1, [0.1, 0.5, 1.0, 2.0, 10.0])
    assert scan.holds and scan.quartic_holds
    assert scan.equality_points == [1.0]
    assert scan.to_json()["table"][2] == {"c": 1.0, "L": pytest.approx(4 * math.sqrt(2))}


def test_folded_path_stays_in_table_and_has_the_right_length():
    for n, m, c in ((1, 2, 1.0), (2, 1, 1.7), (3, 1, 0.6)):
        pts = folded_path(n, m, c, (0.123 * c, 0.377 / c))
        assert all(-1e-12 <= x <= c + 1e-12 and -1e-12 <= y <= 1 / c + 1e-12 for x, y in pts)
        run = math.fsum(math.dist(p, q) for p, q in zip(pts, pts[1:]))
        # the unfolded displacement is twice the class vector
        assert run == pytest.approx(2 * math.hypot(n * c, m / c), rel=1e-12)
        assert pts[0] == pytest.approx(pts[-1], abs=1e-12)
