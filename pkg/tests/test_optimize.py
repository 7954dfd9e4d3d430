import math

import numpy as np
import pytest

from hypbilliards.billiards import BilliardSequence, average_length, shift
from hypbilliards.optimize import (
    FiniteDifferenceError,
    Objective,
    _step_for,
    OptimizerConfig,
    gradient_fd,
    hessian_fd,
    minimize_average_length,
    verify_regular_minimum,
)
from hypbilliards.polygon import IdealPolygon, ModuliChart, from_chart, regular, to_chart

WORD = (1, 2, 4, 1, 3)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(tol_f=0.0)
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)


def test_objective_at_origin_is_regular_value():
    obj = Objective(4, WORD)
    assert obj([0.0]) == pytest.approx(average_length(regular(4), WORD), abs=1e-12)
    assert obj.safe([80.0]) == math.inf


def test_gradient_vanishes_at_regular_point():
    g = gradient_fd(4, WORD, [0.0])
    assert np.linalg.norm(g) < 1e-6


def test_gradient_is_second_order():
    x = np.array([0.4, -0.3])
    a = (1, 3, 5, 2, 4)
    g = gradient_fd(5, a, x, 1e-5)
    v = np.array([0.6, 0.8])
    obj = Objective(5, a)
    errs = []
    for h in (4e-3, 2e-3, 1e-3):
        d = (obj(x + h * v) - obj(x - h * v)) / (2 * h)
        errs.append(abs(d - g @ v))
    # central differences: halving h cuts the error by about four
    assert errs[1] < 0.4 * errs[0] and errs[2] < 0.4 * errs[1]


def test_hessian_symmetric_before_symmetrising():
    H = hessian_fd(6, (1, 4, 2, 6, 3, 5), np.array([0.2, -0.1, 0.3]), 1e-4, symmetrize=False)
    assert np.abs(H - H.T).max() < 1e-8


# first chart coordinate at which a pentagon gap reaches the 1e-6 floor
EDGE = 15.142561470091012


def test_fd_step_is_halved_near_the_edge():
    obj = Objective(5, (1, 3, 5, 2, 4))
    assert _step_for(obj, np.array([EDGE - 0.07, 0.0]), 1e-2) == pytest.approx(5e-3)


def test_fd_step_fails_at_the_edge():
    with pytest.raises(FiniteDifferenceError):
        gradient_fd(5, (1, 3, 5, 2, 4), [EDGE - 1e-6, 0.0], 1e-2)


def test_k3_is_trivial():
    res = minimize_average_length(3, (1, 2, 3))
    assert res.converged and res.distance_to_regular == 0.0 and res.hess_min_eig is None


def test_quadrilateral_word_minimum_is_regular():
    cfg = OptimizerConfig(restarts=3)
    res = minimize_average_length(4, WORD, cfg)
    assert res.converged
    assert res.distance_to_regular < 1e-4
    assert res.grad_norm < 1e-6 and res.hess_min_eig > 0
    # monotone improvement of the recorded best value
    assert all(b <= a for a, b in zip(res.history, res.history[1:]))


def test_minimum_beats_random_samples(rng):
    a = (1, 3, 5, 2, 4)
    res = minimize_average_length(5, a, OptimizerConfig(restarts=2))
    obj = Objective(5, a)
    for _ in range(100):
        x = rng.normal(0, 1.0, 2)
        assert res.value <= obj.safe(x) + 1e-12


def test_objective_symmetric_under_relabelling():
    # relabelling vertex j as j+1 is a different chart point with the same objective
    a = BilliardSequence((1, 3, 5, 2, 4), 5)
    P = from_chart(ModuliChart(5, (0.3, -0.2)))
    Q = IdealPolygon(P.theta[1:] + P.theta[:1])
    x, y = to_chart(P), to_chart(Q)
    assert x.distance(y) > 0.1
    obj = Objective(5, a)
    assert obj(x.log_gaps) == pytest.approx(obj(y.log_gaps), abs=1e-10)
    for i in range(5):
        assert average_length(P, shift(a, i)) == pytest.approx(obj(x.log_gaps), abs=1e-10)


def test_verify_regular_minimum_report():
    rep = verify_regular_minimum(4, (1, 3), OptimizerConfig(restarts=2))
    assert rep.passed, rep.failures
    js = rep.to_json()
    assert js["passed"] is True and js["k"] == 4
