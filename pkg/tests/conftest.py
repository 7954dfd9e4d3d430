import itertools
import math
import os
import sys

import numpy as np
import pytest

from hypbilliards.billiards import canonical_rotation, validate
from hypbilliards.polygon import IdealPolygon

HERE = os.path.dirname(__file__)
sys.path.insert(0, HERE)


def rules_by_hand(labels, k):
    """Direct restatement of the two validity rules, used as an oracle."""
    n = len(labels)
    if any(labels[j] == labels[(j + 1) % n] for j in range(n)):
        return False
    distinct = sorted(set(labels))
    if len(distinct) == 2:
        x, y = distinct
        if y - x == 1 or (x == 1 and y == k):
            return False
    return True


def random_polygon(rng, k, min_gap=0.15):
    while True:
        gaps = rng.dirichlet(np.full(k, 2.0)) * 2 * math.pi
        if gaps.min() > min_gap:
            break
    start = rng.uniform(0, 2 * math.pi)
    theta = np.mod(start + np.concatenate([[0.0], np.cumsum(gaps[:-1])]), 2 * math.pi)
    return IdealPolygon(tuple(float(x) for x in theta))


def random_sequence(rng, k, n_max=8):
    while True:
        n = int(rng.integers(2, n_max + 1))
        w = tuple(int(x) for x in rng.integers(1, k + 1, n))
        if validate(w, k):
            return w


def shift_classes(k, n_max):
    """One representative per (cyclic rotation, label shift) class of valid words."""
    seen = []
    keys = set()
    for n in range(2, n_max + 1):
        for w in itertools.product(range(1, k + 1), repeat=n):
            if not validate(w, k):
                continue
            key = min(canonical_rotation(tuple((x - 1 + i) % k + 1 for x in w)) for i in range(k))
            if key not in keys:
                keys.add(key)
                seen.append(key)
    return seen


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
