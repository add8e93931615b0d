import math

import numpy as np
import pytest

from dtcrystal.ronkin import ronkin, ronkin_grid


def jensen_oracle(x, y, n=200_000):
    """Average over phi of max(x, ln|e^(y+i phi) - 1|), from Jensen's formula in theta."""
    phi = (np.arange(n) + 0.5) * 2 * np.pi / n
    inner = np.log(np.abs(np.exp(y + 1j * phi) - 1))
    return float(np.mean(np.maximum(x, inner)))


def test_facets():
    for n in (64, 256, 512):
        assert abs(ronkin(5, -5, n) - 5) < 1e-3
        assert abs(ronkin(-5, 5, n) - 5) < 1e-3
        assert abs(ronkin(-5, -5, n)) < 1e-3


def test_symmetry():
    for x, y in [(0.3, -0.7), (1.2, 0.4), (0.0, 2.0)]:
        assert abs(ronkin(x, y, 256) - ronkin(y, x, 256)) < 1e-9


@pytest.mark.parametrize("x,y", [(0.0, 0.0), (0.5, 0.2), (-0.3, 0.8), (2.0, 1.5)])
def test_against_jensen_oracle(x, y):
    assert abs(ronkin(x, y, 512) - jensen_oracle(x, y)) < 1e-4


def test_mahler_measure_at_origin():
    # m(1 + x + y) = 3 sqrt(3) / (4 pi) L(chi_-3, 2)
    assert abs(ronkin(0.0, 0.0, 512) - 0.3230659472194505) < 1e-4


def test_midpoint_convexity():
    rng = np.random.default_rng(7)
    for _ in range(25):
        p = rng.uniform(-3, 3, 2)
        q = rng.uniform(-3, 3, 2)
        m = (p + q) / 2
        assert ronkin(*m, 256) <= (ronkin(*p, 256) + ronkin(*q, 256)) / 2 + 1e-6


def test_grid_requirement():
    with pytest.raises(ValueError):
        ronkin(0.0, 0.0, 32)


def test_grid_helper():
    rows = ronkin_grid([0.0, 1.0], [-1.0], 64)
    assert [(x, y) for x, y, _ in rows] == [(0.0, -1.0), (1.0, -1.0)]
    assert math.isclose(rows[1][2], ronkin(1.0, -1.0, 64))
