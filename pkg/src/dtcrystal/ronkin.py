"""Ronkin function of the line z + w = 1 by tensor-product quadrature."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["ronkin", "ronkin_grid"]


def _nodes(n: int) -> np.ndarray:
    # midpoint offset: nodes at 2 pi (k + 1/2) / n never sit on theta = 0,
    # where the integrand's log singularity lives when e^x = 1 + e^y etc.
    return 2 * math.pi * (np.arange(n) + 0.5) / n


def ronkin(x: float, y: float, grid_n: int = 256) -> float:
    """``(2 pi)^-2 ∬ ln|e^(x+i theta) + e^(y+i phi) - 1| dtheta dphi``.

    Trapezoidal rule on a periodic grid_n x grid_n midpoint grid. The
    logarithmic singularity is integrable; the midpoint offset keeps
    nodes off the symmetric singular points.
    """
    if grid_n < 64:
        raise ValueError("grid_n must be >= 64")
    th = _nodes(grid_n)
    z = np.exp(x + 1j * th)[:, None]
    w = np.exp(y + 1j * th)[None, :]
    vals = np.log(np.abs(z + w - 1))
    return float(vals.mean())


def ronkin_grid(xs, ys, grid_n: int = 256) -> list[tuple[float, float, float]]:
    return [(float(x), float(y), ronkin(x, y, grid_n)) for x in xs for y in ys]
