"""Counting series of legged configurations by renormalized volume.

Only the Calabi-Yau counting version is provided: each configuration
ending on the given legs contributes ``q^(renormalized volume)``.
"""

from __future__ import annotations

from ..exactq import QSeries
from ..partitions import Partition2D
from .plane import PlanePartition, _leg_extent, enumerate_legged, renormalized_volume


def minimal_volume(legs) -> int:
    """Renormalized volume of the bare union of the legs."""
    legs = tuple(Partition2D(p) for p in legs)
    bare = PlanePartition((), legs)
    return renormalized_volume(bare, _leg_extent(legs) + 1)


def legged_counting_series(lam, mu, nu, trunc: int) -> QSeries:
    """``sum q^(renormalized volume)`` over configurations ending on (lam, mu, nu)."""
    legs = (Partition2D(lam), Partition2D(mu), Partition2D(nu))
    v0 = minimal_volume(legs)
    if trunc < v0:
        raise ValueError(f"trunc {trunc} is below the minimal renormalized volume {v0}")
    max_extra = trunc - v0
    counts = {}
    # any N past the grid used by the enumerator is admissible
    N = _leg_extent(legs) + max_extra + 2
    for extra, pi in enumerate_legged(legs, max_extra):
        v = renormalized_volume(pi, N)
        if v != v0 + extra:
            raise AssertionError(f"volume bookkeeping mismatch: {v} != {v0} + {extra}")
        counts[v] = counts.get(v, 0) + 1
    return QSeries.from_dict(counts, trunc)
