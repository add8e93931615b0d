"""3D partitions as heightfields, with optional infinite legs.

Conventions for legs (lambda, mu, nu), cyclic in the three axes:

* the leg along axis 1 has cross-section lambda in the (x2, x3) plane:
  box (a1, a2, a3) is in it iff ``a3 < lambda[a2]``;
* the leg along axis 2 has cross-section mu in the (x3, x1) plane:
  ``a1 < mu[a3]``;
* the leg along axis 3 has cross-section nu in the (x1, x2) plane:
  ``a2 < nu[a1]``, i.e. column (a1, a2) has infinite height.

A box (a1, a2, a3) belongs to a configuration iff ``a3 < h(a1, a2)``,
with ``None`` standing for an infinite column.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import StabilizationError
from ..partitions import Partition2D

__all__ = [
    "PlanePartition",
    "leg_heights",
    "renormalized_volume",
    "enumerate_plane_partitions",
    "plane_partitions_by_size",
    "enumerate_legged",
]

EMPTY = Partition2D()


def _lt(k, h) -> bool:
    """k < h with h = None meaning infinity."""
    return h is None or k < h


def _ge(h1, h2) -> bool:
    """h1 >= h2 on heights with None = infinity."""
    if h1 is None:
        return True
    if h2 is None:
        return False
    return h1 >= h2


def leg_heights(legs, i: int, j: int):
    """Height of column (i, j) in the union of the three legs."""
    lam, mu, nu = legs
    if j < nu.part(i):
        return None
    return max(lam.part(j), mu.conjugate().part(i))


@dataclass(frozen=True)
class PlanePartition:
    """Heightfield with optional legs.

    ``heights`` is a square block; outside it the columns follow the legs
    (or are empty when there are none).
    """

    heights: tuple
    legs: tuple = (EMPTY, EMPTY, EMPTY)

    def __post_init__(self):
        legs = tuple(Partition2D(p) for p in self.legs)
        if len(legs) != 3:
            raise ValueError("legs must be a triple of partitions")
        rows = [tuple(r) for r in self.heights]
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "heights", _trim(rows, legs))
        self._validate()

    @classmethod
    def from_boxes(cls, boxes, legs=(EMPTY, EMPTY, EMPTY)) -> PlanePartition:
        """Build from a set of boxes added on top of the legs."""
        legs = tuple(Partition2D(p) for p in legs)
        B = _leg_extent(legs)
        for a in boxes:
            B = max(B, a[0] + 1, a[1] + 1)
        grid = [[leg_heights(legs, i, j) for j in range(B)] for i in range(B)]
        for a1, a2, a3 in boxes:
            h = grid[a1][a2]
            if h is not None:
                grid[a1][a2] = max(h, a3 + 1)
        return cls(tuple(tuple(r) for r in grid), legs)

    @property
    def is_finite(self) -> bool:
        return not any(self.legs)

    def height(self, i: int, j: int):
        if i < 0 or j < 0:
            return None
        if i < len(self.heights) and j < len(self.heights):
            return self.heights[i][j]
        return leg_heights(self.legs, i, j)

    def __contains__(self, box) -> bool:
        a1, a2, a3 = box
        if min(box) < 0:
            return False
        return _lt(a3, self.height(a1, a2))

    @property
    def size(self) -> int:
        """Number of boxes; finite configurations only."""
        if not self.is_finite:
            raise ValueError("size of a legged configuration is infinite; use renormalized_volume")
        return sum(sum(r) for r in self.heights)

    def boxes(self) -> list:
        """All boxes, sorted lexicographically; finite configurations only."""
        if not self.is_finite:
            raise ValueError("legged configuration has infinitely many boxes")
        return sorted(
            (i, j, k) for i, r in enumerate(self.heights) for j, h in enumerate(r) for k in range(h)
        )

    def permute_axes(self, perm) -> PlanePartition:
        """Relabel coordinates: new box b has ``b[perm[m]] = a[m]``; finite only."""
        moved = []
        for a in self.boxes():
            b = [0, 0, 0]
            for m in range(3):
                b[perm[m]] = a[m]
            moved.append(tuple(b))
        return PlanePartition.from_boxes(moved)

    def _validate(self):
        B = len(self.heights)
        if any(len(r) != B for r in self.heights):
            raise ValueError("heights must be a square block")
        for i in range(B + 1):
            for j in range(B + 1):
                h = self.height(i, j)
                h0 = leg_heights(self.legs, i, j)
                if (h is None) != (h0 is None):
                    raise ValueError(f"column ({i},{j}) disagrees with the infinite leg profile")
                if h is not None and h < h0:
                    raise ValueError(f"column ({i},{j}) does not contain the legs")
                if h is not None and h < 0:
                    raise ValueError("negative height")
                if not (_ge(h, self.height(i + 1, j)) and _ge(h, self.height(i, j + 1))):
                    raise ValueError(f"heights not weakly decreasing at ({i},{j})")

    def to_json(self) -> dict:
        return {
            "heights": [list(r) for r in self.heights],
            "legs": [p.to_json() for p in self.legs],
        }

    @classmethod
    def from_json(cls, data: dict) -> PlanePartition:
        legs = data.get("legs") or [[], [], []]
        return cls(tuple(tuple(r) for r in data["heights"]), tuple(Partition2D(p) for p in legs))


def _leg_extent(legs) -> int:
    lam, mu, nu = legs
    return max(len(lam), len(mu.conjugate()), len(nu), nu.part(0), 0)


def _trim(rows, legs) -> tuple:
    """Shrink the stored square while its outer rim agrees with the legs."""
    B = max([len(rows)] + [len(r) for r in rows])
    grid = [
        [
            (rows[i][j] if i < len(rows) and j < len(rows[i]) else leg_heights(legs, i, j))
            for j in range(B)
        ]
        for i in range(B)
    ]
    while B > 0:
        k = B - 1
        rim = [(k, j) for j in range(B)] + [(i, k) for i in range(k)]
        if all(grid[i][j] == leg_heights(legs, i, j) for i, j in rim):
            B -= 1
        else:
            break
    return tuple(tuple(grid[i][:B]) for i in range(B))


def renormalized_volume(pi: PlanePartition, N: int) -> int:
    """Boxes inside ``[0, N)^3`` minus ``N * (|lambda| + |mu| + |nu|)``.

    Evaluated at N and N + 1; raises :class:`StabilizationError` if the two differ.
    """

    def vol(n):
        total = 0
        for i in range(n):
            for j in range(n):
                h = pi.height(i, j)
                total += n if h is None else min(h, n)
        return total - n * sum(p.size for p in pi.legs)

    v1, v2 = vol(N), vol(N + 1)
    if v1 != v2:
        raise StabilizationError(f"not stabilized: volume {v1} at N={N} but {v2} at N={N + 1}")
    return v1


# enumeration ---------------------------------------------------------------


class _Grid:
    """Mutable heightfield on ``[0, R)^2`` used by the enumerators."""

    def __init__(self, legs, R):
        self.legs = legs
        self.R = R
        self.base = [[leg_heights(legs, i, j) for j in range(R)] for i in range(R)]
        self.h = [row[:] for row in self.base]

    def get(self, i, j):
        if i < 0 or j < 0:
            return None
        if i >= self.R or j >= self.R:
            return leg_heights(self.legs, i, j)
        return self.h[i][j]

    def addable(self):
        out = []
        for i in range(self.R):
            for j in range(self.R):
                h = self.h[i][j]
                if h is None:
                    continue
                if _lt(h, self.get(i - 1, j)) and _lt(h, self.get(i, j - 1)):
                    out.append((i, j, h))
        return out

    def last_removable(self):
        """Lexicographically largest box that is removable and not part of a leg."""
        for i in range(self.R - 1, -1, -1):
            for j in range(self.R - 1, -1, -1):
                h = self.h[i][j]
                if h is None or h == self.base[i][j]:
                    continue
                if not _ge(self.get(i + 1, j), h) and not _ge(self.get(i, j + 1), h):
                    return (i, j, h - 1)
        return None

    def snapshot(self) -> PlanePartition:
        return PlanePartition(tuple(tuple(r) for r in self.h), self.legs)


def _dfs(legs, max_extra: int):
    """Yield (extra_count, config) by reverse search over box additions.

    Each configuration is reached once: its parent removes the
    lexicographically largest removable non-leg box. Children are visited
    in lexicographic order of the added box.
    """
    R = _leg_extent(legs) + max_extra + 1
    g = _Grid(legs, R)

    def rec(depth):
        yield depth, g.snapshot()
        if depth == max_extra:
            return
        for i, j, k in g.addable():
            if i >= R - 1 or j >= R - 1:
                raise AssertionError("enumeration grid too small")
            g.h[i][j] = k + 1
            if g.last_removable() == (i, j, k):
                yield from rec(depth + 1)
            g.h[i][j] = k

    yield from rec(0)


def plane_partitions_by_size(nmax: int) -> list[list[PlanePartition]]:
    """Finite plane partitions grouped by size 0..nmax, each list in DFS order."""
    if nmax < 0:
        raise ValueError("n must be >= 0")
    out = [[] for _ in range(nmax + 1)]
    for n, pi in _dfs((EMPTY, EMPTY, EMPTY), nmax):
        out[n].append(pi)
    return out


def enumerate_plane_partitions(n: int) -> list[PlanePartition]:
    """All plane partitions of n, in reverse-search DFS order."""
    return plane_partitions_by_size(n)[n]


def enumerate_legged(legs, max_extra: int) -> list[tuple[int, PlanePartition]]:
    """Configurations containing the legs with at most max_extra added boxes."""
    legs = tuple(Partition2D(p) for p in legs)
    return list(_dfs(legs, max_extra))
