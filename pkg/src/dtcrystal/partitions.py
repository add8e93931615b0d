"""Ordinary partitions: enumeration, hook-length dimension, Plancherel
weight and the zeta-regularized power sums."""

from __future__ import annotations

from fractions import Fraction
from math import factorial, prod

from .exactq import zeta_negative

__all__ = [
    "Partition2D",
    "enumerate_partitions",
    "dimension",
    "plancherel_weight",
    "p_k",
]

HALF = Fraction(1, 2)


class Partition2D(tuple):
    """Weakly decreasing tuple of positive parts. Zero parts are stripped."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts if p != 0)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def conjugate(self) -> Partition2D:
        if not self:
            return Partition2D()
        return Partition2D(sum(1 for p in self if p > j) for j in range(self[0]))

    def cells(self):
        """Cells (row, col), 0-indexed."""
        return [(i, j) for i, p in enumerate(self) for j in range(p)]

    def part(self, i: int) -> int:
        """i-th part, 0-indexed, zero past the end."""
        return self[i] if i < len(self) else 0

    def __repr__(self):
        return f"Partition2D({list(self)})"

    def to_json(self) -> list:
        return list(self)


def enumerate_partitions(d: int) -> list[Partition2D]:
    """All partitions of d in lexicographically descending order."""
    if d < 0:
        raise ValueError("d must be >= 0")
    out = []

    def rec(remaining, cap, acc):
        if remaining == 0:
            out.append(Partition2D(acc))
            return
        for p in range(min(remaining, cap), 0, -1):
            acc.append(p)
            rec(remaining - p, p, acc)
            acc.pop()

    rec(d, d, [])
    return out


def dimension(lam: Partition2D) -> int:
    """Number of standard Young tableaux of shape lam, by the hook-length formula."""
    lam = Partition2D(lam)
    conj = lam.conjugate()
    hooks = prod(lam[i] - j + conj[j] - i - 1 for i, j in lam.cells())
    return factorial(lam.size) // hooks


def plancherel_weight(lam: Partition2D) -> Fraction:
    """``(dim lam / |lam|!)**2``."""
    lam = Partition2D(lam)
    return Fraction(dimension(lam), factorial(lam.size)) ** 2


def p_k(lam: Partition2D, k: int) -> Fraction:
    """Regularized power sum ``sum_i (lam_i - i + 1/2)^k``.

    The divergent tail is replaced by its zeta value, so only rows with a
    positive part contribute to the finite sum.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lam = Partition2D(lam)
    s = Fraction(0)
    for i, part in enumerate(lam, start=1):
        s += (part - i + HALF) ** k - (-i + HALF) ** k
    return s + (1 - Fraction(1, 2**k)) * zeta_negative(k)
