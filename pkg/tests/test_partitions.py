from fractions import Fraction
from math import factorial

import pytest

from dtcrystal.partitions import (
    Partition2D,
    dimension,
    enumerate_partitions,
    p_k,
    plancherel_weight,
)
from oracles import p_k_by_contents, partitions, syt_count


def test_enumeration_matches_oracle():
    for d in range(9):
        assert sorted(enumerate_partitions(d)) == sorted(Partition2D(p) for p in partitions(d))


def test_partition_validation():
    assert Partition2D((3, 1, 0)) == Partition2D((3, 1))
    with pytest.raises(ValueError):
        Partition2D((1, 2))
    with pytest.raises(ValueError):
        Partition2D((2, -1))


def test_conjugate():
    lam = Partition2D((4, 2, 1))
    assert lam.conjugate() == Partition2D((3, 2, 1, 1))
    assert lam.conjugate().conjugate() == lam
    assert lam.size == 7


def test_dimension_counts_tableaux():
    for d in range(1, 9):
        for lam in enumerate_partitions(d):
            assert dimension(lam) == syt_count(tuple(lam))


def test_plancherel_normalization():
    for d in range(1, 8):
        assert sum(plancherel_weight(lam) for lam in enumerate_partitions(d)) * factorial(d) == 1


def test_p_k_empty_partition_is_the_constant():
    assert p_k(Partition2D(()), 1) == Fraction(1, 2) * Fraction(-1, 12)
    assert p_k(Partition2D(()), 2) == 0


def test_p_k_matches_content_sum():
    for d in range(0, 6):
        for lam in enumerate_partitions(d):
            for k in range(1, 6):
                assert p_k(lam, k) == p_k_by_contents(tuple(lam), k)


def test_p_1_is_size_minus_one_twentyfourth():
    for lam in enumerate_partitions(5):
        assert p_k(lam, 1) == 5 - Fraction(1, 24)
