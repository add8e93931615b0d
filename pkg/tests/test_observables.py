from fractions import Fraction

import pytest

from dtcrystal.crystal import PlanePartition, TorusWeights, enumerate_plane_partitions
from dtcrystal.exactq import eisenstein_odd
from dtcrystal.observables import (
    ch,
    ch3_closed_form,
    ch4_closed_form,
    ch_ratio_oracle,
    differential_algebra_report,
    differential_basis,
    expectation_ch,
    expected_volume,
    solve_exact,
)

T125 = TorusWeights.of("1,2,5")


def test_ch_matches_ratio_oracle():
    for t in (T125, TorusWeights.of("1/2,3/7,-11/5")):
        for n in range(5):
            for pi in enumerate_plane_partitions(n):
                assert ch(pi, t, 5).values == ch_ratio_oracle(pi, t, 5).values


def test_ch_low_degrees():
    # ch_0 = 1, ch_1 = ch_2 = 0 and ch_3 = t1 t2 t3 |pi|
    for pi in enumerate_plane_partitions(4):
        v = ch(pi, T125, 3)
        assert v[0] == 1
        assert v[1] == v[2] == 0
        assert v[3] == 10 * pi.size


def test_ch_of_empty():
    assert ch(PlanePartition(()), T125, 6).values == (1,) + (0,) * 6


def test_expected_volume_closed_form():
    for t in (T125, TorusWeights.of("1,3,-7")):
        t1, t2, t3 = t
        gam = (t1 + t2) * (t1 + t3) * (t2 + t3) / (t1 * t2 * t3)
        assert expected_volume(t, 4) == eisenstein_odd(1, 4).negate_q() * (-gam)


@pytest.mark.parametrize("t", ["1,2,5", "1/2,3/7,-11/5"])
def test_ch3_ch4_closed_forms(t):
    t = TorusWeights.of(t)
    assert expectation_ch(3, t, 4) == ch3_closed_form(t, 4)
    assert expectation_ch(4, t, 4) == ch4_closed_form(t, 4)


def test_solve_exact():
    x, rank = solve_exact([[1, 0, 1], [0, 1, 1]], [2, 3, 5])
    assert x == [2, 3] and rank == 2
    x, rank = solve_exact([[1, 0, 1], [0, 1, 1]], [2, 3, 6])
    assert x is None


def test_basis_is_named_by_weight():
    names = list(differential_basis(7, 4))
    assert {"E3", "E5", "E7", "DE3", "D^2E3", "DE5", "E3*E3"} <= set(names)


def test_ch4_fit_is_found():
    rep = differential_algebra_report(4, T125, 6)
    assert rep["fit"] and rep["overdetermined"]
    assert rep["coefficients"] == {"DE3": "-504/1"}


def test_ch5_report_at_125():
    rep = differential_algebra_report(5, T125, 9)
    assert rep["overdetermined"]
    assert rep["fit"]
    assert rep["coefficients"] == {"E5": "-987/2", "D^2E3": "-672/1"}
