from fractions import Fraction
from itertools import permutations, product

import pytest

from dtcrystal.crystal import (
    PlanePartition,
    TorusWeights,
    cy_direction,
    enumerate_plane_partitions,
    evaluate_weight,
    gamma,
    interaction_factor,
    legged_counting_series,
    minimal_volume,
    plane_partitions_by_size,
    renormalized_volume,
    vertex_character,
    vertex_series,
    weight,
)
from dtcrystal.crystal.vertex import box_character
from dtcrystal.errors import GenericityError, StabilizationError
from dtcrystal.exactq import QSeries, mcmahon, series_pow
from dtcrystal.partitions import Partition2D
from oracles import boxed_plane_partitions, character_by_division

E = Partition2D(())


@pytest.fixture(scope="module")
def box4():
    return boxed_plane_partitions(4)


# plane partitions ------------------------------------------------------------


def test_enumeration_matches_boxed_bruteforce(box4):
    for n in range(5):
        brute = {m for m in box4 if sum(map(sum, m)) == n}
        ours = set()
        for pi in enumerate_plane_partitions(n):
            rows = [list(r) + [0] * (4 - len(r)) for r in pi.heights]
            rows += [[0] * 4] * (4 - len(rows))
            ours.add(tuple(tuple(r) for r in rows))
        assert ours == brute
        assert len(enumerate_plane_partitions(n)) == len(set(enumerate_plane_partitions(n)))


def test_counts_match_mcmahon():
    layers = plane_partitions_by_size(9)
    assert [len(l) for l in layers] == [int(c) for c in mcmahon(9).coeffs]


def test_validation():
    with pytest.raises(ValueError):
        PlanePartition(((1, 2),))
    with pytest.raises(ValueError):
        PlanePartition(((1,), (2,)))
    assert PlanePartition(((2, 0), (0,))) == PlanePartition(((2,),))


def test_boxes_roundtrip_and_json():
    pi = PlanePartition(((3, 1), (1,)))
    assert pi.size == 5
    assert PlanePartition.from_boxes(pi.boxes()) == pi
    assert PlanePartition.from_json(pi.to_json()) == pi
    assert (0, 0, 2) in pi and (1, 1, 0) not in pi


def test_permute_axes_is_a_bijection_on_layers():
    layer = set(enumerate_plane_partitions(5))
    for p in permutations(range(3)):
        assert {pi.permute_axes(p) for pi in layer} == layer


# vertex character and weights -------------------------------------------------


def test_character_matches_series_division():
    for n in range(6):
        for pi in enumerate_plane_partitions(n):
            assert dict(vertex_character(pi).terms) == character_by_division(pi.boxes())


def test_character_of_single_box():
    pi = PlanePartition(((1,),))
    assert dict(box_character(pi).terms) == {(0, 0, 0): 1}
    assert dict(vertex_character(pi).terms) == {
        (-1, 0, 0): 1, (0, -1, 0): 1, (0, 0, -1): 1,
        (-1, -1, 0): -1, (-1, 0, -1): -1, (0, -1, -1): -1,
    }


def test_legged_character_rejected():
    pi = PlanePartition((), (Partition2D((1,)), E, E))
    with pytest.raises(ValueError, match="legged"):
        box_character(pi)


def test_single_box_weights():
    w = weight(PlanePartition(((1,),)))
    assert w.chi == 1
    assert evaluate_weight(w, TorusWeights.of("1,2,5")) == Fraction(63, 5)
    assert evaluate_weight(w, TorusWeights.of("1,1,-2")) == -1
    assert evaluate_weight(weight(PlanePartition(())), TorusWeights.of("1,2,5")) == 1


def test_pole_raises_genericity_error():
    pi = PlanePartition(((1, 1), (1,)))
    with pytest.raises(GenericityError, match="non-generic"):
        evaluate_weight(weight(pi), TorusWeights.of("1,2,5"))
    with pytest.raises(GenericityError):
        gamma(TorusWeights.of("0,1,2"))


def test_weights_symmetric_under_axis_permutation():
    t = TorusWeights.of("1,13,171")
    for n in range(6):
        for pi in enumerate_plane_partitions(n):
            w = evaluate_weight(weight(pi), t)
            for p in permutations(range(3)):
                assert evaluate_weight(weight(pi.permute_axes(p)), t.permuted(p)) == w


def test_interaction_factor_example():
    t = TorusWeights.of("1,2,5")
    assert interaction_factor((1, 0, 0), (0, 0, 0), t) == Fraction(56, 81)
    with pytest.raises(GenericityError, match="singular pair"):
        interaction_factor((1, 1, 0), (1, 1, 0), t)


def test_interaction_factor_cy_inverse_pairs():
    t = TorusWeights.of("1,1,-2")
    cube = list(product(range(3), repeat=3))
    checked = 0
    for a in cube:
        for b in cube:
            try:
                u = interaction_factor(a, b, t) * interaction_factor(b, a, t)
            except GenericityError:
                continue
            assert u == 1
            checked += 1
    assert checked > 100


def test_cy_weights_are_uniform():
    for t in (TorusWeights.of("1,1,-2"), TorusWeights.of("2,3,-5"), TorusWeights.of("1/2,1/3,-5/6")):
        for n in range(6):
            for pi in enumerate_plane_partitions(n):
                v = evaluate_weight(weight(pi), t, along=cy_direction(n))
                assert v == (-1) ** n


# McMahon identity -------------------------------------------------------------


def test_vertex_series_rational_weights():
    t = TorusWeights.of("1/2,3/7,-11/5")
    target = series_pow(mcmahon(5).negate_q(), -gamma(t))
    assert vertex_series(t, 5) == target


def test_vertex_series_first_coefficient_is_gamma():
    t = TorusWeights.of("2,3,11")
    assert vertex_series(t, 1)[1] == gamma(t)


def test_vertex_series_cy_is_mcmahon():
    assert vertex_series(TorusWeights.of("1,1,-2"), 6) == mcmahon(6).negate_q()


# legged configurations ----------------------------------------------------------


def _hooks(lam):
    conj = lam.conjugate()
    return [lam[i] - j + conj[j] - i - 1 for i, j in lam.cells()]


@pytest.mark.parametrize("parts", [(1,), (2,), (1, 1), (2, 1), (3, 1, 1)])
def test_one_leg_series(parts):
    lam = Partition2D(parts)
    expected = mcmahon(7)
    for h in _hooks(lam):
        expected = expected / (1 - QSeries.monomial(h, 1, 7))
    for legs in ((lam, E, E), (E, lam, E), (E, E, lam)):
        assert legged_counting_series(*legs, 7) == expected


def test_cyclic_symmetry():
    a, b, c = Partition2D((2, 1)), Partition2D((1,)), Partition2D((2,))
    top = minimal_volume((a, b, c)) + 3
    s = legged_counting_series(a, b, c, top)
    assert legged_counting_series(b, c, a, top) == s
    assert legged_counting_series(c, a, b, top) == s


def _legged_bruteforce(legs, box4, extra):
    lam, mu, nu = legs
    N = 4
    conj_mu = mu.conjugate()

    def base(i, j):
        if j < nu.part(i):
            return None
        return max(lam.part(j), conj_mu.part(i))

    counts = {}
    for m in box4:
        ok = True
        for i in range(N):
            for j in range(N):
                b = base(i, j)
                if (b is None and m[i][j] != N) or (b is not None and m[i][j] < b):
                    ok = False
        if not ok:
            continue
        v = sum(map(sum, m)) - N * (lam.size + mu.size + nu.size)
        counts[v] = counts.get(v, 0) + 1
    return counts


@pytest.mark.parametrize(
    "legs",
    [((1,), (), ()), ((1,), (1,), ()), ((1,), (1,), (1,)), ((2,), (1,), ()), ((), (1, 1), (1,))],
)
def test_legged_against_boxed_bruteforce(legs, box4):
    legs = tuple(Partition2D(p) for p in legs)
    v0 = minimal_volume(legs)
    s = legged_counting_series(*legs, v0 + 2)
    brute = _legged_bruteforce(legs, box4, 2)
    for v in range(v0, v0 + 3):
        assert s[v] == brute.get(v, 0)


def test_minimal_volume_examples():
    one = Partition2D((1,))
    assert minimal_volume((one, E, E)) == 0
    assert minimal_volume((one, one, E)) == -1
    assert minimal_volume((one, one, one)) == -2


def test_legged_trunc_below_minimal_volume():
    one = Partition2D((1,))
    with pytest.raises(ValueError):
        legged_counting_series(one, one, one, -3)


def test_renormalized_volume_needs_large_cube():
    one = Partition2D((1,))
    pi = PlanePartition(((2, 1, 1), (1,)), (one, E, E))
    assert renormalized_volume(pi, 5) == 3
    with pytest.raises(StabilizationError, match="not stabilized"):
        renormalized_volume(PlanePartition(((3,),)), 1)
