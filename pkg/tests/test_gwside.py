import math
from fractions import Fraction

import mpmath
import pytest

from dtcrystal.errors import PrecisionGuardError
from dtcrystal.exactq import QSeries
from dtcrystal.gwside import (
    ZETA_PRIME_MINUS_1,
    DescendentQuery,
    asymptotic_coefficient,
    degree0_dt_series,
    descendent_p1,
    e3_thermodynamic,
    mcmahon_asymptotics,
    zeta3,
)
from oracles import descendent_bruteforce, zeta_neg


def test_descendent_values():
    assert descendent_p1(DescendentQuery(1, (0,))) == Fraction(23, 24)
    assert descendent_p1(DescendentQuery(0, ())) == 1
    assert descendent_p1(DescendentQuery(1, ())) == 1
    assert descendent_p1(DescendentQuery(2, ())) == Fraction(1, 2)


@pytest.mark.parametrize("d", range(5))
def test_descendents_against_bruteforce(d):
    for ks in [(), (0,), (1,), (2,), (0, 0), (1, 2), (3,), (4,)]:
        assert descendent_p1(DescendentQuery(d, ks)) == descendent_bruteforce(d, list(ks))


def test_descendent_query_validation():
    with pytest.raises(ValueError):
        DescendentQuery(-1)
    with pytest.raises(ValueError):
        DescendentQuery(1, (-1,))


def test_degree0_series():
    s = degree0_dt_series(1, 3)
    assert list(s.coeffs) == [1, -1, 3, -6]
    assert degree0_dt_series(0, 4) == QSeries.one(4)
    half = degree0_dt_series(Fraction(1, 2), 5)
    assert half * half == degree0_dt_series(1, 5)


def test_asymptotic_coefficients():
    assert asymptotic_coefficient(2) == Fraction(-1, 2880)
    assert asymptotic_coefficient(3) == Fraction(-1, 725760)
    for g in range(2, 7):
        assert asymptotic_coefficient(g) == zeta_neg(2 * g - 3) * zeta_neg(2 * g - 1) / math.factorial(2 * g - 2)
    with pytest.raises(ValueError):
        asymptotic_coefficient(1)


def _zeta_prime_minus_1_euler_maclaurin(n=100):
    # sum_{k<=n} k ln k = (n^2/2 + n/2 + 1/12) ln n - n^2/4 + ln A + 1/(720 n^2) + O(n^-4)
    s = math.fsum(k * math.log(k) for k in range(2, n + 1))
    ln_a = s - (n * n / 2 + n / 2 + 1 / 12) * math.log(n) + n * n / 4 - 1 / (720 * n * n)
    return 1 / 12 - ln_a


def test_zeta_prime_minus_one():
    assert abs(ZETA_PRIME_MINUS_1 - float(mpmath.zeta(-1, derivative=1))) < 1e-15
    assert abs(ZETA_PRIME_MINUS_1 - _zeta_prime_minus_1_euler_maclaurin()) < 1e-10


def test_zeta3():
    assert abs(zeta3() - float(mpmath.zeta(3))) < 1e-12


def test_asymptotic_residuals_shrink():
    rep = mcmahon_asymptotics(0.3, 4)
    res = [abs(r["residual"]) for r in rep["rows"]]
    assert all(a > b for a, b in zip(res, res[1:]))
    assert rep["log_term_sign"] == 1
    assert res[3] < 1e-10


def test_asymptotics_against_mpmath():
    u = 0.3
    direct = float(mpmath.nsum(lambda n: -n * mpmath.log(1 - mpmath.exp(-n * u)), [1, mpmath.inf]))
    assert abs(mcmahon_asymptotics(u, 2)["ln_M"] - direct) < 1e-10


def test_precision_guard():
    with pytest.raises(PrecisionGuardError):
        mcmahon_asymptotics(0.3, 2, trunc=10)
    with pytest.raises(PrecisionGuardError):
        mcmahon_asymptotics(-1.0, 2)
    with pytest.raises(PrecisionGuardError):
        e3_thermodynamic(0.5, 3)


def test_thermodynamic_limit_approach():
    gaps = []
    for x in (0.8, 0.9, 0.95, 0.98):
        val, target = e3_thermodynamic(x, 200_000)
        gaps.append(abs(val - target))
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3 * target
