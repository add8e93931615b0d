"""Gromov-Witten side at desk scale: Plancherel descendent sums for P^1,
the degree-0 series and the small-u expansion of ln M(e^-u)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import PrecisionGuardError
from .exactq import QSeries, mcmahon, series_pow, zeta_negative
from .partitions import enumerate_partitions, p_k, plancherel_weight

__all__ = [
    "DescendentQuery",
    "descendent_p1",
    "degree0_dt_series",
    "asymptotic_coefficient",
    "mcmahon_asymptotics",
    "e3_thermodynamic",
    "zeta3",
    "ZETA_PRIME_MINUS_1",
]

# zeta'(-1) = 1/12 - ln(Glaisher's constant); cross-checked in the tests
# against an Euler-Maclaurin evaluation and mpmath.
ZETA_PRIME_MINUS_1 = -0.16542114370045092921

GUARD = 30.0


@dataclass(frozen=True)
class DescendentQuery:
    degree: int
    insertions: tuple = field(default=())

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        ins = tuple(int(k) for k in self.insertions)
        if any(k < 0 for k in ins):
            raise ValueError("descendent insertions must be >= 0")
        object.__setattr__(self, "insertions", ins)


def descendent_p1(query: DescendentQuery) -> Fraction:
    """Disconnected degree-d descendents of the point class on P^1.

    ``sum_{|lam|=d} (dim lam / d!)^2 prod_i p_{k_i+1}(lam) / (k_i+1)!``
    """
    total = Fraction(0)
    for lam in enumerate_partitions(query.degree):
        term = plancherel_weight(lam)
        for k in query.insertions:
            term *= p_k(lam, k + 1) / factorial(k + 1)
        total += term
    return total


def degree0_dt_series(m, trunc: int) -> QSeries:
    """``M(-q)^m`` for rational m."""
    return series_pow(mcmahon(trunc).negate_q(), Fraction(m))


def asymptotic_coefficient(g: int) -> Fraction:
    """``zeta(3-2g) zeta(1-2g) / (2g-2)!`` for g >= 2."""
    if g < 2:
        raise ValueError("exact coefficients exist for g >= 2 only")
    return zeta_negative(2 * g - 3) * zeta_negative(2 * g - 1) / factorial(2 * g - 2)


def zeta3(tol: float = 1e-12) -> float:
    """zeta(3) from its defining series plus an Euler-Maclaurin tail."""
    N = max(10, int(tol ** -0.25) + 1)
    head = math.fsum(1.0 / n**3 for n in range(1, N))
    tail = 1 / (2 * N**2) + 1 / (2 * N**3) + 1 / (4 * N**4)
    return head + tail


def _ln_mcmahon(u: float, trunc: int) -> float:
    n = np.arange(1, trunc + 1, dtype=float)
    return math.fsum((-n * np.log1p(-np.exp(-n * u))).tolist())


def mcmahon_asymptotics(u: float, g_max: int, trunc: int | None = None) -> dict:
    """Compare ln M(e^-u) with partial sums of its small-u expansion.

    Rows are g = 0 (zeta(3)/u^2), g = 1 (the regularized
    ``s/12 ln u + zeta'(-1)``) and g = 2..g_max. The sign s of the log
    term is chosen by which one leaves the smaller residual and is
    reported, not assumed.
    """
    if u <= 0:
        raise PrecisionGuardError("u must be positive")
    if trunc is None:
        # tail of the product ~ e^(-trunc*u); 2*GUARD keeps it far below double rounding
        trunc = math.ceil(2 * GUARD / u) + 1
    if trunc * u < GUARD:
        raise PrecisionGuardError(f"trunc*u = {trunc * u:.3g} < {GUARD}; product tail not negligible")
    exact = _ln_mcmahon(u, trunc)
    g0 = zeta3() / u**2
    fits = {s: abs(exact - (g0 + s * math.log(u) / 12 + ZETA_PRIME_MINUS_1)) for s in (1, -1)}
    sign = min(fits, key=lambda s: (fits[s], -s))
    rows = []
    partial = g0
    rows.append({"u": u, "g": 0, "partial_sum": partial, "residual": exact - partial})
    partial += sign * math.log(u) / 12 + ZETA_PRIME_MINUS_1
    rows.append({"u": u, "g": 1, "partial_sum": partial, "residual": exact - partial})
    coeffs = {}
    for g in range(2, g_max + 1):
        c = asymptotic_coefficient(g)
        coeffs[g] = f"{c.numerator}/{c.denominator}"
        partial += float(c) * u ** (2 * g - 2)
        rows.append({"u": u, "g": g, "partial_sum": partial, "residual": exact - partial})
    return {
        "u": u,
        "trunc": trunc,
        "ln_M": exact,
        "log_term_sign": sign,
        "coefficients": coeffs,
        "rows": rows,
    }


def e3_thermodynamic(x: float, terms: int) -> tuple[float, float]:
    """``(E_3(x) * (-ln x)^3, 2 zeta(3))``; the first tends to the second as x -> 1."""
    if not 0 < x < 1:
        raise PrecisionGuardError("x must lie in (0, 1)")
    u = -math.log(x)
    if terms * u < GUARD:
        raise PrecisionGuardError(f"terms*(-ln x) = {terms * u:.3g} < {GUARD}")
    n = np.arange(1, terms + 1, dtype=float)
    # sum_n n^2 x^n / (1 - x^n); expm1 overflows to inf harmlessly for the far tail
    with np.errstate(over="ignore"):
        e3 = math.fsum((n * n / np.expm1(n * u)).tolist())
    return e3 * u**3, 2 * zeta3()
