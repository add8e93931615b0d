"""Chern-character observables ch_k(pi) and their vertex-measure averages."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .crystal.plane import PlanePartition, plane_partitions_by_size
from .crystal.vertex import TorusWeights, layer_sum
from .exactq import QSeries, eisenstein_odd, q_ddq

__all__ = [
    "ChVector",
    "ch",
    "ch_ratio_oracle",
    "expectation_ch",
    "expected_volume",
    "ch3_closed_form",
    "ch4_closed_form",
    "differential_algebra_report",
]


@dataclass(frozen=True)
class ChVector:
    values: tuple

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


def _exp_series(c: Fraction, kmax: int) -> list:
    """Coefficients of e^(c*alpha) through alpha^kmax."""
    out = [Fraction(1)]
    for n in range(1, kmax + 1):
        out.append(out[-1] * c / n)
    return out


def _poly_mul(a: list, b: list, kmax: int) -> list:
    out = [Fraction(0)] * (kmax + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), kmax + 1 - i)):
                out[i + j] += x * b[j]
    return out


def ch(pi: PlanePartition, t: TorusWeights, kmax: int) -> ChVector:
    """alpha-coefficients of ``1 - Q(e^alpha) prod_i (1 - e^(alpha t_i))``, Q the box character."""
    Q = [Fraction(0)] * (kmax + 1)
    for box in pi.boxes():
        for n, c in enumerate(_exp_series(t.T(box), kmax)):
            Q[n] += c
    prod = Q
    for ti in t:
        e = _exp_series(ti, kmax)
        prod = _poly_mul(prod, [1 - e[0]] + [-x for x in e[1:]], kmax)
    vals = [-x for x in prod]
    vals[0] += 1
    return ChVector(tuple(vals))


def ch_ratio_oracle(pi: PlanePartition, t: TorusWeights, kmax: int) -> ChVector:
    """Independent route: divide the Laurent alpha-series R_pi(e^alpha) by R_empty(e^alpha).

    R_empty = prod 1/(1 - e^(alpha t_i)) is built by inverting each factor
    as a Laurent series; R_pi = R_empty - Q.
    """
    prec = kmax + 3
    R0 = QSeries.one(prec)
    for ti in t:
        one_minus = QSeries.from_coeffs([0] + [-ti**n / factorial(n) for n in range(1, prec + 2)], prec + 1)
        R0 = R0 * (1 / one_minus)
    Q = QSeries.zero(R0.trunc)
    for box in pi.boxes():
        T = t.T(box)
        Q = Q + QSeries.from_coeffs([T**n / factorial(n) for n in range(R0.trunc + 1)], R0.trunc)
    ratio = (R0 - Q) / R0
    return ChVector(tuple(ratio[k] for k in range(kmax + 1)))


def _ch_factor(k):
    return lambda pi, t: ch(pi, t, k)[k]


def expectation_ch(k: int, t: TorusWeights, trunc: int) -> QSeries:
    """``sum w(pi) ch_k(pi) / sum w(pi)`` as a q-series through q^trunc."""
    layers = plane_partitions_by_size(trunc)
    den = QSeries(0, tuple(layer_sum(l, t) for l in layers), trunc)
    num = QSeries(0, tuple(layer_sum(l, t, _ch_factor(k), k) for l in layers), trunc)
    return num / den


def expected_volume(t: TorusWeights, trunc: int) -> QSeries:
    """``<|pi|>_w``, i.e. ``<ch_3> / (t1 t2 t3)``."""
    return expectation_ch(3, t, trunc) / (t.t1 * t.t2 * t.t3)


def _sym(t):
    t1, t2, t3 = t
    return (t1 + t2) * (t1 + t3) * (t2 + t3)


def ch3_closed_form(t: TorusWeights, trunc: int) -> QSeries:
    """``-(t1+t2)(t1+t3)(t2+t3) E_3(-q)``."""
    return eisenstein_odd(1, trunc).negate_q() * (-_sym(t))


def ch4_closed_form(t: TorusWeights, trunc: int) -> QSeries:
    """``-1/2 (t1+t2)(t1+t3)(t2+t3)(t1+t2+t3) q d/dq E_3(-q)``."""
    return q_ddq(eisenstein_odd(1, trunc).negate_q()) * (-Fraction(1, 2) * _sym(t) * sum(t))


# differential-algebra exploration ------------------------------------------


def _generators(max_weight: int, trunc: int) -> dict:
    """``D^j E_{2i+1}(-q)`` with weight 2i+1+2j <= max_weight, D = q d/dq."""
    gens = {}
    for i in range(1, (max_weight - 1) // 2 + 1):
        E = eisenstein_odd(i, trunc).negate_q()
        j = 0
        while 2 * i + 1 + 2 * j <= max_weight:
            prefix = f"D^{j}" if j > 1 else "D" * j
            name = f"{prefix}E{2 * i + 1}"
            gens[name] = (2 * i + 1 + 2 * j, E)
            E = q_ddq(E)
            j += 1
    return gens


def differential_basis(max_weight: int, trunc: int) -> dict:
    """Monomials in the generators of total weight <= max_weight, by name.

    The basis is fixed by this rule so the exploration is reproducible.
    """
    gens = _generators(max_weight, trunc)
    names = sorted(gens, key=lambda n: (gens[n][0], n))
    basis = {}
    for r in range(1, max_weight // 3 + 1):
        for combo in combinations_with_replacement(names, r):
            wsum = sum(gens[n][0] for n in combo)
            if wsum > max_weight:
                continue
            s = QSeries.one(trunc)
            for n in combo:
                s = s * gens[n][1]
            basis["*".join(combo)] = s.retruncate(trunc, 0)
    return basis


def solve_exact(columns: list, target: list):
    """Solve ``sum_i x_i columns[i] = target`` over Q. Returns (solution or None, rank)."""
    n = len(columns)
    m = len(target)
    rows = [[Fraction(columns[i][r]) for i in range(n)] + [Fraction(target[r])] for r in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][n] != 0 for i in range(r, m)):
        return None, r
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][n]
    return x, r


def differential_algebra_report(k: int, t: TorusWeights, trunc: int, max_weight: int | None = None) -> dict:
    """Try to write ``<ch_k>`` as a rational combination of the fixed basis.

    This is an exploration, not a check: a fit is only evidence, and
    no-fit means only that this particular basis does not suffice.
    """
    if max_weight is None:
        max_weight = 2 * k - 3
    target = expectation_ch(k, t, trunc)
    basis = differential_basis(max_weight, trunc)
    names = list(basis)
    cols = [[basis[nm][e] for e in range(1, trunc + 1)] for nm in names]
    rhs = [target[e] for e in range(1, trunc + 1)]
    sol, rank = solve_exact(cols, rhs)
    report = {
        "k": k,
        "t": [str(x) for x in t],
        "trunc": trunc,
        "max_weight": max_weight,
        "basis": names,
        "equations": trunc,
        "rank": rank,
        "fit": sol is not None,
        "overdetermined": trunc > rank,
        "series": target.to_json(),
    }
    if sol is not None:
        report["coefficients"] = {nm: f"{c.numerator}/{c.denominator}" for nm, c in zip(names, sol) if c}
    return report
