"""Truncated Laurent series in q with exact rational coefficients.

A :class:`QSeries` is known modulo ``q**(trunc + 1)``; every operation
carries the truncation order along and never reports coefficients it
cannot vouch for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .errors import NonInvertibleError

__all__ = [
    "QSeries",
    "series_mul",
    "series_inv",
    "series_log",
    "series_exp",
    "series_pow",
    "mcmahon",
    "eisenstein_odd",
    "q_ddq",
    "bernoulli",
    "zeta_negative",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("QSeries coefficients must be exact, got float")
    return Fraction(x)


@dataclass(frozen=True)
class QSeries:
    """``sum(coeffs[i] * q**(min_exp + i)) + O(q**(trunc + 1))``."""

    min_exp: int
    coeffs: tuple
    trunc: int

    def __post_init__(self):
        coeffs = tuple(_frac(c) for c in self.coeffs)
        if self.trunc < self.min_exp - 1:
            raise ValueError("trunc must be >= min_exp - 1")
        if len(coeffs) != self.trunc - self.min_exp + 1:
            raise ValueError(
                f"expected {self.trunc - self.min_exp + 1} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    # construction -----------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, trunc: int | None = None, min_exp: int = 0) -> QSeries:
        """Build from a coefficient list, padding with zeros up to ``trunc``."""
        coeffs = list(coeffs)
        if trunc is None:
            trunc = min_exp + len(coeffs) - 1
        n = trunc - min_exp + 1
        coeffs = coeffs[:n] + [0] * max(0, n - len(coeffs))
        return cls(min_exp, tuple(coeffs), trunc)

    @classmethod
    def from_dict(cls, terms: dict, trunc: int) -> QSeries:
        """Build from ``{exponent: coefficient}``; exponents above trunc are dropped."""
        lo = min([e for e in terms if e <= trunc], default=0)
        lo = min(lo, 0)
        out = [Fraction(0)] * (trunc - lo + 1)
        for e, c in terms.items():
            if e <= trunc:
                out[e - lo] += c
        return cls(lo, tuple(out), trunc)

    @classmethod
    def one(cls, trunc: int) -> QSeries:
        return cls.monomial(0, 1, trunc)

    @classmethod
    def zero(cls, trunc: int) -> QSeries:
        return cls.from_coeffs([], trunc, min(0, trunc + 1))

    @classmethod
    def monomial(cls, exp: int, coeff, trunc: int) -> QSeries:
        if exp > trunc:
            return cls.zero(trunc)
        lo = min(exp, 0)
        out = [0] * (trunc - lo + 1)
        out[exp - lo] = coeff
        return cls(lo, tuple(out), trunc)

    # inspection -------------------------------------------------------

    def __getitem__(self, n: int) -> Fraction:
        if n > self.trunc:
            raise IndexError(f"coefficient of q^{n} is beyond trunc {self.trunc}")
        if n < self.min_exp:
            return Fraction(0)
        return self.coeffs[n - self.min_exp]

    def valuation(self) -> int | None:
        """Lowest exponent with a nonzero coefficient, or None for the zero series."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.min_exp + i
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def terms(self) -> dict:
        return {self.min_exp + i: c for i, c in enumerate(self.coeffs) if c}

    def normalized(self) -> QSeries:
        """Same series with min_exp = min(0, valuation)."""
        v = self.valuation()
        lo = 0 if v is None else min(v, 0)
        return self.retruncate(self.trunc, lo)

    def retruncate(self, trunc: int, min_exp: int | None = None) -> QSeries:
        """Drop precision to ``trunc`` (never raise it) and optionally re-anchor min_exp."""
        if trunc > self.trunc:
            raise ValueError("cannot raise truncation order")
        lo = self.min_exp if min_exp is None else min_exp
        v = self.valuation()
        if v is not None and v < lo and v <= trunc:
            raise ValueError("min_exp would drop nonzero coefficients")
        return QSeries(lo, tuple(self[n] for n in range(lo, trunc + 1)), trunc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.trunc != other.trunc:
            return False
        lo = min(self.min_exp, other.min_exp)
        return all(self[n] == other[n] for n in range(lo, self.trunc + 1))

    def __hash__(self):
        return hash((self.trunc, tuple(sorted(self.terms().items()))))

    def __repr__(self) -> str:
        parts = [f"{c}*q^{e}" for e, c in sorted(self.terms().items())]
        return f"QSeries({' + '.join(parts) or '0'} + O(q^{self.trunc + 1}))"

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> QSeries:
        if isinstance(other, QSeries):
            return other
        return QSeries.monomial(0, _frac(other), self.trunc)

    def __add__(self, other) -> QSeries:
        other = self._coerce(other)
        trunc = min(self.trunc, other.trunc)
        lo = min(self.min_exp, other.min_exp, trunc + 1)
        return QSeries(lo, tuple(self[n] + other[n] for n in range(lo, trunc + 1)), trunc)

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries(self.min_exp, tuple(-c for c in self.coeffs), self.trunc)

    def __sub__(self, other) -> QSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> QSeries:
        return self._coerce(other) - self

    def __mul__(self, other) -> QSeries:
        if isinstance(other, QSeries):
            return series_mul(self, other)
        c = _frac(other)
        return QSeries(self.min_exp, tuple(c * x for x in self.coeffs), self.trunc)

    __rmul__ = __mul__

    def __truediv__(self, other) -> QSeries:
        if isinstance(other, QSeries):
            return series_mul(self, series_inv(other))
        return self * (1 / _frac(other))

    def __rtruediv__(self, other) -> QSeries:
        return series_inv(self) * _frac(other)

    def __pow__(self, r) -> QSeries:
        return series_pow(self, r)

    def shift(self, k: int) -> QSeries:
        """Multiply by q**k."""
        return QSeries(self.min_exp + k, self.coeffs, self.trunc + k)

    def negate_q(self) -> QSeries:
        """Substitute q -> -q."""
        return QSeries(
            self.min_exp,
            tuple(c if (self.min_exp + i) % 2 == 0 else -c for i, c in enumerate(self.coeffs)),
            self.trunc,
        )

    # serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "min_exp": self.min_exp,
            "trunc": self.trunc,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> QSeries:
        return cls(int(data["min_exp"]), tuple(Fraction(c) for c in data["coeffs"]), int(data["trunc"]))


def _split(a: QSeries):
    """Return (v, unit coefficients, precision) with a = q^v * (u0 + u1 q + ...)."""
    v = a.valuation()
    if v is None:
        raise NonInvertibleError("non-invertible leading term: series is zero to its precision")
    return v, [a[n] for n in range(v, a.trunc + 1)], a.trunc - v


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Product; result is exact modulo the smaller shifted precision."""
    va, vb = a.valuation(), b.valuation()
    # a series that vanishes to its precision has effective valuation trunc + 1
    ea = a.trunc + 1 if va is None else va
    eb = b.trunc + 1 if vb is None else vb
    trunc = min(a.trunc + eb, b.trunc + ea)
    if va is None or vb is None:
        return QSeries.zero(trunc)
    lo = va + vb
    n = trunc - lo + 1
    ac = [a[e] for e in range(va, va + n)]
    bc = [b[e] for e in range(vb, vb + n)]
    out = [Fraction(0)] * n
    for i, x in enumerate(ac):
        if not x:
            continue
        for j in range(n - i):
            y = bc[j]
            if y:
                out[i + j] += x * y
    res = QSeries(lo, tuple(out), trunc)
    return res.normalized() if lo > 0 else res


def _unit_inverse(u: list, prec: int) -> list:
    u0 = u[0]
    inv = [Fraction(0)] * (prec + 1)
    inv[0] = 1 / u0
    for n in range(1, prec + 1):
        s = Fraction(0)
        for k in range(1, n + 1):
            if u[k]:
                s += u[k] * inv[n - k]
        inv[n] = -s / u0
    return inv


def series_inv(a: QSeries) -> QSeries:
    """Multiplicative inverse of a series with a nonzero leading coefficient."""
    v, u, prec = _split(a)
    inv = _unit_inverse(u, prec)
    trunc = prec - v
    return QSeries.from_dict({n - v: c for n, c in enumerate(inv)}, trunc)


def _require_unit_constant(a: QSeries, what: str):
    v = a.valuation()
    if v != 0 or a[0] != 1:
        raise NonInvertibleError(f"non-invertible leading term: {what} needs constant term 1")
    if a.trunc < 0:
        raise NonInvertibleError("non-invertible leading term: no constant term known")


def series_log(a: QSeries) -> QSeries:
    """Logarithm of a series with constant term 1."""
    _require_unit_constant(a, "log")
    N = a.trunc
    c = [a[n] for n in range(N + 1)]
    b = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1):
        s = n * c[n]
        for k in range(1, n):
            if b[k] and c[n - k]:
                s -= k * b[k] * c[n - k]
        b[n] = s / n
    return QSeries(0, tuple(b), N)


def series_exp(a: QSeries) -> QSeries:
    """Exponential of a series with zero constant term."""
    v = a.valuation()
    if v is not None and v <= 0:
        raise NonInvertibleError("non-invertible leading term: exp needs zero constant term")
    N = a.trunc
    c = [a[n] for n in range(N + 1)]
    b = [Fraction(0)] * (N + 1)
    b[0] = Fraction(1)
    for n in range(1, N + 1):
        s = Fraction(0)
        for k in range(1, n + 1):
            if c[k] and b[n - k]:
                s += k * c[k] * b[n - k]
        b[n] = s / n
    return QSeries(0, tuple(b), N)


def series_pow(a: QSeries, r) -> QSeries:
    """``a ** r`` computed as ``exp(r * log(a))``.

    Integer r also accepts a general leading term ``c * q**v``, which is
    factored out first. Fractional r needs constant term 1.
    """
    r = _frac(r)
    if r.denominator == 1 and (a.valuation() != 0 or a[0] != 1):
        v, u, prec = _split(a)
        u0 = u[0]
        unit = QSeries(0, tuple(x / u0 for x in u), prec)
        return (series_pow(unit, r) * u0 ** int(r)).shift(v * int(r))
    _require_unit_constant(a, "pow")
    if r == 0:
        return QSeries.one(a.trunc)
    return series_exp(series_log(a) * r)


def mcmahon(trunc: int) -> QSeries:
    """Plane-partition generating function ``prod_{n>0} (1 - q^n)^(-n)``."""
    if trunc < 0:
        raise ValueError("trunc must be >= 0")
    c = [0] * (trunc + 1)
    c[0] = 1
    for n in range(1, trunc + 1):
        # multiply n times by 1/(1 - q^n): running sums with stride n
        for _ in range(n):
            for e in range(n, trunc + 1):
                c[e] += c[e - n]
    return QSeries(0, tuple(c), trunc)


def eisenstein_odd(k: int, trunc: int) -> QSeries:
    """``E_{2k+1}(q) = sum_n q^n sum_{d | n} d^(2k)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    c = [0] * (trunc + 1)
    for d in range(1, trunc + 1):
        p = d ** (2 * k)
        for n in range(d, trunc + 1, d):
            c[n] += p
    return QSeries.from_coeffs(c, trunc)


def q_ddq(a: QSeries) -> QSeries:
    """Apply ``q d/dq``: coefficient c_n becomes n * c_n."""
    return QSeries(a.min_exp, tuple((a.min_exp + i) * c for i, c in enumerate(a.coeffs)), a.trunc)


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    # B_1 = -1/2 convention; recurrence sum_{j<=m} C(m+1, j) B_j = 0
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _bernoulli_table(n)[n]


def zeta_negative(k: int) -> Fraction:
    """Riemann zeta at a non-positive integer.

    ``zeta(-k) = -B_{k+1}/(k+1)`` for k >= 1; zeta(0) = -1/2.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Fraction(-1, 2)
    if k % 2 == 0:
        return Fraction(0)
    return -bernoulli(k + 1) / (k + 1)


def series_sum(parts: Iterable[QSeries], trunc: int) -> QSeries:
    acc = QSeries.zero(trunc)
    for p in parts:
        acc = acc + p
    return acc
