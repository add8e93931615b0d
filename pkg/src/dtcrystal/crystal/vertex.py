"""Vertex character, equivariant vertex measure and the interaction factor."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import NamedTuple

from ..errors import GenericityError
from ..exactq import QSeries, mcmahon, series_pow
from .plane import PlanePartition, plane_partitions_by_size

__all__ = [
    "ExponentPolynomial",
    "FactoredWeight",
    "TorusWeights",
    "box_character",
    "vertex_character",
    "weight",
    "evaluate_weight",
    "interaction_factor",
    "gamma",
    "probe_direction",
    "cy_direction",
    "weight_expansion",
    "regular_value",
    "layer_sum",
    "vertex_series",
    "mcmahon_identity_residual",
]

ORIGIN = (0, 0, 0)


class ExponentPolynomial:
    """Laurent polynomial ``sum c_a x^a`` over a in Z^3 with integer coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for a, c in (terms or {}).items():
            if c:
                clean[tuple(a)] = int(c)
        self._terms = clean

    @classmethod
    def monomial(cls, a, c=1):
        return cls({tuple(a): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __getitem__(self, a) -> int:
        return self._terms.get(tuple(a), 0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __eq__(self, other):
        if not isinstance(other, ExponentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"ExponentPolynomial({dict(sorted(self._terms.items()))})"

    def __add__(self, other):
        acc = defaultdict(int, self._terms)
        for a, c in other._terms.items():
            acc[a] += c
        return ExponentPolynomial(acc)

    def __neg__(self):
        return ExponentPolynomial({a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ExponentPolynomial({a: c * other for a, c in self._terms.items()})
        acc = defaultdict(int)
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                acc[(a[0] + b[0], a[1] + b[1], a[2] + b[2])] += c * d
        return ExponentPolynomial(acc)

    __rmul__ = __mul__

    def bar(self):
        """Substitute x -> 1/x."""
        return ExponentPolynomial({(-a[0], -a[1], -a[2]): c for a, c in self._terms.items()})

    def shift(self, b):
        return ExponentPolynomial(
            {(a[0] + b[0], a[1] + b[1], a[2] + b[2]): c for a, c in self._terms.items()}
        )


class TorusWeights(NamedTuple):
    t1: Fraction
    t2: Fraction
    t3: Fraction

    @classmethod
    def of(cls, *ts) -> TorusWeights:
        if len(ts) == 1:
            ts = ts[0]
        if isinstance(ts, str):
            ts = ts.split(",")
        vals = [Fraction(x) for x in ts]
        if len(vals) != 3:
            raise ValueError("need exactly three torus weights")
        return cls(*vals)

    def T(self, a) -> Fraction:
        return a[0] * self.t1 + a[1] * self.t2 + a[2] * self.t3

    def permuted(self, perm) -> TorusWeights:
        """Weights seen after relabeling axis m as perm[m]."""
        out = [None] * 3
        for m in range(3):
            out[perm[m]] = self[m]
        return TorusWeights(*out)

    def __str__(self):
        return ",".join(str(x) for x in self)


@dataclass(frozen=True)
class FactoredWeight:
    """``q^chi * prod_a T(a)^e(a)`` kept as a sorted tuple of (a, e) factors."""

    chi: int
    factors: tuple = ()

    def __post_init__(self):
        items = sorted((tuple(a), int(e)) for a, e in dict(self.factors).items() if e)
        if any(a == ORIGIN for a, _ in items):
            raise ValueError("factor at the origin is not allowed")
        object.__setattr__(self, "factors", tuple(items))

    @property
    def exponents(self) -> dict:
        return dict(self.factors)

    def to_json(self) -> dict:
        return {"chi": self.chi, "factors": [{"a": list(a), "e": e} for a, e in self.factors]}

    @classmethod
    def from_json(cls, data) -> FactoredWeight:
        return cls(int(data["chi"]), tuple((tuple(f["a"]), int(f["e"])) for f in data["factors"]))


def box_character(pi: PlanePartition) -> ExponentPolynomial:
    """``sum over boxes of x^box`` for a finite 3D partition."""
    if not pi.is_finite:
        raise ValueError("legged character not supported")
    return ExponentPolynomial({b: 1 for b in pi.boxes()})


_DBAR = (
    ExponentPolynomial({ORIGIN: 1, (-1, 0, 0): -1})
    * ExponentPolynomial({ORIGIN: 1, (0, -1, 0): -1})
    * ExponentPolynomial({ORIGIN: 1, (0, 0, -1): -1})
)


def vertex_character(pi: PlanePartition) -> ExponentPolynomial:
    """V = Q - x^(-1,-1,-1) Qbar - Q Qbar (1 - 1/x1)(1 - 1/x2)(1 - 1/x3)."""
    Q = box_character(pi)
    Qb = Q.bar()
    V = Q - Qb.shift((-1, -1, -1)) - Q * Qb * _DBAR
    if V[ORIGIN] != 0:
        raise RuntimeError(f"vertex character has nonzero constant term {V[ORIGIN]}")
    return V


def weight(pi: PlanePartition) -> FactoredWeight:
    V = vertex_character(pi)
    return FactoredWeight(pi.size, tuple((a, -v) for a, v in V))


def _primitive(a):
    """Split a = k * p with p primitive and its first nonzero entry positive."""
    g = gcd(*a)
    p = tuple(x // g for x in a)
    if next(x for x in p if x) < 0:
        p = tuple(-x for x in p)
        g = -g
    return g, p


def _int_form(t: TorusWeights):
    """Integers (n1, n2, n3) and L with t_i = n_i / L."""
    L = lcm(*(x.denominator for x in t))
    return tuple(int(x * L) for x in t), L


def _dot(a, n) -> int:
    return a[0] * n[0] + a[1] * n[1] + a[2] * n[2]


def evaluate_weight(w: FactoredWeight, t: TorusWeights, along: TorusWeights | None = None) -> Fraction:
    """Exact value of ``prod_a T(a)^e(a)`` at t (the coefficient of q^chi).

    Factors whose linear form vanishes at t are grouped by direction:
    ``T(k p) = k T(p)``, so a direction with net exponent zero contributes
    the constant ``prod k^e`` and a positive net exponent makes the weight
    zero. A negative net exponent is a pole and raises GenericityError.

    With ``along`` the value is the limit approaching t along that
    direction, e.g. :func:`cy_direction` to restrict to the Calabi-Yau plane.
    """
    if along is not None:
        return regular_value([weight_expansion(w, t, along)])
    n, L = _int_form(t)
    num, den, lpow = 1, 1, 0
    lines = {}
    for a, e in w.factors:
        x = _dot(a, n)
        if x == 0:
            k, p = _primitive(a)
            net, cn, cd = lines.get(p, (0, 1, 1))
            lines[p] = (net + e, cn * k**e, cd) if e > 0 else (net + e, cn, cd * k ** (-e))
            continue
        lpow += e
        if e > 0:
            num *= x**e
        else:
            den *= x ** (-e)
    vanishing = False
    for p, (net, cn, cd) in sorted(lines.items()):
        if net < 0:
            raise GenericityError(f"non-generic weights: T{p} vanishes at t=({t}) with a pole of order {-net}")
        if net > 0:
            vanishing = True
        else:
            num *= cn
            den *= cd
    if vanishing:
        return Fraction(0)
    if lpow > 0:
        den *= L**lpow
    else:
        num *= L ** (-lpow)
    return Fraction(num, den)


def probe_direction(size: int) -> TorusWeights:
    """Direction (1, K, K^2) on which T(a) != 0 for every a != 0 with |a_i| <= size + 1."""
    K = 2 * size + 5
    return TorusWeights(Fraction(1), Fraction(K), Fraction(K * K))


def cy_direction(size: int) -> TorusWeights:
    """Direction inside the plane t1 + t2 + t3 = 0; T(a) vanishes on it only for a ~ (1,1,1)."""
    K = 2 * size + 5
    return TorusWeights(Fraction(1), Fraction(K), Fraction(-1 - K))


def weight_expansion(w: FactoredWeight, t: TorusWeights, s: TorusWeights, order: int = 0) -> QSeries:
    """Laurent expansion of the weight at ``t + eps * s`` in eps, exact mod eps^(order+1).

    Forms vanishing on the whole line are all proportional and are
    grouped as in :func:`evaluate_weight`.
    """
    L = lcm(*(x.denominator for x in t), *(x.denominator for x in s))
    n = tuple(int(x * L) for x in t)
    m = tuple(int(x * L) for x in s)
    forms = [(_dot(a, n), _dot(a, m), a, e) for a, e in w.factors]
    flat = FactoredWeight(0, tuple((a, e) for c, d, a, e in forms if c == 0 and d == 0))
    flat_value = evaluate_weight(flat, t)
    if flat_value == 0:
        return QSeries.zero(order)
    net = sum(e for c, d, a, e in forms if c == 0 and d != 0)
    prec = order - net
    if prec < 0:
        return QSeries.zero(order)
    # integer polynomials in eps for the numerator and denominator factors
    top, bottom = [1] + [0] * prec, [1] + [0] * prec
    lpow = 0
    for c, d, a, e in forms:
        if c == 0 and d == 0:
            continue
        lpow += e
        if c == 0:
            fac = [d]
        else:
            fac = [c, d]
        if e > 0:
            for _ in range(e):
                top = _ipoly_mul(top, fac, prec)
        else:
            for _ in range(-e):
                bottom = _ipoly_mul(bottom, fac, prec)
    # the pure eps factors were taken as [d]; restore them as eps^net via the shift
    ratio = QSeries(0, tuple(top), prec) / QSeries(0, tuple(bottom), prec)
    scale = flat_value / Fraction(L) ** lpow
    return (ratio * scale).shift(net)


def _ipoly_mul(a: list, b: list, prec: int) -> list:
    out = [0] * (prec + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), prec + 1 - i)):
                out[i + j] += x * b[j]
    return out


def _binomial_series(x: Fraction, e: int, prec: int) -> QSeries:
    """``(1 + x eps)^e`` for integer e, through eps^prec."""
    out = [Fraction(1)]
    for n in range(1, prec + 1):
        out.append(out[-1] * (e - n + 1) / n * x)
    return QSeries(0, tuple(out), prec)


def regular_value(terms, order: int = 0):
    """Constant term of a sum of eps-Laurent series; raises if the poles do not cancel."""
    acc = QSeries.zero(order)
    for x in terms:
        acc = acc + x
    for n, c in acc.terms().items():
        if n < 0:
            raise GenericityError(f"sum is singular at this t: eps^{n} coefficient {c}")
    return acc[0]


def interaction_factor(a1, a2, t: TorusWeights) -> Fraction:
    """Pairwise factor U(box1, box2) of the formal Gibbs product."""
    t1, t2, t3 = t
    d = t.T(a1) - t.T(a2)
    den = (d + t1) * (d + t2) * (d + t3) * (d + t1 + t2 + t3)
    if d == 0 or den == 0:
        raise GenericityError(f"singular pair: {tuple(a1)}, {tuple(a2)} at t=({t})")
    return d * (d + t1 + t2) * (d + t1 + t3) * (d + t2 + t3) / den


def gamma(t: TorusWeights) -> Fraction:
    """``(t1+t2)(t1+t3)(t2+t3) / (t1 t2 t3)``."""
    t1, t2, t3 = t
    if t1 * t2 * t3 == 0:
        raise GenericityError(f"non-generic weights: some t_i vanishes at t=({t})")
    return (t1 + t2) * (t1 + t3) * (t2 + t3) / (t1 * t2 * t3)


def layer_sum(layer, t: TorusWeights, factor=None, factor_degree: int = 0) -> Fraction:
    """``sum_pi w(pi)|_t * factor(pi, t)`` over one layer of equal size.

    Individual weights may have poles at t while the layer sum does not;
    in that case the sum is evaluated as the constant term of its Laurent
    expansion along :func:`probe_direction`. ``factor`` must be a
    polynomial in t of degree at most ``factor_degree``.
    """
    weights = [weight(pi) for pi in layer]
    try:
        vals = [evaluate_weight(w, t) for w in weights]
    except GenericityError:
        vals = None
    if vals is not None:
        if factor is None:
            return sum(vals, Fraction(0))
        return sum((v * factor(pi, t) for v, pi in zip(vals, layer) if v), Fraction(0))
    size = max((pi.size for pi in layer), default=0)
    s = probe_direction(size)
    order = max(-min(0, sum(e for a, e in w.factors if t.T(a) == 0)) for w in weights)
    terms = []
    for w, pi in zip(weights, layer):
        ws = weight_expansion(w, t, s)
        if factor is not None:
            ws = ws * _poly_in_eps(lambda eps: factor(pi, _along(t, s, eps)), order, factor_degree)
        terms.append(ws)
    return regular_value(terms)


def _along(t: TorusWeights, s: TorusWeights, eps) -> TorusWeights:
    return TorusWeights(*(x + eps * y for x, y in zip(t, s)))


def _poly_in_eps(f, order: int, degree: int) -> QSeries:
    """Coefficients through eps^order of the polynomial eps -> f(eps) of the given degree.

    Recovered exactly by interpolation at eps = 0..degree.
    """
    D = degree
    xs = list(range(D + 1))
    coef = [Fraction(f(Fraction(x))) for x in xs]
    # Newton divided differences, then expand to monomial coefficients
    for j in range(1, D + 1):
        for i in range(D, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * (D + 1)
    for i in range(D, -1, -1):
        new = [Fraction(0)] * (D + 1)
        for k in range(D):
            new[k + 1] += poly[k]
            new[k] -= xs[i] * poly[k]
        new[0] += coef[i]
        poly = new
    poly += [Fraction(0)] * max(0, order + 1 - len(poly))
    return QSeries(0, tuple(poly[: order + 1]), order)


def vertex_series(t: TorusWeights, trunc: int) -> QSeries:
    """``sum_{|pi| <= trunc} w(pi)|_t q^|pi|``."""
    by_size = plane_partitions_by_size(trunc)
    return QSeries(0, tuple(layer_sum(layer, t) for layer in by_size), trunc)


def mcmahon_identity_residual(t: TorusWeights, trunc: int) -> QSeries:
    """vertex_series minus ``M(-q)^(-gamma)``; the zero series when the identity holds."""
    target = series_pow(mcmahon(trunc).negate_q(), -gamma(t))
    return vertex_series(t, trunc) - target
