"""Exact truncated Puiseux series in q with Laurent-polynomial coefficients.

The elliptic variable is ``u = exp(pi i z)`` so that ``y = exp(2 pi i z) = u**2``.
Theta functions with half characteristics need odd powers of ``u``; keeping
``u`` as the atomic variable keeps every coefficient in Q.

A :class:`QSeries` stores its exponents as integer numerators over a single
common denominator ``base_den`` and is *known* for all exponents strictly
below ``trunc_order``.  ``trunc_order is None`` marks an exact object (a
finite sum such as ``1 - y``).
"""
from __future__ import annotations

import enum
import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from gmpy2 import mpq

from .errors import AboveTruncation, InexactDivision, OddParity, ZeroDivisor

Rational = type(mpq())

_ZERO = mpq(0)
_ONE = mpq(1)


def as_rational(x) -> Rational:
    """Coerce int/Fraction/str/mpq to an exact ``mpq``."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floating point values are not allowed in exact series")
    return mpq(x)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, float):
        raise TypeError("floating point exponents are not allowed")
    return Fraction(x)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


class SpecialPoint(enum.Enum):
    """Half periods at which the degenerate Jacobi forms are evaluated."""

    HALF = "1/2"
    HALF_PLUS_HALF_TAU = "(1+tau)/2"
    HALF_TAU = "tau/2"


# --------------------------------------------------------------------------
# Laurent polynomials in u
# --------------------------------------------------------------------------


class YPoly:
    """Immutable Laurent polynomial in ``u`` with exact rational coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Rational] = {}
        for m, v in items:
            v = as_rational(v)
            if v:
                m = int(m)
                acc[m] = acc.get(m, _ZERO) + v
        self._c = {m: v for m, v in acc.items() if v}
        self._hash = None

    @classmethod
    def _wrap(cls, d: dict[int, Rational]) -> "YPoly":
        # d must already be free of zeros
        obj = object.__new__(cls)
        obj._c = d
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "YPoly":
        c = as_rational(c)
        return cls._wrap({0: c} if c else {})

    @classmethod
    def monomial(cls, upow: int, c=1) -> "YPoly":
        c = as_rational(c)
        return cls._wrap({int(upow): c} if c else {})

    @classmethod
    def from_y(cls, terms: Mapping[int, object]) -> "YPoly":
        """Build from integer powers of ``y = u**2``."""
        return cls({2 * int(j): c for j, c in terms.items()})

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> tuple[tuple[int, Rational], ...]:
        return tuple(sorted(self._c.items()))

    def coeff(self, upow: int) -> Rational:
        return self._c.get(upow, _ZERO)

    def items(self):
        return self._c.items()

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    @property
    def min_upow(self) -> int:
        return min(self._c)

    @property
    def max_upow(self) -> int:
        return max(self._c)

    def parity(self) -> int | None:
        """0 if all u-powers are even, 1 if all odd, None if mixed (zero counts as even)."""
        pars = {m & 1 for m in self._c}
        if not pars:
            return 0
        return pars.pop() if len(pars) == 1 else None

    def is_even(self) -> bool:
        return all(not (m & 1) for m in self._c)

    def is_constant(self) -> bool:
        return all(m == 0 for m in self._c)

    def constant_term(self) -> Rational:
        return self._c.get(0, _ZERO)

    def at_unit(self) -> Rational:
        """Value at u = 1 (that is, z = 0)."""
        return sum(self._c.values(), _ZERO)

    def evaluate(self, u: complex) -> complex:
        return sum(float(c) * u**m for m, c in self._c.items())

    # -- arithmetic ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, YPoly):
            return self._c == other._c
        if isinstance(other, (int, Rational, Fraction)):
            return self._c == ({0: as_rational(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __neg__(self) -> "YPoly":
        return YPoly._wrap({m: -v for m, v in self._c.items()})

    def __add__(self, other) -> "YPoly":
        other = _as_ypoly(other)
        if other is NotImplemented:
            return NotImplemented
        d = dict(self._c)
        for m, v in other._c.items():
            w = d.get(m, _ZERO) + v
            if w:
                d[m] = w
            else:
                d.pop(m, None)
        return YPoly._wrap(d)

    __radd__ = __add__

    def __sub__(self, other) -> "YPoly":
        other = _as_ypoly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "YPoly":
        return (-self) + other

    def __mul__(self, other) -> "YPoly":
        if isinstance(other, YPoly):
            d: dict[int, Rational] = {}
            for m1, v1 in self._c.items():
                for m2, v2 in other._c.items():
                    k = m1 + m2
                    d[k] = d.get(k, _ZERO) + v1 * v2
            return YPoly._wrap({m: v for m, v in d.items() if v})
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        if not c:
            return YPoly._wrap({})
        return YPoly._wrap({m: v * c for m, v in self._c.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "YPoly":
        if n < 0:
            raise ValueError("negative powers of a Laurent polynomial are not Laurent polynomials")
        result = YPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "YPoly":
        """Multiply by ``u**k``."""
        if k == 0:
            return self
        return YPoly._wrap({m + k: v for m, v in self._c.items()})

    def derivative(self) -> "YPoly":
        """``(1/2 pi i) d/dz``: u^m -> (m/2) u^m."""
        return YPoly._wrap({m: v * mpq(m, 2) for m, v in self._c.items() if m})

    def reflect(self) -> "YPoly":
        """z -> -z."""
        return YPoly._wrap({-m: v for m, v in self._c.items()})

    def half_shift(self) -> "YPoly":
        """z -> z + 1/2 on an even polynomial: y^j -> (-1)^j y^j."""
        if not self.is_even():
            raise OddParity("z -> z + 1/2 needs integer powers of y")
        return YPoly._wrap({m: (-v if (m // 2) & 1 else v) for m, v in self._c.items()})

    def divide_exact(self, other: "YPoly") -> "YPoly":
        """Exact Laurent division; raises :class:`InexactDivision` on a remainder."""
        if not other:
            raise ZeroDivisor("division by the zero Laurent polynomial")
        if not self:
            return YPoly._wrap({})
        oc = other._c
        if len(oc) == 1:
            (k, c), = oc.items()
            return YPoly._wrap({m - k: v / c for m, v in self._c.items()})
        bmin, bmax = min(oc), max(oc)
        lead = oc[bmax]
        rem = dict(self._c)
        qmin = min(rem) - bmin
        quo: dict[int, Rational] = {}
        while rem:
            top = max(rem)
            k = top - bmax
            if k < qmin:
                raise InexactDivision(f"{self} is not divisible by {other}")
            c = rem[top] / lead
            quo[k] = c
            for m, v in oc.items():
                j = m + k
                w = rem.get(j, _ZERO) - c * v
                if w:
                    rem[j] = w
                else:
                    rem.pop(j, None)
        return YPoly._wrap(quo)

    # -- rendering ----------------------------------------------------------
    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for m, c in self.terms:
            if m == 0:
                parts.append(str(c))
                continue
            mono = "u" if m == 1 else f"u^{m}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"YPoly({self})"


def _as_ypoly(x):
    if isinstance(x, YPoly):
        return x
    if isinstance(x, (int, Rational, Fraction)):
        return YPoly.const(x)
    return NotImplemented


# --------------------------------------------------------------------------
# Series
# --------------------------------------------------------------------------


def _tmin(a, b):
    # None stands for +infinity (exact object)
    if a is None:
        return b
    if b is None:
        return a
    return a if a < b else b


def _tadd(a, b):
    if a is None or b is None:
        return None
    return a + b


class QSeries:
    """Truncated Puiseux series ``sum_e c_e(u) q^e`` with known range ``e < trunc_order``."""

    __slots__ = ("_den", "_t", "_trunc", "_keys")

    def __init__(self, terms: Mapping | Iterable = (), trunc_order=None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        pairs = []
        den = 1
        for e, c in items:
            e = as_fraction(e)
            c = c if isinstance(c, YPoly) else YPoly.const(c)
            pairs.append((e, c))
            den = _lcm(den, e.denominator)
        if trunc_order is not None:
            trunc_order = as_fraction(trunc_order)
            den = _lcm(den, trunc_order.denominator)
        t: dict[int, YPoly] = {}
        for e, c in pairs:
            k = int(e * den)
            t[k] = t[k] + c if k in t else c
        tn = None if trunc_order is None else int(trunc_order * den)
        self._set(den, t, tn)

    def _set(self, den: int, t: dict[int, YPoly], tn: int | None) -> None:
        t = {k: c for k, c in t.items() if c and (tn is None or k < tn)}
        g = den
        for k in t:
            g = math.gcd(g, k)
            if g == 1:
                break
        if tn is not None and g != 1:
            g = math.gcd(g, tn)
        if g > 1:
            den //= g
            t = {k // g: c for k, c in t.items()}
            tn = None if tn is None else tn // g
        self._den = den
        self._t = t
        self._trunc = tn
        self._keys = sorted(t)

    @classmethod
    def _make(cls, den: int, t: dict[int, YPoly], tn: int | None) -> "QSeries":
        obj = object.__new__(cls)
        obj._set(den, t, tn)
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, trunc_order=None) -> "QSeries":
        return cls({}, trunc_order)

    @classmethod
    def one(cls) -> "QSeries":
        return cls({0: YPoly.const(1)})

    @classmethod
    def constant(cls, c: YPoly | object, trunc_order=None) -> "QSeries":
        return cls({0: c if isinstance(c, YPoly) else YPoly.const(c)}, trunc_order)

    @classmethod
    def monomial(cls, exponent, upow: int = 0, c=1) -> "QSeries":
        return cls({as_fraction(exponent): YPoly.monomial(upow, c)})

    # -- inspection ---------------------------------------------------------
    @property
    def base_den(self) -> int:
        return self._den

    @property
    def trunc_order(self) -> Fraction | None:
        return None if self._trunc is None else Fraction(self._trunc, self._den)

    @property
    def is_exact(self) -> bool:
        return self._trunc is None

    @property
    def terms(self) -> tuple[tuple[Fraction, YPoly], ...]:
        return tuple((Fraction(k, self._den), self._t[k]) for k in self._keys)

    def __iter__(self) -> Iterator[tuple[Fraction, YPoly]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self._keys)

    def is_zero(self) -> bool:
        return not self._keys

    def __bool__(self) -> bool:
        return bool(self._keys)

    @property
    def valuation(self) -> Fraction | None:
        """Leading exponent; for a zero series the truncation order (None if exact zero)."""
        if self._keys:
            return Fraction(self._keys[0], self._den)
        return self.trunc_order

    @property
    def leading_coefficient(self) -> YPoly:
        if not self._keys:
            raise ValueError("zero series has no leading coefficient")
        return self._t[self._keys[0]]

    def coefficient(self, e) -> YPoly:
        """Coefficient at ``q**e``; no truncation check (see :func:`extract_coefficient`)."""
        e = as_fraction(e)
        k = e * self._den
        if k.denominator != 1:
            return YPoly()
        return self._t.get(int(k), YPoly())

    def is_even(self) -> bool:
        return all(c.is_even() for c in self._t.values())

    def parity(self) -> int | None:
        pars = {c.parity() for c in self._t.values()}
        if not pars:
            return 0
        if len(pars) == 1:
            return pars.pop()
        return None

    def max_abs_upow(self) -> int:
        return max((max(abs(c.min_upow), abs(c.max_upow)) for c in self._t.values()), default=0)

    # -- comparisons --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._den == other._den and self._trunc == other._trunc and self._t == other._t

    def __hash__(self) -> int:
        return hash((self._den, self._trunc, frozenset(self._t.items())))

    def agrees_with(self, other: "QSeries") -> bool:
        """Equality up to the smaller of the two truncation orders."""
        return sub(self, other).is_zero()

    # -- operator sugar -----------------------------------------------------
    def __add__(self, other):
        other = _as_series(other)
        return NotImplemented if other is NotImplemented else add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._make(self._den, {k: -c for k, c in self._t.items()}, self._trunc)

    def __sub__(self, other):
        other = _as_series(other)
        return NotImplemented if other is NotImplemented else sub(self, other)

    def __rsub__(self, other):
        other = _as_series(other)
        return NotImplemented if other is NotImplemented else sub(other, self)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        if isinstance(other, YPoly):
            return QSeries._make(self._den, {k: c * other for k, c in self._t.items()}, self._trunc)
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return QSeries._make(self._den, {k: v * c for k, v in self._t.items()}, self._trunc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return div(self, other)
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        if not c:
            raise ZeroDivisor("division by zero scalar")
        return self * (1 / c)

    def __rtruediv__(self, other):
        other = _as_series(other)
        return NotImplemented if other is NotImplemented else div(other, self)

    def __pow__(self, n: int):
        return power(self, n)

    # -- misc transforms ----------------------------------------------------
    def shift(self, exponent=0, upow: int = 0, c=1) -> "QSeries":
        """Multiply by the monomial ``c * q**exponent * u**upow``."""
        exponent = as_fraction(exponent)
        den = _lcm(self._den, exponent.denominator)
        f = den // self._den
        de = int(exponent * den)
        c = as_rational(c)
        t = {k * f + de: (v.shift(upow) * c if c != 1 else v.shift(upow)) for k, v in self._t.items()}
        tn = None if self._trunc is None else self._trunc * f + de
        return QSeries._make(den, t, tn)

    def truncate(self, order) -> "QSeries":
        order = as_fraction(order)
        cur = self.trunc_order
        if cur is not None and cur <= order:
            return self
        den = _lcm(self._den, order.denominator)
        f = den // self._den
        return QSeries._make(den, {k * f: v for k, v in self._t.items()}, int(order * den))

    def map_coefficients(self, fn) -> "QSeries":
        return QSeries._make(self._den, {k: fn(v) for k, v in self._t.items()}, self._trunc)

    def at_z_zero(self) -> "QSeries":
        """Set z = 0 (u = 1) in every coefficient."""
        return self.map_coefficients(lambda p: YPoly.const(p.at_unit()))

    def reflect(self) -> "QSeries":
        """z -> -z."""
        return self.map_coefficients(YPoly.reflect)

    # -- rendering ----------------------------------------------------------
    def __str__(self) -> str:
        parts = []
        for e, c in self.terms:
            qs = "" if e == 0 else ("q" if e == 1 else (f"q^{e}" if e.denominator == 1 else f"q^({e})"))
            if c.is_constant():
                v = c.constant_term()
                if not qs:
                    parts.append(str(v))
                elif v == 1:
                    parts.append(qs)
                elif v == -1:
                    parts.append("-" + qs)
                else:
                    parts.append(f"{v}*{qs}")
            else:
                parts.append(f"({c})" + (f"*{qs}" if qs else ""))
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        t = self.trunc_order
        if t is None:
            return body
        ts = f"q^{t}" if t.denominator == 1 else f"q^({t})"
        return f"{body} + O({ts})"

    def __repr__(self) -> str:
        return f"QSeries({self})"

    # -- serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "base_den": self._den,
            "trunc_num": self._trunc,
            "terms": [
                {
                    "exp_num": k,
                    "poly": [
                        {"upow": m, "num": str(c.numerator), "den": str(c.denominator)}
                        for m, c in self._t[k].terms
                    ],
                }
                for k in self._keys
            ],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "QSeries":
        den = int(d["base_den"])
        t = {}
        for term in d["terms"]:
            t[int(term["exp_num"])] = YPoly(
                (int(p["upow"]), mpq(int(p["num"]), int(p["den"]))) for p in term["poly"]
            )
        tn = d.get("trunc_num")
        return cls._make(den, t, None if tn is None else int(tn))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_dict(json.loads(text))


def _as_series(x):
    if isinstance(x, QSeries):
        return x
    if isinstance(x, YPoly):
        return QSeries.constant(x)
    if isinstance(x, (int, Rational, Fraction)):
        return QSeries.constant(x)
    return NotImplemented


def _aligned(a: QSeries, b: QSeries):
    den = _lcm(a._den, b._den)
    fa, fb = den // a._den, den // b._den
    ta = a._t if fa == 1 else {k * fa: v for k, v in a._t.items()}
    tb = b._t if fb == 1 else {k * fb: v for k, v in b._t.items()}
    tra = None if a._trunc is None else a._trunc * fa
    trb = None if b._trunc is None else b._trunc * fb
    return den, ta, tra, tb, trb


def _valuation_num(t: dict, tn):
    # leading exponent numerator; a zero series is "known zero" below its truncation
    if t:
        return min(t)
    return tn


# --------------------------------------------------------------------------
# Ring operations
# --------------------------------------------------------------------------


def add(a: QSeries, b: QSeries) -> QSeries:
    den, ta, tra, tb, trb = _aligned(a, b)
    d = dict(ta)
    for k, v in tb.items():
        d[k] = d[k] + v if k in d else v
    return QSeries._make(den, d, _tmin(tra, trb))


def sub(a: QSeries, b: QSeries) -> QSeries:
    return add(a, -b)


def _mul_acc(acc: dict[int, Rational], p: dict[int, Rational], r: dict[int, Rational]) -> None:
    for m1, v1 in p.items():
        for m2, v2 in r.items():
            k = m1 + m2
            acc[k] = acc.get(k, _ZERO) + v1 * v2


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product, known below ``min(trunc_a + lead_b, trunc_b + lead_a)``."""
    den, ta, tra, tb, trb = _aligned(a, b)
    la, lb = _valuation_num(ta, tra), _valuation_num(tb, trb)
    if la is None or lb is None:
        # one factor is the exact zero series
        return QSeries._make(den, {}, None)
    tn = _tmin(_tadd(tra, lb), _tadd(trb, la))
    ka, kb = sorted(ta), sorted(tb)
    out: dict[int, dict[int, Rational]] = {}
    for i in ka:
        pa = ta[i]._c
        for j in kb:
            k = i + j
            if tn is not None and k >= tn:
                break
            acc = out.get(k)
            if acc is None:
                acc = out[k] = {}
            _mul_acc(acc, pa, tb[j]._c)
    t = {k: YPoly._wrap({m: v for m, v in acc.items() if v}) for k, acc in out.items()}
    return QSeries._make(den, t, tn)


def power(s: QSeries, n: int) -> QSeries:
    if n < 0:
        return div(QSeries.one(), power(s, -n))
    result = QSeries.one()
    base = s
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def div(num: QSeries, den: QSeries) -> QSeries:
    """Exact quotient by the recursion ``c_r = (N_r - sum_{s>0} D_s c_{r-s}) / D_0``.

    Known below ``min(trunc_num - d0, trunc_den + n0 - 2 d0)`` where ``n0, d0``
    are the leading exponents.
    """
    if den.is_zero():
        raise ZeroDivisor("division by a series with no known nonzero term")
    D, tn_, trn, td_, trd = _aligned(num, den)
    keys_d = sorted(td_)
    d0 = keys_d[0]
    D0 = td_[d0]
    n0 = _valuation_num(tn_, trn)
    if n0 is None:
        return QSeries._make(D, {}, None)
    tn = _tmin(_tadd(trn, -d0), _tadd(trd, n0 - 2 * d0))
    start = n0 - d0
    if tn is None:
        if not (len(keys_d) == 1):
            raise ValueError("exact quotient by a non-monomial needs a truncated numerator")
        t = {k - d0: v.divide_exact(D0) for k, v in tn_.items()}
        return QSeries._make(D, t, None)
    tail = [(s - d0, td_[s]) for s in keys_d[1:]]
    mono = len(D0) == 1
    if mono:
        (dk, dc), = D0.items()
        dinv = 1 / dc
    res: dict[int, YPoly] = {}
    for r in range(start, tn):
        acc: dict[int, Rational] = dict(tn_[r + d0]._c) if (r + d0) in tn_ else {}
        for s, Ds in tail:
            prev = res.get(r - s)
            if prev is None:
                if r - s < start:
                    break
                continue
            for m1, v1 in Ds._c.items():
                for m2, v2 in prev._c.items():
                    k = m1 + m2
                    acc[k] = acc.get(k, _ZERO) - v1 * v2
        acc = {m: v for m, v in acc.items() if v}
        if not acc:
            continue
        if mono:
            c = YPoly._wrap({m - dk: v * dinv for m, v in acc.items()})
        else:
            c = YPoly._wrap(acc).divide_exact(D0)
        res[r] = c
    return QSeries._make(D, res, tn)


# --------------------------------------------------------------------------
# z-operations
# --------------------------------------------------------------------------


def differentiate_z(s: QSeries) -> QSeries:
    """Apply ``(1/2 pi i) d/dz`` termwise."""
    return s.map_coefficients(YPoly.derivative)


def shift_z_by_half(s: QSeries) -> QSeries:
    """z -> z + 1/2, i.e. y -> -y; requires integer y-powers."""
    if not s.is_even():
        raise OddParity("z -> z + 1/2 needs integer powers of y")
    return s.map_coefficients(YPoly.half_shift)


def _tau_shift_trunc(s: QSeries, index, den_out: int) -> int | None:
    """Provable truncation numerator (over ``den_out``) after y -> q^{+-1/2} y.

    Uses the elliptic relation of an index-``m`` object: the class of
    ``(n, r)`` (q-exponent, y-power) under ``z -> z + tau`` preserves
    ``4 m n - r**2`` and every class has a representative with ``|r| <= m``.
    Unknown terms therefore satisfy ``r**2 <= 4 m n - Delta_min`` and the
    shifted exponent ``n +- r/2`` is bounded below.
    """
    T = s.trunc_order
    if T is None:
        return None
    if index is None:
        raise ValueError("a tau-shift of a truncated series needs its elliptic index")
    m = as_fraction(index)
    if m <= 0:
        raise ValueError("elliptic index must be positive")
    delta = 4 * m * T - m * m
    for e, c in s.terms:
        for j, _ in c.terms:
            r = Fraction(j, 2)
            delta = min(delta, 4 * m * e - r * r)
    nstar = (m * m + delta) / (4 * m)
    if nstar > T:
        bound = nstar - m / 2
        return math.floor(bound * den_out)
    X = 4 * m * T - delta  # >= m^2 > 0
    k = math.floor((float(T) - math.sqrt(float(X)) / 2) * den_out) + 2
    while True:
        gap = T - Fraction(k, den_out)
        if gap >= 0 and 4 * gap * gap >= X:
            return k
        k -= 1


def shift_z_by_half_tau(s: QSeries, index=None, sign: int = 1) -> QSeries:
    """z -> z + sign*tau/2: ``u^m q^r -> u^m q^{r + sign*m/4}``.

    For a truncated series the elliptic ``index`` is required to bound the
    unknown tail (see :func:`_tau_shift_trunc`).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    den = _lcm(s._den, 4)
    f = den // s._den
    step = den // 4
    tn = _tau_shift_trunc(s, index, den)
    out: dict[int, dict[int, Rational]] = {}
    for k, c in s._t.items():
        for m, v in c._c.items():
            e = k * f + sign * m * step
            if tn is not None and e >= tn:
                continue
            acc = out.setdefault(e, {})
            acc[m] = acc.get(m, _ZERO) + v
    t = {e: YPoly._wrap({m: v for m, v in acc.items() if v}) for e, acc in out.items()}
    return QSeries._make(den, t, tn)


def specialize(s: QSeries, point: SpecialPoint, index=None) -> QSeries:
    """Substitute a half period for z; the result has constant coefficients.

    HALF: y -> -1.  HALF_TAU: y -> q^{1/2}.  HALF_PLUS_HALF_TAU: y -> -q^{1/2}.
    Integer powers of y are required (:class:`OddParity` otherwise).
    """
    if not s.is_even():
        raise OddParity("half-period substitution needs integer powers of y")
    if point is SpecialPoint.HALF:
        t = {}
        for k, c in s._t.items():
            v = sum(((-x if (m // 2) & 1 else x) for m, x in c._c.items()), _ZERO)
            if v:
                t[k] = YPoly._wrap({0: v})
        return QSeries._make(s._den, t, s._trunc)
    negate = point is SpecialPoint.HALF_PLUS_HALF_TAU
    den = _lcm(s._den, 2)
    f = den // s._den
    half = den // 2
    tn = _tau_shift_trunc(s, index, den)
    acc: dict[int, Rational] = {}
    for k, c in s._t.items():
        for m, v in c._c.items():
            j = m // 2
            e = k * f + j * half
            if tn is not None and e >= tn:
                continue
            acc[e] = acc.get(e, _ZERO) + (-v if (negate and j & 1) else v)
    t = {e: YPoly._wrap({0: v}) for e, v in acc.items() if v}
    return QSeries._make(den, t, tn)


def extract_coefficient(s: QSeries, e) -> YPoly:
    e = as_fraction(e)
    T = s.trunc_order
    if T is not None and e >= T:
        raise AboveTruncation(f"q^{e} is not below the truncation order {T}")
    return s.coefficient(e)


def coefficient_list(s: QSeries, start, step, count: int) -> list[Rational]:
    """Constant terms at ``start, start+step, ...`` (for single-variable series)."""
    start, step = as_fraction(start), as_fraction(step)
    return [extract_coefficient(s, start + i * step).constant_term() for i in range(count)]


def product_to(order, factors) -> QSeries:
    """Multiply lazily built factors so the product is known below ``order``.

    ``factors`` is a sequence of ``(lead, build)`` pairs where ``lead`` is a
    lower bound for the leading exponent and ``build(t)`` returns the factor
    known below ``t``.
    """
    order = as_fraction(order)
    leads = [as_fraction(l) for l, _ in factors]
    total = sum(leads, Fraction(0))
    result = QSeries.one()
    for (lead, build), l in zip(factors, leads):
        result = mul(result, build(order - (total - l)))
    return result.truncate(order)
