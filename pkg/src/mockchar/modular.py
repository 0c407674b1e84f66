"""Eta, Jacobi theta, level-P theta functions, affine SU(2) characters and Psi.

All ``order`` arguments are absolute: the returned series is known for every
exponent strictly below ``order``.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidSpec
from .series import QSeries, YPoly, as_fraction, div, mul, power

__all__ = [
    "ThetaKind",
    "LevelIndex",
    "eta_pow",
    "jacobi_theta",
    "theta_at_zero",
    "level_theta",
    "weyl_denominator",
    "affine_character",
    "chebyshev_I",
    "psi",
    "theta_ratio_power",
    "check_elliptic_index",
]


class ThetaKind(enum.Enum):
    T11 = "11"  # real normalization: -i * theta_11
    T10 = "10"
    T00 = "00"
    T01 = "01"

    @classmethod
    def parse(cls, text: str) -> "ThetaKind":
        key = text.upper().lstrip("T").removeprefix("HETA")
        for k in cls:
            if k.value == key:
                return k
        raise InvalidSpec(f"unknown theta kind {text!r}")


class LevelIndex:
    """Pair (P, a) with ``a`` reduced modulo 2P."""

    __slots__ = ("P", "a")

    def __init__(self, P: int, a: int):
        if P < 1:
            raise InvalidSpec("P must be positive")
        self.P = int(P)
        self.a = int(a) % (2 * self.P)

    def __iter__(self):
        return iter((self.P, self.a))

    def __eq__(self, other):
        return isinstance(other, LevelIndex) and (self.P, self.a) == (other.P, other.a)

    def __hash__(self):
        return hash((self.P, self.a))

    def __repr__(self):
        return f"LevelIndex(P={self.P}, a={self.a})"


def _order(order) -> Fraction:
    o = as_fraction(order)
    if o <= 0:
        raise InvalidSpec("order must be positive")
    return o


# -- eta -------------------------------------------------------------------


@lru_cache(maxsize=256)
def _euler_product(order: Fraction) -> QSeries:
    """prod_{n>=1} (1 - q^n) via the pentagonal number theorem, known below ``order``."""
    terms = {}
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < order:
                terms[e] = -1 if kk & 1 else 1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return QSeries(terms, order)


@lru_cache(maxsize=256)
def _eta3_body(order: Fraction) -> QSeries:
    terms = {}
    n = 0
    while n * (n + 1) // 2 < order:
        terms[n * (n + 1) // 2] = (-1) ** n * (2 * n + 1)
        n += 1
    return QSeries(terms, order)


def eta_pow(p: int, order) -> QSeries:
    """``eta(tau)**p`` for any integer ``p``."""
    order = _order(order)
    offset = Fraction(p, 24)
    rel = order - offset
    if rel <= 0:
        return QSeries.zero(order)
    if p == 0:
        return QSeries.one()
    if p == 3:
        body = _eta3_body(rel)
    elif p == -3:
        body = div(QSeries.one(), _eta3_body(rel))
    elif p > 0:
        body = power(_euler_product(rel), p)
    else:
        body = div(QSeries.one(), power(_euler_product(rel), -p))
    return body.shift(offset)


# -- Jacobi theta ----------------------------------------------------------


def _span(bound: Fraction, scale: int) -> int:
    # crude but safe index range: |scale*n| <= sqrt(bound) + scale
    return math.isqrt(math.ceil(bound)) // max(scale, 1) + 2


@lru_cache(maxsize=512)
def _jacobi_theta(kind: ThetaKind, z_scale: int, order: Fraction) -> QSeries:
    half = kind in (ThetaKind.T10, ThetaKind.T11)
    signed = kind in (ThetaKind.T01, ThetaKind.T11)
    terms: dict[Fraction, YPoly] = {}
    N = _span(2 * order, 1)
    for n in range(-N, N + 1):
        two_nu = 2 * n + 1 if half else 2 * n
        e = Fraction(two_nu * two_nu, 8)
        if e >= order:
            continue
        c = -1 if (signed and n & 1) else 1
        terms[e] = terms.get(e, YPoly()) + YPoly.monomial(two_nu * z_scale, c)
    return QSeries(terms, order)


def jacobi_theta(kind: ThetaKind | str, z_scale: int, order) -> QSeries:
    """Defining sum of a Jacobi theta function in ``z_scale * z``.

    T11 returns the real normalization ``-i theta_11 = sum (-1)^n q^{(n+1/2)^2/2} u^{2n+1}``.
    """
    if isinstance(kind, str):
        kind = ThetaKind.parse(kind)
    if z_scale < 1:
        raise InvalidSpec("z_scale must be a positive integer")
    return _jacobi_theta(kind, int(z_scale), _order(order))


def theta_at_zero(kind: ThetaKind | str, order) -> QSeries:
    return jacobi_theta(kind, 1, order).at_z_zero()


# -- level-P theta and affine characters -----------------------------------


@lru_cache(maxsize=512)
def _level_theta(P: int, a: int, order: Fraction) -> QSeries:
    terms: dict[Fraction, YPoly] = {}
    N = _span(4 * P * order, 2 * P)
    for n in range(-N, N + 1):
        m = 2 * P * n + a
        e = Fraction(m * m, 4 * P)
        if e < order:
            terms[e] = terms.get(e, YPoly()) + YPoly.monomial(2 * m)
    return QSeries(terms, order)


def level_theta(idx: LevelIndex | tuple[int, int], order) -> QSeries:
    """``sum_n q^{(2Pn+a)^2/4P} y^{2Pn+a}``."""
    P, a = idx if isinstance(idx, LevelIndex) else LevelIndex(*idx)
    return _level_theta(P, a, _order(order))


def weyl_denominator(order) -> QSeries:
    return level_theta(LevelIndex(2, 1), order) - level_theta(LevelIndex(2, -1), order)


def chebyshev_I(two_l: int) -> YPoly:
    """``I_l(z) = sum_{n=-l}^{l} y^{2n}`` for ``l = two_l / 2`` (u-powers -4l..4l step 4)."""
    return YPoly({m: 1 for m in range(-2 * two_l, 2 * two_l + 1, 4)})


@lru_cache(maxsize=512)
def _affine_character(k: int, two_l: int, order: Fraction) -> QSeries:
    P = k + 2
    ext = order + Fraction(1, 4)
    num = level_theta(LevelIndex(P, two_l + 1), ext) - level_theta(LevelIndex(P, -two_l - 1), ext)
    return div(num, weyl_denominator(ext)).truncate(order)


def affine_character(k: int, ell, order) -> QSeries:
    """Level-``k`` SU(2) character of isospin ``ell`` as an exact Kac-Weyl quotient."""
    ell = as_fraction(ell)
    two_l = 2 * ell
    if k < 0 or two_l.denominator != 1 or not (0 <= two_l <= k):
        raise InvalidSpec(f"need 0 <= l <= k/2 with 2l integral (k={k}, l={ell})")
    return _affine_character(int(k), int(two_l), _order(order))


# -- weight 3/2 unary theta ------------------------------------------------


@lru_cache(maxsize=256)
def _psi(P: int, a: int, order: Fraction) -> QSeries:
    terms: dict[Fraction, int] = {}
    N = _span(4 * P * order, 2 * P)
    for j in range(-N, N + 1):
        n = 2 * P * j + a
        e = Fraction(n * n, 4 * P)
        if e < order:
            terms[e] = terms.get(e, 0) + n
    return QSeries(terms, order)


def psi(idx: LevelIndex | tuple[int, int], order) -> QSeries:
    """``sum_{n = a mod 2P} n q^{n^2/4P}``, the shadow attached to ``(P, a)``."""
    P, a = idx if isinstance(idx, LevelIndex) else LevelIndex(*idx)
    if not 0 < a < P:
        raise InvalidSpec("psi needs 0 < a < P")
    return _psi(P, a, _order(order))


# -- theta ratios and Jacobi-form checks ----------------------------------


@lru_cache(maxsize=256)
def _theta_ratio(kind: ThetaKind, order: Fraction) -> QSeries:
    lead = Fraction(1, 8) if kind is ThetaKind.T10 else Fraction(0)
    th = jacobi_theta(kind, 1, order + lead)
    return div(th, th.at_z_zero())


@lru_cache(maxsize=256)
def _theta_ratio_power(kind: ThetaKind, k: int, order: Fraction) -> QSeries:
    return power(_theta_ratio(kind, order), 2 * k)


def theta_ratio_power(kind: ThetaKind | str, k: int, order) -> QSeries:
    """``(theta_x(z)/theta_x(0))^{2k}`` for x in {10, 00, 01}."""
    if isinstance(kind, str):
        kind = ThetaKind.parse(kind)
    if kind is ThetaKind.T11:
        raise InvalidSpec("theta_11 vanishes at z = 0")
    if k < 0:
        raise InvalidSpec("k must be nonnegative")
    return _theta_ratio_power(kind, int(k), _order(order))


def check_elliptic_index(s: QSeries, m, phase: int = 1) -> bool:
    """Test ``s(z + tau) == phase * q^{-m} y^{-2m} s(z)`` on the jointly known range."""
    m = as_fraction(m)
    if (4 * m).denominator != 1:
        raise InvalidSpec("index must be a multiple of 1/4")
    shift_u = int(4 * m)
    T = s.trunc_order

    def inside(E: Fraction, j: int) -> bool:
        return T is None or (E < T - m and E < T + Fraction(j, 2))

    lhs: dict[tuple[Fraction, int], object] = {}
    rhs: dict[tuple[Fraction, int], object] = {}
    for e, c in s.terms:
        for j, v in c.terms:
            E = e + Fraction(j, 2)
            if inside(E, j):
                lhs[(E, j)] = lhs.get((E, j), 0) + v
            E2, j2 = e - m, j - shift_u
            if inside(E2, j2):
                rhs[(E2, j2)] = rhs.get((E2, j2), 0) + phase * v
    lhs = {k: v for k, v in lhs.items() if v}
    rhs = {k: v for k, v in rhs.items() if v}
    return lhs == rhs
