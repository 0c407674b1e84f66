"""Massive and massless characters of the N=4 superconformal algebra at level k.

Everything is built in the R-tilde sector, where the isospin-0 massless
character is an Appell sum with rational coefficients, and carried to the
other sectors by half-period shifts and spectral flow.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidSpec
from .modular import affine_character, eta_pow, jacobi_theta
from .series import (
    QSeries,
    YPoly,
    as_fraction,
    div,
    mul,
    power,
    product_to,
    shift_z_by_half,
    shift_z_by_half_tau,
)


class Sector(enum.Enum):
    R = "R"
    R_TILDE = "Rt"
    NS = "NS"
    NS_TILDE = "NSt"

    @classmethod
    def parse(cls, text: str) -> "Sector":
        t = text.strip()
        aliases = {"r": cls.R, "rt": cls.R_TILDE, "r~": cls.R_TILDE, "r_tilde": cls.R_TILDE,
                   "ns": cls.NS, "nst": cls.NS_TILDE, "ns~": cls.NS_TILDE, "ns_tilde": cls.NS_TILDE}
        try:
            return aliases[t.lower()]
        except KeyError:
            raise InvalidSpec(f"unknown sector {text!r}") from None

    @property
    def is_ramond(self) -> bool:
        return self in (Sector.R, Sector.R_TILDE)

    @property
    def is_tilde(self) -> bool:
        return self in (Sector.R_TILDE, Sector.NS_TILDE)


@dataclass(frozen=True)
class CharacterSpec:
    """Labels ``(sector, k, h, ell)``; NS labels are the NS conformal weight and isospin."""

    sector: Sector
    k: int
    h: Fraction
    ell: Fraction

    def __post_init__(self):
        object.__setattr__(self, "h", as_fraction(self.h))
        object.__setattr__(self, "ell", as_fraction(self.ell))
        if self.k < 1:
            raise InvalidSpec("level k must be positive")
        if (2 * self.ell).denominator != 1 or not 0 <= self.ell <= Fraction(self.k, 2):
            raise InvalidSpec(f"isospin {self.ell} outside 0..k/2")

    def ramond_labels(self) -> tuple[Fraction, Fraction]:
        """``(h, ell)`` of the Ramond representation flowing to this one."""
        if self.sector.is_ramond:
            return self.h, self.ell
        return ramond_from_ns(self.k, self.h, self.ell)

    @property
    def is_massless(self) -> bool:
        h, _ = self.ramond_labels()
        return h == Fraction(self.k, 4)


def ns_from_ramond(k: int, h, ell) -> tuple[Fraction, Fraction]:
    h, ell = as_fraction(h), as_fraction(ell)
    return h - ell + Fraction(k, 4), Fraction(k, 2) - ell


def ramond_from_ns(k: int, h, ell) -> tuple[Fraction, Fraction]:
    h, ell = as_fraction(h), as_fraction(ell)
    ell_r = Fraction(k, 2) - ell
    return h + ell_r - Fraction(k, 4), ell_r


# -- sector maps ----------------------------------------------------------


def sector_transform(s: QSeries, source: Sector, target: Sector, k: int) -> QSeries:
    """Move a level-``k`` character between sectors.

    Tilde sectors are half shifts in z; NS is reached from R by spectral flow
    ``q^{k/4} y^k ch(z + tau/2)``.  The elliptic index ``k`` bounds the
    truncation of the flowed series.
    """
    if source is target:
        return s
    # normalize to R
    if source is Sector.R_TILDE:
        s = shift_z_by_half(s)
    elif source is Sector.NS_TILDE:
        s = shift_z_by_half(s)
    if source in (Sector.NS, Sector.NS_TILDE):
        s = shift_z_by_half_tau(s, index=k, sign=-1).shift(Fraction(k, 4), -2 * k)
    # s is now in R
    if target is Sector.R:
        return s
    if target is Sector.R_TILDE:
        return shift_z_by_half(s)
    ns = shift_z_by_half_tau(s, index=k).shift(Fraction(k, 4), 2 * k)
    return ns if target is Sector.NS else shift_z_by_half(ns)


# -- building blocks ------------------------------------------------------


def _theta11_sq(t: Fraction) -> QSeries:
    return power(jacobi_theta("T11", 1, t - Fraction(1, 8)), 2)


def _chi(k: int, two_l: int, t: Fraction) -> QSeries:
    if t <= 0:
        return QSeries.zero(t)
    return affine_character(k, Fraction(two_l, 2), t)


def _massive_core(k: int, two_l: int, order: Fraction) -> QSeries:
    """``theta~_11^2 chi_{k-1,l-1/2} / eta^3`` (R-tilde sign not included)."""
    lead_chi = Fraction(two_l * two_l, 16 * (k + 1)) - Fraction(1, 8)
    return product_to(
        order,
        [
            (Fraction(1, 4), _theta11_sq),
            (Fraction(-1, 8), lambda t: eta_pow(-3, t)),
            (lead_chi, lambda t: _chi(k - 1, two_l - 1, t)),
        ],
    )


@lru_cache(maxsize=256)
def _massive_limit_rt(k: int, two_l: int, order: Fraction) -> QSeries:
    # (-1)^{2l} q^{-l^2/(k+1)} theta~_11^2 chi / eta^3, i.e. the R-tilde massive character at h = k/4
    off = -Fraction(two_l * two_l, 4 * (k + 1))
    core = _massive_core(k, two_l, order - off).shift(off)
    return -core if two_l & 1 else core


def massive_limit(k: int, ell, order, sector: Sector = Sector.R_TILDE) -> QSeries:
    """Right-hand side of the massless recursion: the massive character as h -> k/4."""
    ell = as_fraction(ell)
    if k < 1 or not Fraction(1, 2) <= ell <= Fraction(k, 2) or (2 * ell).denominator != 1:
        raise InvalidSpec(f"massive limit needs 1/2 <= l <= k/2 (k={k}, l={ell})")
    order = as_fraction(order)
    if sector is Sector.R_TILDE:
        return _massive_limit_rt(k, int(2 * ell), order)
    return _to_sector(lambda t: _massive_limit_rt(k, int(2 * ell), t), sector, k, order)


def _to_sector(build_rt, sector: Sector, k: int, order: Fraction) -> QSeries:
    """Build an R-tilde object and move it to ``sector`` with enough margin."""
    if sector.is_ramond:
        return sector_transform(build_rt(order), Sector.R_TILDE, sector, k)
    # spectral flow loses precision; widen until the requested order is reached
    margin = Fraction(k, 2) + 1
    while True:
        out = sector_transform(build_rt(order + margin), Sector.R_TILDE, sector, k)
        if out.trunc_order is None or out.trunc_order >= order:
            return out.truncate(order)
        margin *= 2


def massive_character(spec: CharacterSpec, order) -> QSeries:
    """Massive character; Ramond labels ``h > k/4``, ``1/2 <= l <= k/2``.

    ``h = k/4`` is accepted and gives the limit used in the massless recursion.
    """
    order = as_fraction(order)
    k = spec.k
    h, ell = spec.ramond_labels()
    if ell < Fraction(1, 2) or ell > Fraction(k, 2):
        raise InvalidSpec(f"massive representations need 1/2 <= l_R <= k/2, got l_R = {ell}")
    if h < Fraction(k, 4):
        raise InvalidSpec(f"h = {h} is below the unitarity bound k/4")
    n = h - Fraction(k, 4)
    two_l = int(2 * ell)
    return _to_sector(lambda t: _massive_limit_rt(k, two_l, t - n).shift(n), spec.sector, k, order)


# -- massless characters --------------------------------------------------


def appell_numerator(P: int, order: Fraction) -> QSeries:
    """``(1 - y) sum_m q^{P m^2} y^{2Pm} (1 + q^m y)/(1 - q^m y)`` with the m = 0 pole cleared."""
    acc: dict[tuple[Fraction, int], int] = {}

    def put(e: Fraction, ypow: int, c: int) -> None:
        # multiply by (1 - y) on the fly
        for dy, dc in ((0, 1), (1, -1)):
            key = (e, 2 * (ypow + dy))
            acc[key] = acc.get(key, 0) + c * dc

    acc[(Fraction(0), 0)] = 1
    acc[(Fraction(0), 2)] = 1
    m = 1
    while P * m * m < order:
        base = Fraction(P * m * m)
        for sgn in (1, -1):
            ybase = 2 * P * m * sgn
            put(base, ybase, sgn)
            j = 1
            while base + m * j < order:
                put(base + m * j, ybase + sgn * j, 2 * sgn)
                j += 1
        m += 1
    terms: dict[Fraction, dict[int, int]] = {}
    for (e, up), c in acc.items():
        if c:
            terms.setdefault(e, {})[up] = c
    return QSeries({e: YPoly(d) for e, d in terms.items()}, order)


@lru_cache(maxsize=128)
def _massless_iso0_rt(k: int, order: Fraction) -> QSeries:
    P = k + 1
    ext = order + Fraction(1, 4)
    th = jacobi_theta("T11", 1, ext)
    num = -mul(mul(th, th), appell_numerator(P, ext))
    one_minus_y = QSeries({0: YPoly({0: 1, 2: -1})})
    den = mul(mul(eta_pow(3, ext), jacobi_theta("T11", 2, ext)), one_minus_y)
    out = div(num, den)
    assert out.trunc_order is not None and out.trunc_order >= order
    return out.truncate(order)


def massless_character_iso0(k: int, sector: Sector = Sector.R_TILDE, order=1) -> QSeries:
    """Isospin-0 massless character; in R-tilde this is the Appell-sum series ``C_{k+1}``."""
    if k < 1:
        raise InvalidSpec("level k must be positive")
    order = as_fraction(order)
    if order <= 0:
        raise InvalidSpec("order must be positive")
    return _to_sector(lambda t: _massless_iso0_rt(k, t), sector, k, order)


@lru_cache(maxsize=512)
def _massless_rt(k: int, two_l: int, order: Fraction) -> QSeries:
    if two_l == 0:
        return _massless_iso0_rt(k, order)
    out = _massive_limit_rt(k, two_l, order) - 2 * _massless_rt(k, two_l - 1, order)
    if two_l >= 2:
        out = out - _massless_rt(k, two_l - 2, order)
    return out


def massless_character(spec: CharacterSpec, order) -> QSeries:
    """Massless character from the recursion seeded by the isospin-0 Appell sum."""
    h, ell = spec.ramond_labels()
    k = spec.k
    if h != Fraction(k, 4):
        raise InvalidSpec(f"massless characters sit at h = k/4 (Ramond), got h = {h}")
    if not 0 <= ell <= Fraction(k, 2):
        raise InvalidSpec(f"isospin {ell} exceeds k/2")
    order = as_fraction(order)
    return _to_sector(lambda t: _massless_rt(k, int(2 * ell), t), spec.sector, k, order)


def character(spec: CharacterSpec, order) -> QSeries:
    """Dispatch on the unitarity bound."""
    if spec.is_massless:
        return massless_character(spec, order)
    return massive_character(spec, order)


@dataclass(frozen=True)
class RecursionCheck:
    k: int
    ell: Fraction
    residual: QSeries
    circular: bool

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def check_recursion(k: int, ell, order, sign: int = 1) -> RecursionCheck:
    """Residual ``ch_l + 2 ch_{l-1/2} + ch_{l-1} - sign * M_l`` in the R-tilde sector.

    Massless characters with ``l > 0`` are themselves defined by this relation,
    so a zero residual is a consistency statement (``circular=True``).  Passing
    ``sign=-1`` is a negative control.
    """
    ell = as_fraction(ell)
    if not Fraction(1, 2) <= ell <= Fraction(k, 2):
        raise InvalidSpec("recursion needs 1/2 <= l <= k/2")
    order = as_fraction(order)

    def ch(l: Fraction) -> QSeries:
        if l < 0:
            return QSeries.zero(order)
        return massless_character(CharacterSpec(Sector.R_TILDE, k, Fraction(k, 4), l), order)

    lhs = ch(ell) + 2 * ch(ell - Fraction(1, 2)) + ch(ell - 1)
    res = lhs - sign * massive_limit(k, ell, order)
    return RecursionCheck(k, ell, res, circular=True)
