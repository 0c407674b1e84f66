"""Mock-modular coefficient functions H_P^(a) at half periods.

The massless character ``C_P`` differs from a product of theta ratios by a
combination ``sum_a H^(a)(tau) B^(a)(z;tau)``.  Expanding both sides in q and
matching the independent leading Laurent polynomials of ``B^(a)`` fixes the
coefficients of ``H^(a)`` one half-integer order at a time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from .characters import _massive_core, _massless_iso0_rt
from .errors import InconsistentSystem, InvalidSpec, SingularLeadingBlock
from .modular import chebyshev_I, eta_pow, jacobi_theta, theta_ratio_power
from .series import QSeries, Rational, SpecialPoint, YPoly, as_fraction, div, mul

POINT_KIND = {
    SpecialPoint.HALF: "T10",
    SpecialPoint.HALF_PLUS_HALF_TAU: "T00",
    SpecialPoint.HALF_TAU: "T01",
}


def parse_point(text: str | SpecialPoint) -> SpecialPoint:
    if isinstance(text, SpecialPoint):
        return text
    key = text.strip().upper().replace(" ", "")
    table = {
        "HALF": SpecialPoint.HALF, "1/2": SpecialPoint.HALF,
        "HALF_PLUS_HALF_TAU": SpecialPoint.HALF_PLUS_HALF_TAU, "(1+TAU)/2": SpecialPoint.HALF_PLUS_HALF_TAU,
        "HALF_TAU": SpecialPoint.HALF_TAU, "TAU/2": SpecialPoint.HALF_TAU,
    }
    try:
        return table[key]
    except KeyError:
        raise InvalidSpec(f"unknown special point {text!r}") from None


# -- basis functions ------------------------------------------------------


@lru_cache(maxsize=128)
def _basis_B(P: int, a: int, order: Fraction) -> QSeries:
    return -_massive_core(P - 1, a, order)


def basis_B(P: int, a: int, order) -> QSeries:
    """``theta_11(z)^2 chi_{P-2,(a-1)/2}(z) / eta^3``, i.e. ``-theta~_11^2 chi / eta^3``."""
    if P < 2 or not 1 <= a <= P - 1:
        raise InvalidSpec(f"basis function needs 1 <= a <= P-1 (P={P}, a={a})")
    return _basis_B(int(P), int(a), as_fraction(order))


def basis_leading(P: int, a: int) -> YPoly:
    """``-(u - 1/u)^2 I_{(a-1)/2}``, the coefficient of ``q^{a^2/4P}`` in ``B^(a)``."""
    w = YPoly({2: 1, 0: -2, -2: 1})
    return -(w * chebyshev_I(a - 1))


# -- level one -------------------------------------------------------------


def _lerch_half_sum(order: Fraction, which: int) -> QSeries:
    """The bilateral sums in the level-one h functions, expanded geometrically.

    Every summand is ``s * q^A / (1 + eps q^p)`` with ``p > 0``.
    """
    acc: dict[Fraction, Fraction] = {}

    def geometric(A: Fraction, p: Fraction, eps: int, s: Fraction) -> None:
        j = 0
        while A + p * j < order:
            acc[A + p * j] = acc.get(A + p * j, 0) + s * (-eps) ** j
            j += 1

    half = Fraction(1, 2)
    N = math.isqrt(max(1, 2 * math.ceil(order))) + 3
    for n in range(-N, N + 1):
        if which == 2:
            A = Fraction(n * (n + 1), 2)
            if n == 0:
                if 0 < order:
                    acc[Fraction(0)] = acc.get(Fraction(0), 0) + half
                continue
            if n > 0:
                geometric(A, Fraction(n), 1, Fraction(1))
            else:
                # q^A / (1 + q^n) = q^{A-n} / (1 + q^{-n})
                geometric(A - n, Fraction(-n), 1, Fraction(1))
            continue
        A = Fraction(n * n, 2) - Fraction(1, 8)
        p = n - half
        eps = 1 if which == 3 else -1
        sign = (-1) ** n if which == 4 else 1
        if p > 0:
            geometric(A, p, eps, Fraction(sign))
        else:
            # q^A / (1 + eps q^{p}) = eps q^{A-p} / (1 + eps q^{-p})
            geometric(A - p, -p, eps, Fraction(sign * eps))
    return QSeries({e: c for e, c in acc.items() if c}, order)


@lru_cache(maxsize=64)
def _level1_mu(which: int, order: Fraction) -> QSeries:
    kind = {2: "T10", 3: "T00", 4: "T01"}[which]
    lead = Fraction(1, 8) if which == 2 else Fraction(0)
    # mu = sum / theta_x(0); the sum for h_3, h_4 starts at q^{3/8}, for h_2 at q^0
    th0 = jacobi_theta(kind, 1, order + 2 * lead + 1).at_z_zero()
    s = _lerch_half_sum(order + 2 * lead + 1, which)
    return div(s, th0).truncate(order)


def level1_mu(which: int, order) -> QSeries:
    """``mu`` at the half period labelled by ``which`` (2: 1/2, 3: (1+tau)/2, 4: tau/2)."""
    if which not in (2, 3, 4):
        raise InvalidSpec("which must be 2, 3 or 4")
    return _level1_mu(which, as_fraction(order))


def level1_h(which: int, order) -> QSeries:
    """``h_which = mu(w)/eta``."""
    order = as_fraction(order)
    if which not in (2, 3, 4):
        raise InvalidSpec("which must be 2, 3 or 4")
    lead_mu = Fraction(-1, 8) if which == 2 else Fraction(3, 8)
    ext = order + Fraction(1, 24) + 1
    return div(level1_mu(which, ext + lead_mu + 1), eta_pow(1, ext)).truncate(order)


# -- exact linear algebra --------------------------------------------------


def bareiss_solve(rows: Sequence[Sequence[Rational]], rhs: Sequence[Rational]) -> list[Rational]:
    """Solve an overdetermined consistent system exactly.

    Rows are scaled to integers and eliminated fraction-free; a nonzero
    residual in a redundant row raises :class:`InconsistentSystem`, a rank
    deficit raises :class:`SingularLeadingBlock`.
    """
    n = len(rows[0]) if rows else 0
    M: list[list[int]] = []
    for r, b in zip(rows, rhs):
        vals = [mpq(x) for x in r] + [mpq(b)]
        den = 1
        for v in vals:
            den = den * int(v.denominator) // math.gcd(den, int(v.denominator))
        M.append([int(v * den) for v in vals])
    m = len(M)
    prev = 1
    piv_cols: list[int] = []
    row = 0
    for col in range(n):
        p = next((i for i in range(row, m) if M[i][col]), None)
        if p is None:
            raise SingularLeadingBlock(f"no pivot for unknown {col}")
        M[row], M[p] = M[p], M[row]
        pv = M[row][col]
        for i in range(row + 1, m):
            f = M[i][col]
            Mi = M[i]
            Mr = M[row]
            for j in range(col, n + 1):
                Mi[j] = (pv * Mi[j] - f * Mr[j]) // prev
        prev = pv
        piv_cols.append(col)
        row += 1
    for i in range(row, m):
        if M[i][n]:
            raise InconsistentSystem("overdetermined system has a nonzero residual")
    x = [mpq(0)] * n
    for i in range(n - 1, -1, -1):
        acc = mpq(M[i][n])
        for j in range(i + 1, n):
            acc -= M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return x


# -- H series --------------------------------------------------------------


@dataclass
class HSeries:
    """``q^offset * sum_j coeffs[j] q^{j/2}``, known below ``offset + len(coeffs)/2``."""

    P: int
    a: int
    point: SpecialPoint | None
    offset: Fraction
    coeffs: list[Rational]
    config: tuple[int, int, int] | None = None

    grid_den = 2

    @property
    def trunc_order(self) -> Fraction:
        return self.offset + Fraction(len(self.coeffs), 2)

    def coefficient(self, e) -> Rational:
        j = (as_fraction(e) - self.offset) * 2
        if j.denominator != 1 or j < 0:
            return mpq(0)
        j = int(j)
        if j >= len(self.coeffs):
            raise ValueError(f"q^{e} lies beyond the computed range")
        return self.coeffs[j]

    def to_qseries(self) -> QSeries:
        return QSeries(
            {self.offset + Fraction(j, 2): c for j, c in enumerate(self.coeffs) if c},
            self.trunc_order,
        )

    def integer_steps_only(self) -> bool:
        return all(not c for c in self.coeffs[1::2])

    def to_dict(self) -> dict:
        return {
            "P": self.P,
            "a": self.a,
            "point": None if self.point is None else self.point.name,
            "offset_num": self.offset.numerator,
            "offset_den": self.offset.denominator,
            "grid_den": 2,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HSeries":
        pt = d.get("point")
        return cls(
            P=int(d["P"]),
            a=int(d["a"]),
            point=None if pt is None else SpecialPoint[pt],
            offset=Fraction(int(d["offset_num"]), int(d["offset_den"])),
            coeffs=[mpq(c) for c in d["coeffs"]],
        )


def _config_for(point: SpecialPoint, P: int) -> tuple[int, int, int]:
    return {
        SpecialPoint.HALF: (P - 1, 0, 0),
        SpecialPoint.HALF_PLUS_HALF_TAU: (0, P - 1, 0),
        SpecialPoint.HALF_TAU: (0, 0, P - 1),
    }[point]


@lru_cache(maxsize=64)
def theta_product(config: tuple[int, int, int], order: Fraction) -> QSeries:
    """``prod_x (theta_x(z)/theta_x(0))^{2 k_x}`` over x = 10, 00, 01."""
    out = QSeries.one()
    for kind, k in zip(("T10", "T00", "T01"), config):
        if k:
            out = mul(out, theta_ratio_power(kind, k, order))
    return out.truncate(order)


@lru_cache(maxsize=64)
def _solve_H(P: int, config: tuple[int, int, int], order: Fraction) -> tuple[tuple[Rational, ...], ...]:
    delta = _massless_iso0_rt(P - 1, order) - theta_product(config, order)
    T = order
    nsteps = int(math.ceil(2 * T))  # relative orders r = j/2 < T
    B = [None] + [_basis_B(P, a, order + Fraction(P, 4) + 1) for a in range(1, P)]
    # b[a][s2] = coefficient of q^{a^2/4P + s2/2} in B^(a)
    b: list[list[YPoly]] = [[]]
    for a in range(1, P):
        base = Fraction(a * a, 4 * P)
        b.append([B[a].coefficient(base + Fraction(s, 2)) for s in range(nsteps)])
    lead = [b[a][0] for a in range(1, P)]
    upows = sorted({m for p in lead for m, _ in p.terms})
    h: list[list[Rational]] = [[] for _ in range(P)]
    for j in range(nsteps):
        r = Fraction(j, 2)
        if r >= T:
            break
        target = delta.coefficient(r)
        for a in range(1, P):
            for s in range(1, j + 1):
                hv = h[a][j - s]
                if hv and b[a][s]:
                    target = target - b[a][s] * hv
        rows_u = sorted(set(upows) | {m for m, _ in target.terms})
        rows = [[lead[a - 1].coeff(m) for a in range(1, P)] for m in rows_u]
        rhs = [target.coeff(m) for m in rows_u]
        x = bareiss_solve(rows, rhs)
        for a in range(1, P):
            h[a].append(x[a - 1])
    return tuple(tuple(h[a]) for a in range(1, P))


def solve_H(P: int, config: Sequence[int], order) -> list[HSeries]:
    """Coefficient functions for the theta product with exponents ``2*config``.

    ``config = (k2, k3, k4)`` with ``k2 + k3 + k4 = P - 1``.  ``order`` is the
    absolute q-order to which the defining identity is matched; ``H^(a)`` is
    then known below ``order - a^2/4P``.
    """
    config = tuple(int(c) for c in config)
    if P < 2 or len(config) != 3 or sum(config) != P - 1 or min(config) < 0:
        raise InvalidSpec(f"configuration {config} does not sum to P-1 = {P - 1}")
    order = as_fraction(order)
    if order <= 0:
        raise InvalidSpec("order must be positive")
    sols = _solve_H(int(P), config, order)
    point = None
    for pt in SpecialPoint:
        if _config_for(pt, P) == config:
            point = pt
    out = []
    for a, coeffs in enumerate(sols, start=1):
        coeffs = list(coeffs)
        offset = -Fraction(a * a, 4 * P)
        if point in (SpecialPoint.HALF_PLUS_HALF_TAU, SpecialPoint.HALF_TAU):
            # the first a entries vanish identically
            if any(coeffs[:a]):
                raise InconsistentSystem(f"H^({a}) has terms below q^(a/2) in its frame")
            coeffs = coeffs[a:]
            offset += Fraction(a, 2)
        out.append(HSeries(P, a, point, offset, coeffs, config))
    return out


def extract_H(P: int, point: SpecialPoint | str, order) -> list[HSeries]:
    """``H_P^(a)`` at a half period for ``a = 1..P-1``."""
    point = parse_point(point)
    return solve_H(P, _config_for(point, P), order)


def reconstruct_theta_product(P: int, config: Sequence[int], order) -> QSeries:
    """``C_P - sum_a H^(a) B^(a)``; equals the theta product when the solve is right."""
    order = as_fraction(order)
    hs = solve_H(P, config, order)
    out = _massless_iso0_rt(P - 1, order)
    for hs_a in hs:
        out = out - mul(hs_a.to_qseries(), basis_B(P, hs_a.a, order + 1))
    return out.truncate(order)


# -- coefficient tables ----------------------------------------------------


def alpha(P: int, a: int, alpha0: int = 3) -> Fraction:
    """Leading coefficient of ``H_P^(a)(1/2)``; ``alpha0`` is the a = 0 convention."""
    if a == 0:
        return Fraction(alpha0)
    if a >= P:
        return Fraction(0)
    return sum(
        (Fraction((-1) ** (m + a), 2 ** (2 * m - 1)) * Fraction(a, m + a) * math.comb(P - 1, m) * math.comb(2 * m - 1, m - a)
         for m in range(a, P)),
        Fraction(0),
    )


def beta(n: int, k: int) -> Fraction:
    if k > n or k < 0:
        return Fraction(0)
    return Fraction(2 * (k + 1), n + k + 2) * math.comb(2 * n + 1, n - k)


def gamma_from_alpha(k: int, a: int, alpha0: int = 3) -> Fraction:
    P = k + 1
    return 2 ** (2 * k) * (alpha(P, a, alpha0) - 2 * alpha(P, a + 1, alpha0) + alpha(P, a + 2, alpha0))


def gamma_closed(k: int, a: int) -> int:
    if a == 0:
        return math.comb(2 * k + 2, k + 1) // (k + 2) + 2 ** (2 * k + 1)
    return int(Fraction(2 * (a + 1), k + a + 2) * math.comb(2 * k + 1, k - a))


@dataclass
class CoefficientTables:
    kmax: int
    alpha: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    beta: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    gamma: dict[tuple[int, int], int] = field(default_factory=dict)

    def gamma_row(self, k: int) -> list[int]:
        return [self.gamma[(k, a)] for a in range(k + 1)]

    def ns_row(self, k: int) -> list[int]:
        return [(k + 1) * self.gamma[(k, a)] // (a + 1) for a in range(k + 1)]


def coefficient_tables(kmax: int) -> CoefficientTables:
    """Alpha, beta and gamma up to level ``kmax``; the two gamma routes are cross-checked."""
    if kmax < 1:
        raise InvalidSpec("kmax must be at least 1")
    t = CoefficientTables(kmax)
    for P in range(2, kmax + 2):
        for a in range(1, P):
            t.alpha[(P, a)] = alpha(P, a)
    for n in range(0, kmax + 1):
        for k in range(0, n + 1):
            t.beta[(n, k)] = beta(n, k)
    for k in range(1, kmax + 1):
        for a in range(0, k + 1):
            g = gamma_from_alpha(k, a)
            if g.denominator != 1:
                raise InconsistentSystem(f"gamma_{k},{a} = {g} is not integral")
            if g != gamma_closed(k, a):
                raise InconsistentSystem(f"gamma_{k},{a}: {g} != closed form {gamma_closed(k, a)}")
            if ((k + 1) * int(g)) % (a + 1):
                raise InconsistentSystem(f"(k+1)/(a+1) gamma_{k},{a} is not integral")
            t.gamma[(k, a)] = int(g)
    return t


def gamma_staircase_oracle(k: int, a: int) -> int:
    """Count 0/1 words with k+2 ones and k-1 zeros whose maximal prefix excess is a+2."""
    if k > 12:
        raise InvalidSpec("brute force is limited to k <= 12")
    return staircase_histogram(k).get(a + 2, 0)


@lru_cache(maxsize=None)
def staircase_histogram(k: int) -> dict[int, int]:
    """Maximal prefix excess -> number of words, by depth-first enumeration."""
    hist: dict[int, int] = {}

    def walk(ones: int, zeros: int, height: int, best: int) -> None:
        if ones == 0 and zeros == 0:
            hist[best] = hist.get(best, 0) + 1
            return
        if ones:
            walk(ones - 1, zeros, height + 1, max(best, height + 1))
        if zeros:
            walk(ones, zeros - 1, height - 1, best)

    walk(k + 2, max(k - 1, 0), 0, 0)
    return hist


def chebyshev_expand(n: int) -> list[int]:
    """Coefficients ``c_k`` with ``(u - 1/u)^{2n} = sum_k c_k I_{k/2}``."""
    if n < 0:
        raise InvalidSpec("n must be nonnegative")
    return [(-1) ** (n + k) * int(beta(n, k)) for k in range(n + 1)]


# -- massive streams --------------------------------------------------------


@dataclass
class MassiveStream:
    P: int
    streams: dict[int, list[Rational]]
    integral: bool
    positive: bool
    half_integer_residue: bool


def summed_H(P: int, order) -> dict[int, QSeries]:
    """``H^(a)(1/2) + H^(a)((1+tau)/2) + H^(a)(tau/2)`` as q-series."""
    order = as_fraction(order)
    out: dict[int, QSeries] = {}
    for pt in SpecialPoint:
        for hs in extract_H(P, pt, order):
            s = hs.to_qseries()
            out[hs.a] = out[hs.a] + s if hs.a in out else s
    return out


def massive_stream(P: int, order) -> MassiveStream:
    """``A_{P,n}^(a) = (-1)^a [q^{n - a^2/4P}] sum_w H^(a)(w)`` for ``n >= 1``.

    The sign makes these the multiplicities of R-tilde massive characters of
    isospin ``a/2``; scale by the genus normalization to get integers.
    """
    sums = summed_H(P, order)
    streams: dict[int, list[Rational]] = {}
    residue = False
    for a, s in sums.items():
        off = -Fraction(a * a, 4 * P)
        T = s.trunc_order
        vals = []
        for e, c in s.terms:
            rel = e - off
            if rel.denominator != 1:
                residue = True
        n = 1
        while off + n < T:
            vals.append((-1) ** a * s.coefficient(off + n).constant_term())
            n += 1
        streams[a] = vals
    integral = all(v.denominator == 1 for vs in streams.values() for v in vs)
    positive = all(v > 0 for vs in streams.values() for v in vs)
    return MassiveStream(P, streams, integral, positive, residue)
