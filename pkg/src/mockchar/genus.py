"""Elliptic genera of K3 and hyper-Kahler fourfolds and their character decompositions."""
from __future__ import annotations

import csv
import enum
import io
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction


from .characters import CharacterSpec, Sector, _massive_limit_rt, massless_character
from .errors import InconsistentSystem, InvalidSpec, OddParity
from .mock import solve_H, theta_product
from .series import QSeries, SpecialPoint, as_fraction, mul, specialize


class GenusKind(enum.Enum):
    K3 = "k3"
    SYMMETRIC_POWER_SUM = "sym"
    MIXED = "mixed"
    X2_FAMILY = "x2"


def _perms(config: tuple[int, int, int]) -> list[tuple[int, int, int]]:
    return sorted(set(itertools.permutations(config)), reverse=True)


def default_normalization(config: tuple[int, int, int]) -> int:
    """Default normalizations of the symmetrized products.

    ``(k,0,0)``: ``(k+1) 2^{2k}``; all distinct: ``2^{2 max - 1}``; a pair
    repeated on the larger value ``r``: ``2^{2r-1}``; all equal: ``2^{2k2}``.
    """
    a, b, c = sorted(config, reverse=True)
    if b == 0 and c == 0:
        return (a + 1) * 4**a
    if a == b == c:
        return 4**a
    if a > b > c:
        return 2 ** (2 * a - 1)
    if a == b:
        return 2 ** (2 * a - 1)
    raise InvalidSpec(
        f"no default normalization for {config}; pass one explicitly"
    )


@dataclass(frozen=True)
class GenusSpec:
    kind: GenusKind
    params: tuple[int, ...] = ()
    normalization: Fraction | None = None

    @classmethod
    def k3(cls) -> "GenusSpec":
        return cls(GenusKind.K3)

    @classmethod
    def symmetric(cls, k: int, normalization=None) -> "GenusSpec":
        if k < 1:
            raise InvalidSpec("k must be positive")
        return cls(GenusKind.SYMMETRIC_POWER_SUM, (k,), None if normalization is None else as_fraction(normalization))

    @classmethod
    def mixed(cls, k2: int, k3: int, k4: int, normalization=None) -> "GenusSpec":
        if min(k2, k3, k4) < 0 or k2 + k3 + k4 < 1:
            raise InvalidSpec("need nonnegative exponents with positive sum")
        return cls(GenusKind.MIXED, (k2, k3, k4), None if normalization is None else as_fraction(normalization))

    @classmethod
    def x2(cls, n: int) -> "GenusSpec":
        return cls(GenusKind.X2_FAMILY, (int(n),))

    @property
    def k(self) -> int:
        if self.kind is GenusKind.K3:
            return 1
        if self.kind is GenusKind.X2_FAMILY:
            return 2
        if self.kind is GenusKind.SYMMETRIC_POWER_SUM:
            return self.params[0]
        return sum(self.params)

    def terms(self) -> dict[tuple[int, int, int], Fraction]:
        """Theta-ratio exponent triples ``(k2, k3, k4)`` with their coefficients."""
        out: dict[tuple[int, int, int], Fraction] = {}

        def add(config, coeff):
            for t in _perms(config):
                out[t] = out.get(t, Fraction(0)) + coeff

        if self.kind is GenusKind.K3:
            add((1, 0, 0), Fraction(8))
        elif self.kind is GenusKind.SYMMETRIC_POWER_SUM:
            k = self.params[0]
            norm = self.normalization if self.normalization is not None else Fraction((k + 1) * 4**k)
            add((k, 0, 0), norm)
        elif self.kind is GenusKind.MIXED:
            cfg = tuple(self.params)
            norm = self.normalization if self.normalization is not None else Fraction(default_normalization(cfg))
            add(cfg, norm)
        else:
            n = self.params[0]
            add((2, 0, 0), Fraction(48))
            add((1, 1, 0), Fraction(4 * n))
        return {t: c for t, c in out.items() if c}

    def label(self) -> str:
        if self.kind is GenusKind.K3:
            return "k3"
        if self.kind is GenusKind.X2_FAMILY:
            return f"x2:{self.params[0]}"
        base = f"{self.kind.value}:" + ":".join(str(p) for p in self.params)
        return base if self.normalization is None else f"{base}@{self.normalization}"


def build_genus(spec: GenusSpec, order) -> QSeries:
    order = as_fraction(order)
    out = QSeries.zero(order)
    for cfg, c in spec.terms().items():
        out = out + theta_product(cfg, order) * c
    return out


# -- decomposition ----------------------------------------------------------


@dataclass
class DecompositionReport:
    k: int
    label: str
    normalization: Fraction | None
    massless_raw: dict[int, Fraction]  # keyed by 2l
    massive: dict[int, dict[Fraction, Fraction]]  # a -> {n: multiplicity}
    trunc_n: Fraction  # massive multiplicities known for n < trunc_n
    euler: Fraction
    diagnostics: dict = field(default_factory=dict)

    def ns_weighted(self, two_l: int) -> Fraction:
        return (-1) ** two_l * self.massless_raw[two_l] / (two_l + 1)

    def massive_stream(self, a: int, half_steps: bool = False) -> list[Fraction]:
        step = Fraction(1, 2) if half_steps else Fraction(1)
        out = []
        n = step
        while n < self.trunc_n:
            out.append(self.massive.get(a, {}).get(n, Fraction(0)))
            n += step
        return out

    def basis_stream(self, a: int, half_steps: bool = False) -> list[Fraction]:
        """Coefficients of ``q^{n - a^2/4P} B^{(a)}``; these differ from the massive multiplicities by ``(-1)^{a+1}``."""
        return [(-1) ** (a + 1) * c for c in self.massive_stream(a, half_steps)]

    def has_half_integer_massive(self) -> bool:
        return any(n.denominator != 1 and v for m in self.massive.values() for n, v in m.items())

    def to_dict(self) -> dict:
        half = self.has_half_integer_massive()
        return {
            "k": self.k,
            "genus": self.label,
            "normalization": None if self.normalization is None else str(self.normalization),
            "euler": str(self.euler),
            "massless": [
                {"two_l": tl, "raw_mult": str(v), "ns_weighted_mult": str(self.ns_weighted(tl))}
                for tl, v in sorted(self.massless_raw.items())
            ],
            "massive": [
                {"a": a, "n_den": 2 if half else 1, "coeffs": [str(c) for c in self.massive_stream(a, half)]}
                for a in sorted(self.massive)
            ],
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        """One row per multiplicity: ``kind,two_l,h,raw,ns_weighted``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "two_l", "h", "raw", "ns_weighted"])
        h0 = Fraction(self.k, 4)
        for tl, v in sorted(self.massless_raw.items()):
            w.writerow(["massless", tl, h0, v, self.ns_weighted(tl)])
        for a in sorted(self.massive):
            for n, v in sorted(self.massive[a].items()):
                w.writerow(["massive", a, h0 + n, v, (-1) ** a * v])
        return buf.getvalue()


def _mass_coeffs(G: QSeries, a: int, P: int, order: Fraction) -> dict[Fraction, Fraction]:
    off = -Fraction(a * a, 4 * P)
    out: dict[Fraction, Fraction] = {}
    for e, c in G.terms:
        n = e - off
        if (2 * n).denominator != 1 or n < 0 or not c.is_constant():
            raise InconsistentSystem(f"unmatched term q^{e} in the isospin-{a}/2 channel")
        out[n] = Fraction(int(c.constant_term().numerator), int(c.constant_term().denominator))
    return out


def decompose_genus(spec: GenusSpec, order, verify: bool = True) -> DecompositionReport:
    """Massless multiplicities (R-tilde, signed) and massive streams of a genus.

    ``order`` is the absolute q-order of the underlying identities; massive
    multiplicities at ``h = k/4 + n`` are returned for ``0 < n < order``.
    """
    order = as_fraction(order)
    k = spec.k
    P = k + 1
    terms = spec.terms()
    S = sum(terms.values(), Fraction(0))
    G: dict[int, QSeries] = {a: QSeries.zero() for a in range(1, P)}
    for cfg, c in terms.items():
        for hs in solve_H(P, cfg, order):
            G[hs.a] = G[hs.a] + hs.to_qseries() * c
    g: dict[int, dict[Fraction, Fraction]] = {a: _mass_coeffs(G[a], a, P, order) for a in range(1, P)}
    g0 = {0: S}
    for a in range(1, P):
        g0[a] = g[a].get(Fraction(0), Fraction(0))
    for a in (P, P + 1):
        g0[a] = Fraction(0)
    raw = {b: (-1) ** b * (g0[b] - 2 * g0[b + 1] + g0[b + 2]) for b in range(0, P)}
    massive = {a: {n: (-1) ** a * v for n, v in g[a].items() if n > 0 and v} for a in range(1, P)}
    trunc_n = min((G[a].trunc_order + Fraction(a * a, 4 * P) for a in range(1, P)), default=order)
    euler_series = build_genus(spec, min(order, Fraction(3))).at_z_zero()
    euler = euler_series.coefficient(0).constant_term()
    diag = {
        "massless_integral": all(v.denominator == 1 for v in raw.values()),
        "massive_integral": all(v.denominator == 1 for m in massive.values() for v in m.values()),
        "massive_positive": all(v > 0 for m in massive.values() for v in m.values()),
        "witten_index_constant": all(e == 0 for e, _ in euler_series.terms),
    }
    rep = DecompositionReport(k, spec.label(), spec.normalization, raw, massive, trunc_n, Fraction(int(euler.numerator), int(euler.denominator)), diag)
    if verify:
        residual = reconstruction_residual(rep, spec, order)
        if not residual.is_zero():
            raise InconsistentSystem(f"reconstruction residual {residual}")
        rep.diagnostics["reconstruction_residual_zero"] = True
    return rep


def reconstruction_residual(rep: DecompositionReport, spec: GenusSpec, order) -> QSeries:
    """``Z - sum m ch_massless - sum A ch_massive`` to the working order."""
    order = as_fraction(order)
    k = rep.k
    total = QSeries.zero(order)
    for two_l, m in rep.massless_raw.items():
        if m:
            ch = massless_character(CharacterSpec(Sector.R_TILDE, k, Fraction(k, 4), Fraction(two_l, 2)), order)
            total = total + ch * m
    for a, stream in rep.massive.items():
        if not stream:
            continue
        weights = QSeries(stream, rep.trunc_n)
        # sum_n A_n q^n M_{a/2} is the sum of massive characters at h = k/4 + n
        total = total + mul(weights, _massive_limit_rt(k, a, order))
    Z = build_genus(spec, order)
    res = Z - total
    return res.truncate(min(order, res.trunc_order)) if res.trunc_order is not None else res


# -- invariants ---------------------------------------------------------------


@dataclass
class TopologicalInvariants:
    euler: Fraction
    signature_series: QSeries
    ahat_series: QSeries

    @property
    def signature(self) -> Fraction:
        c = self.signature_series.coefficient(0).constant_term()
        return Fraction(int(c.numerator), int(c.denominator))

    @property
    def ahat(self) -> Fraction:
        c = self.ahat_series.coefficient(0).constant_term()
        return Fraction(int(c.numerator), int(c.denominator))


def topological_invariants(spec: GenusSpec, order) -> TopologicalInvariants:
    """``Z(0)``, ``Z(1/2)`` and ``q^{k/2} Z((1+tau)/2)``, each known below ``order``.

    The Euler number is read at q^0; higher orders of ``Z(0)`` must vanish.
    """
    order = as_fraction(order)
    k = spec.k
    Z = build_genus(spec, order)
    if not Z.is_even():
        raise OddParity("genus has odd powers of u")
    z0 = Z.at_z_zero()
    if any(e != 0 for e, _ in z0.terms):
        raise InconsistentSystem("Z(z=0) depends on q")
    euler = z0.coefficient(0).constant_term()
    sig = specialize(Z, SpecialPoint.HALF)
    work = order
    while True:
        # the tau-shift loses precision; enlarge the working order until enough survives
        ah = specialize(build_genus(spec, work), SpecialPoint.HALF_PLUS_HALF_TAU, index=k).shift(Fraction(k, 2))
        if ah.trunc_order >= order:
            break
        work += max(Fraction(1), order - ah.trunc_order)
    return TopologicalInvariants(Fraction(int(euler.numerator), int(euler.denominator)), sig, ah.truncate(order))


# -- the X_2(n) family ----------------------------------------------------------


@dataclass
class Constraint:
    name: str
    const: Fraction
    slope: Fraction

    def value(self, n: int) -> Fraction:
        return self.const + self.slope * n

    def ok(self, n: int) -> bool:
        v = self.value(n)
        return v >= 0 and v.denominator == 1


@dataclass
class AdmissibleRange:
    lo: int
    hi: int
    lower_violation: tuple[str, Fraction]
    upper_violation: tuple[str, Fraction]
    constraints: list[Constraint]


def x2_constraints(order) -> list[Constraint]:
    """Affine NS multiplicities of ``Z_{X_2(n)} = Z_sym(2) + 2n Z_mixed(1,1,0)``."""
    order = as_fraction(order)
    base = decompose_genus(GenusSpec.symmetric(2), order)
    pair = decompose_genus(GenusSpec.mixed(1, 1, 0), order)
    out: list[Constraint] = []
    for tl in sorted(base.massless_raw):
        out.append(Constraint(f"massless NS 2l={tl}", base.ns_weighted(tl), 2 * pair.ns_weighted(tl)))
    for a in sorted(base.massive):
        ns = sorted(set(base.massive[a]) | set(pair.massive.get(a, {})))
        for n in ns:
            out.append(
                Constraint(
                    f"massive a={a} n={n}",
                    base.massive[a].get(n, Fraction(0)),
                    2 * pair.massive.get(a, {}).get(n, Fraction(0)),
                )
            )
    return out


def x2_admissible_range(order, search: int = 10_000) -> AdmissibleRange:
    """Largest integer interval of n around 0 where every NS multiplicity is a nonnegative integer."""
    cons = x2_constraints(order)

    def ok(n: int) -> bool:
        return all(c.ok(n) for c in cons)

    if not ok(0):
        raise InconsistentSystem("n = 0 is not admissible")
    lo = 0
    while lo > -search and ok(lo - 1):
        lo -= 1
    hi = 0
    while hi < search and ok(hi + 1):
        hi += 1

    def first_bad(n: int) -> tuple[str, Fraction]:
        for c in cons:
            if not c.ok(n):
                return c.name, c.value(n)
        return "search limit", Fraction(0)

    return AdmissibleRange(lo, hi, first_bad(lo - 1), first_bad(hi + 1), cons)
