"""Reference data shipped with the package and comparisons against it."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from gmpy2 import mpq

from .mock import extract_H
from .series import SpecialPoint


def _read(name: str) -> str:
    return resources.files("mockchar").joinpath("data", name).read_text()


def load_h_reference() -> list[dict]:
    """Reference Fourier coefficients of ``H_P^(a)`` at the three half periods."""
    return json.loads(_read("h_reference.json"))


def load_table(name: str) -> str:
    """Canonical CSV text of a reference table (``gamma`` or ``gamma_ns``)."""
    return _read(f"{name}.csv")


@dataclass(frozen=True)
class Mismatch:
    P: int
    a: int
    point: SpecialPoint
    exponent: Fraction
    expected: Fraction
    computed: Fraction

    def describe(self) -> str:
        return (
            f"P={self.P} a={self.a} {self.point.name} q^{self.exponent}: "
            f"expected {self.expected}, computed {self.computed}"
        )


@dataclass
class ReferenceComparison:
    checked: int
    nonzero_checked: int
    mismatches: list[Mismatch]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def compare_h_reference(order=5, entries: list[dict] | None = None) -> ReferenceComparison:
    """Compare every reference coefficient with ``extract_H`` at the given working order."""
    entries = load_h_reference() if entries is None else entries
    checked = nonzero = 0
    bad: list[Mismatch] = []
    cache: dict[tuple[int, SpecialPoint], dict] = {}
    for ent in entries:
        P, a, pt = int(ent["P"]), int(ent["a"]), SpecialPoint[ent["point"]]
        if (P, pt) not in cache:
            cache[(P, pt)] = {h.a: h for h in extract_H(P, pt, order)}
        hs = cache[(P, pt)][a]
        off = Fraction(int(ent["offset_num"]), int(ent["offset_den"]))
        step = Fraction(1, int(ent.get("grid_den", 2)))
        for j, text in enumerate(ent["coeffs"]):
            e = off + j * step
            want = mpq(text)
            got = hs.coefficient(e)
            checked += 1
            nonzero += bool(want)
            if want != got:
                bad.append(Mismatch(P, a, pt, e, Fraction(str(want)), Fraction(str(got))))
    return ReferenceComparison(checked, nonzero, bad)
