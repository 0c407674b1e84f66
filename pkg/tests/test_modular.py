from fractions import Fraction

import pytest

from mockchar.errors import InvalidSpec
from mockchar.modular import (
    LevelIndex,
    ThetaKind,
    affine_character,
    check_elliptic_index,
    eta_pow,
    jacobi_theta,
    level_theta,
    psi,
    theta_at_zero,
    theta_ratio_power,
)
from mockchar.series import QSeries, YPoly, coefficient_list


def test_eta_cubed_is_jacobi_triangular_series():
    # eta^3 = sum (-1)^n (2n+1) q^{(2n+1)^2/8}
    e3 = eta_pow(3, 12)
    want = QSeries({Fraction((2 * n + 1) ** 2, 8): (-1) ** n * (2 * n + 1) for n in range(10)}, 12)
    assert e3.agrees_with(want)


def test_eta_euler_pentagonal():
    e = eta_pow(1, 16)
    pent = {}
    for n in range(-5, 6):
        pent[Fraction(1, 24) + Fraction(n * (3 * n - 1), 2)] = (-1) ** abs(n)
    assert e.agrees_with(QSeries(pent, 16))


def test_eta_negative_power_is_partition_series():
    inv = eta_pow(-1, 8).shift(Fraction(1, 24))
    assert coefficient_list(inv, 0, 1, 8) == [1, 1, 2, 3, 5, 7, 11, 15]


def test_macdonald_eta_cubed_from_theta():
    # y d/dy of theta~_11 at y = 1 is eta^3
    th = jacobi_theta(ThetaKind.T11, 1, 6)
    e3 = eta_pow(3, 6)
    lin = QSeries({e: c.derivative().at_unit() for e, c in th.terms}, th.trunc_order)
    assert lin.agrees_with(e3)


def test_theta_at_zero_values():
    assert theta_at_zero("00", 3).agrees_with(QSeries({0: 1, Fraction(1, 2): 2, 2: 2}, 3))
    assert theta_at_zero("01", 3).agrees_with(QSeries({0: 1, Fraction(1, 2): -2, 2: 2}, 3))
    assert theta_at_zero("10", 3).agrees_with(QSeries({Fraction(1, 8): 2, Fraction(9, 8): 2}, 3))


def test_affine_character_level_one():
    chi = affine_character(1, Fraction(1, 2), 3)
    assert chi.valuation == Fraction(5, 24)
    assert chi.leading_coefficient == YPoly({2: 1, -2: 1})


@pytest.mark.parametrize("k", [1, 2, 3])
def test_affine_character_is_weyl_symmetric(k):
    for two_l in range(k + 1):
        chi = affine_character(k, Fraction(two_l, 2), 4)
        assert chi.reflect() == chi


def test_level_theta_periodicity_and_lead():
    assert LevelIndex(3, 8) == LevelIndex(3, 2)
    assert level_theta((3, 8), 4) == level_theta((3, 2), 4)
    t = level_theta((3, 2), 4)
    assert t.valuation == Fraction(1, 3)
    assert t.leading_coefficient == YPoly({4: 1})


def test_psi_level_three():
    assert psi((3, 1), 6).agrees_with(
        QSeries({Fraction(1, 12): 1, Fraction(25, 12): -5, Fraction(49, 12): 7}, 6)
    )


def test_psi_level_two_is_eta_cubed():
    assert psi((2, 1), 10).agrees_with(eta_pow(3, 10))


def test_theta_ratio_expansion():
    r = theta_ratio_power("00", 1, 2)
    assert r.coefficient(0) == YPoly.const(1)
    assert r.coefficient(Fraction(1, 2)) == YPoly({2: 2, 0: -4, -2: 2})


@pytest.mark.parametrize("kind", ["10", "00", "01"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_theta_ratio_index(kind, k):
    assert check_elliptic_index(theta_ratio_power(kind, k, 5), k)
    assert not check_elliptic_index(theta_ratio_power(kind, k, 5), k + 1)


def test_theta_ratio_rejects_theta11():
    with pytest.raises(InvalidSpec):
        theta_ratio_power("11", 1, 2)
