from fractions import Fraction

import pytest

from mockchar.characters import (
    CharacterSpec,
    Sector,
    character,
    check_recursion,
    massive_character,
    massless_character,
    massless_character_iso0,
    ns_from_ramond,
    ramond_from_ns,
    sector_transform,
)
from mockchar.errors import InvalidSpec
from mockchar.modular import check_elliptic_index
from mockchar.series import QSeries, YPoly

H = Fraction(1, 2)


def test_isospin_zero_rt_character_first_terms():
    c = massless_character_iso0(1, order=2)
    assert c.coefficient(0) == YPoly.const(1)
    assert c.coefficient(1) == YPoly({-4: 1, -2: -2, 0: 2, 2: -2, 4: 1})


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_appell_series_index(k):
    assert check_elliptic_index(massless_character_iso0(k, order=5), k)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_witten_index_of_massless_characters(k):
    for two_l in range(k + 1):
        ch = massless_character(CharacterSpec(Sector.R_TILDE, k, Fraction(k, 4), Fraction(two_l, 2)), 4)
        assert ch.at_z_zero().agrees_with(QSeries({0: (-1) ** two_l * (two_l + 1)}, 4))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_massive_witten_index_vanishes(k):
    for two_l in range(1, k):
        spec = CharacterSpec(Sector.R_TILDE, k, Fraction(k, 4) + 1, Fraction(two_l, 2))
        assert massive_character(spec, 4).at_z_zero().is_zero()


def test_ns_vacuum_level_one():
    vac = character(CharacterSpec(Sector.NS, 1, 0, 0), 2)
    assert vac.valuation == Fraction(-1, 4)
    assert vac.leading_coefficient == YPoly.const(1)
    # no weight-1/2 descendants of the vacuum; currents at weight 1
    assert vac.coefficient(Fraction(1, 4)).is_constant() and not vac.coefficient(Fraction(1, 4))
    assert vac.coefficient(Fraction(3, 4)) == YPoly({-4: 1, 0: 1, 4: 1})


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ns_vacuum_from_flow(k):
    r = massless_character(CharacterSpec(Sector.R, k, Fraction(k, 4), Fraction(k, 2)), 3)
    ns = sector_transform(r, Sector.R, Sector.NS, k)
    assert ns.valuation == Fraction(-k, 4)
    assert ns.leading_coefficient == YPoly.const(1)


def test_sector_round_trips():
    r = massless_character(CharacterSpec(Sector.R, 2, H, H), 4)
    for target in (Sector.R_TILDE, Sector.NS, Sector.NS_TILDE):
        there = sector_transform(r, Sector.R, target, 2)
        back = sector_transform(there, target, Sector.R, 2)
        assert back.agrees_with(r)


def test_label_maps_are_inverse():
    for k in (1, 2, 3):
        for two_l in range(k + 1):
            for h in (Fraction(k, 4), Fraction(k, 4) + 2):
                assert ramond_from_ns(k, *ns_from_ramond(k, h, Fraction(two_l, 2))) == (h, Fraction(two_l, 2))


def test_labels_are_validated():
    with pytest.raises(InvalidSpec):
        CharacterSpec(Sector.R, 1, 1, Fraction(3, 2))
    with pytest.raises(InvalidSpec):
        CharacterSpec(Sector.R, 0, 0, 0)
    with pytest.raises(InvalidSpec):
        massless_character(CharacterSpec(Sector.R, 1, 1, 0), 2)
    with pytest.raises(InvalidSpec):
        Sector.parse("XYZ")


@pytest.mark.parametrize("k", [1, 2, 3])
def test_recursion_closes_and_negative_control_fails(k):
    for two_l in range(1, k + 1):
        rc = check_recursion(k, Fraction(two_l, 2), 6)
        assert rc.ok and rc.circular
        assert not check_recursion(k, Fraction(two_l, 2), 6, sign=-1).ok
