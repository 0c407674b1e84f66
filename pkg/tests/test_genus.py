import json
from fractions import Fraction

import pytest

from mockchar.errors import InvalidSpec
from mockchar.genus import (
    GenusSpec,
    build_genus,
    decompose_genus,
    default_normalization,
    reconstruction_residual,
    topological_invariants,
    x2_admissible_range,
    x2_constraints,
)


def test_k3_decomposition():
    r = decompose_genus(GenusSpec.k3(), 5)
    assert r.massless_raw == {0: 20, 1: -2}
    assert r.ns_weighted(1) == 1
    assert r.massive_stream(1) == [90, 462, 1540, 4554]
    assert r.euler == 24
    assert r.diagnostics["reconstruction_residual_zero"]


def test_k3_genus_at_zero_is_euler_number():
    assert build_genus(GenusSpec.k3(), 4).at_z_zero().agrees_with(build_genus(GenusSpec.k3(), 1).at_z_zero())


def test_symmetric_square():
    r = decompose_genus(GenusSpec.symmetric(2), 5)
    assert r.massless_raw == {0: 111, 1: -12, 2: 3}
    assert r.basis_stream(1) == [1872, 26070, 213456, 1311420]
    assert r.basis_stream(2) == [-510, -12804, -126360, -841176]
    assert r.massive_stream(2) == [510, 12804, 126360, 841176]
    assert r.euler == 144


def test_mixed_110():
    r = decompose_genus(GenusSpec.mixed(1, 1, 0), 5)
    assert r.massless_raw == {0: 4, 1: -1, 2: 0}
    assert r.basis_stream(1) == [16, 55, 144, 330]
    assert r.basis_stream(2) == [10, 44, 110, 280]
    assert r.euler == 6


def test_residual_is_exactly_zero():
    spec = GenusSpec.symmetric(2)
    r = decompose_genus(spec, 4, verify=False)
    assert reconstruction_residual(r, spec, 4).is_zero()


def test_normalizations():
    assert default_normalization((1, 0, 0)) == 8
    assert default_normalization((3, 0, 0)) == 4 * 4**3
    assert default_normalization((3, 2, 1)) == 2**5
    assert default_normalization((2, 2, 1)) == 2**3
    assert default_normalization((2, 2, 2)) == 4**2
    with pytest.raises(InvalidSpec):
        default_normalization((2, 1, 1))
    with pytest.raises(InvalidSpec):
        GenusSpec.mixed(2, 1, 1).terms()
    assert GenusSpec.mixed(2, 1, 1, normalization=8).terms()[(1, 2, 1)] == 8
    with pytest.raises(InvalidSpec):
        GenusSpec.mixed(0, 0, 0)


def test_x2_family_terms():
    t = GenusSpec.x2(3).terms()
    assert t[(2, 0, 0)] == 48 and t[(0, 1, 1)] == 12


@pytest.mark.parametrize("n", [-6, -3, 0, 15, 25])
def test_x2_euler_number(n):
    assert topological_invariants(GenusSpec.x2(n), 2).euler == 12 * (n + 12)


@pytest.mark.parametrize("n,sig", [(15, 156), (-3, 84)])
def test_x2_signature_and_ahat(n, sig):
    inv = topological_invariants(GenusSpec.x2(n), 3)
    assert (inv.euler, inv.signature, inv.ahat) == (12 * (n + 12), sig, 3)
    assert inv.signature_series.coefficient(1).constant_term() == 12288
    assert inv.signature_series.coefficient(2).constant_term() == 294912


def test_x2_admissible_range():
    rng = x2_admissible_range(3)
    assert (rng.lo, rng.hi) == (-6, 25)
    assert rng.lower_violation[0] == "massless NS 2l=1"
    assert rng.upper_violation[0] == "massive a=2 n=1"
    for c in x2_constraints(3):
        assert c.ok(rng.lo) and c.ok(rng.hi)


def test_report_serializations():
    r = decompose_genus(GenusSpec.k3(), 3)
    d = json.loads(r.to_json())
    assert d["genus"] == "k3" and d["euler"] == "24"
    assert d["massless"][1] == {"two_l": 1, "raw_mult": "-2", "ns_weighted_mult": "1"}
    assert d["massive"][0]["coeffs"] == ["90", "462"]
    lines = r.to_csv().splitlines()
    assert lines[0] == "kind,two_l,h,raw,ns_weighted"
    assert lines[1] == "massless,0,1/4,20,20"
    assert r.massive_stream(1, half_steps=True) == [0, 90, 0, 462, 0]
    assert not r.has_half_integer_massive()
    assert r.trunc_n == Fraction(3)
