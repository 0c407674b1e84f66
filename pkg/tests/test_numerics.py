import cmath
import math

import pytest
from scipy import integrate

from mockchar.characters import massless_character_iso0
from mockchar.errors import InvalidSpec, NearPole
from mockchar.modular import ThetaKind, eta_pow, jacobi_theta
from mockchar.numerics import (
    DEFAULT_TAUS,
    IDENTITIES,
    SamplePoint,
    eval_C,
    eval_E,
    eval_eta,
    eval_mu,
    eval_series_at,
    eval_theta_eta,
    mordell,
    mordell_tanh,
    run_identity_suite,
)

TAU = complex(0.2, 0.9)


def test_theta00_at_i():
    assert eval_theta_eta("00", 0, 1j) == pytest.approx(1.0864348112133082, abs=1e-15)


def test_eta_at_i():
    # Gamma(1/4) / (2 pi^{3/4})
    assert eval_eta(1j) == pytest.approx(math.gamma(0.25) / (2 * math.pi**0.75), abs=1e-14)


def test_error_function_values():
    assert eval_E(0.0) == 0.0
    assert eval_E(1.0) == pytest.approx(0.987811117815197, abs=1e-14)
    assert eval_E(-0.7) == -eval_E(0.7)
    two_int = 2 * integrate.quad(lambda t: math.exp(-math.pi * t * t), 0, 0.4)[0]
    assert eval_E(0.4) == pytest.approx(two_int, abs=1e-14)


def test_mu_is_symmetric():
    a = eval_mu(0.13, 0.21, TAU)
    b = eval_mu(0.21, 0.13, TAU)
    assert abs(a - b) < 1e-12


def test_mu_pole_is_reported():
    with pytest.raises(NearPole):
        eval_mu(0.0, 0.21, TAU)


def test_small_imaginary_part_rejected():
    with pytest.raises(InvalidSpec):
        eval_eta(complex(0.1, 0.01))
    with pytest.raises(InvalidSpec):
        SamplePoint(complex(0, 0.02))


@pytest.mark.parametrize("tau", DEFAULT_TAUS)
def test_series_evaluation_matches_direct_sums(tau):
    z = 0.13
    # exact code carries theta~_11 = -i theta_11
    pairs = [(ThetaKind.T11, "11", -1j), (ThetaKind.T00, "00", 1), (ThetaKind.T10, "10", 1), (ThetaKind.T01, "01", 1)]
    for kind, name, phase in pairs:
        s = jacobi_theta(kind, 1, 12)
        assert abs(eval_series_at(s, z, tau) - phase * eval_theta_eta(name, z, tau)) < 1e-12
    assert abs(eval_series_at(eta_pow(1, 12), z, tau) - eval_eta(tau)) < 1e-12


@pytest.mark.parametrize("P", [2, 3])
def test_appell_series_matches_direct_sum(P):
    s = massless_character_iso0(P - 1, order=12)
    assert abs(eval_series_at(s, 0.13, 1j) - eval_C(P, 0.13, 1j)) < 1e-10


def test_mordell_dual_forms_agree():
    assert abs(mordell(3, 1, TAU) - mordell_tanh(3, 1, TAU)) < 1e-9
    with pytest.raises(InvalidSpec):
        mordell(3, 3, TAU)


def test_identity_suite_passes_at_custom_point():
    res = run_identity_suite(samples=[SamplePoint(TAU)])
    assert len(res) == len(IDENTITIES)
    bad = [(r.identity_name, r.residual) for r in res if not r.passed]
    assert not bad


def test_identity_suite_rejects_unknown_name():
    with pytest.raises(InvalidSpec):
        run_identity_suite(names=["no_such_identity"])


def test_identity_result_serializes():
    r = run_identity_suite(names=["S_mu"], samples=[SamplePoint(1j)])[0]
    d = r.to_dict()
    assert d["identity_name"] == "S_mu" and d["pass"] is True
    assert d["sample"]["tau"] == [0.0, 1.0]


def test_broken_identity_is_detected():
    # perturbing the modular variable must break the S-law
    from mockchar import numerics

    p = SamplePoint(TAU)
    t = p.tau
    lhs = numerics.eval_mu(p.u, p.v, t) + cmath.sqrt(1j / t) * numerics.eval_mu(p.u / t, p.v / t, -1 / t + 0.01)
    rhs = 0.5 * numerics.mordell_level1(p.u - p.v, t)
    assert abs(lhs - rhs) > 1e-6
