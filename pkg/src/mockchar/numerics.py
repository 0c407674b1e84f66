"""Floating-point evaluation of theta functions, Lerch sums, Mordell integrals and completions.

Complex ``theta_11`` here is the textbook one, ``theta_11 = i * (real series)``;
the exact series layer stores the real normalization.  Fractional powers of
``q`` are always formed as ``exp(2 pi i tau x)``.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from scipy import integrate, special

from .errors import InvalidSpec, NearPole, NonConvergent, QuadratureDivergence
from .series import QSeries

TWO_PI_I = 2j * math.pi
N_MAX = 10_000
TAIL = 1e-16
POLE_EPS = 1e-8
DEFAULT_TAUS = (complex(0.11, 0.83), complex(0.0, 1.0), complex(-0.37, 1.21))


def _qpow(tau: complex, x: float) -> complex:
    return cmath.exp(TWO_PI_I * tau * x)


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag < 0.05:
        raise InvalidSpec(f"Im tau = {tau.imag} is below 0.05")
    return tau


def _bilateral(term: Callable[[int], complex], n_min: int = 3) -> complex:
    """Sum ``term(n)`` over all integers, outward from 0, until both tails are negligible."""
    total = term(0)
    biggest = abs(total)
    quiet = {1: 0, -1: 0}
    for n in range(1, N_MAX + 1):
        for sgn in (1, -1):
            if quiet[sgn] >= 3:
                continue
            t = term(sgn * n)
            total += t
            a = abs(t)
            biggest = max(biggest, a)
            quiet[sgn] = quiet[sgn] + 1 if (n >= n_min and a <= TAIL * biggest) else 0
        if quiet[1] >= 3 and quiet[-1] >= 3:
            return total
    raise NonConvergent("bilateral sum did not converge by N = 10^4")


def _quad(f: Callable[[float], complex], lo: float, hi: float, points=None) -> complex:
    opts = dict(limit=2000, epsabs=1e-14, epsrel=1e-12)
    if points is not None:
        opts["points"] = points
    # quad flags roundoff near 1e-14; accuracy is policed by the dual-form checks instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda x: f(x).real, lo, hi, **opts)[0]
        im = integrate.quad(lambda x: f(x).imag, lo, hi, **opts)[0]
    return complex(re, im)


def _gauss_cutoff(rate: float, shift: float = 0.0) -> float:
    """Half-width ``L`` with ``exp(-rate * (L - shift)^2) < 1e-18``."""
    return abs(shift) + math.sqrt(18 * math.log(10) / rate) + 1.0


# -- theta, eta and series evaluation ----------------------------------------


def eval_eta(tau: complex) -> complex:
    tau = _check_tau(tau)
    return _bilateral(lambda n: (-1) ** (n & 1) * _qpow(tau, (6 * n + 1) ** 2 / 24))


def eval_theta_eta(kind: str, z: complex, tau: complex) -> complex:
    """``theta_11``, ``theta_10``, ``theta_00``, ``theta_01`` or ``eta`` by direct summation."""
    tau = _check_tau(tau)
    key = kind.lower().removeprefix("theta").removeprefix("t")
    if key == "eta":
        return eval_eta(tau)
    if key == "11":
        f = lambda n: _qpow(tau, (n + 0.5) ** 2 / 2) * cmath.exp(TWO_PI_I * (n + 0.5) * (z + 0.5))
    elif key == "10":
        f = lambda n: _qpow(tau, (n + 0.5) ** 2 / 2) * cmath.exp(TWO_PI_I * (n + 0.5) * z)
    elif key == "00":
        f = lambda n: _qpow(tau, n * n / 2) * cmath.exp(TWO_PI_I * n * z)
    elif key == "01":
        f = lambda n: _qpow(tau, n * n / 2) * cmath.exp(TWO_PI_I * n * (z + 0.5))
    else:
        raise InvalidSpec(f"unknown theta kind {kind!r}")
    return _bilateral(f)


def eval_level_theta(P: int, a: int, z: complex, tau: complex) -> complex:
    tau = _check_tau(tau)
    return _bilateral(lambda n: _qpow(tau, (2 * P * n + a) ** 2 / (4 * P)) * cmath.exp(TWO_PI_I * z * (2 * P * n + a)))


def eval_chi(k: int, two_l: int, z: complex, tau: complex) -> complex:
    P = k + 2
    num = eval_level_theta(P, two_l + 1, z, tau) - eval_level_theta(P, -two_l - 1, z, tau)
    den = eval_level_theta(2, 1, z, tau) - eval_level_theta(2, -1, z, tau)
    if abs(den) < POLE_EPS:
        raise NearPole("Weyl denominator vanishes")
    return num / den


def eval_series_at(s: QSeries, z: complex, tau: complex) -> complex:
    """Substitute ``u = e^{pi i z}`` and ``q = e^{2 pi i tau}`` into the known terms of ``s``."""
    tau = _check_tau(tau)
    total = 0j
    for e, poly in s.terms:
        inner = sum(float(c) * cmath.exp(1j * math.pi * z * m) for m, c in poly.terms)
        total += inner * _qpow(tau, float(e))
    return total


# -- Lerch sums ---------------------------------------------------------------


def eval_mu(u: complex, v: complex, tau: complex) -> complex:
    tau = _check_tau(tau)
    th = eval_theta_eta("11", v, tau)
    if abs(th) < POLE_EPS:
        raise NearPole("theta_11(v) vanishes")
    x = cmath.exp(TWO_PI_I * u)
    w = -cmath.exp(TWO_PI_I * v)

    def term(n: int) -> complex:
        d = 1 - x * _qpow(tau, n)
        if abs(d) < POLE_EPS:
            raise NearPole(f"1 - e^(2 pi i u) q^{n} vanishes")
        return w**n * _qpow(tau, n * (n + 1) / 2) / d

    return 1j * cmath.exp(1j * math.pi * u) / th * _bilateral(term)


def eval_fP(P: int, u: complex, z: complex, tau: complex) -> complex:
    tau = _check_tau(tau)
    x = cmath.exp(TWO_PI_I * (z - u))

    def term(n: int) -> complex:
        d = 1 - _qpow(tau, n) * x
        if abs(d) < POLE_EPS:
            raise NearPole(f"1 - q^{n} e^(2 pi i (z-u)) vanishes")
        return _qpow(tau, P * n * n) * cmath.exp(2 * TWO_PI_I * P * n * z) / d

    return _bilateral(term)


def _appell_pm(P: int, z: complex, tau: complex) -> complex:
    y = cmath.exp(TWO_PI_I * z)

    def term(n: int) -> complex:
        d = 1 - _qpow(tau, n) * y
        if abs(d) < POLE_EPS:
            raise NearPole("1 - q^n y vanishes")
        return _qpow(tau, P * n * n) * cmath.exp(2 * TWO_PI_I * P * n * z) * (1 + _qpow(tau, n) * y) / d

    return _bilateral(term)


def eval_F(P: int, z: complex, tau: complex) -> complex:
    th2 = eval_theta_eta("11", 2 * z, tau)
    if abs(th2) < POLE_EPS:
        raise NearPole("theta_11(2z) vanishes")
    return 1j / (eval_eta(tau) * th2) * _appell_pm(P, z, tau)


def eval_C(P: int, z: complex, tau: complex) -> complex:
    """Isospin-0 massless character at level ``P-1`` (R-tilde) from its Appell form."""
    th = eval_theta_eta("11", z, tau)
    return th * th / eval_eta(tau) ** 2 * eval_F(P, z, tau)


def eval_massless_R(k: int, two_l: int, z: complex, tau: complex) -> complex:
    """Ramond massless character of isospin ``two_l/2`` from its bilateral double sum."""
    tau = _check_tau(tau)
    ell = two_l / 2
    th2 = eval_theta_eta("11", 2 * z, tau)
    if abs(th2) < POLE_EPS:
        raise NearPole("theta_11(2z) vanishes")

    def term(m: int) -> complex:
        acc = 0j
        for eps in (1, -1):
            d = 1 + cmath.exp(-TWO_PI_I * eps * z) * _qpow(tau, -m)
            if abs(d) < POLE_EPS:
                raise NearPole("BPS denominator vanishes")
            acc += eps * cmath.exp(2 * TWO_PI_I * eps * ((k + 1) * m + ell) * z) / (d * d)
        return acc * _qpow(tau, (k + 1) * m * m + 2 * ell * m)

    t10 = eval_theta_eta("10", z, tau)
    return 1j / th2 * t10 * t10 / eval_eta(tau) ** 3 * _bilateral(term)


# -- error function and non-holomorphic partners ------------------------------


def eval_E(x: float) -> float:
    """``2 int_0^x e^{-pi u^2} du``."""
    return math.erf(math.sqrt(math.pi) * x)


def _bracket_times_exp(sgn: int, x: float, expo: complex) -> complex:
    """``(sgn - E(x)) * exp(expo)`` without overflow in the tails."""
    t = sgn * math.sqrt(math.pi) * x
    if t > 0:
        return sgn * special.erfcx(t) * cmath.exp(expo - t * t)
    return sgn * math.erfc(t) * cmath.exp(expo)


def eval_R(z: complex, tau: complex) -> complex:
    tau = _check_tau(tau)
    v = tau.imag
    c = z.imag / v if isinstance(z, complex) else 0.0

    def term(n: int) -> complex:
        nu = n + 0.5
        expo = -TWO_PI_I * nu * z - TWO_PI_I * tau * nu * nu / 2
        return (-1) ** (n & 1) * _bracket_times_exp(1 if nu > 0 else -1, (nu + c) * math.sqrt(2 * v), expo)

    return _bilateral(term)


def eval_RPa(P: int, a: int, u: complex, tau: complex) -> complex:
    tau = _check_tau(tau)
    v = tau.imag
    c = 2 * P * complex(u).imag / v

    def term(j: int) -> complex:
        n = 2 * P * j + a
        expo = -TWO_PI_I * tau * n * n / (4 * P) - TWO_PI_I * n * u
        return _bracket_times_exp(1 if n >= 0 else -1, (n + c) * math.sqrt(v / P), expo)

    return _bilateral(term)


def eval_R_P(P: int, a: int, tau: complex) -> complex:
    """Non-holomorphic Eichler integral of the shadow, ``i sqrt(2P) R_{P,a}(0; tau)``."""
    return 1j * math.sqrt(2 * P) * eval_RPa(P, a, 0.0, tau)


def eval_Psi(P: int, a: int, tau: complex) -> complex:
    tau = _check_tau(tau)
    return _bilateral(lambda j: (2 * P * j + a) * _qpow(tau, (2 * P * j + a) ** 2 / (4 * P)))


def eval_mu_hat(z: complex, tau: complex) -> complex:
    return eval_mu(z, z, tau) - 0.5 * eval_R(0j, tau)


# -- Mordell integrals ---------------------------------------------------------


def mordell_level1(x: complex, tau: complex) -> complex:
    """``int e^{pi i tau t^2 - 2 pi x t} / cosh(pi t) dt``."""
    tau = _check_tau(tau)
    rate = math.pi * tau.imag
    L = _gauss_cutoff(rate, shift=abs(complex(x)) / tau.imag)
    f = lambda t: cmath.exp(1j * math.pi * tau * t * t - 2 * math.pi * x * t) / math.cosh(math.pi * t)
    return _quad(f, -L, L, points=[0.0])


def _mordell_cosh(P: int, a: int, tau: complex) -> complex:
    th = (P - a) * math.pi / P
    s, c = math.sin(th), math.cos(th)
    L = _gauss_cutoff(math.pi * tau.imag / (2 * P))
    f = lambda z: cmath.exp(1j * math.pi * tau * z * z / (2 * P)) * s / (math.cosh(z * math.pi / P) + c)
    return 1j / math.sqrt(2 * P) * _quad(f, -L, L, points=[0.0])


def _mordell_sinh(P: int, a: int, tau: complex) -> complex:
    w = -1 / tau
    L = _gauss_cutoff(math.pi * w.imag / (2 * P))
    r = (P - a) / P

    def f(x: float) -> complex:
        g = cmath.exp(1j * math.pi * w * x * x / (2 * P))
        if abs(x) < 1e-12:
            return g * r
        return g * math.sinh(math.pi * r * x) / math.sinh(math.pi * x)

    return 1j * cmath.sqrt(1j / tau) * _quad(f, -L, L, points=[0.0])


def mordell_tanh(P: int, a: int, tau: complex) -> complex:
    """Intermediate form as a difference of two shifted ``tanh`` kernels."""
    tau = _check_tau(tau)
    L = _gauss_cutoff(math.pi * tau.imag / (2 * P))
    d = 1j * (a - P)

    def f(z: float) -> complex:
        g = cmath.exp(1j * math.pi * tau * z * z / (2 * P))
        return g * (cmath.tanh(math.pi * (z + d) / (2 * P)) - cmath.tanh(math.pi * (z - d) / (2 * P)))

    return -1 / (2 * math.sqrt(2 * P)) * _quad(f, -L, L, points=[0.0])


def zwegers_M(P: int, a: int, u: complex, tau: complex, delta: float = 0.5) -> complex:
    """``M_{P,a}(u; tau)`` with ``a`` reduced to ``0 <= a < 2P``.

    The contour ``R - i0`` is pushed down to ``R - i delta`` (0 < delta < 1):
    the poles sit on ``iZ`` whatever ``u`` is, and the integrand is Gaussian
    in the real direction, so the shift is exact.
    """
    tau = _check_tau(tau)
    if not 0 < delta < 1:
        raise InvalidSpec("delta must lie in (0, 1)")
    a %= 2 * P
    lin = 2 * P * u + a * tau
    shift = abs(lin) / (2 * P * tau.imag)
    L = _gauss_cutoff(2 * math.pi * P * tau.imag, shift=shift + delta)

    def f(t: float) -> complex:
        x = t - 1j * delta
        return cmath.exp(TWO_PI_I * P * tau * x * x - 2 * math.pi * lin * x) / (1 - cmath.exp(2 * math.pi * x))

    pref = 1j * cmath.exp(-1j * math.pi * a * a * tau / (2 * P) - TWO_PI_I * a * u)
    return pref * _quad(f, -L, L, points=[0.0])


def mordell(P: int, a: int, tau: complex, tol: float = 1e-9) -> complex:
    """``M_P^{(a)}(tau)`` by the cosh form, cross-checked against the sinh/sinh form."""
    tau = _check_tau(tau)
    if not 0 < a < P:
        raise InvalidSpec("need 0 < a < P")
    c = _mordell_cosh(P, a, tau)
    s = _mordell_sinh(P, a, tau)
    if abs(c - s) > tol * max(1.0, abs(c)):
        raise QuadratureDivergence(f"cosh and sinh forms differ by {abs(c - s):.3e}")
    return c


def s_matrix(P: int) -> list[list[float]]:
    return [[math.sqrt(2 / P) * math.sin(a * b * math.pi / P) for b in range(1, P)] for a in range(1, P)]


# -- identity suite -------------------------------------------------------------


@dataclass(frozen=True)
class SamplePoint:
    tau: complex
    z: complex = 0.13
    u: complex = 0.13
    v: complex = 0.21

    def __post_init__(self):
        _check_tau(self.tau)

    def to_dict(self) -> dict:
        return {k: [complex(x).real, complex(x).imag] for k, x in asdict(self).items()}


DEFAULT_SAMPLES = tuple(SamplePoint(t) for t in DEFAULT_TAUS)


@dataclass
class IdentityCheckResult:
    identity_name: str
    sample: SamplePoint
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    error: str | None = None

    def __post_init__(self):
        # scipy hands back numpy scalars; keep the record JSON-friendly
        self.residual = float(self.residual)
        self.passed = bool(self.error is None and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "identity_name": self.identity_name,
            "sample": self.sample.to_dict(),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            **({"error": self.error} if self.error else {}),
        }


def _rel(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def _s(tau: complex) -> complex:
    return cmath.sqrt(1j / tau)


def _id_S_mu(p: SamplePoint) -> float:
    t, u, v = p.tau, p.u, p.v
    lhs = eval_mu(u, v, t) + _s(t) * cmath.exp(1j * math.pi * (u - v) ** 2 / t) * eval_mu(u / t, v / t, -1 / t)
    return _rel(lhs, 0.5 * mordell_level1(u - v, t))


def _id_R_S(p: SamplePoint) -> float:
    t, u = p.tau, p.u
    lhs = eval_R(u, t) + _s(t) * cmath.exp(1j * math.pi * u * u / t) * eval_R(u / t, -1 / t)
    return _rel(lhs, mordell_level1(u, t))


def _id_mu_hat(p: SamplePoint) -> float:
    t, z = p.tau, p.z
    m = eval_mu_hat(z, t)
    return max(
        _rel(m, -_s(t) * eval_mu_hat(z / t, -1 / t)),
        _rel(eval_mu_hat(z, t + 1), cmath.exp(-0.25j * math.pi) * m),
        _rel(eval_mu_hat(z + 1, t), m),
        _rel(eval_mu_hat(z + t, t), m),
    )


def _id_k1_character_S(p: SamplePoint) -> float:
    t, z = p.tau, p.z
    lhs = eval_mu(z, z, t) / eval_eta(t) + eval_mu(z / t, z / t, -1 / t) / eval_eta(-1 / t)
    L = _gauss_cutoff(math.pi * t.imag)
    integral = _quad(lambda x: cmath.exp(1j * math.pi * t * x * x) / (2 * math.cosh(math.pi * x)), -L, L)
    return _rel(lhs, integral / eval_eta(t))


def _id_massless_ch_M(p: SamplePoint) -> float:
    t, z = p.tau, p.z
    th = eval_theta_eta("11", z, t)
    return _rel(th * th / eval_eta(t) ** 3 * eval_mu(z, z, t), eval_C(2, z, t))


def _id_fP_elliptic(p: SamplePoint) -> float:
    t, u, z = p.tau, p.v, p.z
    worst = 0.0
    for P in (1, 2, 3, 4):
        f = eval_fP(P, u, z, t)
        lhs = f - _qpow(t, -P) * cmath.exp(-2 * TWO_PI_I * P * u) * eval_fP(P, u + t, z, t)
        rhs = sum(
            _qpow(t, -a * a / (4 * P)) * cmath.exp(-TWO_PI_I * a * u) * eval_level_theta(P, a, z, t)
            for a in range(2 * P)
        )
        worst = max(worst, _rel(lhs, rhs), _rel(eval_fP(P, u + 1, z, t), f), _rel(eval_fP(P, u, z, t + 1), f))
    return worst


def _id_fP_S(p: SamplePoint) -> float:
    t, u, z = p.tau, p.v, p.z
    worst = 0.0
    for P in (1, 2, 3):
        lhs = eval_fP(P, u, z, t) - cmath.exp(TWO_PI_I * P * (u * u - z * z) / t) * eval_fP(P, u / t, z / t, -1 / t) / t
        rhs = sum(zwegers_M(P, a, u, t) * eval_level_theta(P, a, z, t) for a in range(2 * P))
        worst = max(worst, _rel(lhs, rhs))
    return worst


def _id_general_k_F(p: SamplePoint) -> float:
    t, z = p.tau, p.z
    worst = 0.0
    for P in (2, 3, 4):
        lhs = eval_F(P, z, t) + cmath.exp(-TWO_PI_I * (P - 2) * z * z / t) * eval_F(P, z / t, -1 / t)
        rhs = sum(mordell(P, a, t) * eval_chi(P - 2, a - 1, z, t) for a in range(1, P))
        rhs /= 1j * math.sqrt(2 * P) * eval_eta(t)
        worst = max(worst, _rel(lhs, rhs))
    return worst


def _id_Psi_S(p: SamplePoint) -> float:
    t = p.tau
    worst = 0.0
    for P in (2, 3, 4, 5):
        S = s_matrix(P)
        for a in range(1, P):
            rhs = (1j / t) ** 1.5 * sum(S[a - 1][b - 1] * eval_Psi(P, b, -1 / t) for b in range(1, P))
            psi = eval_Psi(P, a, t)
            worst = max(
                worst,
                _rel(psi, rhs),
                _rel(eval_Psi(P, a, t + 1), cmath.exp(1j * math.pi * a * a / (2 * P)) * psi),
            )
    return worst


def _id_Psi_dual(p: SamplePoint) -> float:
    # chi at z = 0 is a removable 0/0; a tiny z costs O(z^2)
    t, z = p.tau, 1e-5
    worst = 0.0
    for P in (2, 3, 4, 5):
        for a in range(1, P):
            worst = max(worst, _rel(eval_Psi(P, a, t), eval_eta(t) ** 3 * eval_chi(P - 2, a - 1, z, t)))
    return worst


def _id_mordell_dual(p: SamplePoint) -> float:
    t = p.tau
    worst = 0.0
    for P in (2, 3, 4, 5):
        for a in range(1, P):
            worst = max(worst, _rel(_mordell_cosh(P, a, t), _mordell_sinh(P, a, t)))
    return worst


def _id_mordell_zwegers(p: SamplePoint) -> float:
    t = p.tau
    worst = 0.0
    for P in (2, 3, 4):
        for a in range(1, P):
            m = mordell(P, a, t)
            zw = 1j * math.sqrt(2 * P) * (zwegers_M(P, a, 0.0, t) - zwegers_M(P, -a, 0.0, t))
            worst = max(worst, _rel(mordell_tanh(P, a, t), m), _rel(zw, m))
    return worst


def _id_M_P_S(p: SamplePoint) -> float:
    t = p.tau
    worst = 0.0
    for P in (2, 3, 4):
        S = s_matrix(P)
        for a in range(1, P):
            lhs = sum(S[a - 1][b - 1] * mordell(P, b, t) for b in range(1, P))
            worst = max(worst, _rel(lhs, _s(t) * mordell(P, a, -1 / t)))
    return worst


def _id_general_R_S(p: SamplePoint) -> float:
    t = p.tau
    worst = 0.0
    for P in (2, 3, 4):
        S = s_matrix(P)
        for a in range(1, P):
            r = eval_R_P(P, a, t)
            lhs = _s(t) * sum(S[a - 1][b - 1] * eval_R_P(P, b, -1 / t) for b in range(1, P)) + r
            worst = max(
                worst,
                _rel(lhs, mordell(P, a, t)),
                _rel(eval_R_P(P, a, t + 1), cmath.exp(-1j * math.pi * a * a / (2 * P)) * r),
            )
    return worst


def _fd_dbar(f: Callable[[complex], complex], t: complex, h: float) -> complex:
    dx = (f(t + h) - f(t - h)) / (2 * h)
    dy = (f(t + 1j * h) - f(t - 1j * h)) / (2 * h)
    return 0.5 * (dx + 1j * dy)


def _id_differential_R_P_a(p: SamplePoint) -> float:
    t = p.tau
    worst = 0.0
    for P in (2, 3, 4):
        for a in range(1, P):
            d = _fd_dbar(lambda s: eval_R_P(P, a, s), t, 1e-5)
            worst = max(worst, _rel(d, eval_Psi(P, a, -t.conjugate()) / math.sqrt(2 * t.imag)))
    return worst


def _id_mu_hat_shadow(p: SamplePoint) -> float:
    t, z = p.tau, p.z
    d = _fd_dbar(lambda s: eval_mu_hat(z, s), t, 1e-5)
    return _rel(d, 0.5j * eval_eta(-t.conjugate()) ** 3 / math.sqrt(2 * t.imag))


def _id_differential_Maass(p: SamplePoint) -> float:
    t, z = p.tau, p.z
    h = 1e-3
    f = lambda s: eval_mu_hat(z, s)
    f0 = f(t)
    fxp, fxm, fyp, fym = f(t + h), f(t - h), f(t + 1j * h), f(t - 1j * h)
    lap = (fxp + fxm + fyp + fym - 4 * f0) / (h * h)
    fx = (fxp - fxm) / (2 * h)
    fy = (fyp - fym) / (2 * h)
    v = t.imag
    return abs(-v * v * lap + 0.5j * v * (fx + 1j * fy)) / max(1.0, abs(f0))


IDENTITIES: dict[str, tuple[Callable[[SamplePoint], float], float]] = {
    "S_mu": (_id_S_mu, 1e-8),
    "R_S": (_id_R_S, 1e-8),
    "mu_hat_modular": (_id_mu_hat, 1e-8),
    "k1_character_S": (_id_k1_character_S, 1e-8),
    "massless_ch_M": (_id_massless_ch_M, 1e-8),
    "fP_elliptic": (_id_fP_elliptic, 1e-8),
    "fP_S": (_id_fP_S, 1e-8),
    "general_k_F": (_id_general_k_F, 1e-7),
    "Psi_S": (_id_Psi_S, 1e-8),
    "Psi_dual": (_id_Psi_dual, 1e-8),
    "mordell_dual": (_id_mordell_dual, 1e-9),
    "mordell_zwegers": (_id_mordell_zwegers, 1e-8),
    "M_P_S": (_id_M_P_S, 1e-7),
    "general_R_S": (_id_general_R_S, 1e-7),
    "differential_R_P_a": (_id_differential_R_P_a, 1e-4),
    "mu_hat_shadow": (_id_mu_hat_shadow, 1e-4),
    "differential_Maass": (_id_differential_Maass, 1e-4),
}


def run_identity_suite(
    names: Iterable[str] | None = None, samples: Iterable[SamplePoint] | None = None
) -> list[IdentityCheckResult]:
    """Evaluate each named identity at each sample; failures are reported, not raised."""
    names = list(IDENTITIES) if names is None else list(names)
    samples = list(DEFAULT_SAMPLES if samples is None else samples)
    out = []
    for name in names:
        if name not in IDENTITIES:
            raise InvalidSpec(f"unknown identity {name!r}")
        fn, tol = IDENTITIES[name]
        for s in samples:
            try:
                out.append(IdentityCheckResult(name, s, fn(s), tol))
            except (NearPole, NonConvergent, QuadratureDivergence) as exc:
                out.append(IdentityCheckResult(name, s, math.inf, tol, error=str(exc)))
    return out
