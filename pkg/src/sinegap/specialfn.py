"""Special functions used by the gap-probability asymptotics.

Complete elliptic integrals (AGM), the third Jacobi theta function on the
imaginary period axis, the Barnes G-function on the line ``1 +/- iv/pi`` and
the Widom-Dyson constant.  Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EllipticPair",
    "ThetaArgs",
    "Constants",
    "elliptic_K",
    "elliptic_E",
    "elliptic_pair",
    "complementary_elliptic",
    "theta3",
    "theta3_complex",
    "ln_barnes_g",
    "ln_barnes_g_pair",
    "ln_A",
    "zeta_prime",
    "zeta_prime_minus1",
    "widom_dyson_ln_c0",
    "constants",
]

EULER_GAMMA = 0.57721566490153286060651209008240243

# Bernoulli numbers B_2, B_4, ..., B_24
_BERNOULLI_EVEN = (
    1.0 / 6,
    -1.0 / 30,
    1.0 / 42,
    -1.0 / 30,
    5.0 / 66,
    -691.0 / 2730,
    7.0 / 6,
    -3617.0 / 510,
    43867.0 / 798,
    -174611.0 / 330,
    854513.0 / 138,
    -236364091.0 / 2730,
)

_AGM_MAXITER = 60


@dataclass(frozen=True)
class EllipticPair:
    k: float
    K_val: float
    E_val: float


@dataclass(frozen=True)
class ThetaArgs:
    z: float
    tau_im: float

    def __post_init__(self):
        if not self.tau_im > 0:
            raise ValueError(f"theta3 needs -i*tau > 0, got tau_im={self.tau_im!r}")


@dataclass(frozen=True)
class Constants:
    ln_c0: float
    zeta_prime_minus1: float
    euler_gamma: float


# ---------------------------------------------------------------------------
# elliptic integrals


def _agm_KE(k: float, kp: float) -> tuple[float, float]:
    """K and E for modulus ``k`` given both ``k`` and ``kp = sqrt(1-k^2)``.

    Passing the complementary modulus separately keeps full relative accuracy
    when ``k`` is close to 1.
    """
    if kp == 0.0:
        return math.inf, 1.0
    a, b = 1.0, kp
    # E = K * (1 - sum 2^(n-1) c_n^2), c_0 = k
    acc = 0.5 * k * k
    power = 0.5
    for _ in range(_AGM_MAXITER):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        acc += power * c * c
        if abs(c) <= 4e-16 * a:
            break
    else:
        raise ArithmeticError("AGM iteration did not converge")
    K = math.pi / (2.0 * a)
    return K, K * (1.0 - acc)


def _check_modulus(k: float, closed: bool) -> None:
    if not (0.0 <= k <= 1.0) or (not closed and k == 1.0):
        bound = "[0, 1]" if closed else "[0, 1)"
        raise ValueError(f"modulus must lie in {bound}, got {k!r}")


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention.

    ``K(k) = int_0^1 dt / sqrt((1-t^2)(1-k^2 t^2))``, computed by the
    arithmetic-geometric mean.
    """
    _check_modulus(k, closed=False)
    return _agm_KE(k, math.sqrt((1.0 - k) * (1.0 + k)))[0]


def elliptic_E(k: float) -> float:
    """Complete elliptic integral of the second kind, modulus convention."""
    _check_modulus(k, closed=True)
    if k == 1.0:
        return 1.0
    return _agm_KE(k, math.sqrt((1.0 - k) * (1.0 + k)))[1]


def elliptic_pair(k: float) -> EllipticPair:
    _check_modulus(k, closed=False)
    K, E = _agm_KE(k, math.sqrt((1.0 - k) * (1.0 + k)))
    return EllipticPair(k, K, E)


def complementary_elliptic(k: float) -> tuple[float, float, float, float]:
    """Return ``(K(k), E(k), K(k'), E(k'))`` with ``k' = sqrt(1 - k^2)``.

    Both moduli are formed once, so each integral is evaluated from an exact
    pair ``(modulus, complementary modulus)``.
    """
    if not 0.0 < k < 1.0:
        raise ValueError(f"modulus must lie in (0, 1), got {k!r}")
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    K, E = _agm_KE(k, kp)
    Kp, Ep = _agm_KE(kp, k)
    return K, E, Kp, Ep


# ---------------------------------------------------------------------------
# theta function

_THETA_SWITCH = 1.0


def _theta3_direct(z: float, t: float) -> float:
    # sum_k exp(-pi t k^2) cos(2 pi k z); ratio of successive tail terms < e^{-pi t}
    total = 1.0
    k = 1
    while True:
        term = math.exp(-math.pi * t * k * k)
        total += 2.0 * term * math.cos(2.0 * math.pi * k * z)
        if term < 1e-18 * abs(total):
            return total
        k += 1


def _theta3_modular(z: float, t: float) -> float:
    # theta(z | it) = t^{-1/2} sum_k exp(-pi (z - k)^2 / t)
    total = 0.0
    k0 = round(z)
    j = 0
    while True:
        lo = math.exp(-math.pi * (z - (k0 - j)) ** 2 / t)
        hi = math.exp(-math.pi * (z - (k0 + j)) ** 2 / t) if j else 0.0
        total += lo + hi
        if j > 0 and max(lo, hi) < 1e-18 * total:
            return total / math.sqrt(t)
        j += 1


def theta3(args: ThetaArgs | float, tau_im: float | None = None, *, modular: bool | None = None) -> float:
    """Third Jacobi theta function ``theta(z | i*tau_im)`` for real ``z``.

    Accepts either a :class:`ThetaArgs` or ``(z, tau_im)``.  The argument is
    reduced modulo 1 first.  For ``tau_im < 1`` the imaginary modular
    transformation is applied so the evaluated series always converges with
    ratio at most ``exp(-pi)``; ``modular`` forces one branch (testing only).
    """
    if not isinstance(args, ThetaArgs):
        args = ThetaArgs(float(args), float(tau_im))
    z = args.z - math.floor(args.z)
    t = args.tau_im
    if modular is None:
        modular = t < _THETA_SWITCH
    return _theta3_modular(z, t) if modular else _theta3_direct(z, t)


def theta3_complex(z: complex, tau_im: float, terms: int = 60) -> complex:
    """Direct theta series at complex ``z``; used to check quasi-periodicity."""
    if not tau_im > 0:
        raise ValueError("tau_im must be positive")
    k = np.arange(-terms, terms + 1)
    return complex(np.sum(np.exp(-math.pi * tau_im * k * k + 2j * math.pi * k * z)))


# ---------------------------------------------------------------------------
# Barnes G

_BARNES_FACTORS = 10_000


def _barnes_tail(y2: float, n: int) -> float:
    """Euler-Maclaurin tail ``sum_{k>n} [k log(1 + y2/k^2) - y2/k]``."""
    x = float(n)
    r = y2 / (x * x)
    f = x * math.log1p(r) - y2 / x
    # antiderivative ((x^2+y2)/2) log(1+y2/x^2) -> y2/2 at infinity
    integral = 0.5 * y2 - 0.5 * (x * x + y2) * math.log1p(r)
    fp = math.log1p(r) - 2.0 * y2 / (x * x + y2) + r
    return integral - 0.5 * f - fp / 12.0


def ln_barnes_g_pair(v: float) -> float:
    """``ln[G(1 + iv/pi) G(1 - iv/pi)]`` from the Weierstrass product.

    With ``y = v/pi`` the conjugate factors combine into
    ``(1 + gamma_E) y^2 + sum_k [k log(1 + y^2/k^2) - y^2/k]``; the first
    10^4 factors are summed explicitly and the rest by Euler-Maclaurin.
    """
    if v < 0:
        raise ValueError(f"v must be nonnegative, got {v!r}")
    if v == 0:
        return 0.0
    y2 = (v / math.pi) ** 2
    k = np.arange(1, _BARNES_FACTORS + 1, dtype=float)
    terms = k * np.log1p(y2 / (k * k)) - y2 / k
    # small terms first
    head = math.fsum(terms[::-1])
    return (1.0 + EULER_GAMMA) * y2 + head + _barnes_tail(y2, _BARNES_FACTORS)


def ln_barnes_g(z: complex, factors: int = 200_000) -> complex:
    """``log G(1 + z)`` for complex ``z`` with ``Re z > -1``, truncated product.

    Only used to cross-check the conjugate-pair routine.  The factor logs
    behave like ``z^3/(3k^2) - z^4/(4k^3)``; their tail is added in closed form.
    """
    z = complex(z)
    if z.real <= -1:
        raise ValueError("requires Re z > -1")
    k = np.arange(1, factors + 1, dtype=float)
    w = z / k
    # complex log1p; numpy's loses digits for tiny |w|
    log1p_w = 0.5 * np.log1p(2 * w.real + np.abs(w) ** 2) + 1j * np.arctan2(w.imag, 1 + w.real)
    terms = k * log1p_w - z + z * z / (2 * k)
    s = complex(np.sum(terms[::-1]))
    n = float(factors)
    s += z**3 / 3.0 * (1.0 / n - 0.5 / n**2) - z**4 / (8.0 * n**2)
    return 0.5 * z * math.log(2 * math.pi) - 0.5 * z * (z + 1) - 0.5 * z * z * EULER_GAMMA + s


def ln_A(v: float) -> float:
    """``2 ln[G(1+iv/pi)G(1-iv/pi)] - (v/pi)^2 (3 - 2 ln(v/pi))``."""
    if v <= 0:
        raise ValueError(f"v must be positive, got {v!r}")
    y = v / math.pi
    return 2.0 * ln_barnes_g_pair(v) - y * y * (3.0 - 2.0 * math.log(y))


# ---------------------------------------------------------------------------
# zeta'(s) and the Widom-Dyson constant


def _rising_and_derivative(s: float, m: int) -> tuple[float, float]:
    """``P(s) = s(s+1)...(s+m-1)`` and ``P'(s)`` by the product rule."""
    factors = [s + i for i in range(m)]
    p = math.prod(factors)
    dp = math.fsum(math.prod(factors[:i] + factors[i + 1 :]) for i in range(m))
    return p, dp


def zeta_prime(s: float, n: int = 10, terms: int = 12) -> float:
    """Derivative of the Riemann zeta function for real ``s != 1``.

    Euler-Maclaurin with ``n`` explicit terms, differentiated term by term in
    ``s``; valid after analytic continuation for ``s > 1 - 2*terms``.
    """
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    logn = math.log(n)
    out = [-math.log(k) * k ** (-s) for k in range(2, n)]
    # d/ds n^{1-s}/(s-1)
    a = n ** (1 - s)
    out.append(-logn * a / (s - 1) - a / (s - 1) ** 2)
    # d/ds n^{-s}/2
    out.append(-0.5 * logn * n ** (-s))
    for j, b in enumerate(_BERNOULLI_EVEN[:terms], start=1):
        coef = b / math.factorial(2 * j)
        p, dp = _rising_and_derivative(s, 2 * j - 1)
        w = n ** (1 - s - 2 * j)
        out.append(coef * (dp - logn * p) * w)
    return math.fsum(out)


def zeta_prime_minus1() -> float:
    return zeta_prime(-1.0)


def widom_dyson_ln_c0() -> float:
    """``ln c0 = ln(2)/12 + 3 zeta'(-1)`` (so ``c0 ~ 0.6450``)."""
    return math.log(2.0) / 12.0 + 3.0 * zeta_prime_minus1()


def constants() -> Constants:
    zp = zeta_prime_minus1()
    return Constants(math.log(2.0) / 12.0 + 3.0 * zp, zp, EULER_GAMMA)
