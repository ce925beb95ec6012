"""Large-``s`` asymptotics of ``ln D(s, gamma)`` across the ``(s, v)`` quarter plane.

Four regimes, parametrised by ``kappa = v/s``:

* ``Saturation``: ``kappa > 1 - ln(s)/(4s)``; ``D(s, gamma) ~ D(s, 1)``, the
  Gaussian gap law with the Widom-Dyson constant (:func:`eq2_lnD`).
* ``StokesLadder(q)``: ``v = s - (u/2) ln s`` with ``u`` in ``[q-1/2, q+1/2)``;
  one extra factor per Stokes curve crossed (:func:`eq5_lnD`).
* ``Elliptic``: ``0 < kappa < 1 - (ln s)^{4/3}/(4s)``; theta-function
  oscillations driven by the modulus ``a(kappa)`` (:func:`eq6_lnD`).
* ``PerturbativeFixedV``: ``v < s^{1/3}``; exponential decay with Barnes G
  corrections (:func:`eq3_lnD`).

Regions overlap; :func:`classify` reports all that apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import specialfn as sf
from .errors import ConvergenceError, RegimeError
from .fredholm import EvalReport, GapParams

__all__ = [
    "Regime",
    "EllipticData",
    "LadderFactors",
    "classify",
    "stokes_curve_v",
    "stokes_q",
    "ladder_cap",
    "saturation_edge_kappa",
    "elliptic_edge_kappa",
    "eq2_lnD",
    "eq3_lnD",
    "ladder_factors",
    "eq5_lnD",
    "kappa_of_a",
    "kappa_of_a_quadrature",
    "solve_modulus",
    "elliptic_data",
    "lnB",
    "eq6_lnD",
    "small_kappa_expansion",
]

SATURATION = "Saturation"
ELLIPTIC = "Elliptic"
PERTURBATIVE = "PerturbativeFixedV"
LADDER = "StokesLadder"
OUT_OF_THEORY = "OutOfTheory"


@dataclass(frozen=True)
class Regime:
    label: str
    q: int | None = None
    boundary_note: str = ""

    def __str__(self) -> str:
        return f"{self.label}(q={self.q})" if self.label == LADDER else self.label


@dataclass(frozen=True)
class EllipticData:
    a: float
    a_prime: float
    K_a: float
    K_aprime: float
    E_a: float
    E_aprime: float
    V: float
    tau_im: float


@dataclass(frozen=True)
class LadderFactors:
    q: int
    factors: list[float] = field(default_factory=list)


# ---------------------------------------------------------------------------
# regime geometry


def stokes_curve_v(s: float, k: int) -> float:
    """The ``k``-th Stokes curve ``v = s - (2k+1) ln(s) / 4``."""
    if s <= 1:
        raise ValueError("Stokes curves need s > 1")
    return s - 0.25 * (2 * k + 1) * math.log(s)


def ladder_cap(s: float) -> int:
    """Largest admissible ladder index ``[(ln s)^{1/3}] + 1``."""
    return int(math.floor(math.log(s) ** (1.0 / 3.0))) + 1


def saturation_edge_kappa(s: float) -> float:
    return 1.0 - 0.25 * math.log(s) / s


def elliptic_edge_kappa(s: float) -> float:
    return 1.0 - 0.25 * math.log(s) ** (4.0 / 3.0) / s


def stokes_q(s: float, v: float) -> tuple[float, int | None]:
    """Ladder coordinate ``u = 2(s - v)/ln s`` and its index ``q``.

    ``q`` is the integer with ``u`` in ``[q - 1/2, q + 1/2)`` (ties go up);
    ``None`` on the saturation side ``u < 1/2`` or beyond :func:`ladder_cap`.
    """
    if s <= 1:
        raise ValueError("stokes_q needs s > 1")
    u = 2.0 * (s - v) / math.log(s)
    if u < 0.5:
        return u, None
    q = int(math.floor(u + 0.5))
    if q > ladder_cap(s):
        return u, None
    return u, q


def classify(params: GapParams) -> list[Regime]:
    """Every regime whose printed range contains ``(s, v)``.

    ``s <= 1`` yields a single ``OutOfTheory`` marker since the boundaries
    involve ``ln s``.
    """
    s, v = params.s, params.v
    if s <= 1:
        return [Regime(OUT_OF_THEORY, boundary_note="s <= 1: regime boundaries need ln s > 0")]
    out = []
    kappa = params.kappa
    if kappa > saturation_edge_kappa(s):
        out.append(Regime(SATURATION, boundary_note="kappa > 1 - ln(s)/(4s)"))
    if not math.isinf(v):
        u, q = stokes_q(s, v)
        if q is not None:
            out.append(Regime(LADDER, q, f"u = {u:.6g} in [{q - 0.5}, {q + 0.5})"))
    if 0 < kappa < elliptic_edge_kappa(s):
        out.append(Regime(ELLIPTIC, boundary_note="0 < kappa < 1 - (ln s)^(4/3)/(4s)"))
    if 0 <= v < s ** (1.0 / 3.0):
        out.append(Regime(PERTURBATIVE, boundary_note="0 <= v < s^(1/3)"))
    return out


def _label(regimes: list[Regime]) -> str:
    return "+".join(str(r) for r in regimes)


# ---------------------------------------------------------------------------
# closed-form regimes


def eq2_lnD(s: float) -> EvalReport:
    """``ln D(s, 1) ~ -s^2/2 - ln(s)/4 + ln c0``; error placeholder ``1/s``."""
    ln_c0 = sf.widom_dyson_ln_c0()
    comps = {"gaussian": -0.5 * s * s, "power": -0.25 * math.log(s), "ln_c0": ln_c0}
    rep = EvalReport(math.fsum(comps.values()), "asymptotic-eq2", 1.0 / s, SATURATION, comps)
    if s <= 1:
        rep.notes.append("s <= 1: outside asymptotic validity")
    return rep


def eq3_lnD(s: float, v: float) -> EvalReport:
    """Fixed/slowly growing ``v``: exponential decay with Barnes G constant.

    ``err_est = v/s + v^3/s``; the constants of the remainder bound are not
    known and are set to 1.
    """
    if v < 0:
        raise ValueError("v must be nonnegative")
    if v == 0:
        return EvalReport(0.0, "asymptotic-eq3", 0.0, PERTURBATIVE, {})
    y = v / math.pi
    comps = {
        "linear": -4.0 * y * s,
        "power": 2.0 * y * y * math.log(4.0 * s),
        "barnes": 2.0 * sf.ln_barnes_g_pair(v),
    }
    rep = EvalReport(math.fsum(comps.values()), "asymptotic-eq3", v / s + v**3 / s, PERTURBATIVE, comps)
    if v >= s ** (1.0 / 3.0):
        rep.notes.append("v >= s^(1/3): outside the printed range")
    return rep


def ladder_factors(s: float, v: float, q: int) -> LadderFactors:
    """``1 + j!/sqrt(pi) 2^{-3j-2} s^{-j-1/2} e^{2(s-v)}`` for ``j < q``."""
    ln_e = 2.0 * (s - v)
    out = []
    for j in range(q):
        ln_t = math.lgamma(j + 1) - 0.5 * math.log(math.pi) - (3 * j + 2) * math.log(2) - (j + 0.5) * math.log(s) + ln_e
        out.append(1.0 + math.exp(ln_t))
    return LadderFactors(q, out)


def eq5_lnD(s: float, v: float) -> EvalReport:
    """Stokes-ladder asymptotics: ``eq2`` plus one log-factor per crossed curve.

    For ``v >= s`` the product is empty and this reduces to :func:`eq2_lnD`.
    """
    base = eq2_lnD(s)
    comps = dict(base.components)
    if v >= s:
        return EvalReport(base.ln_D, "asymptotic-eq5", base.err_est, SATURATION, comps)
    u, q = stokes_q(s, v)
    if q is None:
        side = "saturation" if u < 0.5 else "elliptic"
        raise RegimeError(f"(s={s:g}, v={v:g}) has u={u:.4g}: no ladder index ({side} side)")
    lf = ladder_factors(s, v, q)
    for j, f in enumerate(lf.factors):
        comps[f"ladder_{j}"] = math.log(f)
    return EvalReport(math.fsum(comps.values()), "asymptotic-eq5", 1.0 / s, f"{LADDER}(q={q})", comps)


# ---------------------------------------------------------------------------
# elliptic regime


def kappa_of_a(a: float) -> float:
    """``kappa = int_a^1 sqrt((x^2-a^2)/(1-x^2)) dx = E(a') - a^2 K(a')``."""
    if not 0.0 < a < 1.0:
        raise ValueError(f"a must lie in (0, 1), got {a!r}")
    _, _, Kp, Ep = sf.complementary_elliptic(a)
    return Ep - a * a * Kp


def kappa_of_a_quadrature(a: float) -> float:
    """The defining integral by adaptive quadrature after ``x = cos(theta)``.

    The substitution turns it into ``int_0^{arccos a} sqrt(cos^2 - a^2)``,
    whose integrand is bounded.  Kept as the oracle for :func:`kappa_of_a`.
    """
    from scipy.integrate import quad

    if not 0.0 < a < 1.0:
        raise ValueError(f"a must lie in (0, 1), got {a!r}")
    top = math.acos(a)
    # cos^2 t - a^2 = sin(top - t) sin(top + t) avoids cancellation near top
    val, _ = quad(lambda t: math.sqrt(max(math.sin(top - t) * math.sin(top + t), 0.0)), 0.0, top, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def elliptic_data(a: float) -> EllipticData:
    K, E, Kp, Ep = sf.complementary_elliptic(a)
    ap = math.sqrt((1.0 - a) * (1.0 + a))
    V = -(2.0 / math.pi) * (E - ap * ap * K)
    return EllipticData(a, ap, K, Kp, E, Ep, V, 2.0 * K / Kp)


def solve_modulus(kappa: float, tol: float = 1e-15) -> EllipticData:
    """Unique ``a`` in (0, 1) with ``kappa_of_a(a) = kappa``.

    ``kappa_of_a`` decreases strictly with derivative ``-a K(a')``.  Newton
    steps from an expansion-based seed are kept inside a shrinking bisection
    bracket.
    """
    if not 0.0 < kappa < 1.0:
        raise ValueError(f"kappa must lie in (0, 1), got {kappa!r}")
    lo, hi = 1e-300, 1.0
    if kappa < 0.2:
        a = 1.0 - 2.0 * kappa / math.pi - (kappa / math.pi) ** 2
    else:
        # kappa ~ 1 - a^2 (ln(4/a) + 1/2)/2 near a = 0
        a = math.sqrt(max(2.0 * (1.0 - kappa) / max(math.log(4.0 / math.sqrt(1.0 - kappa)), 1.0), 1e-30))
    a = min(max(a, 1e-12), 1.0 - 1e-16)
    for _ in range(200):
        f = kappa_of_a(a) - kappa
        if f > 0:
            lo = a
        else:
            hi = a
        _, _, Kp, _ = sf.complementary_elliptic(a)
        step = f / (a * Kp)
        nxt = a + step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - a) <= tol * max(a, 1e-300) or hi - lo <= tol * hi:
            return elliptic_data(nxt)
        a = nxt
    raise ConvergenceError(f"modulus solve did not converge for kappa={kappa!r}")


def lnB(s: float, kappa: float, b_mode: str) -> float | None:
    """Model for the unknown bounded factor ``ln B(s, v)``.

    ``"unit"``: ``B = 1`` (small-kappa limit); ``"kappa_up"``: the
    ``kappa -> 1`` limit ``-ln((1-kappa)(ln s)^5)/12 + ln(8 pi)/6``;
    ``"omit"``: excluded (returns ``None``).
    """
    if b_mode == "unit":
        return 0.0
    if b_mode == "kappa_up":
        return -math.log((1.0 - kappa) * math.log(s) ** 5) / 12.0 + math.log(8.0 * math.pi) / 6.0
    if b_mode == "omit":
        return None
    raise ValueError(f"unknown b_mode {b_mode!r}")


def eq6_lnD(s: float, v: float, b_mode: str = "unit", data: EllipticData | None = None) -> EvalReport:
    """Theta-function asymptotics in the elliptic regime.

    ``ln D ~ -s^2(1-a^2)/2 + v s V + ln theta(sV | tau) + ln A(v) + ln B``.
    The theta argument is reduced mod 1.  With ``b_mode="omit"`` the B term
    is left out and a note is attached.
    """
    kappa = v / s
    if not 0.0 < kappa < 1.0:
        raise RegimeError(f"eq6 needs 0 < kappa < 1, got kappa={kappa!r}")
    if data is None:
        data = solve_modulus(kappa)
    z = s * data.V
    comps = {
        "gaussian": -0.5 * s * s * data.a_prime**2,
        "linear": v * s * data.V,
        "theta": math.log(sf.theta3(z, data.tau_im)),
        "lnA": sf.ln_A(v),
    }
    b = lnB(s, kappa, b_mode)
    rep = EvalReport(0.0, "asymptotic-eq6", 1.0, ELLIPTIC, comps)
    if b is None:
        rep.notes.append("B(s,v) omitted")
    else:
        comps["lnB"] = b
    rep.ln_D = math.fsum(comps.values())
    if s > 1 and not kappa < elliptic_edge_kappa(s):
        rep.notes.append("kappa above the printed elliptic edge")
    return rep


def small_kappa_expansion(kappa: float) -> tuple[float, float, float]:
    """Truncated ``kappa -> 0`` expansions of ``a``, ``V`` and ``-i tau``."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    r = kappa / math.pi
    a = 1.0 - 2.0 * r - r * r
    V = -(2.0 / math.pi) * (1.0 + r * math.log(kappa) - r * (1.0 + math.log(4.0 * math.pi)))
    tau_im = (2.0 / math.pi) * math.log(4.0 * math.pi / kappa)
    return a, V, tau_im
