"""Numerical evaluation of ``D(s, gamma) = det(I - gamma K_s)`` on L^2(-1, 1).

The integral operator with kernel ``sin(s(x-y)) / (pi(x-y))`` is discretised
by a symmetrised Nystrom matrix on Gauss-Legendre nodes.  The kernel is
entire, so the discretisation converges spectrally; the eigenvalue route is
primary because at ``gamma = 1`` the answer is controlled by the deficits
``1 - lambda_j``, which are exponentially small in ``s``.

Two precision backends share one interface:

``"baseline"``
    numpy float64 and LAPACK.  Trustworthy for ``s <= 14`` when ``gamma`` is
    within 1e-6 of one.
``"extended"``
    mpmath at 40 significant digits.  Slow (pure Python eigensolver), but
    keeps the deficits resolved up to ``s ~ 30``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, PrecisionEnvelopeError

__all__ = [
    "GapParams",
    "Quadrature",
    "Spectrum",
    "EvalReport",
    "ENVELOPE",
    "gauss_legendre",
    "sine_kernel",
    "nystrom_matrix",
    "spectrum",
    "log_det",
    "log_det_lu",
    "ln_det_at_order",
    "eigenvalue_deficits",
    "converged_spectrum",
]

# (max s, gamma distance from 1) for which deficits stay resolvable
ENVELOPE = {"baseline": 14.0, "extended": 30.0}
NEAR_ONE = 1e-6
EXTENDED_DPS = 40
MAX_ORDER = {"baseline": 4096, "extended": 512}

_SINC_SERIES = 1e-4


@dataclass(frozen=True)
class GapParams:
    """A point ``(s, v)`` of the quarter plane with ``gamma = 1 - exp(-2v)``.

    ``v = inf`` stands for ``gamma = 1``.  Use :meth:`from_gamma` to start
    from the thinning parameter instead.
    """

    s: float
    v: float

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s!r}")
        if not self.v >= 0:
            raise ValueError(f"v must be nonnegative, got {self.v!r}")

    @classmethod
    def from_gamma(cls, s: float, gamma: float) -> "GapParams":
        if not 0.0 <= gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
        v = math.inf if gamma == 1.0 else -0.5 * math.log1p(-gamma)
        return cls(float(s), v)

    @property
    def gamma(self) -> float:
        return 1.0 if math.isinf(self.v) else -math.expm1(-2.0 * self.v)

    @property
    def kappa(self) -> float:
        return self.v / self.s

    @property
    def e2v(self) -> float:
        """``exp(-2v) = 1 - gamma`` without cancellation."""
        return 0.0 if math.isinf(self.v) else math.exp(-2.0 * self.v)


@dataclass(frozen=True)
class Quadrature:
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    deficits: np.ndarray

    @property
    def order(self) -> int:
        return len(self.eigenvalues)


@dataclass
class EvalReport:
    """A value of ``ln D`` together with how it was obtained.

    ``err_est`` is the last change under order doubling for numeric methods
    and a placeholder size of the neglected term for asymptotic ones.
    """

    ln_D: float
    method: str
    err_est: float
    regime: str | None = None
    components: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# quadrature


def gauss_legendre(order: int, precision: str = "baseline") -> Quadrature:
    """Gauss-Legendre rule on (-1, 1) by Newton iteration on ``P_n``.

    Initial guesses use the Tricomi asymptotic form of the roots.  For the
    extended backend the nodes are polished in mpmath and returned as an
    object array of ``mpf``.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    n = order
    i = np.arange(1, n + 1)
    theta = np.pi * (4 * i - 1) / (4 * n + 2)
    x = np.cos(theta) * (1 - (n - 1) / (8.0 * n**3))
    for _ in range(100):
        p, dp = _legendre(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    # ascending order, exact symmetry
    x = np.sort(x)
    x = 0.5 * (x - x[::-1])
    _, dp = _legendre(n, x)
    w = 2.0 / ((1 - x * x) * dp * dp)
    if precision == "extended":
        return _gauss_legendre_mp(n, x)
    return Quadrature(x, w)


def _legendre(n, x):
    p0 = np.ones_like(x)
    p1 = x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


def _gauss_legendre_mp(n: int, seed: np.ndarray) -> Quadrature:
    import mpmath as mp

    with mp.workdps(EXTENDED_DPS + 10):
        nodes, weights = [], []
        half = (n + 1) // 2
        for x0 in seed[n - half :]:
            x = mp.mpf(float(x0))
            for _ in range(8):
                p0, p1 = mp.mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                step = p1 / dp
                x -= step
                if abs(step) < mp.mpf(10) ** (-(EXTENDED_DPS + 5)):
                    break
            p0, p1 = mp.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        if n % 2:
            nodes[0] = mp.mpf(0)
        pos_x, pos_w = nodes, weights
        if n % 2:
            all_x = [-t for t in reversed(pos_x[1:])] + pos_x
            all_w = list(reversed(pos_w[1:])) + pos_w
        else:
            all_x = [-t for t in reversed(pos_x)] + pos_x
            all_w = list(reversed(pos_w)) + pos_w
    return Quadrature(np.array(all_x, dtype=object), np.array(all_w, dtype=object))


# ---------------------------------------------------------------------------
# kernel and matrix


def sine_kernel(s, x, y):
    """``sin(s(x-y)) / (pi(x-y))`` with the diagonal limit ``s/pi``.

    Works elementwise on arrays.  When ``|s(x-y)| < 1e-4`` a three-term sinc
    series is used so the function is smooth through the diagonal.
    """
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    t = s * d
    small = np.abs(t) < _SINC_SERIES
    safe = np.where(small, 1.0, d)
    out = np.where(
        small,
        (s / np.pi) * (1.0 - t * t / 6.0 + t**4 / 120.0),
        np.sin(t) / (np.pi * safe),
    )
    return out[()] if out.ndim == 0 else out


def nystrom_matrix(params: GapParams | float, quad: Quadrature) -> np.ndarray:
    """Symmetrised Nystrom matrix ``sqrt(w_i) K_s(x_i, x_j) sqrt(w_j)``."""
    s = params.s if isinstance(params, GapParams) else float(params)
    if quad.nodes.dtype == object:
        return _nystrom_mp(s, quad)
    x = quad.nodes
    sw = np.sqrt(quad.weights)
    A = sw[:, None] * sine_kernel(s, x[:, None], x[None, :]) * sw[None, :]
    # exact symmetry
    return 0.5 * (A + A.T)


def _nystrom_mp(s: float, quad: Quadrature):
    import mpmath as mp

    n = quad.order
    with mp.workdps(EXTENDED_DPS):
        s = mp.mpf(s)
        sw = [mp.sqrt(w) for w in quad.weights]
        A = mp.matrix(n, n)
        diag = s / mp.pi
        for i in range(n):
            A[i, i] = sw[i] * diag * sw[i]
            for j in range(i + 1, n):
                d = quad.nodes[i] - quad.nodes[j]
                A[i, j] = A[j, i] = sw[i] * mp.sin(s * d) / (mp.pi * d) * sw[j]
    return A


def spectrum(matrix) -> Spectrum:
    """Eigenvalues (descending) and deficits ``1 - lambda`` of a symmetric matrix.

    float64 input goes through LAPACK's symmetric solver (Householder
    tridiagonalisation followed by implicit-shift iteration); an mpmath
    matrix goes through ``mpmath.eigsy``.
    """
    if isinstance(matrix, np.ndarray):
        try:
            lam = np.linalg.eigvalsh(matrix)[::-1]
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"symmetric eigensolver failed: {exc}") from exc
        return Spectrum(lam, 1.0 - lam)
    import mpmath as mp

    with mp.workdps(EXTENDED_DPS):
        ev = mp.eigsy(matrix, eigvals_only=True)
        lam = sorted((ev[i] for i in range(matrix.rows)), reverse=True)
        return Spectrum(np.array(lam, dtype=object), np.array([1 - t for t in lam], dtype=object))


# ---------------------------------------------------------------------------
# determinant


def _check_envelope(params: GapParams, precision: str, unsafe_envelope: bool) -> None:
    if precision not in ENVELOPE:
        raise ValueError(f"unknown precision backend {precision!r}")
    if unsafe_envelope:
        return
    if params.e2v < NEAR_ONE and params.s > ENVELOPE[precision]:
        raise PrecisionEnvelopeError(
            f"s={params.s:g} with gamma within {NEAR_ONE:g} of 1 exceeds the "
            f"{precision} envelope s <= {ENVELOPE[precision]:g}; deficits 1-lambda "
            "fall below the eigensolver accuracy"
        )


def _ln_det_from_spectrum(params: GapParams, spec: Spectrum) -> tuple[float, float]:
    """Return ``ln D`` and the roundoff floor of that sum.

    An eigenvalue perturbation ``delta`` moves ``ln(1 - gamma lambda)`` by
    about ``delta / (1 - gamma lambda)``; the floor sums these for
    ``delta = 32 eps``.
    """
    if spec.eigenvalues.dtype == object:
        import mpmath as mp

        with mp.workdps(EXTENDED_DPS):
            g1 = mp.mpf(0) if math.isinf(params.v) else mp.exp(-2 * mp.mpf(params.v))
            # 1 - gamma*lam = deficit + (1 - gamma)*lam
            terms = [d + g1 * lam for lam, d in zip(spec.eigenvalues, spec.deficits)]
            if min(terms) <= 0:
                raise PrecisionEnvelopeError("nonpositive factor 1 - gamma*lambda")
            floor = 32 * mp.mpf(10) ** (-EXTENDED_DPS) * mp.fsum(1 / t for t in terms)
            return float(mp.fsum(mp.log(t) for t in terms)), float(floor)
    lam = spec.eigenvalues
    terms = spec.deficits + params.e2v * lam
    if np.min(terms) <= 0:
        raise PrecisionEnvelopeError(
            "nonpositive factor 1 - gamma*lambda: eigenvalue deficits are below roundoff"
        )
    floor = 32 * np.finfo(float).eps * float(np.sum(1.0 / terms))
    return float(np.sum(np.log(terms))), floor


def ln_det_at_order(params: GapParams, order: int, precision: str = "baseline") -> float:
    """``ln D`` from one fixed discretisation order (no convergence loop)."""
    quad = gauss_legendre(order, precision)
    return _ln_det_from_spectrum(params, spectrum(nystrom_matrix(params, quad)))[0]


def _start_order(s: float) -> int:
    return max(64, math.ceil(4 * s))


def converged_spectrum(
    params: GapParams,
    target_tol: float = 1e-12,
    precision: str = "baseline",
    unsafe_envelope: bool = False,
) -> tuple[Spectrum, float, float]:
    """Double the order until ``ln D`` settles; return ``(spectrum, ln_D, err)``.

    Settling means two successive orders differ by less than ``target_tol``
    or by less than the roundoff floor of the eigenvalue sum, whichever is
    larger; at ``gamma = 1`` the floor dominates.
    """
    _check_envelope(params, precision, unsafe_envelope)
    n = _start_order(params.s)
    prev = None
    while n <= MAX_ORDER[precision]:
        spec = spectrum(nystrom_matrix(params, gauss_legendre(n, precision)))
        val, floor = _ln_det_from_spectrum(params, spec)
        if prev is not None:
            err = abs(val - prev)
            if err < max(target_tol, floor):
                return spec, val, err
        prev = val
        n *= 2
    raise ConvergenceError(
        f"ln D did not settle to {target_tol:g} below order {MAX_ORDER[precision]}"
    )


def log_det(
    params: GapParams,
    target_tol: float = 1e-12,
    precision: str = "baseline",
    unsafe_envelope: bool = False,
) -> EvalReport:
    """``ln det(I - gamma K_s)`` as a sum of ``ln(1 - gamma lambda_j)``.

    Raises :class:`PrecisionEnvelopeError` when ``gamma`` is within 1e-6 of
    one and ``s`` exceeds the backend envelope (unless ``unsafe_envelope``),
    and :class:`ConvergenceError` when doubling passes the order cap.
    """
    if params.gamma == 0.0:
        return EvalReport(0.0, "numeric-eigen", 0.0, components={"order": 0.0})
    spec, val, err = converged_spectrum(params, target_tol, precision, unsafe_envelope)
    return EvalReport(val, "numeric-eigen", err, components={"order": float(spec.order)})


def log_det_lu(params: GapParams, target_tol: float = 1e-12) -> EvalReport:
    """Same quantity through an LU log-determinant of ``I - gamma A``.

    Only meaningful for ``gamma`` bounded away from one; used as an
    independent cross-check of :func:`log_det`.
    """
    n = _start_order(params.s)
    prev = None
    while n <= MAX_ORDER["baseline"]:
        A = nystrom_matrix(params, gauss_legendre(n))
        sign, val = np.linalg.slogdet(np.eye(n) - params.gamma * A)
        if sign <= 0:
            raise PrecisionEnvelopeError("I - gamma*A is not positive definite numerically")
        if prev is not None and abs(val - prev) < target_tol:
            return EvalReport(float(val), "numeric-lu", abs(val - prev), components={"order": float(n)})
        prev = val
        n *= 2
    raise ConvergenceError("LU route did not converge")


def eigenvalue_deficits(
    s: float, count: int, precision: str = "baseline", unsafe_envelope: bool = False
) -> list[tuple[int, float]]:
    """The ``count`` smallest deficits ``1 - lambda_j`` at converged order."""
    spec, _, _ = converged_spectrum(GapParams(s, math.inf), 1e-12, precision, unsafe_envelope)
    return [(j, float(spec.deficits[j])) for j in range(count)]
