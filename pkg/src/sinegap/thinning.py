"""Thinned sine process: contracted-scale gaps, the Poisson end point, Monte Carlo.

Deleting each sine-process particle independently with probability
``1 - gamma`` turns ``D(s, gamma)`` into the probability that
``(-s/pi, s/pi)`` holds no surviving particle.  Rescaling by ``1/gamma``
keeps unit mean spacing; as ``gamma -> 0`` the gap law tends to the Poisson
value ``exp(-2s/pi)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal
from scipy.special import logsumexp

from .fredholm import EvalReport, GapParams, log_det

__all__ = [
    "McConfig",
    "McEstimate",
    "thinned_gap_lnD",
    "poisson_thinned_gap",
    "gue_tridiagonal",
    "mc_gue_gap_estimate",
]

# eligible bulk window, as a fraction of the semicircle radius
BULK_WINDOW = 0.10


@dataclass(frozen=True)
class McConfig:
    s: float = 1.0
    gamma: float = 0.5
    matrix_size: int = 256
    sample_count: int = 10_000
    seed: int = 20180901

    def __post_init__(self):
        if self.matrix_size < 64:
            raise ValueError("matrix_size must be at least 64")
        if self.sample_count < 100:
            raise ValueError("sample_count must be at least 100")
        if not self.s > 0:
            raise ValueError("s must be positive")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    stderr: float
    samples: int


def thinned_gap_lnD(s: float, gamma: float, **kwargs) -> EvalReport:
    """``ln D(s/gamma, gamma)``: gap of ``(-s/(pi gamma), s/(pi gamma))``.

    Extra keyword arguments go to :func:`sinegap.fredholm.log_det`.
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    return log_det(GapParams.from_gamma(s / gamma, gamma), **kwargs)


def poisson_thinned_gap(s: float, gamma: float) -> tuple[float, float]:
    """Gap probability of the thinned Poisson process, as a series and in closed form.

    The series sums ``P(k points) * (1-gamma)^k`` over ``k`` for a unit-rate
    Poisson process on an interval of length ``2s/(pi gamma)``; it must
    equal ``exp(-2s/pi)``.
    """
    if not s > 0:
        raise ValueError("s must be positive")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    mean = 2.0 * s / (math.pi * gamma)
    if gamma == 1.0:
        return math.exp(-mean), math.exp(-2.0 * s / math.pi)
    x = mean * (1.0 - gamma)
    # terms peak near k = x; go well past so the tail is < 1e-17 of the sum
    kmax = int(x + 12.0 * math.sqrt(x + 1.0) + 40)
    k = np.arange(kmax + 1)
    log_terms = k * math.log(x) - np.array([math.lgamma(j + 1) for j in k]) - mean
    return float(np.exp(logsumexp(log_terms))), math.exp(-2.0 * s / math.pi)


def gue_tridiagonal(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of a tridiagonal matrix with GUE spectrum.

    Eigenvalue density ``prop. to prod|l_i - l_j|^2 exp(-sum l^2 / 2)``;
    semicircle of radius ``2 sqrt(n)``.
    """
    diag = rng.standard_normal(n)
    off = np.sqrt(rng.chisquare(2.0 * np.arange(n - 1, 0, -1)) / 2.0)
    return diag, off


def _sample_block(args) -> int:
    cfg, start, stop = args
    n = cfg.matrix_size
    # window edges in matrix units; mean spacing at 0 is pi/sqrt(n)
    half = cfg.s / math.sqrt(n)
    if half > BULK_WINDOW * 2.0 * math.sqrt(n):
        raise ValueError("gap interval leaves the bulk window; increase matrix_size")
    empty = 0
    for i in range(start, stop):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, i]))
        d, e = gue_tridiagonal(n, rng)
        # only eigenvalues inside the open gap interval matter
        lam = eigvalsh_tridiagonal(d, e, select="v", select_range=(-half, half))
        lam = lam[np.abs(lam) < half]
        keep = rng.random(lam.size) < cfg.gamma
        empty += not keep.any()
    return empty


def mc_gue_gap_estimate(config: McConfig, workers: int = 1) -> McEstimate:
    """Monte Carlo estimate of ``D(s, gamma)`` from thinned GUE spectra.

    Each sample draws a tridiagonal GUE matrix, rescales its spectrum by
    the semicircle density at 0 (unit mean spacing), deletes every
    eigenvalue with probability ``1 - gamma`` and checks whether
    ``(-s/pi, s/pi)`` is empty.  Sample ``i`` is seeded from
    ``(seed, i)``, so the result does not depend on ``workers``.
    """
    m = config.sample_count
    if workers <= 1:
        hits = _sample_block((config, 0, m))
    else:
        edges = np.linspace(0, m, workers + 1).astype(int)
        jobs = [(config, int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]
        with ProcessPoolExecutor(workers) as pool:
            hits = sum(pool.map(_sample_block, jobs))
    p = hits / m
    return McEstimate(p, math.sqrt(p * (1.0 - p) / m), m)
