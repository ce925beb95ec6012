# coding: utf-8

# # Thinning: from random matrices to Poisson
#
# Deleting each sine-process point with probability 1 - gamma and rescaling
# by 1/gamma keeps unit density.  The empty-interval probability then moves
# from the random-matrix law (gamma = 1) to exp(-2s/pi) (gamma -> 0).

# %%

import math

from sinegap.fredholm import GapParams, log_det
from sinegap.thinning import McConfig, mc_gue_gap_estimate, poisson_thinned_gap, thinned_gap_lnD

# ## Poisson end point
#
# Thinning a Poisson process gives a Poisson process again, so the series
# over the number of deleted points must sum to exp(-2s/pi) exactly.

# %%

for s, g in ((0.5, 0.3), (2.0, 0.05), (4.0, 0.9)):
    series, closed = poisson_thinned_gap(s, g)
    print(f"s={s} gamma={g}: series={series:.15e} closed={closed:.15e}")

# ## Interpolation in gamma
#
# ln D(s/gamma, gamma) at s = 1 approaches -2/pi only slowly as gamma drops.

# %%

for g in (1.0, 0.5, 0.25, 0.1, 0.01):
    print(f"gamma={g:<5} ln D = {thinned_gap_lnD(1.0, g).ln_D:+.6f}   (-2/pi = {-2 / math.pi:.6f})")

# ## Monte Carlo with thinned GUE spectra
#
# A tridiagonal GUE model gives eigenvalues cheaply.  Near the centre their
# spacing is pi/sqrt(n), which is the sine-process scale.

# %%

cfg = McConfig(s=1.0, gamma=0.5, matrix_size=256, sample_count=4000)
est = mc_gue_gap_estimate(cfg)
det = math.exp(log_det(GapParams.from_gamma(1.0, 0.5)).ln_D)
print(f"p_hat={est.p_hat:.4f} +- {est.stderr:.4f}   determinant={det:.4f}   z={(est.p_hat - det) / est.stderr:+.2f}")
