# coding: utf-8

# # Asymptotic regimes in the (s, v) plane
#
# With gamma = 1 - exp(-2v) and kappa = v/s, the large-s behaviour of ln D
# depends on where (s, v) sits: saturation near v = s, a ladder of Stokes
# curves just below, an elliptic band in the middle and a perturbative strip
# at small v.

# %%

import math

import numpy as np

from sinegap import asymptotics as asy
from sinegap.fredholm import GapParams, log_det

# ## Classifying points
#
# Regions overlap, so classify returns every regime that applies.

# %%

s = 100.0
for v in (99.5, 98.0, 96.0, 60.0, 3.0):
    print(f"s={s:g} v={v:<5g}", [str(r) for r in asy.classify(GapParams(s, v))])

print("Stokes curves at s=100:", [round(asy.stokes_curve_v(s, k), 4) for k in range(4)])
print("saturation edge v:", s * asy.saturation_edge_kappa(s), " elliptic edge v:", s * asy.elliptic_edge_kappa(s))

# ## gamma = 1: the Gaussian law
#
# The residual against the numeric determinant shrinks like 1/(32 s^2).

# %%

for s in (4.0, 8.0, 12.0):
    num = log_det(GapParams(s, math.inf)).ln_D
    print(f"s={s:4.1f}  numeric - asymptotic = {num - asy.eq2_lnD(s).ln_D:+.2e}   1/(32 s^2) = {1 / (32 * s * s):.2e}")

# ## Fixed v: Barnes G correction

# %%

for s in (8.0, 10.0, 12.0):
    num = log_det(GapParams(s, 1.0)).ln_D
    print(f"s={s:4.1f}  residual = {num - asy.eq3_lnD(s, 1.0).ln_D:+.3e}")

# ## Elliptic band: theta oscillations
#
# At kappa = 0.5 the residual without the theta factor wobbles with s; the
# theta factor removes most of that wobble.

# %%

grid = np.linspace(6, 14, 17)
with_theta, without = [], []
for s in grid:
    num = log_det(GapParams(s, 0.5 * s)).ln_D
    rep = asy.eq6_lnD(s, 0.5 * s, b_mode="omit")
    with_theta.append(num - rep.ln_D)
    without.append(num - rep.ln_D + rep.components["theta"])
print("std with theta   :", np.std(with_theta))
print("std without theta:", np.std(without))

# The modulus a(kappa) is the root of a monotone elliptic-integral equation.

# %%

for kappa in (0.01, 0.25, 0.5, 0.9):
    d = asy.solve_modulus(kappa)
    print(f"kappa={kappa:<5} a={d.a:.12f}  V={d.V:+.6f}  tau=i*{d.tau_im:.6f}")
