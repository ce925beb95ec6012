# coding: utf-8

# # Special functions behind the gap asymptotics
#
# The asymptotic formulas need complete elliptic integrals, the Jacobi theta
# function on the imaginary axis, the Barnes G function on a vertical line and
# the constant zeta'(-1).  Everything here is plain floating point.

# %%

import math

import numpy as np

from sinegap import oracles
from sinegap import specialfn as sf

# ## Elliptic integrals by the AGM
#
# K and E come from one arithmetic-geometric mean run.  Quadrature of the
# defining integrals is the independent check.

# %%

for k in (0.1, 0.5, 0.9, 0.999):
    K, E = sf.elliptic_K(k), sf.elliptic_E(k)
    print(f"k={k:<6} K={K:.15f} (quad diff {K - oracles.elliptic_K_quad(k):+.1e})  E={E:.15f}")

# Legendre's relation ties K, E and their complements together.

# %%

K, E, Kp, Ep = sf.complementary_elliptic(0.3)
print("E K' + E' K - K K' - pi/2 =", E * Kp + Ep * K - K * Kp - math.pi / 2)

# ## Theta function
#
# theta3(z | i t) is 1-periodic in z.  For small t the series converges slowly,
# so the modular image is summed instead.

# %%

z = np.linspace(0, 1, 5)
for t in (0.05, 1.0, 4.0):
    print(f"t={t}:", np.round([sf.theta3(x, t) for x in z], 6))

# ## Barnes G on the line 1 + i v/pi
#
# Only the combination ln G(1+iy) + ln G(1-iy) enters.  It is real and grows
# like y^2 ln y.

# %%

for v in (0.5, 1.0, math.pi, 10.0):
    print(f"v={v:<8.4f} ln G(1+iy)G(1-iy) = {sf.ln_barnes_g_pair(v):+.15f}")

# ## The Widom-Dyson constant
#
# ln c0 = ln(2)/12 + 3 zeta'(-1).  The oracle reaches zeta'(-1) through
# Glaisher's constant and zeta'(2) instead.

# %%

c = sf.constants()
print("zeta'(-1) =", c.zeta_prime_minus1)
print("ln c0     =", c.ln_c0, " oracle diff", c.ln_c0 - oracles.widom_dyson_ln_c0_oracle())
print("c0        =", math.exp(c.ln_c0))
