"""Gap probabilities of the thinned sine process.

``D(s, gamma) = det(I - gamma K_s)`` on ``L^2(-1, 1)`` with the sine kernel
``K_s(x, y) = sin(s(x-y)) / (pi(x-y))``.  Submodules:

* :mod:`sinegap.specialfn`: elliptic integrals, theta, Barnes G, zeta'.
* :mod:`sinegap.fredholm`: Nystrom evaluation of ``ln D``.
* :mod:`sinegap.asymptotics`: large-``s`` formulas and the regime classifier.
* :mod:`sinegap.thinning`: thinned Poisson limit and GUE Monte Carlo.
* :mod:`sinegap.cli`: the ``sinegap`` command.
"""

from .errors import ConvergenceError, PrecisionEnvelopeError, RegimeError
from .fredholm import EvalReport, GapParams, log_det

__version__ = "0.1.0"

__all__ = ["GapParams", "EvalReport", "log_det", "PrecisionEnvelopeError", "ConvergenceError", "RegimeError"]
