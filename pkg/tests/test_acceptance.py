"""Acceptance criteria 1-12, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion plus the individual checks behind it.  The whole quick suite is
executed once and timed, since criterion 12 includes its runtime budget.
"""

import time

import pytest

from conftest import ACCEPTANCE_LINES
from sinegap.verification import Check, run_suite

CRITERIA = {
    1: "large-s Gaussian law, gamma = 1",
    2: "Widom-Dyson constant",
    3: "fixed-v Barnes G asymptotics",
    4: "Stokes ladder vs eigenvalue product",
    5: "eigenvalue deficits near 1",
    6: "elliptic regime bound and theta oscillation",
    7: "elliptic formula reduces to fixed-v formula",
    8: "modulus a(kappa) pipeline",
    9: "special-function identities",
    10: "thinned Poisson identity and small-gamma limit",
    11: "Monte Carlo thinned GUE vs determinant",
    12: "regime classifier and suite runtime",
}
RUNTIME_BUDGET = 300.0


@pytest.fixture(scope="module")
def suite():
    t0 = time.perf_counter()
    checks = run_suite("all", quick=True)
    elapsed = time.perf_counter() - t0
    checks.append(
        Check("verify all --quick runtime", elapsed <= RUNTIME_BUDGET, f"{elapsed:.1f}s", f"{RUNTIME_BUDGET:.0f}s", 12)
    )
    return checks


@pytest.mark.parametrize("criterion", sorted(CRITERIA), ids=lambda n: f"AC{n:02d}")
def test_criterion(suite, criterion):
    checks = [c for c in suite if c.criterion == criterion]
    assert checks, f"no checks registered for criterion {criterion}"
    ok = all(c.passed for c in checks)
    summary = f"{'PASS' if ok else 'FAIL'}  AC{criterion}: {CRITERIA[criterion]}"
    ACCEPTANCE_LINES.append(summary)
    print("\n" + summary)
    for c in checks:
        print("    " + c.line())
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)
