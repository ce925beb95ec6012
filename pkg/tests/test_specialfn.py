import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sinegap import oracles
from sinegap import specialfn as sf

# 30-digit mpmath values, frozen
ZETA_PRIME_MINUS1 = -0.165421143700450929213919660243
LN_C0 = -0.43850116605469067852365630394
BARNES_PAIR = {
    1.0: 0.153970141049603471410482831608,
    math.pi: 1.179890040036998819493427606,
    2.0: 0.558349308541927184644408946965,
    10.0: 2.94367675729005444314927695272,
    50.0: -321.801122121412996114797739904,
}
LN_A_AT_2 = -0.465194740322891310896853330299


class TestElliptic:
    def test_k_zero(self):
        assert sf.elliptic_K(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
        assert sf.elliptic_E(0.0) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_E_at_one(self):
        assert sf.elliptic_E(1.0) == 1.0

    @pytest.mark.parametrize("k", [0.1, 0.5, 2**-0.5, 0.9, 0.999])
    def test_against_quadrature(self, k):
        assert sf.elliptic_K(k) == pytest.approx(oracles.elliptic_K_quad(k), rel=1e-12)
        assert sf.elliptic_E(k) == pytest.approx(oracles.elliptic_E_quad(k), rel=1e-12)

    def test_against_mpmath(self):
        assert sf.elliptic_K(2**-0.5) == pytest.approx(1.8540746773013719184338503472, rel=1e-14)
        assert sf.elliptic_E(0.5) == pytest.approx(1.46746220933942715545979526699, rel=1e-14)

    def test_log_growth_near_one(self):
        k = 1 - 1e-8
        kp = math.sqrt((1 - k) * (1 + k))
        val = sf.elliptic_K(k)
        assert val > 9
        with mpmath.workdps(30):
            ref = float(mpmath.ellipk(1 - mpmath.mpf(kp) ** 2))
        assert val == pytest.approx(ref, rel=1e-12)
        assert val == pytest.approx(math.log(4 / kp), rel=1e-6)

    @pytest.mark.parametrize("k", [-0.1, 1.0, 1.5])
    def test_K_domain(self, k):
        with pytest.raises(ValueError):
            sf.elliptic_K(k)

    @pytest.mark.parametrize("k", [-0.1, 1.01])
    def test_E_domain(self, k):
        with pytest.raises(ValueError):
            sf.elliptic_E(k)

    def test_legendre_relation(self):
        rng = np.random.default_rng(0)
        for k in rng.uniform(0, 1, 100):
            K, E, Kp, Ep = sf.complementary_elliptic(float(k))
            assert E * Kp + Ep * K - K * Kp == pytest.approx(math.pi / 2, abs=1e-12)

    def test_monotone(self):
        ks = np.linspace(0, 0.999, 200)
        K = [sf.elliptic_K(k) for k in ks]
        E = [sf.elliptic_E(k) for k in ks]
        assert np.all(np.diff(K) > 0) and np.all(np.diff(E) < 0)
        assert min(K) >= math.pi / 2 and 1 <= min(E) and max(E) <= math.pi / 2


class TestTheta:
    def test_large_tau(self):
        assert sf.theta3(0.0, 20.0) == pytest.approx(1 + 2 * math.exp(-20 * math.pi), abs=1e-16)
        assert sf.theta3(sf.ThetaArgs(0.0, 5.0)) == pytest.approx(1 + 2 * math.exp(-5 * math.pi) + 2 * math.exp(-20 * math.pi), rel=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            sf.theta3(0.1, 0.0)
        with pytest.raises(ValueError):
            sf.ThetaArgs(0.1, -1.0)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-5, 5), st.floats(0.2, 4.0))
    def test_periodic(self, z, t):
        assert sf.theta3(z + 1, t) == pytest.approx(sf.theta3(z, t), abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-2, 2), st.floats(0.3, 3.0))
    def test_quasi_periodic(self, z, t):
        lhs = sf.theta3_complex(z + 1j * t, t)
        rhs = sf.theta3_complex(z, t) * np.exp(math.pi * t - 2j * math.pi * z)
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)

    @pytest.mark.parametrize("t", np.linspace(0.8, 1.2, 9))
    def test_modular_overlap(self, t):
        for z in np.linspace(-0.5, 1.5, 17):
            assert sf.theta3(z, t, modular=True) == pytest.approx(sf.theta3(z, t, modular=False), abs=1e-13)

    def test_small_tau_matches_mpmath(self):
        t = 0.05
        q = math.exp(-math.pi * t)
        ref = float(mpmath.jtheta(3, math.pi * 0.3, q))
        assert sf.theta3(0.3, t) == pytest.approx(ref, rel=1e-12)

    def test_real_and_complex_agree(self):
        assert sf.theta3(0.37, 1.7) == pytest.approx(sf.theta3_complex(0.37, 1.7).real, abs=1e-14)


class TestBarnes:
    def test_zero(self):
        assert sf.ln_barnes_g_pair(0.0) == 0.0

    @pytest.mark.parametrize("v", sorted(BARNES_PAIR))
    def test_against_mpmath(self, v):
        assert sf.ln_barnes_g_pair(v) == pytest.approx(BARNES_PAIR[v], abs=1e-10)

    @pytest.mark.parametrize("v", [1.0, math.pi])
    def test_against_long_product(self, v):
        assert sf.ln_barnes_g_pair(v) == pytest.approx(oracles.ln_barnes_g_pair_product(v), abs=1e-9)

    def test_conjugate_pairing(self):
        z = 1j * 2.5 / math.pi
        up = sf.ln_barnes_g(z)
        down = sf.ln_barnes_g(-z)
        assert up == pytest.approx(down.conjugate(), abs=1e-12)
        assert (up + down).real == pytest.approx(sf.ln_barnes_g_pair(2.5), abs=1e-10)

    def test_recurrence(self):
        # G(2+z) = Gamma(1+z) G(1+z)
        z = 0.3 + 0.4j
        lhs = sf.ln_barnes_g(1 + z) - sf.ln_barnes_g(z)
        assert complex(lhs) == pytest.approx(complex(mpmath.loggamma(1 + z)), abs=1e-10)

    def test_domain(self):
        with pytest.raises(ValueError):
            sf.ln_barnes_g_pair(-1.0)


class TestLnA:
    def test_at_pi(self):
        assert sf.ln_A(math.pi) == pytest.approx(2 * sf.ln_barnes_g_pair(math.pi) - 3, abs=1e-14)

    def test_at_two(self):
        assert sf.ln_A(2.0) == pytest.approx(LN_A_AT_2, abs=1e-9)

    def test_small_v_limit(self):
        assert abs(sf.ln_A(1e-6)) < 1e-10

    def test_domain(self):
        with pytest.raises(ValueError):
            sf.ln_A(0.0)


class TestConstants:
    def test_zeta_prime_minus1(self):
        assert sf.zeta_prime_minus1() == pytest.approx(ZETA_PRIME_MINUS1, abs=1e-12)

    @pytest.mark.parametrize("s", [-3.0, -0.5, 0.0, 0.5, 2.0, 3.5])
    def test_zeta_prime_mpmath(self, s):
        assert sf.zeta_prime(s) == pytest.approx(float(mpmath.zeta(s, derivative=1)), abs=1e-12)

    def test_ln_c0(self):
        val = sf.widom_dyson_ln_c0()
        assert val == pytest.approx(LN_C0, abs=1e-12)
        assert val == pytest.approx(oracles.widom_dyson_ln_c0_oracle(), abs=1e-10)
        assert math.exp(val) == pytest.approx(0.645, abs=5e-4)
        assert math.exp(val) * math.exp(-val) == pytest.approx(1.0, rel=1e-15)

    def test_constants_record(self):
        c = sf.constants()
        assert c.ln_c0 == math.log(2) / 12 + 3 * c.zeta_prime_minus1
        assert c.euler_gamma == pytest.approx(0.5772156649015329, rel=1e-15)
