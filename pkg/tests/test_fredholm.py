import math

import numpy as np
import pytest

from sinegap import fredholm as fh
from sinegap.errors import PrecisionEnvelopeError
from sinegap.fredholm import GapParams


def test_params_from_gamma_roundtrip():
    p = GapParams(3.0, 0.7)
    q = GapParams.from_gamma(3.0, p.gamma)
    assert q.v == pytest.approx(0.7, rel=1e-14)
    assert p.gamma == pytest.approx(1 - math.exp(-1.4), rel=1e-15)
    assert p.kappa == pytest.approx(0.7 / 3)
    inf = GapParams.from_gamma(2.0, 1.0)
    assert math.isinf(inf.v) and inf.gamma == 1.0 and inf.e2v == 0.0


@pytest.mark.parametrize("bad", [dict(s=0.0, v=1.0), dict(s=1.0, v=-0.1)])
def test_params_domain(bad):
    with pytest.raises(ValueError):
        GapParams(**bad)


class TestQuadrature:
    def test_two_point(self):
        q = fh.gauss_legendre(2)
        assert q.nodes == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)], abs=1e-15)
        assert q.weights == pytest.approx([1.0, 1.0], abs=1e-15)

    @pytest.mark.parametrize("n", [3, 16, 64, 257, 1024])
    def test_against_numpy(self, n):
        q = fh.gauss_legendre(n)
        x, w = np.polynomial.legendre.leggauss(n)
        assert np.max(np.abs(q.nodes - x)) < 1e-15
        # numpy's weights lose digits with n, so this is only a loose check
        assert np.max(np.abs(q.weights - w) / w) < 1e-9
        assert q.weights.sum() == pytest.approx(2.0, abs=1e-14)
        assert np.all(np.diff(q.nodes) > 0)
        assert np.array_equal(q.nodes, -q.nodes[::-1])

    @pytest.mark.parametrize("n", [64, 257])
    def test_weights_against_extended(self, n):
        q = fh.gauss_legendre(n)
        ref = np.array([float(t) for t in fh.gauss_legendre(n, precision="extended").weights])
        assert np.max(np.abs(q.weights - ref) / ref) < 1e-11

    def test_exactness(self):
        q = fh.gauss_legendre(16)
        assert np.dot(q.weights, q.nodes**14) == pytest.approx(2 / 15, abs=1e-15)

    def test_extended_nodes(self):
        import mpmath as mp

        q = fh.gauss_legendre(9, precision="extended")
        with mp.workdps(40):
            assert abs(mp.fsum(q.weights) - 2) < mp.mpf(10) ** -35
            assert abs(mp.fsum(w * x**16 for x, w in zip(q.nodes, q.weights)) - mp.mpf(2) / 17) < mp.mpf(10) ** -35


class TestKernel:
    def test_diagonal(self):
        assert fh.sine_kernel(3.0, 0.2, 0.2) == pytest.approx(3 / math.pi, rel=1e-15)

    def test_values(self):
        assert fh.sine_kernel(math.pi, 1.0, 0.0) == pytest.approx(0.0, abs=1e-16)
        assert fh.sine_kernel(1.0, 0.5, 0.0) == pytest.approx(math.sin(0.5) / (0.5 * math.pi), rel=1e-15)

    def test_continuous_through_threshold(self):
        s = 2.0
        d = np.array([0.99e-4, 1.01e-4]) / s
        vals = fh.sine_kernel(s, d, 0.0)
        exact = np.sin(s * d) / (math.pi * d)
        assert vals == pytest.approx(exact, rel=1e-15)


class TestMatrixAndSpectrum:
    def test_symmetric_and_trace(self):
        p = GapParams(5.0, 1.0)
        A = fh.nystrom_matrix(p, fh.gauss_legendre(64))
        assert np.array_equal(A, A.T)
        assert np.trace(A) == pytest.approx(10 / math.pi, rel=1e-14)

    def test_trivial_spectra(self):
        sp = fh.spectrum(2.5 * np.eye(4))
        assert sp.eigenvalues == pytest.approx([2.5] * 4)
        sp = fh.spectrum(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert sp.eigenvalues == pytest.approx([1.0, -1.0])
        assert sp.deficits == pytest.approx([0.0, 2.0])

    def test_norm_bound_s1(self):
        sp = fh.spectrum(fh.nystrom_matrix(GapParams(1.0, 1.0), fh.gauss_legendre(64)))
        assert sp.eigenvalues[0] < 1

    @pytest.mark.parametrize("s", [1.0, 5.0, 10.0])
    def test_trace_and_bounds(self, s):
        spec, _, _ = fh.converged_spectrum(GapParams(s, math.inf))
        assert spec.eigenvalues.sum() == pytest.approx(2 * s / math.pi, abs=1e-10)
        assert spec.eigenvalues[0] < 1
        assert np.all(spec.eigenvalues >= -1e-12)
        assert np.all(np.diff(spec.eigenvalues) <= 0)


class TestLogDet:
    def test_gamma_zero(self):
        assert fh.log_det(GapParams(5.0, 0.0)).ln_D == 0.0

    def test_small_s_first_order(self):
        p = GapParams.from_gamma(0.1, 0.5)
        val = fh.log_det(p).ln_D
        assert val == pytest.approx(math.log(1 - 0.5 * 0.2 / math.pi), abs=2e-3)
        # second-order trace term reproduces it much better
        assert val == pytest.approx(-0.032347448084779934, abs=1e-13)

    def test_gamma_one_s10_vs_gaussian_law(self):
        from sinegap.specialfn import widom_dyson_ln_c0

        val = fh.log_det(GapParams(10.0, math.inf)).ln_D
        assert abs(val - (-50 - 0.25 * math.log(10) + widom_dyson_ln_c0())) <= 0.2

    def test_envelope(self):
        with pytest.raises(PrecisionEnvelopeError):
            fh.log_det(GapParams(20.0, math.inf))
        rep = fh.log_det(GapParams(16.0, 30.0), target_tol=1e-6, unsafe_envelope=True)
        assert rep.ln_D < 0

    def test_lu_agrees(self):
        for s in (1.0, 5.0, 10.0):
            for g in (0.1, 0.5, 0.9):
                p = GapParams.from_gamma(s, g)
                assert fh.log_det(p).ln_D == pytest.approx(fh.log_det_lu(p).ln_D, abs=1e-9)

    def test_monotone_grid(self):
        ss = np.linspace(1, 12, 5)
        gs = np.linspace(0.1, 1.0, 5)
        grid = np.array([[fh.log_det(GapParams.from_gamma(s, g)).ln_D for g in gs] for s in ss])
        assert np.all(np.diff(grid, axis=0) < 0)
        assert np.all(np.diff(grid, axis=1) < 0)

    def test_spectral_convergence(self):
        p = GapParams.from_gamma(10.0, 0.9)
        ref = fh.ln_det_at_order(p, 256)
        errs = [abs(fh.ln_det_at_order(p, n) - ref) for n in (12, 16, 20)]
        # below 4s nodes the error still drops by far more than 10 per step
        assert errs[1] < errs[0] / 10 and errs[2] < errs[1] / 10
        # order 8 is too coarse: a Nystrom eigenvalue overshoots 1/gamma
        with pytest.raises(PrecisionEnvelopeError):
            fh.ln_det_at_order(p, 8)
        # at and above 4s nodes only roundoff is left
        assert abs(fh.ln_det_at_order(p, 40) - fh.ln_det_at_order(p, 80)) < 1e-12

    def test_err_est_is_last_difference(self):
        rep = fh.log_det(GapParams.from_gamma(3.0, 0.5))
        assert 0 <= rep.err_est < 1e-12
        assert rep.method == "numeric-eigen"


class TestDeficits:
    def test_increasing(self):
        d = [x for _, x in fh.eigenvalue_deficits(8.0, 6)]
        assert np.all(np.diff(d) > 0)

    def test_s8_ground_state(self):
        (_, d0), = fh.eigenvalue_deficits(8.0, 1)
        pred = math.sqrt(math.pi) * 4 * math.sqrt(8) * math.exp(-16)
        assert pred == pytest.approx(2.3e-6, rel=0.05)
        assert abs(d0 / pred - 1) <= 0.35

    def test_s10_ground_state(self):
        (_, d0), = fh.eigenvalue_deficits(10.0, 1)
        assert d0 == pytest.approx(4.6e-8, rel=0.35)

    def test_consecutive_ratio(self):
        d = dict(fh.eigenvalue_deficits(8.0, 3))
        # predicted ratio deficit(2)/deficit(1) = 8 s / 2
        assert abs(d[2] / d[1] / 32 - 1) <= 0.5


@pytest.mark.slow
def test_extended_backend_matches_baseline():
    p = GapParams(3.0, math.inf)
    ext = fh.log_det(p, precision="extended")
    base = fh.log_det(p)
    assert ext.ln_D == pytest.approx(base.ln_D, abs=1e-12)


def test_extended_single_order_small():
    p = GapParams(2.0, math.inf)
    ext = fh.ln_det_at_order(p, 24, precision="extended")
    assert ext == pytest.approx(fh.ln_det_at_order(p, 24), abs=1e-12)
