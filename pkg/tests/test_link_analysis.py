import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from risscatter import link_analysis as la
from risscatter.errors import DomainError
from risscatter.special import lambert_w

FIX = la.OverheadParams(K=4, snr=1e-6, M_B=1024, M_A=64, b_A=8, eta_B=2, N_s=1024)


def _rate_oracle(K, overhead, snr_gain):
    mpmath.mp.dps = 40
    return float(K * (1 - mpmath.mpf(overhead)) * mpmath.log(1 + mpmath.mpf(snr_gain), 2))


class TestFresnel:
    def test_l_max(self):
        assert la.fresnel_size(200, 200)[1] == pytest.approx(10.0)

    @given(st.floats(1e-3, 1e9))
    def test_equal_distances(self, d):
        assert la.fresnel_size(d, d)[0] == pytest.approx(np.sqrt(d / 2), rel=1e-12)

    def test_far_transmitter_limit(self):
        assert la.fresnel_size(np.inf, 50.0)[0] == pytest.approx(np.sqrt(50.0))
        assert la.fresnel_size(1e15, 50.0)[0] == pytest.approx(np.sqrt(50.0), rel=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            la.fresnel_size(0.0, 1.0)


class TestBandwidth:
    def test_size_form(self):
        scn = la.GeometryScenario(100, 100, 0.0, np.pi / 6, 10.0)
        assert la.fractional_bandwidth_limit(scn) == pytest.approx(0.2)

    def test_specular(self):
        scn = la.GeometryScenario(100, 100, 0.4, 0.4, 10.0)
        assert la.fractional_bandwidth_limit(scn) == np.inf
        assert la.fractional_bandwidth_limit(scn, use_distance_form=True) == np.inf

    def test_distance_form(self):
        scn = la.GeometryScenario(50, 50, 0.0, np.pi / 6, 1.0)
        assert la.fractional_bandwidth_limit(scn, use_distance_form=True) == pytest.approx(0.4)

    def test_distance_form_is_size_form_at_fresnel_limit(self):
        d_tx, d_rx = 300.0, 700.0
        scn = la.GeometryScenario(d_tx, d_rx, 0.1, -0.5, la.fresnel_size(d_tx, d_rx)[1])
        assert la.fractional_bandwidth_limit(scn) == pytest.approx(
            la.fractional_bandwidth_limit(scn, use_distance_form=True), rel=1e-12)

    def test_bad_size(self):
        with pytest.raises(DomainError):
            la.fractional_bandwidth_limit(la.GeometryScenario(1, 1, 0, 0.1, 0.0))

    def test_bad_angle(self):
        with pytest.raises(DomainError):
            la.GeometryScenario(1, 1, 2.0, 0.0, 1.0)


class TestRates:
    def test_redirective_fixture(self):
        r = la.rate_redirective(FIX)
        ref = _rate_oracle(4, 8 * 6 / 2048, 1e-6 * 1024 * 64)
        assert r.rate == pytest.approx(ref, rel=1e-13)
        assert r.rate == pytest.approx(0.35773178347207774, rel=1e-12)
        assert not r.saturated

    def test_reflective_fixture(self):
        r = la.rate_reflective(FIX)
        assert r.rate == pytest.approx(_rate_oracle(4, 8 * 64 / 2048, 1e-6 * 64**2), rel=1e-13)

    def test_link_budget_constructor(self):
        p = la.OverheadParams.from_link_budget(K=4, G_c=1e-8, P_T=1.0, B_w=1e6, N_0=1e-8, M_B=1024, M_A=64,
                                               b_A=8, eta_B=2, N_s=1024)
        assert p.snr == pytest.approx(1e-6)

    def test_redirective_no_overhead(self):
        p = FIX.__class__(**{**FIX.__dict__, "b_A": 0})
        assert la.rate_redirective(p).rate == pytest.approx(4 * np.log2(1 + 1e-6 * 1024 * 64))

    def test_redirective_unit_gain(self):
        assert la.rate_redirective(FIX.with_gain(1.0)).rate == pytest.approx(4 * np.log2(1 + 1e-6 * 1024))

    def test_reflective_saturates(self):
        r = la.rate_reflective(FIX.with_gain(FIX.eta_B * FIX.N_s / FIX.b_A))
        assert r.rate == 0.0 and r.saturated

    def test_reflective_no_overhead(self):
        p = FIX.__class__(**{**FIX.__dict__, "b_A": 0})
        assert la.rate_reflective(p).rate == pytest.approx(4 * np.log2(1 + 1e-6 * 64**2))

    def test_redirective_saturates(self):
        r = la.rate_redirective(FIX.with_gain(2.0**256))
        assert r.rate == 0.0 and r.saturated

    @given(st.floats(1.0, 255.0))
    def test_reflective_continuous(self, m):
        a = la.rate_reflective(FIX.with_gain(m)).rate
        b = la.rate_reflective(FIX.with_gain(m * (1 + 1e-9))).rate
        assert abs(a - b) <= 1e-6

    def test_rate_vanishes_approaching_saturation(self):
        assert la.rate_reflective(FIX.with_gain(256 * (1 - 1e-12))).rate < 1e-9

    def test_invalid_params(self):
        with pytest.raises(DomainError):
            la.OverheadParams(K=0, snr=1, M_B=1, M_A=1, b_A=1, eta_B=1, N_s=1)
        with pytest.raises(DomainError):
            la.OverheadParams(K=1, snr=1, M_B=1, M_A=1, b_A=-1, eta_B=1, N_s=1)


class TestOptimalGains:
    def test_redirective_example(self):
        p = la.OverheadParams(K=1, snr=1.0, M_B=1.0, M_A=1, b_A=1, eta_B=1, N_s=20)
        assert la.optimal_gain_redirective(p) == pytest.approx(1024.0)

    def test_redirective_doubling_slot_squares_numerator(self):
        p = la.OverheadParams(K=1, snr=1e-2, M_B=1.0, M_A=1, b_A=1, eta_B=1, N_s=20)
        num = la.optimal_gain_redirective(p) * np.sqrt(p.snr * p.M_B)
        num2 = la.optimal_gain_redirective(la.OverheadParams(**{**p.__dict__, "N_s": 40})) * np.sqrt(p.snr * p.M_B)
        assert num2 == pytest.approx(num**2, rel=1e-12)

    @given(st.floats(1, 200))
    def test_redirective_multiplicative_in_slot(self, dn):
        p = la.OverheadParams(K=1, snr=1e-2, M_B=4.0, M_A=1, b_A=16, eta_B=2, N_s=100)
        q = la.OverheadParams(**{**p.__dict__, "N_s": 100 + dn})
        ratio = la.optimal_gain_redirective(q) / la.optimal_gain_redirective(p)
        assert ratio == pytest.approx(2 ** (dn * p.eta_B / (2 * p.b_A)), rel=1e-10)

    def test_redirective_closed_form_vs_grid(self):
        p = FIX
        m_cf = la.optimal_gain_redirective(p)
        _, r_bf = la.brute_force_gain(la.rate_redirective, p)
        assert la.rate_redirective(p.with_gain(m_cf)).rate == pytest.approx(r_bf, rel=0.02)

    def test_reflective_unit_denominator(self):
        # c sqrt(snr) = e  ->  W = 1  ->  M_A = c
        c = 256.0
        p = la.OverheadParams(K=1, snr=(np.e / c) ** 2, M_B=1, M_A=1, b_A=8, eta_B=2, N_s=1024)
        assert la.optimal_gain_reflective(p) == pytest.approx(c, rel=1e-14)

    @pytest.mark.xfail(strict=True, reason="low-SNR fixture: the asymptotic closed form lands past overhead "
                                           "saturation (see decisions ledger)")
    def test_reflective_closed_form_vs_grid(self):
        m_cf = la.optimal_gain_reflective(FIX)
        _, r_bf = la.brute_force_gain(la.rate_reflective, FIX)
        assert la.rate_reflective(FIX.with_gain(m_cf)).rate == pytest.approx(r_bf, rel=0.05)

    def test_reflective_closed_form_in_high_snr_regime(self):
        p = la.OverheadParams(K=4, snr=1.0, M_B=1, M_A=1, b_A=8, eta_B=2, N_s=1024)
        m_cf = la.optimal_gain_reflective(p)
        _, r_bf = la.brute_force_gain(la.rate_reflective, p, la.log_gain_grid(256, 4096))
        assert la.rate_reflective(p.with_gain(m_cf)).rate == pytest.approx(r_bf, rel=0.05)

    def test_stationary_point_of_asymptotic_rate(self):
        # argmax of (1 - M/c) log(snr M^2) is c / W(e c sqrt(snr))
        c, snr = 256.0, 1e-2
        m = np.linspace(1.0, c, 2_000_001)
        f = (1 - m / c) * np.log(snr * m**2)
        m_star = c / lambert_w(np.e * c * np.sqrt(snr))
        assert m[np.argmax(f)] == pytest.approx(m_star, rel=1e-5)

    def test_reflective_sublinear_in_slot(self):
        for n_s in (256, 512, 1024, 2048, 4096):
            p = la.OverheadParams(K=4, snr=1e-6, M_B=1024, M_A=1, b_A=8, eta_B=2, N_s=n_s)
            q = la.OverheadParams(**{**p.__dict__, "N_s": 2 * n_s})
            assert la.optimal_gain_reflective(q) / la.optimal_gain_reflective(p) < 2

    def test_reflective_domain(self):
        p = la.OverheadParams(K=1, snr=1, M_B=1, M_A=1, b_A=0, eta_B=1, N_s=1)
        with pytest.raises(DomainError):
            la.optimal_gain_reflective(p)


class TestBruteForce:
    def test_empty_grid(self):
        with pytest.raises(ValueError):
            la.brute_force_gain(la.rate_redirective, FIX, [])

    def test_single_point(self):
        assert la.brute_force_gain(la.rate_redirective, FIX, [37.0])[0] == 37.0

    def test_no_overhead_picks_upper_end(self):
        p = la.OverheadParams(**{**FIX.__dict__, "b_A": 0})
        grid = la.log_gain_grid(1e6, 64)
        assert la.brute_force_gain(la.rate_redirective, p, grid)[0] == grid[-1]

    def test_unimodal_unique_maximizer(self):
        grid = la.log_gain_grid(256)
        rates = np.array([la.rate_reflective(FIX.with_gain(g)).rate for g in grid])
        i = int(np.argmax(rates))
        assert np.all(np.diff(rates[: i + 1]) > 0) and np.all(np.diff(rates[i:]) < 0)
        assert np.count_nonzero(rates == rates[i]) == 1

    def test_grid_covers_valid_region(self):
        g = la.log_gain_grid(256, 512)
        assert g[0] == 1.0 and g[-1] < 256 and g.size == 512

    def test_redirective_beats_reflective(self):
        for snr in (1e-8, 1e-6, 1e-4, 1e-2):
            p = la.OverheadParams(K=4, snr=snr, M_B=1024, M_A=1, b_A=8, eta_B=2, N_s=1024)
            assert la.brute_force_gain(la.rate_redirective, p)[1] >= la.brute_force_gain(la.rate_reflective, p)[1]
