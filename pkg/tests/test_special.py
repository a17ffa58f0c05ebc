import mpmath
import numpy as np
import pytest
import scipy.special
from hypothesis import given
from hypothesis import strategies as st

from risscatter.errors import DomainError
from risscatter.special import bessel_j1, lambert_w


def _omega_fixed_point(iters=400):
    x = 0.5
    for _ in range(iters):
        x = np.exp(-x)
    return x


class TestBesselJ1:
    def test_zero(self):
        assert bessel_j1(0.0) == 0.0

    def test_scalar_returns_float(self):
        assert isinstance(bessel_j1(1.0), float)

    def test_matches_mpmath(self):
        x = np.concatenate([np.linspace(0, 30, 601), np.linspace(30, 400, 371)])
        ref = np.array([float(mpmath.besselj(1, xi)) for xi in x])
        assert np.max(np.abs(bessel_j1(x) - ref)) <= 1e-10

    def test_series_switchover_continuous(self):
        x = np.array([12.0 - 1e-9, 12.0, 12.0 + 1e-9])
        ref = [float(mpmath.besselj(1, xi)) for xi in x]
        np.testing.assert_allclose(bessel_j1(x), ref, atol=1e-11)

    def test_agrees_with_scipy(self):
        x = np.linspace(-50, 50, 1001)
        np.testing.assert_allclose(bessel_j1(x), scipy.special.j1(x), atol=1e-10)

    @given(st.floats(min_value=0, max_value=1e3))
    def test_odd(self, x):
        assert bessel_j1(-x) == -bessel_j1(x)

    def test_first_zero(self):
        j11 = float(mpmath.besseljzero(1, 1))
        assert abs(bessel_j1(j11)) < 1e-12


class TestLambertW:
    def test_zero(self):
        assert lambert_w(0.0) == 0.0

    def test_e(self):
        assert lambert_w(np.e) == pytest.approx(1.0, abs=1e-15)

    def test_omega_constant(self):
        assert lambert_w(1.0) == pytest.approx(_omega_fixed_point(), abs=1e-15)
        assert lambert_w(1.0) == pytest.approx(0.5671433, abs=1e-7)

    def test_branch_point(self):
        assert lambert_w(-1 / np.e) == pytest.approx(-1.0, abs=1e-7)

    def test_below_branch_point(self):
        with pytest.raises(DomainError):
            lambert_w(-0.5)

    def test_vectorised_matches_scipy(self):
        x = np.concatenate([np.linspace(-1 / np.e + 1e-6, 5, 500), np.logspace(1, 12, 200)])
        ref = scipy.special.lambertw(x).real
        np.testing.assert_allclose(lambert_w(x), ref, rtol=1e-12, atol=1e-13)

    @given(st.floats(min_value=-1 / np.e + 1e-6, max_value=1e12))
    def test_round_trip(self, x):
        w = lambert_w(x)
        assert abs(w * np.exp(w) - x) <= 1e-12 * max(1.0, abs(x))
