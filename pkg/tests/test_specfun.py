import math

import numpy as np
import pytest

from confrad.errors import DomainError
from confrad.specfun import d2log_psi, dlog_psi, log_psi, phi, psi


def psi_direct(x: float) -> float:
    """Independent oracle: the defining product evaluated term by term."""
    return x ** (2 * x * x + 2) * abs(1 - x) ** (-((1 - x) ** 2)) * (1 + x) ** (-((1 + x) ** 2))


def phi_direct(x: float) -> float:
    return x ** (2 * x * x) * abs(1 - x) ** (-((1 - x) ** 2)) * (1 + x) ** (-((1 + x) ** 2))


def central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


class TestPhi:
    def test_limit_at_one(self):
        assert phi(1.0) == pytest.approx(1.0 / 16.0, abs=1e-15)

    @pytest.mark.parametrize("x", [0.25, 0.5, 0.75, 1.5])
    def test_psi_identity(self, x):
        assert phi(x) == pytest.approx(psi(x) / x**2, rel=1e-13)
        assert phi(x) == pytest.approx(phi_direct(x), rel=1e-12)

    def test_positive(self):
        xs = np.linspace(1e-3, 3.0, 1000)
        assert np.all(phi(xs) > 0.0)

    @pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            phi(bad)


class TestPsi:
    def test_zero(self):
        assert psi(0.0) == 0.0

    def test_maximum_value(self):
        assert psi(0.58142) == pytest.approx(0.08674, abs=2e-5)

    def test_curvature_point_value(self):
        assert psi(0.88441) == pytest.approx(0.07002, abs=2e-5)

    def test_limit_at_one(self):
        assert psi(1.0) == pytest.approx(1.0 / 16.0, abs=1e-15)

    def test_matches_direct_product(self):
        xs = np.linspace(0.01, 3.0, 10_000)
        vals = psi(xs)
        direct = np.array([psi_direct(float(x)) for x in xs])
        assert np.max(np.abs(vals - direct) / direct) < 1e-12

    def test_x_squared_phi_identity_grid(self):
        xs = np.linspace(3e-4, 3.0, 10_000)
        lhs = psi(xs)
        rhs = xs**2 * phi(xs)
        assert np.all(np.abs(lhs - rhs) <= 1e-12 * lhs)

    def test_monotone_increasing_then_decreasing(self):
        up = psi(np.linspace(0.01, 0.57, 1000))
        down = psi(np.linspace(0.59, 3.0, 1000))
        assert np.all(np.diff(up) > 0.0)
        assert np.all(np.diff(down) < 0.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            psi(-0.1)


class TestLogPsi:
    def test_limit_at_one(self):
        assert log_psi(1.0) == pytest.approx(-4.0 * math.log(2.0), abs=1e-14)

    def test_consistency_with_psi(self):
        assert math.exp(log_psi(0.5)) == pytest.approx(psi(0.5), rel=1e-12)

    def test_value_at_maximizer(self):
        assert log_psi(0.58142) == pytest.approx(math.log(0.08674), abs=3e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            log_psi(0.0)


class TestDerivatives:
    def test_dlog_psi_zero_at_maximizer(self):
        assert abs(dlog_psi(0.58142)) < 1e-4

    def test_dlog_psi_signs(self):
        assert dlog_psi(0.1) > 0.0
        assert dlog_psi(0.8) < 0.0

    def test_dlog_psi_matches_finite_difference(self):
        xs = np.concatenate([np.linspace(0.05, 0.99, 300), np.linspace(1.01, 2.8, 300)])
        xs = xs[np.abs(xs - 1.0) > 1e-3]
        for x in xs:
            fd = central_diff(log_psi, float(x), 1e-6)
            assert abs(dlog_psi(float(x)) - fd) < 1e-6

    def test_d2log_psi_zero_at_curvature_point(self):
        assert abs(d2log_psi(0.88441)) < 1e-3

    def test_d2log_psi_sign_change(self):
        assert d2log_psi(0.5) < 0.0 < d2log_psi(0.99)
        # the sign change is unique on (0.3, 1): scan densely
        xs = np.linspace(0.3, 0.999, 2000)
        signs = np.sign(d2log_psi(xs))
        assert np.sum(np.diff(signs) != 0.0) == 1

    @pytest.mark.parametrize("x", [0.3, 0.6, 0.95])
    def test_d2log_psi_matches_finite_difference(self, x):
        fd = central_diff(dlog_psi, x, 1e-5)
        assert abs(d2log_psi(x) - fd) < 1e-5

    @pytest.mark.parametrize("func", [dlog_psi, d2log_psi])
    def test_refuse_singular_point(self, func):
        with pytest.raises(DomainError):
            func(1.0)
        with pytest.raises(DomainError):
            func(-2.0)
