import math

import pytest

from confrad.critpoints import (
    BracketedRoot,
    bracketed_root,
    build_psi_profile,
    locate_curvature_zero,
    locate_psi_max,
)
from confrad.errors import BracketError, DomainError
from confrad.specfun import d2log_psi, dlog_psi, psi


def check_invariants(br: BracketedRoot):
    assert br.lo < br.root < br.hi
    assert br.f_lo * br.f_hi < 0.0
    assert br.hi - br.lo <= br.tolerance


class TestBracketedRoot:
    def test_linear(self):
        br = bracketed_root(lambda x: x - 1.0, 0.0, 2.0, tol=1e-12)
        check_invariants(br)
        assert br.root == pytest.approx(1.0, abs=1e-12)

    def test_sqrt2(self):
        br = bracketed_root(lambda x: x * x - 2.0, 1.0, 2.0, tol=1e-12)
        check_invariants(br)
        assert br.root == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_dlog_psi_root(self):
        br = bracketed_root(dlog_psi, 0.3, 0.8, tol=1e-10)
        check_invariants(br)
        assert br.root == pytest.approx(0.58142, abs=2e-5)

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            bracketed_root(lambda x: x * x + 1.0, -1.0, 1.0, tol=1e-8)

    def test_bad_tol(self):
        with pytest.raises(DomainError):
            bracketed_root(lambda x: x, -1.0, 1.0, tol=0.0)

    def test_deterministic(self):
        a = bracketed_root(dlog_psi, 0.3, 0.8, tol=1e-10)
        b = bracketed_root(dlog_psi, 0.3, 0.8, tol=1e-10)
        assert a == b

    def test_tolerance_refinement_is_consistent(self):
        # Shrinking tol by 10x never moves the root by more than the old tol.
        f = dlog_psi
        tol = 1e-4
        prev = bracketed_root(f, 0.3, 0.8, tol=tol).root
        for _ in range(5):
            tol /= 10.0
            cur = bracketed_root(f, 0.3, 0.8, tol=tol).root
            assert abs(cur - prev) <= tol * 10.0
            prev = cur


class TestCriticalData:
    def test_maximizer(self):
        x1, psi_x1 = locate_psi_max(1e-10)
        assert x1 == pytest.approx(0.58142, abs=2e-5)
        assert psi_x1 == pytest.approx(0.08674, abs=2e-5)
        assert psi(x1 - 0.01) < psi_x1
        assert psi(x1 + 0.01) < psi_x1

    def test_curvature_zero(self):
        x0, psi_x0 = locate_curvature_zero(1e-8)
        assert x0 == pytest.approx(0.88441, abs=2e-5)
        assert psi_x0 == pytest.approx(0.07002, abs=2e-5)
        assert d2log_psi(x0 - 0.05) * d2log_psi(x0 + 0.05) < 0.0

    def test_ordering(self):
        x1, psi_x1 = locate_psi_max(1e-10)
        x0, psi_x0 = locate_curvature_zero(1e-8)
        assert x1 < x0
        assert psi_x1 > psi_x0

    def test_reruns_bitwise_identical(self):
        assert locate_psi_max(1e-10) == locate_psi_max(1e-10)
        assert locate_curvature_zero(1e-8) == locate_curvature_zero(1e-8)

    def test_tol_validation(self):
        with pytest.raises(DomainError):
            locate_psi_max(1e-13)
        with pytest.raises(DomainError):
            locate_curvature_zero(1e-11)


class TestPsiProfile:
    def test_build_and_validate(self):
        profile = build_psi_profile(n_points=256)
        assert profile.x1 < profile.x0
        assert profile.eval_grid.shape == (256, 3)
        # validate() already ran in the builder; run again explicitly
        profile.validate()
