"""Bracketed location of the critical data of Psi.

The maximizer x1 of Psi is the root of (log Psi)' and the curvature
boundary x0 is the root of (log Psi)''.  Both lie strictly below 1, so the
fixed starting brackets exclude the singular points 0 and 1:

    X1_BRACKET = (0.3, 0.8)     for (log Psi)'
    X0_BRACKET = (0.6, 0.99)    for (log Psi)''

The solver is a deterministic hybrid: a secant step is taken whenever it
falls comfortably inside the current bracket, and every other iteration
falls back to bisection so the bracket provably halves at least every two
steps.  No randomness, no derivatives beyond what the caller supplies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BracketError, DomainError, NumericError
from .specfun import PsiProfile, d2log_psi, dlog_psi, log_psi, psi

X1_BRACKET = (0.3, 0.8)
X0_BRACKET = (0.6, 0.99)

_MAX_ITERATIONS = 400


@dataclass(frozen=True)
class BracketedRoot:
    lo: float
    hi: float
    root: float
    f_lo: float
    f_hi: float
    iterations: int
    tolerance: float


def bracketed_root(f: Callable[[float], float], lo: float, hi: float, tol: float) -> BracketedRoot:
    """Shrink a sign-change bracket of f to width <= tol.

    Requires f(lo) * f(hi) < 0.  Raises BracketError when the input bracket
    carries no sign change and NumericError when f turns non-finite.
    """
    if not (tol > 0.0):
        raise DomainError("bracketed_root: tol must be positive")
    if not lo < hi:
        raise DomainError("bracketed_root: need lo < hi")
    f_lo = float(f(lo))
    f_hi = float(f(hi))
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
        raise NumericError("bracketed_root: f not finite at bracket ends")
    if f_lo == 0.0 or f_hi == 0.0 or (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={f_lo}, {f_hi}")

    iterations = 0
    x_best = 0.5 * (lo + hi)
    while hi - lo > tol and iterations < _MAX_ITERATIONS:
        use_secant = iterations % 2 == 0 and f_hi != f_lo
        if use_secant:
            x = hi - f_hi * (hi - lo) / (f_hi - f_lo)
            margin = 0.01 * (hi - lo)
            if not (lo + margin < x < hi - margin):
                x = 0.5 * (lo + hi)
        else:
            x = 0.5 * (lo + hi)
        fx = float(f(x))
        if not math.isfinite(fx):
            raise NumericError(f"bracketed_root: f({x}) is not finite")
        iterations += 1
        x_best = x
        if fx == 0.0:
            # Nudge the bracket symmetrically around the exact root.
            eps = max(tol, 1e-300)
            lo, hi = max(lo, x - 0.25 * eps), min(hi, x + 0.25 * eps)
            break
        if (fx > 0.0) == (f_lo > 0.0):
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx

    root = x_best if lo < x_best < hi else 0.5 * (lo + hi)
    return BracketedRoot(lo=lo, hi=hi, root=root, f_lo=f_lo, f_hi=f_hi,
                         iterations=iterations, tolerance=tol)


def locate_psi_max(tol: float) -> tuple[float, float]:
    """Locate the maximizer x1 of Psi and return (x1, Psi(x1))."""
    if not tol >= 1e-12:
        raise DomainError("locate_psi_max: tol must be >= 1e-12")
    br = bracketed_root(dlog_psi, *X1_BRACKET, tol=tol)
    x1 = br.root
    if not d2log_psi(x1) < 0.0:
        raise NumericError("locate_psi_max: second-order condition failed; "
                           "the derivative implementation looks broken")
    return x1, psi(x1)


def locate_curvature_zero(tol: float) -> tuple[float, float]:
    """Locate the zero x0 of (log Psi)'' and return (x0, Psi(x0))."""
    if not tol >= 1e-10:
        raise DomainError("locate_curvature_zero: tol must be >= 1e-10")
    br = bracketed_root(d2log_psi, *X0_BRACKET, tol=tol)
    return br.root, psi(br.root)


def build_psi_profile(n_points: int = 512, lo: float = 0.05, hi: float = 3.0,
                      tol: float = 1e-10) -> PsiProfile:
    """Tabulate Psi on [lo, hi] and attach the located critical data."""
    if n_points < 8 or not 0.0 < lo < hi:
        raise DomainError("build_psi_profile: bad grid parameters")
    x1, psi_x1 = locate_psi_max(tol)
    x0, psi_x0 = locate_curvature_zero(max(tol, 1e-10))
    x = np.linspace(lo, hi, n_points)
    lp = log_psi(x)
    grid = np.column_stack([x, np.exp(lp), lp])
    profile = PsiProfile(eval_grid=grid, x1=x1, psi_x1=psi_x1, x0=x0, psi_x0=psi_x0)
    profile.validate()
    return profile
