"""Stable evaluation of the majorant functions Phi and Psi.

    Phi(x) = x^(2x^2) * |1-x|^(-(1-x)^2) * (1+x)^(-(1+x)^2)
    Psi(x) = x^2 * Phi(x)

The exponents grow quadratically, so every routine works in log space and
exponentiates at the end.  The factor (1-x)^2 * log|1-x| has a removable
singularity at x = 1; it is replaced by its limit 0 once |1-x| < 1e-12,
which makes Phi and Psi continuous through x = 1 with Phi(1) = Psi(1) = 1/16.

All functions accept a float or an ndarray and return the matching type.
They are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Below this distance from x = 1 the singular factor is replaced by its limit.
SINGULAR_CUTOFF = 1e-12


def _as_array(x, name: str):
    a = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name}: input must be finite, got {x!r}")
    return a


def _maybe_scalar(a, scalar_input: bool):
    return float(a) if scalar_input else a


def _singular_term(x):
    """(1-x)^2 * log|1-x| with its x -> 1 limit patched in."""
    t = 1.0 - x
    at = np.abs(t)
    safe = np.where(at < SINGULAR_CUTOFF, 1.0, at)
    return np.where(at < SINGULAR_CUTOFF, 0.0, t * t * np.log(safe))


def log_psi(x):
    """log Psi(x) = (2x^2+2) log x - (1-x)^2 log|1-x| - (1+x)^2 log(1+x)."""
    scalar = np.isscalar(x)
    a = _as_array(x, "log_psi")
    if np.any(a <= 0.0):
        raise DomainError("log_psi: requires x > 0")
    out = (2.0 * a * a + 2.0) * np.log(a) - _singular_term(a) - (1.0 + a) ** 2 * np.log1p(a)
    return _maybe_scalar(out, scalar)


def psi(x):
    """Psi(x) for x >= 0, with the continuous extension Psi(0) = 0."""
    scalar = np.isscalar(x)
    a = _as_array(x, "psi")
    if np.any(a < 0.0):
        raise DomainError("psi: requires x >= 0")
    pos = a > 0.0
    out = np.zeros_like(a)
    if np.any(pos):
        safe = np.where(pos, a, 1.0)
        out = np.where(pos, np.exp(log_psi(safe)), 0.0)
    return _maybe_scalar(out, scalar)


def phi(x):
    """Phi(x) = Psi(x) / x^2 for x > 0; the x = 1 value is the analytic limit 1/16."""
    scalar = np.isscalar(x)
    a = _as_array(x, "phi")
    if np.any(a <= 0.0):
        raise DomainError("phi: requires x > 0")
    out = np.exp(2.0 * a * a * np.log(a) - _singular_term(a) - (1.0 + a) ** 2 * np.log1p(a))
    return _maybe_scalar(out, scalar)


def dlog_psi(x):
    """First derivative of log Psi.

    d/dx log Psi = 4x log x + (2x^2+2)/x + 2(1-x) log|1-x| + (1-x)
                   - 2(1+x) log(1+x) - (1+x)

    Refuses x = 1 (the second term of the defining product is not
    differentiable there); callers bracket roots away from 1.
    """
    scalar = np.isscalar(x)
    a = _as_array(x, "dlog_psi")
    if np.any(a <= 0.0) or np.any(a == 1.0):
        raise DomainError("dlog_psi: requires x > 0, x != 1")
    t = 1.0 - a
    out = (
        4.0 * a * np.log(a)
        + (2.0 * a * a + 2.0) / a
        + 2.0 * t * np.log(np.abs(t))
        + t
        - 2.0 * (1.0 + a) * np.log1p(a)
        - (1.0 + a)
    )
    return _maybe_scalar(out, scalar)


def d2log_psi(x):
    """Second derivative of log Psi: 4 log x - 2 log|1-x| - 2 log(1+x) - 2/x^2.

    Negative on (0, x0) and positive just left of 1, so its unique zero x0
    marks where the log-curvature of Psi changes sign.
    """
    scalar = np.isscalar(x)
    a = _as_array(x, "d2log_psi")
    if np.any(a <= 0.0) or np.any(a == 1.0):
        raise DomainError("d2log_psi: requires x > 0, x != 1")
    out = 4.0 * np.log(a) - 2.0 * np.log(np.abs(1.0 - a)) - 2.0 * np.log1p(a) - 2.0 / (a * a)
    return _maybe_scalar(out, scalar)


@dataclass(frozen=True)
class PsiProfile:
    """Tabulated Psi together with its located critical data.

    eval_grid is an (N, 3) array of rows (x, Psi(x), log Psi(x)).
    x1 is the maximizer of Psi, x0 the zero of (log Psi)''; x1 < x0 and
    Psi is increasing up to x1 and decreasing beyond it.
    """

    eval_grid: np.ndarray
    x1: float
    psi_x1: float
    x0: float
    psi_x0: float

    def validate(self) -> None:
        if not self.x1 < self.x0:
            raise DomainError("PsiProfile: expected x1 < x0")
        x = self.eval_grid[:, 0]
        p = self.eval_grid[:, 1]
        lp = self.eval_grid[:, 2]
        if np.any(x <= 0.0) or np.any(p <= 0.0):
            raise DomainError("PsiProfile: grid must have x > 0 and Psi > 0")
        if np.any(np.abs(p - np.exp(lp)) > 1e-12 * p):
            raise DomainError("PsiProfile: psi and exp(log_psi) disagree")
        rising = x <= self.x1
        falling = (x >= self.x1) & (x <= self.x0)
        if np.any(np.diff(p[rising]) <= 0.0):
            raise DomainError("PsiProfile: Psi not increasing left of x1")
        if np.any(np.diff(p[falling]) >= 0.0):
            raise DomainError("PsiProfile: Psi not decreasing on [x1, x0]")
