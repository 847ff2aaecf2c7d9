"""The two-point bound chain and the gamma-threshold search.

For a two-point system with gaps alpha_1 + alpha_2 = 2 and tau_k =
sqrt(gamma) * alpha_k, the product functional is bounded by

    4 * alpha_1 alpha_2 * sqrt(Phi(tau_1) Phi(tau_2))
        = (4 / gamma) * sqrt(Psi(tau_1) Psi(tau_2)),

the two forms being algebraically identical through Psi(x) = x^2 Phi(x).
At the symmetric point alpha_1 = alpha_2 = 1 the chain value is

    E(gamma) = (4 / gamma) * Psi(sqrt(gamma)),

and the quantity whose sign decides whether symmetry wins is

    excess(gamma, alpha_1) = Psi(tau_1) Psi(tau_2) - Psi(sqrt(gamma))^2.

gamma_threshold locates the largest gamma (within a tolerance) for which
the excess stays non-positive over the whole alpha range; the answer lands
around 0.75, comfortably above the proven 0.65, 0.6 and 0.5 marks.

The four-domain functional

    K_tau = [r(B0,0) r(Binf,inf)]^(tau^2) * r(B1,a1) r(B2,a2) / |a1-a2|^2

is evaluated on explicit pole systems and is majorised by Phi(tau).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .domains import (
    INF,
    Disk,
    ExteriorDisk,
    ElementaryDomain,
    contains,
    disjointness_gap,
    inner_radius_analytic,
)
from .errors import ConfigurationError, DomainError
from .specfun import log_psi

# Ties this close to zero count as "symmetric wins": the symmetric point is
# always an exact critical point and must not be flipped by rounding noise.
TIE_EPSILON = 1e-14

GAMMA_SEARCH_INTERVAL = (0.5, 1.5)


# ---------------------------------------------------------------------------
# K_tau on explicit four-domain systems


@dataclass(frozen=True)
class PoleSystem:
    """Mutually disjoint domains for the poles 0, a1, a2, infinity.

    Open-set disjointness is enough (tangent boundaries are legal).  The
    domains at 0 and infinity may be omitted only for tau = 0 evaluation,
    where their factor carries exponent 0; with tangent B1, B2 no valid
    domain around a shared boundary point could exist anyway.
    """

    b1: ElementaryDomain
    b2: ElementaryDomain
    a1: complex
    a2: complex
    b0: Optional[ElementaryDomain] = None
    binf: Optional[ExteriorDisk] = None

    def validate(self, need_outer: bool) -> None:
        if self.a1 == self.a2:
            raise ConfigurationError("PoleSystem: a1 and a2 must differ")
        if not contains(self.b1, self.a1):
            raise ConfigurationError("PoleSystem: a1 not inside b1")
        if not contains(self.b2, self.a2):
            raise ConfigurationError("PoleSystem: a2 not inside b2")
        present = [("b1", self.b1), ("b2", self.b2)]
        if need_outer:
            if self.b0 is None or self.binf is None:
                raise ConfigurationError("PoleSystem: tau != 0 needs b0 and binf")
        if self.b0 is not None:
            if not contains(self.b0, 0.0):
                raise ConfigurationError("PoleSystem: 0 not inside b0")
            present.append(("b0", self.b0))
        if self.binf is not None:
            if not isinstance(self.binf, ExteriorDisk):
                raise ConfigurationError("PoleSystem: binf must be an exterior disk")
            present.append(("binf", self.binf))
        for i in range(len(present)):
            for j in range(i + 1, len(present)):
                if disjointness_gap(present[i][1], present[j][1]) < -1e-9:
                    raise ConfigurationError(
                        f"PoleSystem: {present[i][0]} and {present[j][0]} overlap")


def evaluate_K(tau: float, system: PoleSystem) -> float:
    """[r(B0,0) r(Binf,inf)]^(tau^2) * r(B1,a1) r(B2,a2) / |a1-a2|^2."""
    if not tau >= 0.0:
        raise DomainError("evaluate_K: tau must be >= 0")
    system.validate(need_outer=tau != 0.0)
    value = (
        inner_radius_analytic(system.b1, system.a1)
        * inner_radius_analytic(system.b2, system.a2)
        / abs(system.a1 - system.a2) ** 2
    )
    if tau != 0.0:
        r0 = inner_radius_analytic(system.b0, 0.0)
        rinf = inner_radius_analytic(system.binf, INF)
        value *= (r0 * rinf) ** (tau * tau)
    return value


# ---------------------------------------------------------------------------
# Chain bound, symmetric value, excess


def _tau_pair(gamma: float, alpha1: float) -> tuple[float, float]:
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    if not 0.0 < alpha1 < 2.0:
        raise DomainError("alpha1 must lie in (0, 2)")
    # canonical order makes mirrored calls evaluate identically
    a_lo = min(alpha1, 2.0 - alpha1)
    s = math.sqrt(gamma)
    return s * a_lo, s * (2.0 - a_lo)


def chain_bound(gamma: float, alpha1: float) -> float:
    """(4/gamma) * sqrt(Psi(tau_1) Psi(tau_2)) with tau_k = sqrt(gamma) alpha_k."""
    t_lo, t_hi = _tau_pair(gamma, alpha1)
    return (4.0 / gamma) * math.exp(0.5 * (log_psi(t_lo) + log_psi(t_hi)))


def symmetric_value(gamma: float) -> float:
    """E(gamma) = (4/gamma) * Psi(sqrt(gamma)), the chain value at alpha_1 = 1."""
    if not gamma > 0.0:
        raise DomainError("symmetric_value: gamma must be positive")
    return (4.0 / gamma) * math.exp(log_psi(math.sqrt(gamma)))


def excess(gamma: float, alpha1: float) -> float:
    """Psi(tau_1) Psi(tau_2) - Psi(sqrt(gamma))^2; <= 0 iff symmetry wins."""
    t_lo, t_hi = _tau_pair(gamma, alpha1)
    return math.exp(log_psi(t_lo) + log_psi(t_hi)) - math.exp(2.0 * log_psi(math.sqrt(gamma)))


def _excess_grid(gamma: float, alphas: np.ndarray) -> np.ndarray:
    s = math.sqrt(gamma)
    sym = math.exp(2.0 * log_psi(s))
    return np.exp(log_psi(s * alphas) + log_psi(s * (2.0 - alphas))) - sym


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Deterministic golden-section maximisation on [lo, hi]."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv * (hi - lo)
    x2 = lo + inv * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv * (hi - lo)
            f1 = f(x1)
    xm = 0.5 * (lo + hi)
    return xm, f(xm)


def max_excess(gamma: float, grid_size: int = 4096) -> tuple[float, float]:
    """(argmax, max) of excess over alpha_1 in (0, 2), grid plus refinement."""
    alphas = np.linspace(0.0, 2.0, grid_size + 2)[1:-1]
    vals = _excess_grid(gamma, alphas)
    i = int(np.argmax(vals))
    step = alphas[1] - alphas[0]
    lo = max(alphas[0], alphas[i] - 2.0 * step)
    hi = min(alphas[-1], alphas[i] + 2.0 * step)
    best_a, best_v = _golden_max(lambda a: excess(gamma, a), lo, hi)
    # the symmetric point is always critical; refine around it as well
    sym_a, sym_v = _golden_max(lambda a: excess(gamma, a),
                               max(alphas[0], 1.0 - 2.0 * step),
                               min(alphas[-1], 1.0 + 2.0 * step))
    if sym_v > best_v:
        best_a, best_v = sym_a, sym_v
    if vals[i] > best_v:
        best_a, best_v = float(alphas[i]), float(vals[i])
    return best_a, best_v


# ---------------------------------------------------------------------------
# Threshold search


@dataclass(frozen=True)
class ThresholdReport:
    gamma_hat: float
    grid_size: int
    refine_tol: float
    witness_alpha: float
    comparisons: tuple[tuple[float, bool], ...]
    saturated: bool = False


def gamma_threshold(grid_size: int, refine_tol: float) -> ThresholdReport:
    """Bisect for the largest gamma at which the symmetric split still wins.

    The predicate at each gamma is "max excess over the alpha grid (with
    local refinement) <= TIE_EPSILON".  Bisection runs over [0.5, 1.5];
    if the predicate never fails the report is flagged saturated.
    """
    if grid_size < 1000:
        raise DomainError("gamma_threshold: grid_size must be >= 1000")
    if not 0.0 < refine_tol <= 1e-4:
        raise DomainError("gamma_threshold: refine_tol must be in (0, 1e-4]")

    comparisons: list[tuple[float, bool]] = []

    def predicate(g: float) -> bool:
        _, worst = max_excess(g, grid_size)
        wins = worst <= TIE_EPSILON
        comparisons.append((g, wins))
        return wins

    lo, hi = GAMMA_SEARCH_INTERVAL
    if not predicate(lo):
        raise ConfigurationError(
            f"symmetric split already loses at gamma = {lo}; bound chain is broken")
    if predicate(hi):
        witness, _ = max_excess(hi, grid_size)
        return ThresholdReport(gamma_hat=hi, grid_size=grid_size, refine_tol=refine_tol,
                               witness_alpha=witness,
                               comparisons=tuple(sorted(comparisons)), saturated=True)
    while hi - lo > refine_tol:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    witness, _ = max_excess(hi, grid_size)
    return ThresholdReport(gamma_hat=lo, grid_size=grid_size, refine_tol=refine_tol,
                           witness_alpha=witness,
                           comparisons=tuple(sorted(comparisons)), saturated=False)


# ---------------------------------------------------------------------------
# Random pole systems for exercising the K_tau bound


def sample_pole_system(seed: int) -> PoleSystem:
    """Random admissible system with diametrically opposed unit poles.

    The bound K_tau <= Phi(tau) belongs to pole pairs seen from 0 and
    infinity at opposite directions; the sampler rotates the pair randomly
    and draws disjoint disks around 0 and the poles inside a random
    exterior disk.
    """
    rng = np.random.default_rng(seed)
    for _ in range(10_000):
        phase = rng.uniform(0.0, 2.0 * math.pi)
        a1 = -1j * complex(math.cos(phase), math.sin(phase))
        a2 = -a1
        radius = rng.uniform(1.4, 2.5)
        shift = rng.uniform(-0.05, 0.05) + 1j * rng.uniform(-0.05, 0.05)
        r0, r1, r2 = rng.uniform(0.05, 0.45, size=3)
        b0 = Disk(center=shift * 0.5, radius=float(r0))
        b1 = Disk(center=a1 * (1.0 + rng.uniform(-0.1, 0.1)), radius=float(r1))
        b2 = Disk(center=a2 * (1.0 + rng.uniform(-0.1, 0.1)), radius=float(r2))
        binf = ExteriorDisk(center=shift, radius=float(radius))
        system = PoleSystem(b1=b1, b2=b2, a1=a1, a2=a2, b0=b0, binf=binf)
        try:
            system.validate(need_outer=True)
        except ConfigurationError:
            continue
        return system
    raise ConfigurationError("could not sample an admissible pole system")
