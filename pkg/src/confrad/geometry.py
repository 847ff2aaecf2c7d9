"""Ray systems, domain configurations, and the separating transformation.

A ray system is n points a_k = exp(i theta_k) on the unit circle with
0 = theta_1 < ... < theta_n < 2 pi.  The angular gaps alpha_k =
(theta_{k+1} - theta_k)/pi sum to 2 and define the open sectors P_k
between consecutive rays.

The separating map of sector k,

    pi_k(w) = -i * (exp(-i theta_k) * w)^(1/alpha_k),

opens P_k onto the right half-plane, sending a_k to -i |a_k|^(1/alpha_k)
and a_{k+1} to +i |a_{k+1}|^(1/alpha_k).  Intersecting a domain with the
closed sector, mapping it, and gluing on the mirror image across the
imaginary axis produces the symmetrised comparison domains whose inner
radii bound the original one:

    r(B_k, a_k)^2  <=  alpha_k alpha_{k-1} r(Omega_k^1) r(Omega_{k-1}^2)   (per-point)
    r(B_0, 0)^2    <=  prod_k r(Omega_k^0, 0)^(alpha_k^2)                  (origin)
    r(Binf, inf)^2 <=  prod_k r(Omega_k^inf, inf)^(alpha_k^2)              (infinity)

(unit-circle form; the general form divides by the pi_k' factors).
check_separation_bounds verifies all three on a concrete configuration,
estimating the transformed radii by walk-on-spheres.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import wos
from .domains import (
    INF,
    Disk,
    ExteriorDisk,
    HalfPlane,
    ElementaryDomain,
    contains,
    disjointness_gap,
    domain_from_json,
    domain_to_json,
    inner_radius_analytic,
    is_infinity,
)
from .errors import ConfigurationError, DomainError, GeometryError, SamplingError

__all__ = [
    "RaySystem", "Configuration", "SeparatedSystem", "SeparationReport",
    "Disk", "HalfPlane", "ExteriorDisk", "INF",
    "inner_radius_analytic", "evaluate_J", "sample_configuration",
    "separating_map", "transform_boundary", "separate_configuration",
    "check_separation_bounds", "config_to_json", "config_from_json",
    "winding_number",
]

_SAMPLING_GAP = 1e-6
_REJECTION_CAP = 10_000


# ---------------------------------------------------------------------------
# Ray systems and configurations


@dataclass(frozen=True)
class RaySystem:
    """Points exp(i theta_k) on the unit circle, theta_1 = 0, increasing."""

    angles: tuple[float, ...]

    def __post_init__(self):
        th = self.angles
        if len(th) < 2:
            raise ConfigurationError("ray system needs at least 2 points")
        if th[0] != 0.0:
            raise ConfigurationError("first ray must have angle 0")
        for a, b in zip(th, th[1:]):
            if not a < b:
                raise ConfigurationError("ray angles must be strictly increasing")
        if not th[-1] < 2.0 * math.pi:
            raise ConfigurationError("ray angles must stay below 2*pi")

    @property
    def n(self) -> int:
        return len(self.angles)

    @property
    def points(self) -> tuple[complex, ...]:
        return tuple(cmath.exp(1j * t) for t in self.angles)

    @property
    def alphas(self) -> tuple[float, ...]:
        ext = self.angles + (2.0 * math.pi,)
        return tuple((b - a) / math.pi for a, b in zip(ext, ext[1:]))

    def sector(self, k: int) -> tuple[float, float]:
        """Angular interval [theta_k, theta_{k+1}] of sector k (0-based)."""
        ext = self.angles + (2.0 * math.pi,)
        return ext[k], ext[k + 1]


@dataclass(frozen=True)
class Configuration:
    """Non-overlapping domains attached to 0, the ray points, and infinity.

    Open-set disjointness is required (touching closures are legal); every
    marked point must lie strictly inside its domain.
    """

    ray: RaySystem
    domain_at_zero: ElementaryDomain
    domain_at_infinity: ExteriorDisk
    domains: tuple[ElementaryDomain, ...]

    def __post_init__(self):
        if not isinstance(self.domain_at_infinity, ExteriorDisk):
            raise ConfigurationError("the domain at infinity must be an exterior disk")
        if len(self.domains) != self.ray.n:
            raise ConfigurationError("need one domain per ray point")
        pts = (0.0,) + tuple(self.ray.points)
        doms = (self.domain_at_zero,) + tuple(self.domains)
        for p, d in zip(pts, doms):
            if not contains(d, p):
                raise ConfigurationError(f"marked point {p} is not inside {d}")
        all_doms = list(doms) + [self.domain_at_infinity]
        names = ["B0"] + [f"B{k+1}" for k in range(self.ray.n)] + ["Binf"]
        for i in range(len(all_doms)):
            for j in range(i + 1, len(all_doms)):
                if disjointness_gap(all_doms[i], all_doms[j]) < -1e-9:
                    raise ConfigurationError(f"{names[i]} and {names[j]} overlap")


def evaluate_J(gamma: float, config: Configuration) -> float:
    """[r(B0,0) r(Binf,inf)]^gamma * prod_k r(B_k, a_k), all radii analytic."""
    if not gamma >= 0.0:
        raise DomainError("evaluate_J: gamma must be >= 0")
    r0 = inner_radius_analytic(config.domain_at_zero, 0.0)
    rinf = inner_radius_analytic(config.domain_at_infinity, INF)
    value = (r0 * rinf) ** gamma
    for point, dom in zip(config.ray.points, config.domains):
        value *= inner_radius_analytic(dom, point)
    return value


def sample_configuration(seed: int, *, min_radius: float = 0.05, max_radius: float = 0.45,
                         outer_range: tuple[float, float] = (1.35, 2.2)) -> Configuration:
    """Random admissible two-point configuration of disks, deterministic in seed.

    a1 = 1, a2 = exp(i theta) with theta uniform on [pi/2, 3pi/2]; disks are
    drawn around 0, a1, a2 with jittered centers inside a random exterior
    disk, rejecting until all pairwise gaps exceed 1e-6.
    """
    rng = np.random.default_rng(seed)
    for _ in range(_REJECTION_CAP):
        theta = rng.uniform(math.pi / 2.0, 3.0 * math.pi / 2.0)
        ray = RaySystem(angles=(0.0, float(theta)))
        outer_r = rng.uniform(*outer_range)
        outer_c = _random_point_in_disk(rng, 0.08 * outer_r)
        radii = rng.uniform(min_radius, max_radius, size=3)
        pts = [0.0 + 0.0j, *ray.points]
        centers = [p + _random_point_in_disk(rng, 0.25 * r) for p, r in zip(pts, radii)]
        disks = [Disk(center=c, radius=float(r)) for c, r in zip(centers, radii)]
        binf = ExteriorDisk(center=outer_c, radius=float(outer_r))
        if not all(contains(d, p, tol=1e-9) for d, p in zip(disks, pts)):
            continue
        shapes = disks + [binf]
        gaps = [disjointness_gap(shapes[i], shapes[j])
                for i in range(4) for j in range(i + 1, 4)]
        if min(gaps) <= _SAMPLING_GAP:
            continue
        return Configuration(ray=ray, domain_at_zero=disks[0],
                             domain_at_infinity=binf, domains=tuple(disks[1:]))
    raise SamplingError(f"no admissible configuration after {_REJECTION_CAP} draws")


def _random_point_in_disk(rng, radius: float) -> complex:
    r = radius * math.sqrt(rng.uniform())
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return r * cmath.exp(1j * phi)


# ---------------------------------------------------------------------------
# Separating transformation


def _sector_argument(w: complex, k: int, ray: RaySystem, tol: float = 1e-9) -> float:
    """arg(exp(-i theta_k) w) normalised to [0, pi*alpha_k]; errors outside."""
    lo, hi = ray.sector(k)
    width = hi - lo
    phi = (cmath.phase(w) - lo) % (2.0 * math.pi)
    if phi > width:
        if phi >= 2.0 * math.pi - tol:
            phi = 0.0
        elif phi <= width + tol:
            phi = width
        else:
            raise DomainError(f"point {w} lies outside closed sector {k}")
    return phi


def separating_map(w: complex, k: int, ray: RaySystem) -> complex:
    """pi_k(w) = -i (exp(-i theta_k) w)^(1/alpha_k) on the closed sector k.

    The branch takes arg(exp(-i theta_k) w) in [0, pi*alpha_k], so the
    sector opens onto the right half-plane and |pi_k(w)| = |w|^(1/alpha_k).
    """
    w = complex(w)
    if w == 0.0:
        raise DomainError("separating_map: w must be nonzero")
    alpha = ray.alphas[k]
    phi = _sector_argument(w, k, ray)
    return -1j * cmath.exp((math.log(abs(w)) + 1j * phi) / alpha)


def winding_number(polyline: np.ndarray, point: complex) -> int:
    """Winding of a closed polyline around a point (sum of turn angles)."""
    v = np.asarray(polyline, dtype=complex) - point
    turns = np.angle(v[1:] / v[:-1])
    return int(round(float(np.sum(turns)) / (2.0 * math.pi)))


def _circle_sector_arcs(center: complex, radius: float, k: int, ray: RaySystem):
    """Angular sub-intervals of the circle lying inside closed sector k."""
    lo, hi = ray.sector(k)
    cuts = []
    for theta in (lo, hi % (2.0 * math.pi)):
        e = cmath.exp(1j * theta)
        # |t e - c| = radius, t real: t^2 - 2 t Re(conj(e) c) + |c|^2 - r^2 = 0
        b = (center * e.conjugate()).real
        disc = b * b - (abs(center) ** 2 - radius * radius)
        if disc <= 0.0:
            continue
        for t in (b - math.sqrt(disc), b + math.sqrt(disc)):
            if t > 1e-12:
                cuts.append(cmath.phase(t * e - center) % (2.0 * math.pi))
    if not cuts:
        return None  # circle misses both rays entirely
    cuts = sorted(set(cuts))
    arcs = []
    for i, start in enumerate(cuts):
        end = cuts[(i + 1) % len(cuts)]
        if end <= start:
            end += 2.0 * math.pi
        mid = center + radius * cmath.exp(1j * (0.5 * (start + end)))
        phi = (cmath.phase(mid) - lo) % (2.0 * math.pi)
        if phi <= hi - lo:
            arcs.append((start, end))
    return arcs


def transform_boundary(domain: ElementaryDomain, owner, k: int, ray: RaySystem,
                       samples: int = 512) -> np.ndarray:
    """Closed boundary polyline of the symmetrised image of domain in sector k.

    The circular part of the domain boundary inside the closed sector is
    mapped through pi_k and glued to its reflection across the imaginary
    axis; the ray segments of the boundary land on the axis and become
    interior, so the image arc plus its mirror is the whole boundary.
    The polyline is refined until no image segment exceeds 1/512 of the
    current diameter, closes exactly, and is mirror-symmetric by
    construction.  Returned orientation winds once around the owner image
    (around 0 for the domain at infinity, whose bounded complement holds 0).
    """
    if isinstance(domain, HalfPlane):
        raise GeometryError("transform_boundary: half-plane boundaries are unbounded "
                            "inside a sector; only disks and exterior disks are supported")
    center, radius = domain.center, domain.radius
    arcs = _circle_sector_arcs(center, radius, k, ray)
    if arcs is None or not arcs:
        raise GeometryError("domain boundary does not cross the sector rays; "
                            "the symmetrised image would be disconnected")
    if is_infinity(owner):
        owner_image = 0.0 + 0.0j  # anchor of the bounded complement
    elif owner == 0.0:
        owner_image = 0.0 + 0.0j
    else:
        owner_image = separating_map(owner, k, ray)

    last_error: Optional[str] = None
    for start, end in arcs:
        poly = _symmetrised_arc_image(center, radius, start, end, k, ray, samples)
        if poly is None:
            last_error = "arc image could not be closed"
            continue
        w = winding_number(poly, owner_image)
        if w == 0:
            last_error = "owner image not enclosed"
            continue
        if w < 0:
            poly = poly[::-1]
        return poly
    raise GeometryError(f"component selection failed: {last_error}")


def _symmetrised_arc_image(center: complex, radius: float, start: float, end: float,
                           k: int, ray: RaySystem, samples: int):
    lo, hi = ray.sector(k)
    width = hi - lo

    def image(psi: float) -> complex:
        w = center + radius * cmath.exp(1j * psi)
        alpha = ray.alphas[k]
        phi = (cmath.phase(w) - lo) % (2.0 * math.pi)
        if phi >= 2.0 * math.pi - 1e-9:
            phi = 0.0
        phi = min(max(phi, 0.0), width)
        return -1j * cmath.exp((math.log(abs(w)) + 1j * phi) / alpha)

    n0 = max(64, samples // 2)
    params = list(np.linspace(start, end, n0))
    pts = [image(p) for p in params]
    # adaptive refinement: split long image segments
    for _ in range(12):
        diam = max(abs(a - b) for a in (pts[0], pts[len(pts) // 2]) for b in pts)
        limit = max(diam / 512.0, 1e-9)
        new_params: list[float] = []
        new_pts: list[complex] = []
        refined = False
        for i in range(len(pts) - 1):
            new_params.append(params[i])
            new_pts.append(pts[i])
            if abs(pts[i + 1] - pts[i]) > limit:
                mid = 0.5 * (params[i] + params[i + 1])
                new_params.append(mid)
                new_pts.append(image(mid))
                refined = True
        new_params.append(params[-1])
        new_pts.append(pts[-1])
        params, pts = new_params, new_pts
        if not refined or len(pts) > 16384:
            break

    arr = np.asarray(pts, dtype=complex)
    # Endpoints are images of ray points: snap them onto the imaginary axis.
    if abs(arr[0].real) > 1e-6 or abs(arr[-1].real) > 1e-6:
        return None
    arr[0] = complex(0.0, arr[0].imag)
    arr[-1] = complex(0.0, arr[-1].imag)
    mirrored = -np.conj(arr[-2::-1])
    closed = np.concatenate([arr, mirrored])
    closed[-1] = closed[0]
    return closed


@dataclass(frozen=True)
class SeparatedSystem:
    """All four symmetrised domains of one sector, as boundary polylines."""

    k: int
    omega1: complex
    omega2: complex
    boundary_zero: np.ndarray
    boundary_own: np.ndarray
    boundary_next: np.ndarray
    boundary_infinity: np.ndarray


def separate_configuration(config: Configuration, k: int, samples: int = 512) -> SeparatedSystem:
    """Build Omega_k^(0), Omega_k^(1), Omega_k^(2), Omega_k^(inf) for sector k."""
    ray = config.ray
    n = ray.n
    a_k = ray.points[k]
    a_next = ray.points[(k + 1) % n]
    return SeparatedSystem(
        k=k,
        omega1=separating_map(a_k, k, ray),
        omega2=separating_map(a_next, k, ray),
        boundary_zero=transform_boundary(config.domain_at_zero, 0.0, k, ray, samples),
        boundary_own=transform_boundary(config.domains[k], a_k, k, ray, samples),
        boundary_next=transform_boundary(config.domains[(k + 1) % n], a_next, k, ray, samples),
        boundary_infinity=transform_boundary(config.domain_at_infinity, INF, k, ray, samples),
    )


# ---------------------------------------------------------------------------
# Numerical verification of the separation inequalities


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs: float
    std_error: float
    margin: float
    sigmas: float
    conclusive: bool
    violated: bool


@dataclass(frozen=True)
class SeparationReport:
    checks: tuple[InequalityCheck, ...]
    walks: int
    epsilon: float
    seed: int

    @property
    def any_violation(self) -> bool:
        return any(c.violated for c in self.checks)


def _make_check(name: str, lhs: float, log_rhs: float, se_log: float) -> InequalityCheck:
    rhs = math.exp(log_rhs)
    se = rhs * se_log
    margin = rhs - lhs
    sigmas = margin / se if se > 0.0 else math.inf
    return InequalityCheck(name=name, lhs=lhs, rhs=rhs, std_error=se, margin=margin,
                           sigmas=sigmas, conclusive=abs(sigmas) > 3.0,
                           violated=sigmas < -3.0)


def check_separation_bounds(config: Configuration, *, walks: int = 20_000,
                            epsilon: float = 1e-3, seed: int = 0,
                            threads: int = 1, samples: int = 512) -> SeparationReport:
    """Monte Carlo verification of the three separation inequalities (n = 2).

    Inner radii of the eight symmetrised domains are estimated by
    walk-on-spheres; a check is flagged violated only when the inequality
    fails by more than 3 combined standard errors, and inconclusive when
    the margin is within 3 standard errors of zero.
    """
    if config.ray.n != 2:
        raise ConfigurationError("check_separation_bounds: implemented for n = 2")
    systems = [separate_configuration(config, k, samples) for k in range(2)]
    alphas = config.ray.alphas

    jobs = []
    for k, sys_k in enumerate(systems):
        jobs.append(("own", k, sys_k.boundary_own, sys_k.omega1))
        jobs.append(("next", k, sys_k.boundary_next, sys_k.omega2))
        jobs.append(("zero", k, sys_k.boundary_zero, 0.0))
        jobs.append(("inf", k, sys_k.boundary_infinity, None))

    def run(j):
        salt, (role, k, poly, point) = j
        child = wos.derive_seed(seed, salt)
        if role == "inf":
            return wos.estimate_inner_radius_at_infinity(poly, walks, epsilon, child)
        return wos.estimate_inner_radius(wos.PolylineOracle(poly), point, walks,
                                         epsilon, child)

    results = _parallel_map(run, list(enumerate(jobs)), threads)
    est = {}
    for (role, k, _, _), mc in zip(jobs, results):
        est[(role, k)] = mc

    checks = []
    # per-point bounds: r(B_k, a_k)^2 <= alpha_k alpha_{k-1} r(Omega_k^1) r(Omega_{k-1}^2)
    for k in range(2):
        prev = (k - 1) % 2
        a_k = config.ray.points[k]
        lhs = inner_radius_analytic(config.domains[k], a_k)
        own = est[("own", k)]
        other = est[("next", prev)]
        log_rhs = 0.5 * (math.log(alphas[k] * alphas[prev])
                         + math.log(own.value) + math.log(other.value))
        se_log = 0.5 * math.hypot(own.log_std_error, other.log_std_error)
        checks.append(_make_check(f"point_{k + 1}", lhs, log_rhs, se_log))
    # origin bound
    lhs0 = inner_radius_analytic(config.domain_at_zero, 0.0)
    log_rhs0 = 0.5 * sum(alphas[k] ** 2 * math.log(est[("zero", k)].value) for k in range(2))
    se0 = 0.5 * math.hypot(*[alphas[k] ** 2 * est[("zero", k)].log_std_error for k in range(2)])
    checks.append(_make_check("origin", lhs0, log_rhs0, se0))
    # infinity bound
    lhsi = inner_radius_analytic(config.domain_at_infinity, INF)
    log_rhsi = 0.5 * sum(alphas[k] ** 2 * math.log(est[("inf", k)].value) for k in range(2))
    sei = 0.5 * math.hypot(*[alphas[k] ** 2 * est[("inf", k)].log_std_error for k in range(2)])
    checks.append(_make_check("infinity", lhsi, log_rhsi, sei))

    return SeparationReport(checks=tuple(checks), walks=walks, epsilon=epsilon, seed=seed)


def _parallel_map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# JSON serialisation


def config_to_json(config: Configuration) -> dict:
    return {
        "ray": {"angles": list(config.ray.angles)},
        "domain_at_zero": domain_to_json(config.domain_at_zero),
        "domain_at_infinity": domain_to_json(config.domain_at_infinity),
        "domains": [domain_to_json(d) for d in config.domains],
    }


def config_from_json(obj: dict) -> Configuration:
    try:
        ray = RaySystem(angles=tuple(float(t) for t in obj["ray"]["angles"]))
        return Configuration(
            ray=ray,
            domain_at_zero=domain_from_json(obj["domain_at_zero"]),
            domain_at_infinity=domain_from_json(obj["domain_at_infinity"]),
            domains=tuple(domain_from_json(d) for d in obj["domains"]),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed configuration JSON: {exc}") from exc
