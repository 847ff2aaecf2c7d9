"""Elementary planar domains with closed-form inner radii.

Three analytic shapes cover every configuration the toolkit manipulates:

    Disk(c, rho)            {|w - c| < rho}
    HalfPlane(b, n)         {Re(conj(n) * (w - b)) > 0},  |n| = 1 (inward normal)
    ExteriorDisk(c, rho)    {|w - c| > rho}, a neighbourhood of infinity

The inner radius r(B, a) is the conformal radius of B at a.  For the point
at infinity the convention is r(B, inf) = r(1/B, 0), i.e. the value is read
off after the inversion w -> 1/w; this gives r = 1/rho for any exterior
disk, independently of its centre, and is monotone under domain inclusion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

from .errors import ConfigurationError, DomainError

INF = complex(math.inf, 0.0)

# Tangent closures are allowed: open sets are still disjoint when their
# boundaries touch.  The tolerance absorbs center/radius rounding.
_TANGENCY_TOL = 1e-9


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    kind = "disk"

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DomainError(f"disk radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class HalfPlane:
    boundary_point: complex
    inward_normal: complex

    kind = "half_plane"

    def __post_init__(self):
        if abs(abs(self.inward_normal) - 1.0) > 1e-9:
            raise DomainError("half-plane inward normal must have unit modulus")


@dataclass(frozen=True)
class ExteriorDisk:
    center: complex
    radius: float

    kind = "exterior_disk"

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DomainError(f"exterior disk radius must be positive, got {self.radius}")


ElementaryDomain = Union[Disk, HalfPlane, ExteriorDisk]


def is_infinity(point) -> bool:
    return point == INF or (isinstance(point, complex) and cmath.isinf(point))


def signed_boundary_distance(domain: ElementaryDomain, w: complex) -> float:
    """Distance to the boundary, positive inside the domain."""
    if isinstance(domain, Disk):
        return domain.radius - abs(w - domain.center)
    if isinstance(domain, HalfPlane):
        return (w - domain.boundary_point).real * domain.inward_normal.real + (
            w - domain.boundary_point
        ).imag * domain.inward_normal.imag
    if isinstance(domain, ExteriorDisk):
        return abs(w - domain.center) - domain.radius
    raise DomainError(f"unknown domain {domain!r}")


def contains(domain: ElementaryDomain, point, tol: float = 0.0) -> bool:
    """Strict membership; accepts the symbolic infinity for exterior disks."""
    if is_infinity(point):
        return isinstance(domain, ExteriorDisk)
    return signed_boundary_distance(domain, point) > tol


def invert_exterior(domain: ExteriorDisk) -> Disk:
    """Image of an exterior disk under w -> 1/w, as an honest disk around 0.

    Requires 0 outside the domain (|c| <= rho), so the image is bounded:
    center -conj(c)/(rho^2 - |c|^2), radius rho/(rho^2 - |c|^2).
    """
    c, rho = domain.center, domain.radius
    denom = rho * rho - abs(c) ** 2
    if denom <= 0.0:
        raise DomainError("invert_exterior: exterior disk must exclude the origin")
    return Disk(center=-c.conjugate() / denom, radius=rho / denom)


def inner_radius_analytic(domain: ElementaryDomain, point) -> float:
    """Closed-form conformal radius r(domain, point).

        disk(c, rho) at a:          (rho^2 - |a-c|^2) / rho
        half-plane at a:            2 * dist(a, boundary line)
        exterior_disk(c, rho) at oo: 1 / rho
        exterior_disk(c, rho) at a:  (|a-c|^2 - rho^2) / rho

    Raises DomainError when the point is not strictly inside.
    """
    if is_infinity(point):
        if not isinstance(domain, ExteriorDisk):
            raise DomainError("inner radius at infinity needs an exterior disk")
        # Equivalent to the image-disk radius at 0 after inversion; the
        # centre cancels and only 1/rho survives.
        return 1.0 / domain.radius
    a = complex(point)
    d = signed_boundary_distance(domain, a)
    if d <= 0.0:
        raise DomainError(f"point {a} is not strictly inside {domain}")
    if isinstance(domain, Disk):
        return (domain.radius**2 - abs(a - domain.center) ** 2) / domain.radius
    if isinstance(domain, HalfPlane):
        return 2.0 * d
    if isinstance(domain, ExteriorDisk):
        return (abs(a - domain.center) ** 2 - domain.radius**2) / domain.radius
    raise DomainError(f"unknown domain {domain!r}")


def disjointness_gap(a: ElementaryDomain, b: ElementaryDomain) -> float:
    """Separation between two domains; >= 0 means the open sets are disjoint.

    Unbounded pairs (two exterior disks, half-plane against exterior disk)
    always overlap, reported as -inf.
    """
    if isinstance(a, ExteriorDisk) and isinstance(b, ExteriorDisk):
        return -math.inf
    if isinstance(a, ExteriorDisk) or isinstance(b, ExteriorDisk):
        if isinstance(a, ExteriorDisk):
            a, b = b, a
        if isinstance(a, HalfPlane):
            return -math.inf
        # disk inside the removed ball of the exterior
        return b.radius - (abs(a.center - b.center) + a.radius)
    if isinstance(a, HalfPlane) and isinstance(b, HalfPlane):
        n1, n2 = a.inward_normal, b.inward_normal
        if (n1 * n2.conjugate()).real > -1.0 + 1e-12:
            return -math.inf
        s = ((b.boundary_point - a.boundary_point) * n1.conjugate()).real
        return -s
    if isinstance(a, HalfPlane) or isinstance(b, HalfPlane):
        if isinstance(b, HalfPlane):
            a, b = b, a
        s = ((b.center - a.boundary_point) * a.inward_normal.conjugate()).real
        return -s - b.radius
    return abs(a.center - b.center) - a.radius - b.radius


def require_disjoint(domains, names=None) -> None:
    """Raise ConfigurationError unless all open domains are pairwise disjoint."""
    items = list(domains)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            gap = disjointness_gap(items[i], items[j])
            if gap < -_TANGENCY_TOL:
                label = (
                    f"{names[i]} and {names[j]}" if names else f"domains {i} and {j}"
                )
                raise ConfigurationError(f"{label} overlap (gap {gap:.3g})")


def domain_to_json(domain: ElementaryDomain) -> dict:
    if isinstance(domain, Disk) or isinstance(domain, ExteriorDisk):
        return {
            "kind": domain.kind,
            "center": [domain.center.real, domain.center.imag],
            "radius": domain.radius,
        }
    if isinstance(domain, HalfPlane):
        return {
            "kind": domain.kind,
            "boundary_point": [domain.boundary_point.real, domain.boundary_point.imag],
            "inward_normal": [domain.inward_normal.real, domain.inward_normal.imag],
        }
    raise DomainError(f"unknown domain {domain!r}")


def domain_from_json(obj: dict) -> ElementaryDomain:
    try:
        kind = obj["kind"]
        if kind == "disk":
            return Disk(center=complex(*obj["center"]), radius=float(obj["radius"]))
        if kind == "exterior_disk":
            return ExteriorDisk(center=complex(*obj["center"]), radius=float(obj["radius"]))
        if kind == "half_plane":
            return HalfPlane(
                boundary_point=complex(*obj["boundary_point"]),
                inward_normal=complex(*obj["inward_normal"]),
            )
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed domain JSON: {obj!r}") from exc
    raise ConfigurationError(f"unknown domain kind {obj.get('kind')!r}")
