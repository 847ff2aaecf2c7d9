"""Walk-on-spheres Monte Carlo estimation of inner radii.

The conformal radius of a domain B at an interior point a satisfies

    log r(B, a) = E[ log |W_exit - a| ]

where W_exit is the Brownian exit point from a (harmonic measure).  The
walk-on-spheres sampler jumps to a uniform point on a circle around the
current position whose radius never exceeds the distance to the boundary;
the mean value property keeps the exit distribution exact for any such
radius, so conservative distance bounds only cost speed, never bias.  A
walk stops once it is within epsilon of the boundary and is projected onto
the nearest boundary point.

Randomness is counter-based: the uniform for (seed, walk, step) is a pure
hash of those three integers.  Estimates are therefore bitwise reproducible
for a given seed regardless of batching, thread count or evaluation order,
and all reductions run in fixed walk-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .domains import (
    Disk,
    ExteriorDisk,
    HalfPlane,
    invert_exterior,
)
from .errors import DomainError, NonConvergenceError

_STEP_CAP = 1_000_000
_CHUNK = 1 << 16

# ---------------------------------------------------------------------------
# Counter-based RNG: SplitMix64-style finalizers chained over (seed, walk, step)


_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MASK = (1 << 64) - 1


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= _M1
    z ^= z >> np.uint64(27)
    z *= _M2
    z ^= z >> np.uint64(31)
    return z


def _mix64_int(z: int) -> int:
    z &= _MASK
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return (z ^ (z >> 31)) & _MASK


def counter_uniform(seed: int, walk_ids: np.ndarray, step: int) -> np.ndarray:
    """Uniforms in [0, 1) indexed by (seed, walk, step); order-independent."""
    base = _mix64_int((seed & _MASK) ^ _mix64_int(step + 1))
    h = _mix64_array(np.uint64(base) ^ _mix64_array(walk_ids + _GOLDEN))
    return (h >> np.uint64(11)).astype(np.float64) * (2.0**-53)


def derive_seed(seed: int, salt: int) -> int:
    """Stable child seed for independent sub-estimates."""
    return _mix64_int((seed & _MASK) ^ _mix64_int(salt ^ 0x5851F42D4C957F2D))


class CounterStream:
    """Per-walk random stream, keyed by (seed, walk_index)."""

    def __init__(self, seed: int, walk_index: int = 0):
        self.seed = int(seed)
        self.walk_index = int(walk_index)
        self._step = 0

    def next_uniform(self) -> float:
        ids = np.array([self.walk_index], dtype=np.uint64)
        u = counter_uniform(self.seed, ids, self._step)
        self._step += 1
        return float(u[0])


# ---------------------------------------------------------------------------
# Domain oracles


class DomainOracle:
    """Batch distance/projection interface the walker consumes.

    distance_to_boundary(z) returns, for every z, a value that is exact
    whenever it is below the oracle's near-field scale and otherwise a
    positive lower bound on the true distance.  nearest_boundary(z) is only
    queried for points already within the termination shell.
    """

    truncated_at: Optional[float] = None

    def distance_to_boundary(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def nearest_boundary(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, z: complex) -> bool:
        return bool(self.distance_to_boundary(np.asarray([z], dtype=complex))[0] > 0.0)

    @property
    def bounding_radius(self) -> float:
        raise NotImplementedError


class DiskOracle(DomainOracle):
    def __init__(self, disk: Disk):
        self.center = complex(disk.center)
        self.radius = float(disk.radius)

    def distance_to_boundary(self, z):
        return self.radius - np.abs(z - self.center)

    def nearest_boundary(self, z):
        v = z - self.center
        r = np.abs(v)
        v = np.where(r == 0.0, 1.0 + 0.0j, v / np.where(r == 0.0, 1.0, r))
        return self.center + self.radius * v

    @property
    def bounding_radius(self):
        return abs(self.center) + self.radius


class HalfPlaneOracle(DomainOracle):
    def __init__(self, hp: HalfPlane):
        self.b = complex(hp.boundary_point)
        self.n = complex(hp.inward_normal)

    def distance_to_boundary(self, z):
        d = z - self.b
        return d.real * self.n.real + d.imag * self.n.imag

    def nearest_boundary(self, z):
        return z - self.distance_to_boundary(z) * self.n

    @property
    def bounding_radius(self):
        return math.inf


class ExteriorDiskOracle(DomainOracle):
    def __init__(self, ext: ExteriorDisk):
        self.domain = ext
        self.center = complex(ext.center)
        self.radius = float(ext.radius)

    def distance_to_boundary(self, z):
        return np.abs(z - self.center) - self.radius

    def nearest_boundary(self, z):
        v = z - self.center
        r = np.abs(v)
        v = np.where(r == 0.0, 1.0 + 0.0j, v / np.where(r == 0.0, 1.0, r))
        return self.center + self.radius * v

    @property
    def bounding_radius(self):
        return math.inf


class TruncatedOracle(DomainOracle):
    """Intersection of an unbounded domain with a large disk around 0.

    Walks that reach the artificial cap exit there, which biases the
    estimate upward by roughly log(R) times the harmonic measure of the
    cap; with the default R = 1e3 this is well below the Monte Carlo noise
    of the use cases here.  The cap is recorded in ``truncated_at``.
    """

    def __init__(self, inner: DomainOracle, radius: float = 1e3):
        self.inner = inner
        self.radius = float(radius)
        self.truncated_at = self.radius

    def distance_to_boundary(self, z):
        return np.minimum(self.inner.distance_to_boundary(z), self.radius - np.abs(z))

    def nearest_boundary(self, z):
        d_in = self.inner.distance_to_boundary(z)
        d_cap = self.radius - np.abs(z)
        p_in = self.inner.nearest_boundary(z)
        r = np.abs(z)
        v = np.where(r == 0.0, 1.0 + 0.0j, z / np.where(r == 0.0, 1.0, r))
        p_cap = self.radius * v
        return np.where(d_in <= d_cap, p_in, p_cap)

    @property
    def bounding_radius(self):
        return self.radius


class PolylineOracle(DomainOracle):
    """Domain bounded by a closed polyline, with a uniform-grid segment index.

    Near the boundary (within ~3 grid cells) the distance is the exact
    point-to-segment minimum over indexed candidates; farther away a
    chamfer lower bound on the cell graph is used, which is enough for the
    walker because any under-estimate of the distance is still a valid jump
    radius.
    """

    GRID = 256

    def __init__(self, points: np.ndarray):
        pts = np.asarray(points, dtype=complex)
        if pts.ndim != 1 or pts.size < 4:
            raise DomainError("polyline oracle needs a closed polyline of >= 4 points")
        if abs(pts[0] - pts[-1]) > 1e-9 * max(1.0, float(np.max(np.abs(pts)))):
            raise DomainError("polyline must be closed (first point == last point)")
        self.points = pts
        self._a = pts[:-1]
        self._b = pts[1:]
        self._seg = self._b - self._a
        self._len2 = np.maximum(np.abs(self._seg) ** 2, 1e-300)
        self._build_index()

    # -- index construction -------------------------------------------------
    def _build_index(self):
        xs = self.points.real
        ys = self.points.imag
        self._xmin = float(xs.min())
        self._ymin = float(ys.min())
        extent = max(float(xs.max() - xs.min()), float(ys.max() - ys.min()), 1e-12)
        self._cs = extent / self.GRID
        pad = 2
        self._nx = int(math.ceil((xs.max() - self._xmin) / self._cs)) + 2 * pad + 1
        self._ny = int(math.ceil((ys.max() - self._ymin) / self._cs)) + 2 * pad + 1
        self._xmin -= pad * self._cs
        self._ymin -= pad * self._cs
        self._near_reach = 3.0 * self._cs

        cells: dict[int, list[int]] = {}
        reach = self._near_reach
        for idx in range(self._a.size):
            ax, ay = self._a[idx].real, self._a[idx].imag
            bx, by = self._b[idx].real, self._b[idx].imag
            i0 = int((min(ax, bx) - reach - self._xmin) / self._cs)
            i1 = int((max(ax, bx) + reach - self._xmin) / self._cs)
            j0 = int((min(ay, by) - reach - self._ymin) / self._cs)
            j1 = int((max(ay, by) + reach - self._ymin) / self._cs)
            for i in range(max(i0, 0), min(i1, self._nx - 1) + 1):
                for j in range(max(j0, 0), min(j1, self._ny - 1) + 1):
                    cells.setdefault(i * self._ny + j, []).append(idx)

        max_cand = max(len(v) for v in cells.values())
        self._cell_row = np.full(self._nx * self._ny, -1, dtype=np.int64)
        self._cand = np.zeros((len(cells), max_cand), dtype=np.int64)
        self._cand_mask = np.zeros((len(cells), max_cand), dtype=bool)
        for row, (cell, seg_ids) in enumerate(sorted(cells.items())):
            self._cell_row[cell] = row
            self._cand[row, : len(seg_ids)] = seg_ids
            self._cand_mask[row, : len(seg_ids)] = True

        # Chebyshev distance transform over cells (two chamfer sweeps, with
        # the in-row scans vectorised): far-field lower bound on distance.
        occupied = (self._cell_row >= 0).reshape(self._nx, self._ny)
        big = float(self._nx + self._ny)
        ring = np.where(occupied, 0.0, big)
        idx = np.arange(self._ny, dtype=float)

        def scan_lr(row):
            return np.minimum.accumulate(row - idx) + idx

        def scan_rl(row):
            return (np.minimum.accumulate((row + idx)[::-1]) - idx[::-1])[::-1]

        for i in range(self._nx):
            if i > 0:
                up = ring[i - 1]
                n3 = np.minimum(up, np.minimum(np.roll(up, 1), np.roll(up, -1)))
                n3[0] = min(up[0], up[1])
                n3[-1] = min(up[-1], up[-2])
                ring[i] = np.minimum(ring[i], n3 + 1.0)
            ring[i] = np.minimum(scan_lr(ring[i]), scan_rl(ring[i]))
        for i in range(self._nx - 2, -1, -1):
            dn = ring[i + 1]
            n3 = np.minimum(dn, np.minimum(np.roll(dn, 1), np.roll(dn, -1)))
            n3[0] = min(dn[0], dn[1])
            n3[-1] = min(dn[-1], dn[-2])
            ring[i] = np.minimum(ring[i], n3 + 1.0)
            ring[i] = np.minimum(scan_lr(ring[i]), scan_rl(ring[i]))
        far_lb = np.maximum(ring - 1.0, 0.0) * self._cs
        self._far_lb = np.maximum(far_lb, self._near_reach * 0.5).ravel()

    def _cell_ids(self, z: np.ndarray) -> np.ndarray:
        i = np.clip(((z.real - self._xmin) / self._cs).astype(np.int64), 0, self._nx - 1)
        j = np.clip(((z.imag - self._ymin) / self._cs).astype(np.int64), 0, self._ny - 1)
        return i * self._ny + j

    def _candidate_distance(self, z: np.ndarray, rows: np.ndarray, want_points: bool):
        dmin = np.empty(z.size, dtype=float)
        pmin = np.empty(z.size, dtype=complex) if want_points else None
        block = max(1, (1 << 21) // max(1, self._cand.shape[1]))
        for lo in range(0, z.size, block):
            hi = min(lo + block, z.size)
            segs = self._cand[rows[lo:hi]]
            mask = self._cand_mask[rows[lo:hi]]
            a = self._a[segs]
            zz = z[lo:hi, None]
            t = ((zz - a) * np.conj(self._seg[segs])).real / self._len2[segs]
            t = np.clip(t, 0.0, 1.0)
            proj = a + t * self._seg[segs]
            d = np.where(mask, np.abs(zz - proj), np.inf)
            kmin = np.argmin(d, axis=1)
            rows_idx = np.arange(hi - lo)
            dmin[lo:hi] = d[rows_idx, kmin]
            if want_points:
                pmin[lo:hi] = proj[rows_idx, kmin]
        return dmin, pmin

    # -- oracle interface ----------------------------------------------------
    def distance_to_boundary(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        cells = self._cell_ids(z)
        rows = self._cell_row[cells]
        out = np.empty(z.shape, dtype=float)
        near = rows >= 0
        if np.any(near):
            d, _ = self._candidate_distance(z[near], rows[near], want_points=False)
            # Beyond the candidate reach the subset minimum can overestimate;
            # clamp to the guaranteed-correct range.
            out[near] = np.minimum(d, self._near_reach)
        if np.any(~near):
            out[~near] = self._far_lb[cells[~near]]
        return out

    def nearest_boundary(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        cells = self._cell_ids(z)
        rows = self._cell_row[cells]
        if np.any(rows < 0):
            raise DomainError("nearest_boundary queried far from the boundary")
        _, pts = self._candidate_distance(z, rows, want_points=True)
        return pts

    def contains(self, z: complex) -> bool:
        # Crossing parity along a horizontal ray; exact segment arithmetic.
        x, y = complex(z).real, complex(z).imag
        ay = self._a.imag
        by = self._b.imag
        cross = (ay > y) != (by > y)
        if not np.any(cross):
            return False
        t = (y - ay[cross]) / (by[cross] - ay[cross])
        xs = self._a.real[cross] + t * (self._b.real[cross] - self._a.real[cross])
        return bool(np.sum(xs > x) % 2 == 1)

    @property
    def bounding_radius(self):
        return float(np.max(np.abs(self.points)))


def oracle_for(shape, truncation: float = 1e3) -> DomainOracle:
    """Build the matching oracle; unbounded shapes get a recorded truncation."""
    if isinstance(shape, Disk):
        return DiskOracle(shape)
    if isinstance(shape, HalfPlane):
        return TruncatedOracle(HalfPlaneOracle(shape), truncation)
    if isinstance(shape, ExteriorDisk):
        return TruncatedOracle(ExteriorDiskOracle(shape), truncation)
    if isinstance(shape, PolylineOracle) or isinstance(shape, DomainOracle):
        return shape
    if isinstance(shape, np.ndarray):
        return PolylineOracle(shape)
    raise DomainError(f"no oracle for {shape!r}")


# ---------------------------------------------------------------------------
# The walker


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    walks: int
    epsilon_shell: float
    seed: int
    truncated_at: Optional[float] = None

    @property
    def log_std_error(self) -> float:
        """Standard error of the underlying mean-log estimate."""
        return self.std_error / self.value


def _run_walks(oracle: DomainOracle, start: complex, epsilon: float, seed: int,
               n_walks: int, first_walk: int = 0):
    """Exit points and step counts for walks [first_walk, first_walk+n)."""
    exits = np.empty(n_walks, dtype=complex)
    steps = np.zeros(n_walks, dtype=np.int64)
    for lo in range(0, n_walks, _CHUNK):
        hi = min(lo + _CHUNK, n_walks)
        m = hi - lo
        pos = np.full(m, complex(start), dtype=complex)
        ids = np.arange(first_walk + lo, first_walk + hi, dtype=np.uint64)
        alive = np.arange(m)
        step = 0
        while alive.size:
            d = oracle.distance_to_boundary(pos[alive])
            done = d < epsilon
            if np.any(done):
                idx = alive[done]
                exits[idx] = oracle.nearest_boundary(pos[idx])
                steps[idx] = step
                alive = alive[~done]
                if alive.size == 0:
                    break
                d = d[~done]
            u = counter_uniform(seed, ids[alive], step)
            pos[alive] += d * np.exp(2j * math.pi * u)
            step += 1
            if step > _STEP_CAP:
                raise NonConvergenceError(
                    "walk-on-spheres exceeded the step cap; oracle is suspect"
                )
    return exits, steps


def wos_exit(oracle: DomainOracle, start: complex, epsilon: float,
             rng: CounterStream) -> complex:
    """Single Brownian exit point sampled by walk-on-spheres."""
    if not epsilon > 0.0:
        raise DomainError("wos_exit: epsilon must be positive")
    exits, _ = _run_walks(oracle, start, epsilon, rng.seed, 1, first_walk=rng.walk_index)
    return complex(exits[0])


def exit_sample(oracle: DomainOracle, start: complex, epsilon: float, seed: int,
                walks: int):
    """Batch of exit points plus per-walk step counts (diagnostics)."""
    return _run_walks(oracle, start, epsilon, seed, walks)


def estimate_inner_radius(oracle, point: complex, walks: int, epsilon: float,
                          seed: int) -> McEstimate:
    """Monte Carlo inner radius r = exp(mean log |exit - point|)."""
    oracle = oracle_for(oracle)
    if walks < 1000:
        raise DomainError("estimate_inner_radius: need walks >= 1000")
    if not epsilon > 0.0:
        raise DomainError("estimate_inner_radius: epsilon must be positive")
    if isinstance(oracle, PolylineOracle) and epsilon >= oracle._near_reach:
        raise DomainError("estimate_inner_radius: epsilon exceeds the oracle's "
                          "exact-distance reach; use a smaller epsilon")
    point = complex(point)
    if not oracle.contains(point):
        raise DomainError(f"start point {point} is not inside the domain")
    exits, _ = _run_walks(oracle, point, epsilon, seed, walks)
    logs = np.log(np.abs(exits - point))
    mean_log = float(np.mean(logs))
    se_log = float(np.std(logs, ddof=1) / math.sqrt(walks))
    value = math.exp(mean_log)
    return McEstimate(value=value, std_error=value * se_log, walks=walks,
                      epsilon_shell=epsilon, seed=seed,
                      truncated_at=getattr(oracle, "truncated_at", None))


def estimate_inner_radius_at_infinity(domain: Union[ExteriorDisk, np.ndarray, PolylineOracle],
                                      walks: int, epsilon: float, seed: int) -> McEstimate:
    """Inner radius at infinity via the inversion w -> 1/w.

    Accepts an exterior disk or the closed boundary polyline of a domain
    containing infinity (equivalently, of its bounded complement).  The
    domain must not contain 0; its inverted image is then bounded and the
    radius is estimated at the origin of the image.
    """
    if isinstance(domain, ExteriorDisk):
        image = invert_exterior(domain)  # raises if 0 is inside the domain
        return estimate_inner_radius(DiskOracle(image), 0.0, walks, epsilon, seed)
    pts = domain.points if isinstance(domain, PolylineOracle) else np.asarray(domain, dtype=complex)
    if np.any(np.abs(pts) == 0.0):
        raise DomainError("boundary passes through 0; cannot invert")
    complement = PolylineOracle(pts)
    if not complement.contains(0.0):
        raise DomainError("0 must lie in the bounded complement of the domain")
    inverted = PolylineOracle(1.0 / pts)
    return estimate_inner_radius(inverted, 0.0, walks, epsilon, seed)
