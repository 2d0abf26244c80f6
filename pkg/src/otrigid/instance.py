"""Instance model: point clouds, cost matrices, genericity checking, perturbation.

An instance is a dense m x n cost matrix with equal-weight marginals 1/m on
sources and 1/n on targets.  All masses are tracked at the integer scale
S = lcm(m, n), which makes every vertex of the transportation polytope
integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

# Quadruple budget above which genericity_check falls back to sampling.
FULL_SCAN_BUDGET = 10**8
SAMPLE_SIZE = 10**7

DEFAULT_GENERICITY_TOL = 1e-12
DEFAULT_PERTURB_ETA = 1e-9


@dataclass(frozen=True)
class PointCloud:
    """A non-empty list of points of common dimension, labelled source or target."""

    points: np.ndarray  # shape (k, d)
    label: str  # "source" | "target"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("point cloud must be a non-empty (k, d) array with d >= 1")
        if self.label not in ("source", "target"):
            raise ValueError(f"label must be 'source' or 'target', got {self.label!r}")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


@dataclass(frozen=True)
class CostMatrix:
    """Dense m x n matrix of finite transport costs."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise ValueError("cost matrix must be 2-dimensional and non-empty")
        if not np.all(np.isfinite(c)):
            raise ValueError("cost matrix entries must all be finite")
        object.__setattr__(self, "c", c)

    @property
    def m(self):
        return self.c.shape[0]

    @property
    def n(self):
        return self.c.shape[1]

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.c)))


@dataclass(frozen=True)
class Geometry:
    """Optional point-cloud origin of a cost matrix: c_ij = ||x_i - y_j||^p."""

    sources: PointCloud
    targets: PointCloud
    p: float


@dataclass(frozen=True)
class Instance:
    """Costs plus optional geometry; scale S = lcm(m, n) makes marginals integral."""

    costs: CostMatrix
    geometry: Optional[Geometry] = None

    def __post_init__(self):
        if self.geometry is not None:
            g = self.geometry
            if len(g.sources) != self.m or len(g.targets) != self.n:
                raise ValueError("geometry size does not match cost matrix")
            expected = _power_distance_matrix(g.sources.points, g.targets.points, g.p)
            scale = max(self.costs.max_abs, 1.0)
            if not np.allclose(self.costs.c, expected, rtol=0.0, atol=1e-12 * scale):
                raise ValueError("costs are inconsistent with geometry to 1e-12")

    @property
    def m(self):
        return self.costs.m

    @property
    def n(self):
        return self.costs.n

    @property
    def scale(self):
        """S = lcm(m, n); S/m and S/n are the integral source/target masses."""
        return math.lcm(self.m, self.n)


@dataclass(frozen=True)
class GenericityReport:
    """Outcome of the quadruple scan c_ik + c_jl vs c_il + c_jk."""

    generic: bool
    violations: tuple  # quadruples (i, j, k, l) with i < j, k < l
    tolerance: float  # relative to max|c|
    sampled: bool = False
    quadruples_checked: int = 0

    def __post_init__(self):
        if self.generic != (len(self.violations) == 0):
            raise ValueError("generic flag inconsistent with violation list")


def _power_distance_matrix(x, y, p):
    diff = x[:, None, :] - y[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    return dist**p


def gen_points(dist, count, dim, seed):
    """Sample a point cloud: 'uniform-square' in [0,1]^dim or 'gaussian' iid N(0,1)."""
    if count < 1 or dim < 1:
        raise ValueError("count and dim must be positive")
    rng = np.random.default_rng(seed)
    if dist == "uniform-square":
        pts = rng.random((count, dim))
    elif dist == "gaussian":
        pts = rng.standard_normal((count, dim))
    else:
        raise ValueError(f"unknown distribution {dist!r}")
    return PointCloud(pts, "source")


def cost_from_points(x: PointCloud, y: PointCloud, p: float) -> Instance:
    """Build an instance with c_ij = ||x_i - y_j||^p, keeping the geometry."""
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    if p <= 0:
        raise ValueError("exponent p must be positive")
    c = _power_distance_matrix(x.points, y.points, p)
    geom = Geometry(
        PointCloud(x.points, "source"), PointCloud(y.points, "target"), float(p)
    )
    return Instance(CostMatrix(c), geom)


def gen_random_costs(m, n, seed) -> Instance:
    """Instance with iid uniform [0,1) costs and no geometry."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    rng = np.random.default_rng(seed)
    return Instance(CostMatrix(rng.random((m, n))))


def perturb(inst: Instance, eta: float, seed) -> Instance:
    """Add iid uniform [0, eta*max|c|) jitter to every cost entry.

    Geometry is dropped: the perturbed costs are no longer exact powers of
    distances.  Deterministic per seed.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    rng = np.random.default_rng(seed)
    scale = inst.costs.max_abs
    if scale == 0.0:
        scale = 1.0  # all-zero costs still get absolute jitter in [0, eta)
    jitter = rng.random(inst.costs.c.shape) * (eta * scale)
    return Instance(CostMatrix(inst.costs.c + jitter))


def genericity_check(
    inst: Instance,
    tol: float = DEFAULT_GENERICITY_TOL,
    full: bool = False,
    sample_budget: int = SAMPLE_SIZE,
    sample_seed: int = 0,
) -> GenericityReport:
    """Scan quadruples (i<j, k<l) for near-ties |c_ik + c_jl - c_il - c_jk| <= tol*max|c|.

    The full scan sorts the row differences c_i - c_j per source pair, so it
    costs O(m^2 n log n) rather than O(m^2 n^2).  When the nominal quadruple
    count m^2 n^2 / 4 exceeds the budget and ``full`` is not set, a seeded
    random sample of quadruples is checked instead and the report is marked
    sampled.
    """
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    c = inst.costs.c
    m, n = inst.m, inst.n
    if m < 2 or n < 2:
        return GenericityReport(True, (), tol, False, 0)
    abs_tol = tol * max(inst.costs.max_abs, 0.0)
    nominal = (m * (m - 1) // 2) * (n * (n - 1) // 2)
    if nominal > FULL_SCAN_BUDGET and not full:
        return _genericity_sampled(c, m, n, tol, abs_tol, sample_budget, sample_seed)

    violations = []
    for i in range(m):
        for j in range(i + 1, m):
            d = c[i] - c[j]
            order = np.argsort(d, kind="stable")
            ds = d[order]
            # two-pointer sweep over sorted differences: all (k, l) with
            # |d_k - d_l| <= abs_tol appear as pairs inside a sliding window
            hi = 0
            for lo in range(n):
                if hi < lo + 1:
                    hi = lo + 1
                while hi < n and ds[hi] - ds[lo] <= abs_tol:
                    hi += 1
                for t in range(lo + 1, hi):
                    k, l = int(order[lo]), int(order[t])
                    if k > l:
                        k, l = l, k
                    violations.append((i, j, k, l))
    violations.sort()
    return GenericityReport(
        generic=not violations,
        violations=tuple(violations),
        tolerance=tol,
        sampled=False,
        quadruples_checked=nominal,
    )


def _genericity_sampled(c, m, n, tol, abs_tol, budget, seed):
    rng = np.random.default_rng(seed)
    count = int(budget)
    i = rng.integers(0, m, size=count)
    j = rng.integers(0, m - 1, size=count)
    j = np.where(j >= i, j + 1, j)
    k = rng.integers(0, n, size=count)
    l = rng.integers(0, n - 1, size=count)
    l = np.where(l >= k, l + 1, l)
    gap = np.abs(c[i, k] + c[j, l] - c[i, l] - c[j, k])
    bad = np.flatnonzero(gap <= abs_tol)
    seen = set()
    for idx in bad:
        a, b = int(i[idx]), int(j[idx])
        if a > b:
            a, b = b, a
        u, w = int(k[idx]), int(l[idx])
        if u > w:
            u, w = w, u
        seen.add((a, b, u, w))
    violations = tuple(sorted(seen))
    return GenericityReport(
        generic=not violations,
        violations=violations,
        tolerance=tol,
        sampled=True,
        quadruples_checked=count,
    )
