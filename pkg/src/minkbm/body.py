"""Convex bodies by support function, and the Minkowski, L_p and Orlicz
combinations of them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Union

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import specfun as sf
from . import sphere3 as s3
from . import zonal as zn
from .sphere3 import GridFunction, SphereGrid
from .zonal import ZonalProfile

DEFAULT_GRID = (48, 96)
DEFAULT_KMAX = 32


def default_grid() -> SphereGrid:
    return s3.make_grid(*DEFAULT_GRID)


def _unit_rows(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return u.reshape(-1, u.shape[-1])


# ------------------------------------------------------------------ bodies


@dataclass(frozen=True, eq=False)
class Polytope:
    """conv(vertices) + inflate * B in R^3."""

    vertices: np.ndarray
    inflate: float = 0.0

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 3)
        if len(v) == 0:
            raise ValueError("polytope needs at least one vertex")
        if self.inflate < 0:
            raise ValueError("inflation radius must be nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    n = 3

    def support(self, u) -> np.ndarray:
        u = _unit_rows(u)
        return (u @ self.vertices.T).max(axis=1) + self.inflate * np.linalg.norm(u, axis=1)

    @cached_property
    def hull(self) -> ConvexHull:
        try:
            hull = ConvexHull(self.vertices)
        except (QhullError, ValueError) as exc:
            raise ValueError("degenerate polytope") from exc
        if hull.volume <= 1e-12 * max(1.0, np.ptp(self.vertices, axis=0).max()) ** 3:
            raise ValueError("degenerate polytope")
        return hull

    @cached_property
    def _facet_groups(self):
        hull = self.hull
        eq = hull.equations
        groups = -np.ones(len(eq), dtype=int)
        reps: list[int] = []
        for a in range(len(eq)):
            for g, b in enumerate(reps):
                if np.allclose(eq[a], eq[b], atol=1e-9):
                    groups[a] = g
                    break
            else:
                groups[a] = len(reps)
                reps.append(a)
        return groups, eq[reps, :3]

    def facets(self) -> tuple[np.ndarray, np.ndarray]:
        """(outer unit normals, areas) of the facets of the unsmoothed polytope."""
        hull = self.hull
        groups, normals = self._facet_groups
        pts = self.vertices
        areas = np.zeros(len(normals))
        for s, g in zip(hull.simplices, groups):
            a, b, c = pts[s]
            areas[g] += 0.5 * np.linalg.norm(np.cross(b - a, c - a))
        return normals.copy(), areas

    def edges(self) -> list[tuple[float, np.ndarray, np.ndarray]]:
        """(length, normal of one adjacent facet, normal of the other) per edge."""
        hull = self.hull
        groups, normals = self._facet_groups
        out = {}
        for i, (simp, nbrs) in enumerate(zip(hull.simplices, hull.neighbors)):
            for opp, j in enumerate(nbrs):
                gi, gj = groups[i], groups[j]
                if gi == gj:
                    continue
                ends = tuple(sorted(np.delete(simp, opp)))
                key = (min(gi, gj), max(gi, gj), ends)
                if key not in out:
                    p, q = self.vertices[list(ends)]
                    out[key] = (float(np.linalg.norm(p - q)), normals[gi], normals[gj])
        merged: dict[tuple[int, int], list] = {}
        for (gi, gj, _), (ln, a, b) in out.items():
            if (gi, gj) in merged:
                merged[(gi, gj)][0] += ln
            else:
                merged[(gi, gj)] = [ln, a, b]
        return [(ln, a, b) for ln, a, b in merged.values()]

    @property
    def diameter(self) -> float:
        v = self.vertices
        d = np.sqrt(((v[:, None, :] - v[None]) ** 2).sum(-1)).max() if len(v) > 1 else 0.0
        return float(d + 2 * self.inflate)


@dataclass(frozen=True, eq=False)
class Ball:
    n: int
    radius: float = 1.0
    center: np.ndarray | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        c = np.zeros(self.n) if self.center is None else np.array(self.center, dtype=float)
        if c.shape != (self.n,):
            raise ValueError("center has wrong dimension")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)

    def support(self, u) -> np.ndarray:
        u = _unit_rows(u)
        return self.radius * np.linalg.norm(u, axis=1) + u @ self.center

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True, eq=False)
class GridBody:
    """Body in R^3 given by a band-limited support function on a grid.

    ``coeffs`` (spherical-harmonic coefficients) carry the geometry used for
    curvature and mixed volumes.  ``samples``, when present, are exact node
    values of a support function that is not band-limited (e.g. a pointwise
    combination); pointwise comparisons use them.
    """

    grid: SphereGrid
    coeffs: np.ndarray = field(repr=False)
    samples: np.ndarray | None = field(default=None, repr=False)

    n = 3

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.samples is not None:
            s = np.array(self.samples, dtype=float).ravel()
            if s.shape != (self.grid.size,):
                raise ValueError("samples do not match grid")
            s.setflags(write=False)
            object.__setattr__(self, "samples", s)

    @classmethod
    def from_values(cls, grid: SphereGrid, values, lmax: int | None = None, keep_samples: bool = True):
        lmax = min(grid.lmax, DEFAULT_KMAX) if lmax is None else lmax
        values = np.asarray(values, dtype=float).ravel()
        return cls(grid, s3.sh_analysis(grid, values, lmax), values if keep_samples else None)

    @property
    def lmax(self) -> int:
        return self.coeffs.shape[0] - 1

    @cached_property
    def band_values(self) -> np.ndarray:
        v = s3.sh_synthesis(self.grid, self.coeffs)
        v.setflags(write=False)
        return v

    @property
    def values(self) -> np.ndarray:
        return self.band_values if self.samples is None else self.samples

    @property
    def h(self) -> GridFunction:
        return GridFunction(self.grid, self.values)

    def support(self, u) -> np.ndarray:
        """Off-grid values come from the harmonic expansion (band-limited interpolation)."""
        u = _unit_rows(u)
        return s3.sh_evaluate(self.coeffs, u) * np.linalg.norm(u, axis=1)

    @property
    def diameter(self) -> float:
        v = self.values
        # width in direction u is h(u) + h(-u); the grid is symmetric under u -> -u
        anti = _antipodal_index(self.grid)
        return float(np.max(v + v[anti]))


def _antipodal_index(grid: SphereGrid) -> np.ndarray:
    Q, P = grid.polar, grid.azimuth
    q = np.arange(Q)[:, None]
    p = np.arange(P)[None, :]
    return ((Q - 1 - q) * P + (p + P // 2) % P).ravel()


@dataclass(frozen=True, eq=False)
class ZonalBody:
    """Body of revolution about e_n with h(u) = profile(u_n) + offset * u_n."""

    n: int
    profile: ZonalProfile
    offset: float = 0.0

    def __post_init__(self):
        if self.profile.n != self.n:
            raise ValueError("profile dimension mismatch")

    @property
    def kmax(self) -> int:
        return self.profile.kmax

    @property
    def quad(self):
        return self.profile.quad

    def h(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.profile(t) + self.offset * t

    @property
    def node_values(self) -> np.ndarray:
        return self.profile.samples + self.offset * self.quad.nodes

    def full_coeffs(self) -> np.ndarray:
        c = np.array(self.profile.coeffs)
        if self.kmax >= 1:
            c[1] += self.offset * sf.omega(self.n) / self.n
        return c

    def support(self, u) -> np.ndarray:
        u = _unit_rows(u)
        if u.shape[1] != self.n:
            raise ValueError("direction has wrong dimension")
        r = np.linalg.norm(u, axis=1)
        return r * self.profile(np.clip(u[:, -1] / r, -1, 1)) + self.offset * u[:, -1]

    @property
    def diameter(self) -> float:
        t = np.linspace(-1, 1, 401)
        return float(np.max(self.h(t) + self.h(-t)))


ConvexBody = Union[Polytope, Ball, GridBody, ZonalBody]


def support(K: ConvexBody, u) -> np.ndarray:
    vals = K.support(u)
    return float(vals[0]) if np.ndim(u) == 1 else vals


def dimension(K: ConvexBody) -> int:
    return K.n


# ------------------------------------------------------------ conversions


def zonal_profile_of_ball(B: Ball, kmax: int = DEFAULT_KMAX, quad=None) -> ZonalBody:
    if np.any(np.abs(B.center[:-1]) > 1e-14):
        raise ValueError("ball center off the symmetry axis")
    prof = zn.analyze(lambda t: np.full_like(t, B.radius), B.n, kmax, quad)
    return ZonalBody(B.n, prof.with_coeffs(prof.coeffs), float(B.center[-1]))


def as_zonal(K: ConvexBody, kmax: int = DEFAULT_KMAX, quad=None) -> ZonalBody:
    if isinstance(K, ZonalBody):
        return K
    if isinstance(K, Ball):
        return zonal_profile_of_ball(K, kmax, quad)
    raise TypeError(f"{type(K).__name__} is not a body of revolution")


def is_zonal_like(K: ConvexBody) -> bool:
    return isinstance(K, ZonalBody) or (isinstance(K, Ball) and np.all(np.abs(K.center[:-1]) < 1e-14))


def as_grid_body(K: ConvexBody, grid: SphereGrid | None = None, lmax: int | None = None) -> GridBody:
    """Spherical-harmonic representation of a body in R^3."""
    if K.n != 3:
        raise ValueError("grid representation needs n = 3")
    grid = grid or (K.grid if isinstance(K, GridBody) else default_grid())
    lmax = min(grid.lmax, DEFAULT_KMAX) if lmax is None else lmax
    if isinstance(K, GridBody):
        if K.grid is grid and K.lmax == lmax:
            return K
        C = s3.pad_coeffs(K.coeffs, lmax)
        samples = K.samples if (K.samples is not None and K.grid is grid) else None
        return GridBody(grid, C, samples)
    if isinstance(K, Ball):
        C = s3.pad_coeffs(s3.linear_coeffs(K.center), lmax)
        C[0, 0] = K.radius * math.sqrt(4 * math.pi)
        return GridBody(grid, C)
    if isinstance(K, ZonalBody):
        C = s3.pad_coeffs(s3.zonal_coeffs(K.full_coeffs()), lmax)
        return GridBody(grid, C)
    return GridBody.from_values(grid, K.support(grid.nodes), lmax)


def grid_values(K: ConvexBody, grid: SphereGrid) -> np.ndarray:
    """Exact support values at the grid nodes (raw samples for grid bodies)."""
    if isinstance(K, GridBody) and K.grid is grid:
        return K.values
    return K.support(grid.nodes)


def band_values(K: ConvexBody, grid: SphereGrid) -> np.ndarray:
    """Support values consistent with the curvature representation."""
    if isinstance(K, GridBody):
        return K.band_values if K.grid is grid else K.support(grid.nodes)
    return K.support(grid.nodes)


# ------------------------------------------------------------ combinations


def _check_dims(K: ConvexBody, L: ConvexBody) -> None:
    if K.n != L.n:
        raise ValueError(f"dimension mismatch: {K.n} vs {L.n}")


def _pad(c: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros(k + 1)
    out[: min(k, len(c) - 1) + 1] = c[: k + 1]
    return out


def _zonal_pair(K: ConvexBody, L: ConvexBody):
    kmax = max(getattr(K, "kmax", 0), getattr(L, "kmax", 0)) or DEFAULT_KMAX
    quad = None
    for M in (K, L):
        if isinstance(M, ZonalBody) and M.kmax == kmax:
            quad = M.quad
            break
    Kz, Lz = as_zonal(K, kmax, quad), as_zonal(L, kmax, quad)
    return Kz, Lz, kmax, (quad or Kz.quad)


def minkowski_combine(K: ConvexBody, L: ConvexBody, s: float = 1.0, t: float = 1.0) -> ConvexBody:
    _check_dims(K, L)
    if s < 0 or t < 0:
        raise ValueError("weights must be nonnegative")
    if isinstance(K, Ball) and isinstance(L, Ball):
        return Ball(K.n, s * K.radius + t * L.radius, s * K.center + t * L.center)
    if isinstance(K, Polytope) and isinstance(L, Ball):
        return Polytope(s * K.vertices + t * L.center, s * K.inflate + t * L.radius)
    if isinstance(L, Polytope) and isinstance(K, Ball):
        return minkowski_combine(L, K, t, s)
    if isinstance(K, Polytope) and isinstance(L, Polytope):
        if len(L.vertices) == 1:
            return Polytope(s * K.vertices + t * L.vertices[0], s * K.inflate + t * L.inflate)
        if len(K.vertices) == 1:
            return minkowski_combine(L, K, t, s)
        # exact: the hull of all pairwise vertex sums
        V = (s * K.vertices)[:, None, :] + (t * L.vertices)[None, :, :]
        V = V.reshape(-1, K.n)
        return Polytope(V[ConvexHull(V).vertices], s * K.inflate + t * L.inflate)
    if is_zonal_like(K) and is_zonal_like(L) and (K.n != 3 or isinstance(K, ZonalBody) or isinstance(L, ZonalBody)):
        Kz, Lz, kmax, quad = _zonal_pair(K, L)
        c = s * _pad(Kz.profile.coeffs, kmax) + t * _pad(Lz.profile.coeffs, kmax)
        return ZonalBody(K.n, ZonalProfile(K.n, c, quad), s * Kz.offset + t * Lz.offset)
    if K.n != 3:
        raise ValueError("non-zonal bodies are only supported in R^3")
    grid = next((M.grid for M in (K, L) if isinstance(M, GridBody)), default_grid())
    lmax = max((M.lmax for M in (K, L) if isinstance(M, GridBody)), default=min(grid.lmax, DEFAULT_KMAX))
    if isinstance(K, Polytope) or isinstance(L, Polytope):
        vals = s * grid_values(K, grid) + t * grid_values(L, grid)
        return GridBody.from_values(grid, vals, lmax)
    Kg, Lg = as_grid_body(K, grid, lmax), as_grid_body(L, grid, lmax)
    samples = None
    if Kg.samples is not None or Lg.samples is not None:
        samples = s * Kg.values + t * Lg.values
    return GridBody(grid, s * Kg.coeffs + t * Lg.coeffs, samples)


def translate(K: ConvexBody, x) -> ConvexBody:
    x = np.asarray(x, dtype=float)
    if x.shape != (K.n,):
        raise ValueError("translation vector has wrong dimension")
    if isinstance(K, Ball):
        return Ball(K.n, K.radius, K.center + x)
    if isinstance(K, Polytope):
        return Polytope(K.vertices + x, K.inflate)
    if isinstance(K, GridBody):
        C = K.coeffs + s3.pad_coeffs(s3.linear_coeffs(x), K.lmax)
        samples = None if K.samples is None else K.samples + K.grid.nodes @ x
        return GridBody(K.grid, C, samples)
    if np.any(np.abs(x[:-1]) > 0):
        raise ValueError("zonal bodies translate only along the axis")
    return ZonalBody(K.n, K.profile, K.offset + float(x[-1]))


def scale(K: ConvexBody, c: float) -> ConvexBody:
    if c < 0:
        raise ValueError("scale must be nonnegative")
    if isinstance(K, Ball):
        return Ball(K.n, c * K.radius, c * K.center)
    if isinstance(K, Polytope):
        return Polytope(c * K.vertices, c * K.inflate)
    if isinstance(K, GridBody):
        return GridBody(K.grid, c * K.coeffs, None if K.samples is None else c * K.samples)
    return ZonalBody(K.n, ZonalProfile(K.n, c * K.profile.coeffs, K.quad, c * K.profile.samples), c * K.offset)


def rotate(K: ConvexBody, R) -> ConvexBody:
    R = np.asarray(R, dtype=float)
    if isinstance(K, Ball):
        return Ball(K.n, K.radius, R @ K.center)
    if isinstance(K, Polytope):
        return Polytope(K.vertices @ R.T, K.inflate)
    raise TypeError("rotation implemented for polytopes and balls")


def smooth(P: Polytope, eps: float | None = None) -> Polytope:
    """P + eps B, with eps defaulting to 5% of the diameter."""
    eps = 0.05 * P.diameter if eps is None else eps
    return Polytope(P.vertices, P.inflate + eps)


# ------------------------------------------------------------ Orlicz and L_p


@dataclass(frozen=True, eq=False)
class OrliczFunction:
    """Convex increasing phi on [0, inf) with phi(0) = 0 and phi(1) = 1."""

    func: Callable[[np.ndarray], np.ndarray]
    strict: bool = False
    tag: str = "custom"
    p: float | None = None

    def __post_init__(self):
        f = self.func
        if abs(float(f(np.array([0.0]))[0])) > 1e-12 or abs(float(f(np.array([1.0]))[0]) - 1) > 1e-12:
            raise ValueError("Orlicz function needs phi(0) = 0 and phi(1) = 1")
        t = np.linspace(0, 4, 401)
        v = f(t)
        if np.any(np.diff(v) < -1e-12):
            raise ValueError("Orlicz function must be increasing")
        if np.any(v[:-2] + v[2:] - 2 * v[1:-1] < -1e-9 * (1 + np.abs(v[1:-1]))):
            raise ValueError("Orlicz function must be convex")

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    @classmethod
    def power(cls, p: float) -> "OrliczFunction":
        if p < 1:
            raise ValueError("power must be >= 1")
        return cls(lambda t, p=p: np.power(t, p), strict=p > 1, tag=f"t^{p:g}", p=float(p))

    @classmethod
    def mix(cls, parts: list["OrliczFunction"], weights) -> "OrliczFunction":
        w = np.asarray(weights, dtype=float)
        w = w / w.sum()
        strict = any(q.strict and wi > 0 for q, wi in zip(parts, w))
        fn = lambda t: sum(wi * q(t) for q, wi in zip(parts, w))  # noqa: E731
        return cls(fn, strict=strict, tag="mix(" + ",".join(q.tag for q in parts) + ")")

    @classmethod
    def max_affine(cls, knots) -> "OrliczFunction":
        """max(t, a + b t) type pieces; strictly convex never, convex always.

        ``knots`` are (slope, intercept) pairs whose pieces lie below t at
        t = 0 and t = 1, so the normalization is kept by the identity piece.
        """
        knots = [(1.0, 0.0)] + list(knots)

        def fn(t):
            return np.maximum(np.maximum.reduce([b * t + a for b, a in knots]), 0.0)

        return cls(fn, strict=False, tag="max_affine")


def _pointwise_pair(K: ConvexBody, L: ConvexBody):
    """Node values of both bodies on a common discretization."""
    _check_dims(K, L)
    if is_zonal_like(K) and is_zonal_like(L) and (K.n != 3 or isinstance(K, ZonalBody) or isinstance(L, ZonalBody)):
        Kz, Lz, kmax, quad = _zonal_pair(K, L)
        hk = Kz.node_values if Kz.quad is quad else Kz.h(quad.nodes)
        hl = Lz.node_values if Lz.quad is quad else Lz.h(quad.nodes)
        return ("zonal", (K.n, quad, kmax)), hk, hl
    grid = next((M.grid for M in (K, L) if isinstance(M, GridBody)), default_grid())
    lmax = max((M.lmax for M in (K, L) if isinstance(M, GridBody)), default=min(grid.lmax, DEFAULT_KMAX))
    return ("grid", (grid, lmax)), grid_values(K, grid), grid_values(L, grid)


def _from_pointwise(kind, values) -> ConvexBody:
    tag, data = kind
    if tag == "zonal":
        n, quad, kmax = data
        return ZonalBody(n, zn.analyze(values, n, kmax, quad))
    grid, lmax = data
    return GridBody.from_values(grid, values, lmax)


def _origin_check(*hs, tol: float = 1e-9):
    scale_ = max(float(np.max(np.abs(h))) for h in hs) or 1.0
    for h in hs:
        if np.min(h) < -tol * scale_:
            raise ValueError("body does not contain origin")
    return [np.clip(h, 0.0, None) for h in hs]


def orlicz_solve(hk, hl, phi: OrliczFunction, lam: float, iterations: int = 64) -> np.ndarray:
    """Pointwise smallest alpha with (1-lam) phi(hk/alpha) + lam phi(hl/alpha) <= 1.

    Bisection runs on s = alpha / max(hk, hl), bracketed by [min(lam, 1-lam), 1]:
    the upper end is feasible since phi(1) = 1, and convexity gives alpha at
    least the linear combination, which bounds s from below.
    """
    hk, hl = np.asarray(hk, dtype=float), np.asarray(hl, dtype=float)
    hi = np.maximum(hk, hl)
    live = hi > 0
    x, y = hk[live] / hi[live], hl[live] / hi[live]
    lo = np.full(x.shape, min(lam, 1 - lam))
    up = np.ones_like(x)
    for _ in range(iterations):
        mid = 0.5 * (lo + up)
        feas = (1 - lam) * phi(x / mid) + lam * phi(y / mid) <= 1.0
        up = np.where(feas, mid, up)
        lo = np.where(feas, lo, mid)
    out = np.zeros_like(hi)
    out[live] = up * hi[live]
    return out


def orlicz_combine(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, lam: float) -> ConvexBody:
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    kind, hk, hl = _pointwise_pair(K, L)
    hk, hl = _origin_check(hk, hl)
    return _from_pointwise(kind, orlicz_solve(hk, hl, phi, lam))


def lp_combine(K: ConvexBody, L: ConvexBody, p: float, s: float = 1.0, t: float = 1.0) -> ConvexBody:
    if p < 1:
        raise ValueError("p must be >= 1")
    if p == 1:
        return minkowski_combine(K, L, s, t)
    kind, hk, hl = _pointwise_pair(K, L)
    hk, hl = _origin_check(hk, hl)
    if math.isinf(p):
        if s != 1 or t != 1:
            raise ValueError("L_infinity combination takes s = t = 1")
        return _from_pointwise(kind, np.maximum(hk, hl))
    return _from_pointwise(kind, (s * hk**p + t * hl**p) ** (1.0 / p))


# ------------------------------------------------------------ point functionals


def steiner_point(K: ConvexBody, grid: SphereGrid | None = None) -> np.ndarray:
    """(1/kappa_n) times the integral of h(K, u) u over the sphere."""
    n = K.n
    if isinstance(K, Ball):
        return np.array(K.center)
    if isinstance(K, ZonalBody):
        q = K.quad
        val = sf.omega(n - 1) * q.integrate(K.node_values * q.nodes)
        out = np.zeros(n)
        out[-1] = val / sf.kappa(n)
        return out
    grid = grid or (K.grid if isinstance(K, GridBody) else default_grid())
    h = grid_values(K, grid)
    return (grid.weights * h) @ grid.nodes / sf.kappa(3)


def _directions(K: ConvexBody, L: ConvexBody, grid=None):
    if is_zonal_like(K) and is_zonal_like(L) and (K.n != 3 or isinstance(K, ZonalBody) or isinstance(L, ZonalBody)):
        Kz, Lz, _, quad = _zonal_pair(K, L)
        t = np.concatenate([quad.nodes, np.linspace(-1, 1, 201)])
        return Kz.h(t), Lz.h(t)
    grid = grid or next((M.grid for M in (K, L) if isinstance(M, GridBody)), default_grid())
    return grid_values(K, grid), grid_values(L, grid)


def contains(K: ConvexBody, L: ConvexBody, tol: float = 1e-9, grid=None) -> bool:
    """L inside K, judged by h_L <= h_K + tol on the sampled directions."""
    _check_dims(K, L)
    hk, hl = _directions(K, L, grid)
    return bool(np.all(hl <= hk + tol))


def hausdorff(K: ConvexBody, L: ConvexBody, grid=None) -> float:
    _check_dims(K, L)
    hk, hl = _directions(K, L, grid)
    return float(np.max(np.abs(hk - hl)))


def zonal_convexity_margin(K: ZonalBody, samples: int = 401) -> float:
    """Smallest principal radius of the profile, relative to the largest."""
    t = np.concatenate([np.linspace(-1, 1, samples), K.quad.nodes])
    rm, rr = zn.principal_radii(K.profile, t)
    top = max(float(np.max(np.abs(rm))), float(np.max(np.abs(rr))), 1e-300)
    return float(min(rm.min(), rr.min()) / top)


def check_convex(K: ConvexBody):
    """Support-function validity of a grid or zonal body (a sampled test)."""
    if isinstance(K, GridBody):
        return s3.is_support_function(K.h)
    if isinstance(K, ZonalBody):
        return zonal_convexity_margin(K) >= -1e-8
    return True


# ------------------------------------------------------------ JSON specs


def from_spec(spec: dict, grid: SphereGrid | None = None, kmax: int = DEFAULT_KMAX) -> ConvexBody:
    kind = spec.get("type")
    if kind == "polytope":
        return Polytope(np.asarray(spec["vertices"], dtype=float), float(spec.get("inflate", 0.0)))
    if kind == "cube":
        a = 0.5 * float(spec.get("edge", 1.0))
        v = np.array([[x, y, z] for x in (-a, a) for y in (-a, a) for z in (-a, a)])
        return Polytope(v, float(spec.get("inflate", 0.0)))
    if kind == "ball":
        n = int(spec.get("n", 3))
        return Ball(n, float(spec.get("radius", 1.0)), spec.get("center"))
    if kind == "zonal":
        n = int(spec["n"])
        prof = spec["profile"]
        if prof.get("kind", "legendre") != "legendre":
            raise ValueError("zonal profile kind must be 'legendre'")
        coeffs = np.asarray(prof["coeffs"], dtype=float)
        return ZonalBody(n, zn.band_limited(n, coeffs), float(spec.get("offset", 0.0)))
    if kind == "spheroid":
        n = int(spec.get("n", 3))
        a, c = float(spec["equatorial"]), float(spec["polar"])
        prof = zn.analyze(lambda t: np.sqrt(a * a * (1 - t * t) + c * c * t * t), n, kmax)
        return ZonalBody(n, prof, float(spec.get("offset", 0.0)))
    if kind == "ellipsoid":
        g = s3.parse_grid(spec["grid"]) if "grid" in spec else (grid or default_grid())
        ax = np.asarray(spec["axes"], dtype=float)
        return GridBody.from_values(g, np.sqrt((g.nodes**2) @ (ax**2)), min(g.lmax, kmax), keep_samples=False)
    if kind == "grid":
        g = s3.parse_grid(spec["grid"]) if "grid" in spec else (grid or default_grid())
        return GridBody.from_values(g, np.asarray(spec["h"], dtype=float), spec.get("lmax"))
    raise ValueError(f"unknown body type {kind!r}")


def to_spec(K: ConvexBody) -> dict:
    if isinstance(K, Polytope):
        return {"type": "polytope", "vertices": K.vertices.tolist(), "inflate": K.inflate}
    if isinstance(K, Ball):
        return {"type": "ball", "n": K.n, "radius": K.radius, "center": K.center.tolist()}
    if isinstance(K, ZonalBody):
        return {"type": "zonal", "n": K.n, "offset": K.offset,
                "profile": {"kind": "legendre", "coeffs": K.profile.coeffs.tolist()}}
    return {"type": "grid", "grid": K.grid.label(), "lmax": K.lmax, "h": K.values.tolist()}
