"""Random and named convex bodies for the verification suite."""

from __future__ import annotations

import numpy as np

from .. import body as bd
from .. import sphere3 as s3
from .. import zonal as zn
from ..body import Ball, GridBody, Polytope, ZonalBody

MAX_TRIES = 200


def cube(edge: float = 1.0, inflate: float = 0.0) -> Polytope:
    return bd.from_spec({"type": "cube", "edge": edge, "inflate": inflate})


def ellipsoid(axes, grid=None, lmax: int | None = None) -> GridBody:
    """Origin-centred ellipsoid in R^3 with the given semi-axes."""
    grid = grid or bd.default_grid()
    a = np.asarray(axes, dtype=float)
    h = np.sqrt((grid.nodes**2) @ (a**2))
    return GridBody.from_values(grid, h, lmax if lmax is not None else min(grid.lmax, bd.DEFAULT_KMAX),
                                keep_samples=False)


def spheroid(n: int, equatorial: float, polar: float, kmax: int = bd.DEFAULT_KMAX) -> ZonalBody:
    """Ellipsoid of revolution about the last axis in R^n."""
    f = lambda t: np.sqrt(equatorial**2 * (1 - t**2) + polar**2 * t**2)  # noqa: E731
    return ZonalBody(n, zn.analyze(f, n, kmax))


def _grid_convex(C: np.ndarray, grid, floor: float) -> bool:
    a11, a12, a22 = s3.support_hessian(grid, C)
    tr, det = a11 + a22, a11 * a22 - a12 * a12
    lam_min = 0.5 * (tr - np.sqrt(np.maximum(tr * tr - 4 * det, 0.0)))
    return bool(lam_min.min() > floor)


def random_harmonic_body(rng: np.random.Generator, grid=None, lmax: int | None = None,
                         degree: int = 6, amplitude: float = 0.15, floor: float = 0.1) -> GridBody:
    """Unit ball plus random low-degree harmonics, accepted only if every
    principal radius stays above ``floor``."""
    grid = grid or bd.default_grid()
    lmax = lmax if lmax is not None else min(grid.lmax, bd.DEFAULT_KMAX)
    for _ in range(MAX_TRIES):
        C = np.zeros((lmax + 1, lmax + 1), dtype=complex)
        C[0, 0] = np.sqrt(4 * np.pi)
        for l in range(2, degree + 1):
            sd = amplitude * np.sqrt(4 * np.pi / (2 * l + 1)) / l**2
            C[l, 0] = sd * rng.normal()
            m = np.arange(1, l + 1)
            C[l, m] = sd * (rng.normal(size=l) + 1j * rng.normal(size=l)) / np.sqrt(2)
        if _grid_convex(C, grid, floor):
            return GridBody(grid, C)
    raise RuntimeError("no convex sample found")


def random_hull(rng: np.random.Generator, points: int = 12, radius: float = 1.0,
                inflate: float | None = 0.1) -> Polytope:
    """Hull of uniform points in a ball, plus inflate * B."""
    for _ in range(MAX_TRIES):
        d = rng.normal(size=(points, 3))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        x = radius * d * rng.random((points, 1)) ** (1 / 3)
        try:
            P = Polytope(x - x.mean(0))
            P.hull
        except ValueError:
            continue
        if P.support(np.vstack([np.eye(3), -np.eye(3)])).min() < 0.2 * radius:
            continue  # keep the origin well inside
        eps = 0.05 * P.diameter if inflate is None else inflate
        return Polytope(P.vertices[P.hull.vertices], eps)
    raise RuntimeError("no usable hull found")


def zonal_convex(K: ZonalBody, floor: float) -> bool:
    t = np.concatenate([np.linspace(-1, 1, 201), K.quad.nodes])
    rm, rr = zn.principal_radii(K.profile, t)
    return bool(min(rm.min(), rr.min()) > floor)


def random_zonal(rng: np.random.Generator, n: int = 5, kmax: int = bd.DEFAULT_KMAX,
                 degree: int = 4, amplitude: float = 0.2, floor: float = 0.2,
                 symmetric: bool = False) -> ZonalBody:
    """Body of revolution with h = 1 + sum of small Legendre terms of degree >= 2."""
    for _ in range(MAX_TRIES):
        b = amplitude * rng.normal(size=degree - 1) / np.arange(2, degree + 1)
        if symmetric:
            b[1::2] = 0.0
        radius = 0.6 + 0.8 * rng.random()

        def f(t, b=b, radius=radius):
            return radius * (1 + sum(bk * zn.synthesize(n, np.eye(k + 1)[k], t) for k, bk in enumerate(b, 2)))

        K = ZonalBody(n, zn.analyze(f, n, kmax), float(0.1 * rng.normal()))
        if zonal_convex(K, floor * radius):
            return K
    raise RuntimeError("no convex zonal sample found")


def _stretch(size: float, n: int) -> np.ndarray:
    s = np.ones(n)
    s[0], s[-1] = 1 + size, 1 - size
    return s


def perturb(K, rng: np.random.Generator, size: float = 0.05):
    """Image of K under a volume-neutral-ish linear stretch with principal
    factors 1 + size and 1 - size (randomly rotated in R^3, about the axis
    for bodies of revolution)."""
    if isinstance(K, Ball):
        K = bd.as_zonal(K) if K.n != 3 else bd.as_grid_body(K)
    s = _stretch(size, K.n)
    if isinstance(K, ZonalBody):
        s = s[[0, -1]]  # equatorial, polar

        def h(t):
            w = np.sqrt(s[0] ** 2 * (1 - t * t) + s[1] ** 2 * t * t)
            return w * K.h(np.clip(s[1] * t / w, -1, 1))
        return ZonalBody(K.n, zn.analyze(h, K.n, K.kmax, K.quad))
    R = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    A = R @ np.diag(s) @ R.T
    if isinstance(K, Polytope):
        return Polytope(K.vertices @ A.T, K.inflate)
    # h_{AK}(u) = h_K(A^T u)
    v = K.grid.nodes @ A
    w = np.linalg.norm(v, axis=1)
    return GridBody.from_values(K.grid, w * K.support(v / w[:, None]), K.lmax, keep_samples=False)


def shrink_inside(L, rng: np.random.Generator, factor: float = 0.8):
    """A body contained in L: a homothetic copy about an interior point (for
    polytopes, the hull of a vertex subset with smaller inflation)."""
    if isinstance(L, Polytope) and len(L.vertices) > 5:
        keep = rng.permutation(len(L.vertices))[: max(4, len(L.vertices) - 3)]
        try:
            K = Polytope(L.vertices[keep], factor * L.inflate)
            K.hull
            return K
        except ValueError:
            pass
    return bd.scale(L, factor)
