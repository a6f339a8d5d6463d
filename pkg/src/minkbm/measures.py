"""Area measures, the mixed volumes W_m(K, L), quermassintegrals and
intrinsic volumes."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import specfun as sf
from . import sphere3 as s3
from . import zonal as zn
from .body import Ball, ConvexBody, GridBody, Polytope, ZonalBody, as_grid_body, band_values, is_zonal_like
from .sphere3 import GridFunction
from .zonal import ZonalMeasure

ARC_POINTS = 32
NEGATIVE_DENSITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class AreaMeasure:
    """S_i(K, .) as atoms plus a multiple of Lebesgue measure, a density on
    an S^2 grid, or a zonal measure."""

    order: int
    n: int
    dirs: np.ndarray | None = field(default=None, repr=False)
    masses: np.ndarray | None = field(default=None, repr=False)
    lebesgue: float = 0.0
    density: GridFunction | None = field(default=None, repr=False)
    zonal: ZonalMeasure | None = field(default=None, repr=False)

    @property
    def kind(self) -> str:
        if self.zonal is not None:
            return "zonal"
        if self.density is not None:
            return "grid"
        return "discrete"

    def total_mass(self) -> float:
        if self.kind == "zonal":
            return self.zonal.total_mass()
        if self.kind == "grid":
            return self.density.integral()
        m = 0.0 if self.masses is None else float(self.masses.sum())
        return m + self.lebesgue * sf.omega(self.n)

    def moment(self) -> np.ndarray:
        """The vector integral of u dS_i(u); zero for genuine area measures."""
        if self.kind == "zonal":
            out = np.zeros(self.n)
            out[-1] = self.zonal.first_moment()
            return out
        if self.kind == "grid":
            g = self.density.grid
            return (g.weights * self.density.values) @ g.nodes
        if self.masses is None:
            return np.zeros(self.n)
        return self.masses @ self.dirs

    def integrate(self, L: ConvexBody) -> float:
        """Integral of h(L, .) against the measure."""
        if self.kind == "zonal":
            if not is_zonal_like(L):
                raise TypeError("zonal measure needs a zonal integrand")
            return zn.pair(self.zonal, _zonal_support(L))
        if self.kind == "grid":
            g = self.density.grid
            return g.integrate(self.density.values * band_values(L, g))
        total = 0.0
        if self.masses is not None and len(self.masses):
            total += float(self.masses @ L.support(self.dirs))
        if self.lebesgue:
            total += self.lebesgue * surface_integral(L)
        return total

    def sh_coeffs(self, lmax: int) -> np.ndarray:
        if self.n != 3:
            raise ValueError("spherical-harmonic coefficients need n = 3")
        if self.kind == "zonal":
            return s3.zonal_coeffs(self.zonal.coeffs(lmax))
        if self.kind == "grid":
            g = self.density.grid
            return s3.pad_coeffs(s3.sh_analysis(g, self.density.values, min(lmax, g.lmax)), lmax)
        C = np.zeros((lmax + 1, lmax + 1), dtype=complex)
        if self.masses is not None and len(self.masses):
            C += s3.sh_point_coeffs(self.dirs, self.masses, lmax)
        C[0, 0] += self.lebesgue * math.sqrt(4 * math.pi)
        return C

    def zonal_coeffs(self, kmax: int) -> np.ndarray:
        if self.kind == "zonal":
            return self.zonal.coeffs(kmax)
        if self.kind == "discrete" and self.masses is None:
            out = np.zeros(kmax + 1)
            out[0] = self.lebesgue * sf.omega(self.n)
            return out
        raise TypeError("measure is not zonal")

    def scaled(self, c: float) -> "AreaMeasure":
        return AreaMeasure(
            self.order, self.n,
            self.dirs, None if self.masses is None else c * self.masses,
            c * self.lebesgue,
            None if self.density is None else GridFunction(self.density.grid, c * self.density.values),
            None if self.zonal is None else self.zonal.scaled(c),
        )


def _zonal_support(L: ConvexBody):
    if isinstance(L, ZonalBody):
        return L.h
    return lambda t: L.radius + L.center[-1] * np.asarray(t)


def surface_integral(L: ConvexBody) -> float:
    """Integral of h(L, u) du over the sphere."""
    if isinstance(L, Ball):
        return sf.omega(L.n) * L.radius
    if isinstance(L, ZonalBody):
        return sf.omega(L.n - 1) * L.quad.integrate(L.node_values)
    if isinstance(L, GridBody):
        return float(np.real(L.coeffs[0, 0])) * math.sqrt(4 * math.pi)
    # polytope: half the sum of edge length times exterior angle, plus the ball part
    total = 0.0
    if len(L.vertices) >= 4:
        for ln, a, b in L.edges():
            total += 0.5 * ln * math.acos(float(np.clip(a @ b, -1, 1)))
    return total + 4 * math.pi * L.inflate


def _arc_atoms(P: Polytope, points: int = ARC_POINTS):
    """Discretized S_1 of an unsmoothed polytope: half the edge length times
    arc length on each edge's normal arc."""
    x, w = special.roots_legendre(points)
    x, w = 0.5 * (x + 1), 0.5 * w
    dirs, masses = [], []
    for ln, a, b in P.edges():
        ang = math.acos(float(np.clip(a @ b, -1, 1)))
        perp = b - (a @ b) * a
        perp /= np.linalg.norm(perp)
        th = ang * x
        dirs.append(np.outer(np.cos(th), a) + np.outer(np.sin(th), perp))
        masses.append(0.5 * ln * ang * w)
    return np.concatenate(dirs), np.concatenate(masses)


def area_top_polytope(P: Polytope) -> AreaMeasure:
    """S_2 of the polytope itself (ignoring inflation): one atom per facet."""
    normals, areas = P.facets()
    return AreaMeasure(2, 3, normals, areas)


def _polytope_measure(P: Polytope, i: int) -> AreaMeasure:
    eps = P.inflate
    if i == 0:
        return AreaMeasure(0, 3, lebesgue=1.0)
    if eps == 0 and i == 1:
        raise ValueError("lower-order measures unsupported for polytopes")
    parts_d, parts_m = [], []
    if i == 2:
        nrm, area = P.facets()
        parts_d.append(nrm)
        parts_m.append(area)
    if eps > 0:
        d, m = _arc_atoms(P)
        parts_d.append(d)
        parts_m.append(m * (i * eps ** (i - 1)))  # binom(i, 1) eps^{i-1} S_1(P)
    return AreaMeasure(i, 3, np.concatenate(parts_d), np.concatenate(parts_m), lebesgue=eps**i)


def elementary_grid_density(K: GridBody, i: int) -> GridFunction:
    a11, a12, a22 = s3.support_hessian(K.grid, K.coeffs)
    if i == 1:
        s = 0.5 * (a11 + a22)
    elif i == 2:
        s = a11 * a22 - a12 * a12
    else:
        s = np.ones(K.grid.size)
    return GridFunction(K.grid, s)


def area_measure(K: ConvexBody, i: int, kmax: int | None = None) -> AreaMeasure:
    n = K.n
    if not 0 <= i <= n - 1:
        raise ValueError(f"order must lie in 0..{n - 1}")
    if isinstance(K, Ball):
        return AreaMeasure(i, n, lebesgue=K.radius**i)
    if i == 0:
        return AreaMeasure(0, n, lebesgue=1.0)
    if isinstance(K, Polytope):
        return _polytope_measure(K, i)
    if isinstance(K, GridBody):
        return AreaMeasure(i, 3, density=elementary_grid_density(K, i))
    if isinstance(K, ZonalBody):
        q = K.quad
        vals = zn.elementary_density(K.profile, i, q.nodes)
        dens = zn.analyze(vals, n, max(K.kmax, kmax or 0), q)
        return AreaMeasure(i, n, zonal=ZonalMeasure(n, dens))
    raise TypeError(f"unsupported body {type(K).__name__}")


def s1_from_support(K: ConvexBody) -> AreaMeasure:
    """S_1 as the box operator h + (Laplacian h)/(n-1) applied to h(K, .)."""
    if isinstance(K, Ball):
        return AreaMeasure(1, K.n, lebesgue=K.radius)
    if isinstance(K, GridBody):
        l = np.arange(K.lmax + 1)
        C = s3.degree_multiply(K.coeffs, 1 - l * (l + 1) / 2.0)
        dens = s3.sh_synthesis(K.grid, C)
    elif isinstance(K, ZonalBody):
        prof = zn.box_n(K.profile.with_coeffs(K.full_coeffs()))
        dens = prof.samples
    else:
        raise TypeError("needs a grid or zonal body")
    if dens.min() < -NEGATIVE_DENSITY_TOL * np.abs(dens).max():
        warnings.warn("input not convex at resolution", RuntimeWarning, stacklevel=2)
    if isinstance(K, GridBody):
        return AreaMeasure(1, 3, density=GridFunction(K.grid, dens))
    return AreaMeasure(1, K.n, zonal=ZonalMeasure(K.n, prof))


def _measure_for(K: ConvexBody, L: ConvexBody, i: int) -> AreaMeasure:
    S = area_measure(K, i)
    if S.kind == "zonal" and not is_zonal_like(L):
        S = area_measure(as_grid_body(K, L.grid if isinstance(L, GridBody) else None), i)
    return S


def mixed_w(K: ConvexBody, L: ConvexBody, i: int) -> float:
    """W_{n-1-i}(K, L) = (1/n) times the integral of h(L, .) against S_i(K, .)."""
    if K.n != L.n:
        raise ValueError("dimension mismatch")
    return _measure_for(K, L, i).integrate(L) / K.n


def quermassintegral(K: ConvexBody, m: int) -> float:
    n = K.n
    if not 0 <= m <= n:
        raise ValueError(f"index must lie in 0..{n}")
    if m == n:
        return sf.kappa(n)
    if isinstance(K, Polytope) and K.inflate == 0 and 0 < n - 1 - m < n - 1:
        # W_m(K) = V(K[n-m], B[m]) also equals the total mass of S_{n-m}(K) over n
        return area_measure(K, n - m).total_mass() / n
    return mixed_w(K, K, n - 1 - m)


def intrinsic_volume(K: ConvexBody, i: int) -> float:
    n = K.n
    return math.comb(n, i) * quermassintegral(K, n - i) / sf.kappa(n - i)
