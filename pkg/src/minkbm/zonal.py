"""Zonal functions and measures on S^{n-1}: Legendre analysis and synthesis,
multiplier transforms and zonal convolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special

from . import specfun as sf
from .specfun import JacobiQuadrature, MultiplierSequence

DEGREE_ONE_TOL = 1e-8


def default_order(n: int, kmax: int) -> int:
    """Quadrature order that keeps curvature products of degree-kmax profiles exact."""
    return max(kmax + 1, ((n + 1) * kmax) // 2 + 8)


@lru_cache(maxsize=128)
def _norm_factors(n: int, kmax: int) -> np.ndarray:
    # N(n,k)/omega_n, the synthesis weights
    om = sf.omega(n)
    return np.array([sf.harmonic_dim(n, k) / om for k in range(kmax + 1)])


@dataclass(frozen=True, eq=False)
class ZonalProfile:
    """Zonal function phi(u . e) stored by its multipliers c_k = a_k^n[phi].

    ``samples`` holds values at the quadrature nodes.  For band-limited data
    they are the synthesis of ``coeffs``; a profile built from raw samples keeps
    the raw values so integrals see the exact function.
    """

    n: int
    coeffs: np.ndarray
    quad: JacobiQuadrature = field(repr=False)
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.quad.n != self.n:
            raise ValueError("quadrature dimension mismatch")
        c = np.array(self.coeffs, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        s = self.samples
        s = synthesize(self.n, c, self.quad.nodes) if s is None else np.array(s, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def kmax(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        return synthesize(self.n, self.coeffs, t)

    def derivative(self, t, order: int = 1):
        t = np.asarray(t, dtype=float)
        w = _norm_factors(self.n, self.kmax)
        out = np.zeros_like(t)
        for k in range(order, self.kmax + 1):
            if self.coeffs[k] != 0.0:
                out = out + w[k] * self.coeffs[k] * sf.legendre_derivative(self.n, k, t, order)
        return out

    def with_coeffs(self, coeffs) -> "ZonalProfile":
        return ZonalProfile(self.n, coeffs, self.quad)

    def tail_energy_ratio(self, start: int) -> float:
        """Share of the L2 energy carried by degrees >= start."""
        e = _norm_factors(self.n, self.kmax) * self.coeffs**2
        tot = e.sum()
        return float(e[start:].sum() / tot) if tot > 0 else 0.0


def synthesize(n: int, coeffs, t) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    tab = sf.legendre_table(n, len(coeffs) - 1, t)
    return np.tensordot(_norm_factors(n, len(coeffs) - 1) * coeffs, tab, axes=1)


def analyze(phi, n: int, kmax: int, quad: JacobiQuadrature | None = None) -> ZonalProfile:
    """Profile of phi (callable or samples on ``quad``) with coefficients up to kmax."""
    if quad is None:
        if not callable(phi):
            raise ValueError("samples need their quadrature")
        quad = sf.jacobi_quadrature(n, default_order(n, kmax))
    vals = np.asarray(phi(quad.nodes) if callable(phi) else phi, dtype=float)
    if vals.shape == ():
        vals = np.full(quad.order, float(vals))
    if vals.shape != quad.nodes.shape:
        raise ValueError("samples do not match quadrature nodes")
    tab = sf.legendre_table(n, kmax, quad.nodes)
    coeffs = sf.omega(n - 1) * tab @ (quad.weights * vals)
    return ZonalProfile(n, coeffs, quad, samples=vals)


def band_limited(n: int, coeffs, quad: JacobiQuadrature | None = None) -> ZonalProfile:
    coeffs = np.asarray(coeffs, dtype=float)
    if quad is None:
        quad = sf.jacobi_quadrature(n, default_order(n, len(coeffs) - 1))
    return ZonalProfile(n, coeffs, quad)


def legendre_norm_sq(n: int, k: int) -> float:
    """[P_k^n, P_k^n]_n."""
    return sf.omega(n) / (sf.harmonic_dim(n, k) * sf.omega(n - 1))


# ------------------------------------------------------------------ measures


@dataclass(frozen=True, eq=False)
class ZonalMeasure:
    """Zonal measure: a density profile and/or rings {u . e = t} of given mass."""

    n: int
    density: ZonalProfile | None = None
    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.density is not None and self.density.n != self.n:
            raise ValueError("density dimension mismatch")
        for t, _ in self.atoms:
            if abs(t) > 1 + 1e-12:
                raise ValueError("atom height outside [-1, 1]")

    def coeffs(self, kmax: int) -> np.ndarray:
        out = np.zeros(kmax + 1)
        if self.density is not None:
            m = min(kmax, self.density.kmax)
            out[: m + 1] += self.density.coeffs[: m + 1]
        for t, mass in self.atoms:
            out += mass * sf.legendre_table(self.n, kmax, float(np.clip(t, -1, 1)))
        return out

    def total_mass(self) -> float:
        return pair(self, np.ones_like)

    def first_moment(self) -> float:
        """Component of the vector moment along the pole."""
        return pair(self, lambda t: t)

    def scaled(self, c: float) -> "ZonalMeasure":
        dens = None if self.density is None else _scale_profile(self.density, c)
        return ZonalMeasure(self.n, dens, tuple((t, c * m) for t, m in self.atoms))


def _scale_profile(p: ZonalProfile, c: float) -> ZonalProfile:
    return ZonalProfile(p.n, c * p.coeffs, p.quad, samples=c * p.samples)


def uniform_measure(n: int, quad: JacobiQuadrature | None = None, mass_density: float = 1.0) -> ZonalMeasure:
    quad = quad or sf.jacobi_quadrature(n, 16)
    return ZonalMeasure(n, analyze(lambda t: np.full_like(t, mass_density), n, 0, quad))


def tau_pole(n: int, kmax: int, quad: JacobiQuadrature | None = None) -> ZonalMeasure:
    """Point mass at the pole minus its degree-one part; the convolution unit."""
    quad = quad or sf.jacobi_quadrature(n, default_order(n, kmax))
    dens = analyze(lambda t: -(n / sf.omega(n)) * t, n, kmax, quad)
    return ZonalMeasure(n, dens, ((1.0, 1.0),))


def pair(sigma: ZonalMeasure, phi) -> float:
    """Integral of phi (profile or callable) against sigma over S^{n-1}."""
    ev = phi if callable(phi) else None
    if isinstance(phi, ZonalProfile):
        if phi.n != sigma.n:
            raise ValueError("dimension mismatch")
        ev = phi
    total = 0.0
    if sigma.density is not None:
        q = sigma.density.quad
        if isinstance(phi, ZonalProfile) and phi.quad is q:
            vals = phi.samples
        else:
            vals = np.asarray(ev(q.nodes), dtype=float)
        total += sf.omega(sigma.n - 1) * q.integrate(vals * sigma.density.samples)
    for t, mass in sigma.atoms:
        total += mass * float(ev(np.array([t]))[0])
    return float(total)


def parseval_pair(sigma: ZonalMeasure, phi: ZonalProfile) -> float:
    """Coefficient-space form of pair(): sum of N(n,k)/omega_n sigma_k phi_k."""
    c = phi.coeffs
    return float(np.sum(_norm_factors(phi.n, phi.kmax) * sigma.coeffs(phi.kmax) * c))


# ------------------------------------------------------------ multipliers


def apply_multiplier(phi: ZonalProfile, m: MultiplierSequence) -> ZonalProfile:
    if m.n != phi.n:
        raise ValueError("dimension mismatch")
    if m.kmax < phi.kmax:
        raise ValueError("multiplier sequence shorter than profile")
    c = phi.coeffs * m.values[: phi.kmax + 1]
    for k in m.annihilated:
        if k <= phi.kmax:
            c[k] = 0.0
    return phi.with_coeffs(c)


def box_n(phi: ZonalProfile, n: int | None = None) -> ZonalProfile:
    n = phi.n if n is None else n
    return apply_multiplier(phi, sf.box_multipliers(n, phi.kmax))


def laplacian(phi: ZonalProfile) -> ZonalProfile:
    return apply_multiplier(phi, sf.laplacian_multipliers(phi.n, phi.kmax))


def berg_transform(phi: ZonalProfile, j: int) -> ZonalProfile:
    """F_{g_j} on S^{n-1}."""
    return apply_multiplier(phi, sf.berg_multiplier_sequence(phi.n, j, phi.kmax))


def degree_one_ratio(phi: ZonalProfile) -> float:
    nrm = np.linalg.norm(phi.coeffs)
    return float(abs(phi.coeffs[1]) / nrm) if nrm > 0 and phi.kmax >= 1 else 0.0


def box_j_inverse_transform(phi: ZonalProfile, n: int, j: int) -> ZonalProfile:
    """Inverse of F_{g_j}, defined on profiles without degree-one part."""
    if n != phi.n:
        raise ValueError("dimension mismatch")
    if degree_one_ratio(phi) >= DEGREE_ONE_TOL:
        raise ValueError("degree-1 component not annihilable")
    return apply_multiplier(phi, sf.berg_multiplier_sequence(n, j, phi.kmax).reciprocal())


# ------------------------------------------------------------ convolution


def convolve(sigma: ZonalMeasure, f: ZonalProfile) -> ZonalProfile:
    """sigma * f in coefficient space."""
    if sigma.n != f.n:
        raise ValueError("dimension mismatch")
    return f.with_coeffs(sigma.coeffs(f.kmax) * f.coeffs)


@lru_cache(maxsize=32)
def _ring_rule(n: int, order: int):
    if n == 2:
        return np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    a = 0.5 * (n - 4)
    x, w = special.roots_jacobi(order, a, a)
    return x, w / w.sum()


def ring_average(n: int, f: Callable, s, t, order: int = 64) -> np.ndarray:
    """Mean of f(u . v) over v on the ring {v . e = t}, for u . e = s.

    This is the addition formula for zonal functions reduced to one variable.
    """
    s = np.asarray(s, dtype=float)[..., None]
    x, w = _ring_rule(n, order)
    z = s * t + np.sqrt(np.clip(1 - s * s, 0, None) * max(0.0, 1 - t * t)) * x
    return np.asarray(f(np.clip(z, -1.0, 1.0))) @ w


def convolve_direct(sigma: ZonalMeasure, f: Callable, s, order: int = 64) -> np.ndarray:
    """Pointwise (sigma * f)(s) without passing through coefficients."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    for t, mass in sigma.atoms:
        out += mass * ring_average(sigma.n, f, s, float(t), order)
    if sigma.density is not None:
        q = sigma.density.quad
        wts = sf.omega(sigma.n - 1) * q.weights * sigma.density.samples
        for tm, wm in zip(q.nodes, wts):
            out += wm * ring_average(sigma.n, f, s, float(tm), order)
    return out


# ------------------------------------------------------------ curvature


def principal_radii(h: ZonalProfile, t) -> tuple[np.ndarray, np.ndarray]:
    """(meridian radius, rotational radius) of the zonal body with profile h."""
    t = np.asarray(t, dtype=float)
    h0, h1, h2 = h(t), h.derivative(t, 1), h.derivative(t, 2)
    r_rot = h0 - t * h1
    r_mer = h0 - t * h1 + (1 - t * t) * h2
    return r_mer, r_rot


def elementary_density(h: ZonalProfile, i: int, t) -> np.ndarray:
    """Normalized i-th elementary symmetric function of the principal radii."""
    n = h.n
    r_mer, r_rot = principal_radii(h, t)
    if i == 0:
        return np.ones_like(np.asarray(t, dtype=float))
    m = n - 2
    e = special.comb(m, i) * r_rot**i
    e = e + special.comb(m, i - 1) * r_mer * r_rot ** (i - 1)
    return e / special.comb(n - 1, i)
