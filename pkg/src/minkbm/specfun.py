"""Legendre and Gegenbauer polynomials in dimension-n normalization, Jacobi
quadrature, Berg functions and their Funk-Hecke multipliers."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, special

_DOMAIN_SLACK = 1e-12


def _check_domain(t: np.ndarray) -> None:
    if np.any(np.abs(t) > 1.0 + _DOMAIN_SLACK):
        raise ValueError("argument outside [-1, 1]")


def legendre_table(n: int, kmax: int, t) -> np.ndarray:
    """Rows P_0^n(t) .. P_kmax^n(t), normalized so that P_k^n(1) = 1."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    t = np.asarray(t, dtype=float)
    _check_domain(t)
    out = np.empty((kmax + 1,) + t.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = t
    for k in range(2, kmax + 1):
        den = k + n - 3
        out[k] = ((2 * k + n - 4) * t * out[k - 1] - (k - 1) * out[k - 2]) / den
    return out


def legendre_p(n: int, k: int, t):
    """P_k^n(t) by the three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    val = legendre_table(n, k, t)[k]
    return float(val) if np.ndim(val) == 0 else val


def harmonic_dim(n: int, k: int) -> int:
    """Dimension of the space of degree-k spherical harmonics on S^{n-1}."""
    if n < 2 or k < 0:
        raise ValueError("need n >= 2 and k >= 0")
    if k == 0:
        return 1
    if n == 2:
        return 2
    return (2 * k + n - 2) * math.factorial(k + n - 3) // (math.factorial(k) * math.factorial(n - 2))


def sphere_constants(m: int) -> tuple[float, float]:
    """(surface area of S^{m-1}, volume of the unit ball in R^m)."""
    if m < 0:
        raise ValueError("dimension must be nonnegative")
    half = 0.5 * m
    omega = 2.0 * math.exp(half * math.log(math.pi) - math.lgamma(half)) if m > 0 else 0.0
    kappa = math.exp(half * math.log(math.pi) - math.lgamma(half + 1.0))
    return omega, kappa


def omega(m: int) -> float:
    return sphere_constants(m)[0]


def kappa(m: int) -> float:
    return sphere_constants(m)[1]


def legendre_derivative(n: int, l: int, t, order: int = 1):
    """d^order/dt^order of P_l^n, itself a multiple of P_{l-order}^{n+2 order}."""
    if order == 0:
        return legendre_p(n, l, t)
    if order > l:
        return np.zeros_like(np.asarray(t, dtype=float)) + 0.0
    scale = 2.0**order * special.poch(n / 2.0, order)
    scale *= harmonic_dim(n + 2 * order, l - order) / harmonic_dim(n, l)
    return scale * legendre_p(n + 2 * order, l - order, t)


def gegenbauer_c(alpha: float, k: int, t):
    """C_k^alpha(t) from the generating function (1 - 2rt + r^2)^{-alpha}."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if k == 0:
        return float(prev) if prev.ndim == 0 else prev
    cur = 2.0 * alpha * t
    for m in range(2, k + 1):
        prev, cur = cur, (2.0 * (m + alpha - 1) * t * cur - (m + 2 * alpha - 2) * prev) / m
    return float(cur) if cur.ndim == 0 else cur


def gegenbauer_weighted_integral(alpha: float, m: int) -> float:
    """Closed form of the integral of (1-t^2)^alpha C_m^alpha over [-1, 1], m even."""
    if m % 2:
        return 0.0
    h = m // 2
    num = math.lgamma(m + 1) + 2 * math.lgamma(h + alpha + 1)
    den = math.lgamma(m + 2 * alpha + 2) + 2 * math.lgamma(h + 1)
    mag = alpha * 4.0 ** (alpha + 0.5) * math.exp(num - den) / ((m - 1) * (h + alpha))
    return -mag


# ---------------------------------------------------------------- quadrature


@dataclass(frozen=True)
class JacobiQuadrature:
    """Gauss rule for the weight (1 - t^2)^{(n-3)/2} on [-1, 1]."""

    n: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.nodes)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=64)
def jacobi_quadrature(n: int, order: int) -> JacobiQuadrature:
    if n < 2 or order < 1:
        raise ValueError("need n >= 2 and a positive order")
    a = 0.5 * (n - 3)
    t, w = special.roots_jacobi(order, a, a)
    t.setflags(write=False)
    w.setflags(write=False)
    return JacobiQuadrature(n, t, w)


def _sample(p, quad: JacobiQuadrature) -> np.ndarray:
    if callable(p):
        return np.asarray(p(quad.nodes), dtype=float) * np.ones(quad.order)
    p = np.asarray(p, dtype=float)
    if p.shape != quad.nodes.shape:
        raise ValueError("samples do not match quadrature nodes")
    return p


def legendre_inner(n: int, p, q, quad: JacobiQuadrature) -> float:
    """[p, q]_n for callables or samples on the quadrature nodes."""
    if quad.n != n:
        raise ValueError(f"quadrature built for n={quad.n}, not n={n}")
    return quad.integrate(_sample(p, quad) * _sample(q, quad))


def funk_hecke_multiplier(n: int, phi, k: int, quad: JacobiQuadrature | None = None) -> float:
    """a_k^n[phi] by Gauss-Jacobi quadrature (phi should be smooth)."""
    if quad is None:
        quad = jacobi_quadrature(n, max(k + 32, 64))
    pk = legendre_table(n, k, quad.nodes)[k]
    return omega(n - 1) * legendre_inner(n, phi, pk, quad)


# ------------------------------------------------------------ Berg functions

_G3_LINEAR = 4.0 / 3.0 - math.log(2.0)


def berg_g(n: int, t):
    """Closed-form Berg function g_2 or g_3."""
    t = np.asarray(t, dtype=float)
    if n == 2:
        s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
        val = ((math.pi - np.arccos(np.clip(t, -1, 1))) * s - 0.5 * t) / (2 * math.pi)
    elif n == 3:
        if np.any(np.abs(t) >= 1.0):
            raise ValueError("g_3 requires |t| < 1")
        val = (1.0 + t * np.log1p(-t) + _G3_LINEAR * t) / (2 * math.pi)
    else:
        raise ValueError("closed form unavailable; use multiplier sequence")
    return float(val) if val.ndim == 0 else val


def berg_multiplier_closed(n: int, j: int, k: int) -> float:
    """a_k^n[g_j] from the Gamma-function closed form (k != 1)."""
    if not 2 <= j <= n:
        raise ValueError("need 2 <= j <= n")
    if k == 1:
        raise ValueError("multiplier annihilates degree 1")
    if k < 0:
        raise ValueError("degree must be nonnegative")
    args_num = [(n - j + 2) / 2, (k - 1) / 2, (j + k - 1) / 2]
    args_den = [(n - j + k + 1) / 2, (n + k + 1) / 2]
    logmag = 0.5 * (n - j) * math.log(math.pi) + math.log((j - 1) / 4.0)
    sign = -1.0
    for a in args_num:
        logmag += math.lgamma(a)
        sign *= _gamma_sign(a)
    for a in args_den:
        logmag -= math.lgamma(a)
        sign *= _gamma_sign(a)
    return sign * math.exp(logmag)


def _gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    if x == math.floor(x):
        raise ValueError("Gamma pole")
    return -1.0 if math.floor(x) % 2 else 1.0


def berg_multiplier_quadrature(n: int, j: int, k: int) -> float:
    """a_k^n[g_j] for j in {2, 3} by adaptive quadrature of the closed form.

    The Jacobi weight is handled by QUADPACK's algebraic weights; the
    logarithmic part of g_3 uses the algebraic-logarithmic weight so the
    endpoint singularity is integrated exactly.
    """
    a = 0.5 * (n - 3)
    opts = dict(limit=2048, epsabs=1e-14, epsrel=1e-12)
    pk = lambda t: legendre_p(n, k, t)  # noqa: E731
    with warnings.catch_warnings():
        # roundoff warnings at the requested tolerance are harmless here
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val = _berg_quad(j, a, pk, opts)
    return omega(n - 1) * val


def _berg_quad(j, a, pk, opts):
    if j == 2:
        val = integrate.quad(lambda t: berg_g(2, t) * pk(t), -1, 1, weight="alg", wvar=(a, a), **opts)[0]
    elif j == 3:
        smooth = integrate.quad(
            lambda t: (1.0 + _G3_LINEAR * t) * pk(t), -1, 1, weight="alg", wvar=(a, a), **opts
        )[0]
        logpart = integrate.quad(lambda t: t * pk(t), -1, 1, weight="alg-logb", wvar=(a, a), **opts)[0]
        val = (smooth + logpart) / (2 * math.pi)
    else:
        raise ValueError("closed form unavailable; use multiplier sequence")
    return val


@dataclass(frozen=True)
class MultiplierSequence:
    """Funk-Hecke multipliers a_0 .. a_K in dimension n."""

    n: int
    values: np.ndarray
    annihilated: frozenset[int] = frozenset()

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        for k in self.annihilated:
            if k < len(v):
                v[k] = 0.0
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def kmax(self) -> int:
        return len(self.values) - 1

    def __mul__(self, other: "MultiplierSequence") -> "MultiplierSequence":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        m = min(len(self.values), len(other.values))
        return MultiplierSequence(self.n, self.values[:m] * other.values[:m], self.annihilated | other.annihilated)

    def reciprocal(self) -> "MultiplierSequence":
        v = np.zeros_like(self.values)
        for k, a in enumerate(self.values):
            if k in self.annihilated:
                continue
            if a == 0.0:
                raise ZeroDivisionError(f"multiplier vanishes at degree {k}")
            v[k] = 1.0 / a
        return MultiplierSequence(self.n, v, self.annihilated)

    def growth_exponent(self, const: float = 1.0) -> float:
        """Smallest j with |a_k| <= C (1 + k^j) for the stored entries."""
        ks = np.arange(len(self.values))
        mask = (ks > 1) & (np.abs(self.values) > const)
        if not mask.any():
            return 0.0
        return float(np.max(np.log(np.abs(self.values[mask]) / const) / np.log(ks[mask])))

    def is_slowly_increasing(self, const: float = 1.0, power: float = 2.0) -> bool:
        ks = np.arange(len(self.values))
        return bool(np.all(np.abs(self.values) <= const * (1.0 + ks**power)))


def berg_multiplier_sequence(n: int, j: int, kmax: int) -> MultiplierSequence:
    vals = [0.0 if k == 1 else berg_multiplier_closed(n, j, k) for k in range(kmax + 1)]
    return MultiplierSequence(n, np.array(vals), frozenset({1}))


def laplacian_multipliers(n: int, kmax: int) -> MultiplierSequence:
    k = np.arange(kmax + 1)
    return MultiplierSequence(n, -k * (k + n - 2.0))


def box_multipliers(n: int, kmax: int) -> MultiplierSequence:
    k = np.arange(kmax + 1)
    return MultiplierSequence(n, (1.0 - k) * (k + n - 1.0) / (n - 1.0), frozenset({1}))


def profile_multipliers(n: int, phi: Callable, kmax: int, order: int | None = None) -> MultiplierSequence:
    """a_k^n[phi] for k <= kmax by Gauss-Jacobi quadrature of a smooth profile."""
    quad = jacobi_quadrature(n, order or max(2 * kmax + 16, 64))
    tab = legendre_table(n, kmax, quad.nodes)
    vals = omega(n - 1) * tab @ (quad.weights * phi(quad.nodes))
    return MultiplierSequence(n, vals)
