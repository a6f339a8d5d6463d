"""Minkowski valuations given by generating zonal kernels,
h(Phi K, .) = S_j(K, .) * f, with the operators Lambda and Lefschetz."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize

from . import body as bd
from . import measures as ms
from . import specfun as sf
from . import sphere3 as s3
from . import zonal as zn
from .body import Ball, ConvexBody, GridBody, ZonalBody
from .zonal import ZonalProfile


@dataclass(frozen=True, eq=False)
class MinkowskiValuation:
    """Degree-j valuation in R^n with generating kernel coefficients a_k^n[f].

    ``max_class`` is the largest i for which membership in MVal_{j,i} is
    declared (at least j).  ``pointwise`` is the exact kernel profile when
    known; ``smooth`` is False for kernels that are only approximated by
    their truncation (outputs are then not validated by default).
    """

    n: int
    degree: int
    coeffs: np.ndarray = field(repr=False)
    label: str = "custom"
    pointwise: Callable | None = field(default=None, repr=False)
    max_class: int | None = None
    declared_valid: bool = True
    smooth: bool = True
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree <= self.n - 1:
            raise ValueError(f"degree must lie in 0..{self.n - 1}")
        c = np.array(self.coeffs, dtype=float)
        if len(c) > 1:
            c[1] = 0.0  # kernels act on centred measures
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.max_class is None:
            object.__setattr__(self, "max_class", self.degree)

    @property
    def kmax(self) -> int:
        return len(self.coeffs) - 1

    def kernel(self, quad=None) -> ZonalProfile:
        return zn.band_limited(self.n, self.coeffs, quad)

    def kernel_values(self, t) -> np.ndarray:
        """Pointwise kernel: the exact profile if known, else the truncated series."""
        if self.pointwise is not None:
            return np.asarray(self.pointwise(np.asarray(t, dtype=float)))
        return zn.synthesize(self.n, self.coeffs, t)

    def in_class(self, i: int) -> bool:
        return i <= self.degree or i <= self.max_class

    def is_trivial(self) -> bool:
        return not np.any(self.coeffs)


def custom_kernel(n: int, j: int, coeffs, label: str = "custom", **kw) -> MinkowskiValuation:
    kw.setdefault("declared_valid", False)
    return MinkowskiValuation(n, j, np.asarray(coeffs, dtype=float), label, **kw)


# ------------------------------------------------------------------ families


def abs_kernel_coeffs(n: int, kmax: int) -> np.ndarray:
    """a_k^n[|t|/2]; odd degrees vanish."""
    a = 0.5 * (n - 3)
    out = np.zeros(kmax + 1)
    for k in range(0, kmax + 1, 2):
        f = lambda t, k=k: t * sf.legendre_p(n, k, t) * (1 + t) ** a  # noqa: E731
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            v = integrate.quad(f, 0, 1, weight="alg", wvar=(0.0, a), limit=400, epsabs=1e-15, epsrel=1e-13)[0]
        out[k] = sf.omega(n - 1) * v
    return out


def projection_body(n: int, i: int, kmax: int = bd.DEFAULT_KMAX) -> MinkowskiValuation:
    """Pi_i: kernel |t|/2, truncated at kmax in spectral use."""
    if not 1 <= i <= n - 1:
        raise ValueError("order must lie in 1..n-1")
    return MinkowskiValuation(
        n, i, abs_kernel_coeffs(n, kmax), f"Pi_{i} [|t|/2 truncated at degree {kmax}]",
        pointwise=lambda t: 0.5 * np.abs(t), smooth=False,
    )


def mean_section(n: int, i: int, kmax: int = bd.DEFAULT_KMAX, p_ni: float = 1.0) -> MinkowskiValuation:
    """M_i, of degree n+1-i, with kernel p_{n,i} g_i lifted to S^{n-1}."""
    if not 2 <= i <= n:
        raise ValueError("order must lie in 2..n")
    seq = sf.berg_multiplier_sequence(n, i, kmax).values
    pw = (lambda t: p_ni * sf.berg_g(2, t)) if i == 2 else None
    return MinkowskiValuation(
        n, n + 1 - i, p_ni * seq, f"M_{i} [g_{i} truncated at degree {kmax}]",
        pointwise=pw, smooth=False, constants={"p_ni": p_ni},
    )


def _odd_part(c: np.ndarray) -> float:
    nrm = np.linalg.norm(c)
    return float(np.linalg.norm(c[1::2]) / nrm) if nrm else 0.0


def convolution_generated(n: int, j: int, L: ConvexBody, kmax: int = bd.DEFAULT_KMAX) -> MinkowskiValuation:
    """Kernel h(L, .) of an origin-symmetric body of revolution L; valid for
    every class MVal_{j,i} since S_i(K) * h(L) superposes rotated copies of L."""
    Lz = bd.as_zonal(L, kmax)
    if Lz.n != n:
        raise ValueError("dimension mismatch")
    c = bd._pad(Lz.full_coeffs(), kmax)
    if abs(Lz.offset) > 1e-12 or _odd_part(c) > 1e-10:
        raise ValueError("generating body must be origin symmetric")
    prof = Lz.profile
    return MinkowskiValuation(n, j, c, f"conv[{type(L).__name__}]", pointwise=prof, max_class=n - 1)


def kiderlen(n: int, g: ZonalProfile) -> MinkowskiValuation:
    """Degree-one valuation h(K) * g with g >= 0; its generating function is
    the Berg transform of g."""
    if np.min(g.samples) < -1e-12:
        raise ValueError("density must be nonnegative")
    seq = sf.berg_multiplier_sequence(n, n, g.kmax).values
    return MinkowskiValuation(n, 1, seq * g.coeffs, "kiderlen", max_class=1)


def lambda_power(phi: MinkowskiValuation, steps: int) -> MinkowskiValuation:
    """Lambda^steps; negative steps invert Lambda on the declared class."""
    j = phi.degree
    target = j - steps
    if not 0 <= target <= phi.n - 1:
        raise ValueError("degree out of range")
    if steps < 0 and not phi.in_class(target):
        raise ValueError(f"{phi.label} is not declared in MVal_{{{j},{target}}}")
    factor = Fraction(1)
    if steps >= 0:
        for d in range(target + 1, j + 1):
            factor *= d
    else:
        for d in range(j + 1, target + 1):
            factor /= d
    f = float(factor)
    pw = None if phi.pointwise is None else (lambda t, p=phi.pointwise, f=f: f * np.asarray(p(t)))
    return replace(phi, degree=target, coeffs=f * phi.coeffs, pointwise=pw,
                   label=f"Lambda^{steps} {phi.label}")


def lefschetz_multipliers(n: int, j: int, kmax: int, c_nj: float = 1.0) -> np.ndarray:
    """c_{n,j} a_k^n[g_{n-j}] / a_k^n[g_{n-j+1}], i.e. the Box_{n-j+1} multiplier
    (inverse of F_{g_{n-j+1}}) times F_{g_{n-j}}, both on S^{n-1}."""
    out = np.zeros(kmax + 1)
    for k in range(kmax + 1):
        if k != 1:
            out[k] = c_nj * sf.berg_multiplier_closed(n, n - j, k) / sf.berg_multiplier_closed(n, n - j + 1, k)
    return out


def lefschetz(phi: MinkowskiValuation, c_nj: float | None = None) -> MinkowskiValuation:
    j, n = phi.degree, phi.n
    if not 1 <= j <= n - 2:
        raise ValueError("Lefschetz operator needs 1 <= j <= n-2")
    c = phi.constants.get("c_nj", 1.0) if c_nj is None else c_nj
    m = lefschetz_multipliers(n, j, phi.kmax, c)
    return replace(phi, degree=j + 1, coeffs=m * phi.coeffs, pointwise=None,
                   max_class=j + 1, label=f"L {phi.label}")


# ------------------------------------------------------------------ apply


def _zonal_pipeline(K: ConvexBody) -> bool:
    return bd.is_zonal_like(K) and (K.n != 3 or isinstance(K, ZonalBody))


def convolve_body(phi: MinkowskiValuation, K: ConvexBody, i: int, method: str = "spectral",
                  grid=None) -> ConvexBody:
    """S_i(K, .) * f as a body (no validation)."""
    if K.n != phi.n:
        raise ValueError("dimension mismatch")
    n = phi.n
    if isinstance(K, Ball) or i == 0:
        r = (K.radius**i if isinstance(K, Ball) else 1.0) * phi.coeffs[0]
        if i == 0 and not isinstance(K, Ball) and _zonal_pipeline(K):
            r = phi.coeffs[0]
        return Ball(n, float(r))
    if _zonal_pipeline(K):
        Kz = bd.as_zonal(K, phi.kmax)
        S = ms.area_measure(Kz, i, kmax=phi.kmax)
        quad = Kz.quad if Kz.kmax >= phi.kmax else None
        if method == "direct":
            q = quad or zn.band_limited(n, phi.coeffs).quad
            vals = zn.convolve_direct(S.zonal, phi.kernel_values, q.nodes)
            return ZonalBody(n, zn.analyze(vals, n, phi.kmax, q))
        coeffs = S.zonal_coeffs(phi.kmax) * phi.coeffs
        return ZonalBody(n, zn.band_limited(n, coeffs, quad))
    if n != 3:
        raise ValueError("non-zonal bodies need n = 3")
    grid = grid or (K.grid if isinstance(K, GridBody) else bd.default_grid())
    lmax = min(phi.kmax, grid.lmax)
    S = ms.area_measure(K, i)
    if method == "direct":
        vals = np.full(grid.size, S.lebesgue * phi.coeffs[0])
        if S.kind == "grid":
            vals += s3.convolve_measure(S.density, phi.kernel_values, grid).values
        elif S.masses is not None:
            vals += s3.convolve_measure((S.dirs, S.masses), phi.kernel_values, grid).values
        elif S.kind == "zonal":
            raise ValueError("use the zonal pipeline")
        return GridBody.from_values(grid, vals, lmax)
    if method != "spectral":
        raise ValueError("method is 'spectral' or 'direct'")
    C = s3.degree_multiply(S.sh_coeffs(lmax), phi.coeffs[: lmax + 1])
    return GridBody(grid, C)


def apply(phi: MinkowskiValuation, K: ConvexBody, method: str = "spectral",
          validate: bool | None = None, grid=None) -> ConvexBody:
    """Phi K from h(Phi K, .) = S_j(K, .) * f."""
    out = convolve_body(phi, K, phi.degree, method, grid)
    if validate is None:
        validate = phi.declared_valid and phi.smooth
    if validate:
        ok, margin = support_check(out)
        if not ok:
            raise ValueError(f"{phi.label} applied to body is not a support function "
                             f"(worst sublinearity margin {margin:.3e})")
    return out


def support_at(phi: MinkowskiValuation, K: ConvexBody, u) -> np.ndarray:
    """h(Phi K, u) at arbitrary directions, integrating the pointwise kernel
    against S_j(K, .) without harmonic truncation (n = 3, non-zonal K)."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    nrm = np.linalg.norm(u, axis=1)
    d = u / nrm[:, None]
    if isinstance(K, Ball) or _zonal_pipeline(K):
        return apply(phi, K, method="direct", validate=False).support(u)
    S = ms.area_measure(K, phi.degree)
    out = np.full(len(d), S.lebesgue * phi.coeffs[0])
    if S.kind == "grid":
        g = S.density.grid
        out += phi.kernel_values(np.clip(d @ g.nodes.T, -1, 1)) @ (g.weights * S.density.values)
    elif S.masses is not None:
        out += phi.kernel_values(np.clip(d @ S.dirs.T, -1, 1)) @ S.masses
    return nrm * out


def support_check(M: ConvexBody) -> tuple[bool, float]:
    if isinstance(M, Ball):
        return M.radius >= 0, M.radius
    if isinstance(M, GridBody):
        r = s3.is_support_function(M.h)
        return r.ok, r.worst_margin
    if isinstance(M, ZonalBody):
        m = bd.zonal_convexity_margin(M)
        return m >= -1e-8, m
    return True, 0.0


# ------------------------------------------------------------------ checks


@dataclass(frozen=True)
class MembershipReport:
    degree: int
    order: int
    passed: bool
    worst_margin: float
    per_body: tuple[tuple[str, bool, float], ...]


def class_membership(phi: MinkowskiValuation, i: int, bodies: Sequence[ConvexBody],
                     labels: Sequence[str] | None = None) -> MembershipReport:
    """Sampled necessary condition for MVal_{j,i}: is S_i(K) * f a support function?"""
    if not 1 <= i <= phi.n - 1:
        raise ValueError("order must lie in 1..n-1")
    labels = labels or [f"body{k}" for k in range(len(bodies))]
    rows = []
    for lab, K in zip(labels, bodies):
        ok, margin = support_check(convolve_body(phi, K, i))
        rows.append((lab, bool(ok), float(margin)))
    worst = min(r[2] for r in rows)
    return MembershipReport(phi.degree, i, all(r[1] for r in rows), worst, tuple(rows))


@dataclass(frozen=True)
class SwitchResult:
    lhs: float
    rhs: float
    gap: float


def switch_identity_check(phi: MinkowskiValuation, i: int, K: ConvexBody, L: ConvexBody) -> SwitchResult:
    """W_{n-i}(K, Phi L) against (i-1)!/j! W_{n-1-j}(L, Lambda^{j+1-i} Phi K)."""
    n, j = phi.n, phi.degree
    if not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    if not phi.in_class(i - 1):
        raise ValueError(f"{phi.label} is not declared in MVal_{{{j},{i - 1}}}")
    lhs = ms.mixed_w(K, apply(phi, L, validate=False), i - 1)
    psi = lambda_power(phi, j + 1 - i)
    factor = float(Fraction(math.factorial(i - 1), math.factorial(j)))
    rhs = factor * ms.mixed_w(L, apply(psi, K, validate=False), j)
    gap = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    return SwitchResult(lhs, rhs, gap)


@dataclass(frozen=True)
class RatioReport:
    r: float
    values: tuple[float, ...]
    max_deviation: float


def ratio_r(phi: MinkowskiValuation, bodies: Sequence[ConvexBody]) -> RatioReport:
    """W_{n-1}(Phi K) / W_{n-j}(K) per body; constant for a fixed Phi."""
    n, j = phi.n, phi.degree
    vals = []
    for K in bodies:
        num = ms.surface_integral(apply(phi, K, validate=False)) / n
        vals.append(num / ms.quermassintegral(K, n - j))
    vals = np.array(vals)
    r = float(np.mean(vals))
    dev = float(np.max(np.abs(vals - r)) / abs(r)) if r else float(np.max(np.abs(vals)))
    return RatioReport(r, tuple(vals.tolist()), dev)


@dataclass(frozen=True)
class WeakMonotoneResult:
    feasible: bool
    slack: float
    shift: np.ndarray


def weak_monotone_check(phi: MinkowskiValuation, K: ConvexBody, L: ConvexBody,
                        tol: float = 1e-8) -> WeakMonotoneResult:
    """LP: is there x with h(Phi K, u) <= h(Phi L, u) + x . u at every node?"""
    A, B = apply(phi, K, validate=False), apply(phi, L, validate=False)
    if isinstance(A, ZonalBody) or isinstance(B, ZonalBody) or (phi.n != 3):
        Az, Bz = bd.as_zonal(A, phi.kmax), bd.as_zonal(B, phi.kmax)
        t = np.concatenate([Az.quad.nodes, np.linspace(-1, 1, 201)])
        d = Az.h(t) - Bz.h(t)
        U = t[:, None]
    else:
        grid = next((M.grid for M in (A, B) if isinstance(M, GridBody)), bd.default_grid())
        d = bd.band_values(A, grid) - bd.band_values(B, grid)
        U = grid.nodes
    m = U.shape[1]
    # minimize s subject to d_i - x . u_i <= s
    A_ub = np.hstack([-U, -np.ones((len(d), 1))])
    res = optimize.linprog(np.r_[np.zeros(m), 1.0], A_ub=A_ub, b_ub=-d,
                           bounds=[(None, None)] * (m + 1), method="highs")
    slack = float(res.x[-1])
    scale_ = max(float(np.max(np.abs(d))), 1.0)
    return WeakMonotoneResult(slack <= tol * scale_, slack, res.x[:m])


# ------------------------------------------------------------------ JSON specs


def from_spec(spec: dict, n: int = 3, kmax: int = bd.DEFAULT_KMAX, constants: dict | None = None) -> MinkowskiValuation:
    constants = constants or {}
    kind = spec.get("type")
    n = int(spec.get("n", n))
    kmax = int(spec.get("kmax", kmax))
    if kind == "projection":
        phi = projection_body(n, int(spec["i"]), kmax)
    elif kind == "mean_section":
        i = int(spec["i"])
        phi = mean_section(n, i, kmax, float(constants.get("p_ni", {}).get(str(i), 1.0)))
    elif kind == "conv_generated":
        L = bd.from_spec(spec["L"], kmax=kmax)
        phi = convolution_generated(n, int(spec.get("j", n - 1)), L, kmax)
    elif kind == "custom_kernel":
        phi = custom_kernel(n, int(spec.get("j", 1)), spec["coeffs"])
    else:
        raise ValueError(f"unknown valuation type {kind!r}")
    c_nj = constants.get("c_nj", {})
    for _ in range(int(spec.get("lefschetz_steps", 0))):
        phi = lefschetz(phi, float(c_nj.get(str(phi.degree), 1.0)))
    if spec.get("lambda_steps"):
        phi = lambda_power(phi, int(spec["lambda_steps"]))
    return phi


__all__ = [
    "MinkowskiValuation", "apply", "projection_body", "mean_section", "convolution_generated",
    "kiderlen", "custom_kernel", "lambda_power", "lefschetz", "class_membership",
    "switch_identity_check", "ratio_r", "weak_monotone_check", "from_spec",
]
