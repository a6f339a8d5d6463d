"""Functions on S^2: product quadrature grid, spherical-harmonic transforms
with exact angular derivatives, projection onto degrees, and direct
convolution of measures with zonal kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special
from scipy.spatial import cKDTree

from . import specfun as sf

_CHUNK = 1024


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Gauss-Legendre nodes in cos(theta) times uniform azimuth."""

    polar: int
    azimuth: int
    x: np.ndarray = field(repr=False)  # cos(theta) per ring
    wx: np.ndarray = field(repr=False)
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.polar * self.azimuth

    @property
    def theta(self) -> np.ndarray:
        return np.arccos(self.x)

    @property
    def phi(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.azimuth) / self.azimuth

    @property
    def exactness(self) -> int:
        return min(2 * self.polar - 1, self.azimuth - 1)

    @property
    def lmax(self) -> int:
        """Highest degree whose coefficients the grid resolves without aliasing."""
        return min(self.polar - 1, self.azimuth // 2 - 1)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float).ravel()))

    def label(self) -> str:
        return f"{self.polar}x{self.azimuth}"


@lru_cache(maxsize=16)
def make_grid(polar: int, azimuth: int) -> SphereGrid:
    if polar < 8 or azimuth < 16:
        raise ValueError("grid needs polar >= 8 and azimuth >= 16")
    x, wx = special.roots_legendre(polar)
    x, wx = x[::-1].copy(), wx[::-1].copy()  # north to south
    phi = 2 * np.pi * np.arange(azimuth) / azimuth
    s = np.sqrt(1 - x * x)
    nodes = np.stack(
        [np.outer(s, np.cos(phi)), np.outer(s, np.sin(phi)), np.outer(x, np.ones(azimuth))], axis=-1
    ).reshape(-1, 3)
    weights = np.outer(wx, np.full(azimuth, 2 * np.pi / azimuth)).ravel()
    for a in (x, wx, nodes, weights):
        a.setflags(write=False)
    return SphereGrid(polar, azimuth, x, wx, nodes, weights)


def parse_grid(spec: str) -> SphereGrid:
    p, a = spec.lower().split("x")
    return make_grid(int(p), int(a))


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: SphereGrid
    values: np.ndarray = field(repr=False)
    is_support: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.shape != (self.grid.size,):
            raise ValueError("values do not match grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite grid values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return self.grid.integrate(self.values)


# ----------------------------------------------------- associated Legendre


def _assoc_legendre(lmax: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal Pbar[l, m, :] with Y_lm = Pbar_lm(cos theta) e^{i m phi}."""
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1 - x * x, 0, None))
    out = np.zeros((lmax + 1, lmax + 1) + x.shape)
    out[0, 0] = 1.0 / math.sqrt(4 * math.pi)
    for m in range(1, lmax + 1):
        out[m, m] = math.sqrt((2 * m + 1) / (2 * m)) * s * out[m - 1, m - 1]
    for m in range(0, lmax):
        out[m + 1, m] = math.sqrt(2 * m + 3) * x * out[m, m]
    for m in range(0, lmax + 1):
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            out[l, m] = a * (x * out[l - 1, m] - b * out[l - 2, m])
    return out


@lru_cache(maxsize=16)
def _grid_tables(polar: int, azimuth: int, lmax: int):
    g = make_grid(polar, azimuth)
    x = g.x
    s = np.sqrt(1 - x * x)
    p = _assoc_legendre(lmax, x)
    dp = np.zeros_like(p)
    for l in range(1, lmax + 1):
        for m in range(0, l + 1):
            c = math.sqrt((l * l - m * m) * (2 * l + 1) / (2 * l - 1))
            dp[l, m] = (l * x * p[l, m] - c * p[l - 1, m]) / s
    l = np.arange(lmax + 1)[:, None, None]
    m = np.arange(lmax + 1)[None, :, None]
    cot = x / s
    ddp = -cot * dp - (l * (l + 1) - m * m / (s * s)) * p
    for a in (p, dp, ddp):
        a.setflags(write=False)
    return p, dp, ddp


def sh_analysis(grid: SphereGrid, values, lmax: int | None = None) -> np.ndarray:
    """Complex coefficients C[l, m] (m >= 0) of a real function on the grid."""
    lmax = grid.lmax if lmax is None else lmax
    if lmax > grid.lmax:
        raise ValueError(f"grid {grid.label()} resolves degrees <= {grid.lmax}")
    f = np.asarray(values, dtype=float).reshape(grid.polar, grid.azimuth)
    F = np.fft.rfft(f, axis=1)[:, : lmax + 1] * (2 * np.pi / grid.azimuth)
    p = _grid_tables(grid.polar, grid.azimuth, lmax)[0]
    return np.einsum("lmq,q,qm->lm", p, grid.wx, F)


def _synth(grid: SphereGrid, C: np.ndarray, table: np.ndarray, mfactor) -> np.ndarray:
    lmax = C.shape[0] - 1
    G = np.einsum("lm,lmq->qm", C, table)
    m = np.arange(lmax + 1)
    G = G * mfactor(m)[None, :]
    full = np.zeros((grid.polar, grid.azimuth // 2 + 1), dtype=complex)
    full[:, : lmax + 1] = G
    return (np.fft.irfft(full, n=grid.azimuth, axis=1) * grid.azimuth).ravel()


def sh_synthesis(grid: SphereGrid, C: np.ndarray, deriv: str = "") -> np.ndarray:
    """Values (or a theta/phi partial derivative) of the expansion on the grid.

    ``deriv`` is a string over {t, p}: "" value, "t", "p", "tt", "tp", "pp".
    """
    lmax = C.shape[0] - 1
    if lmax > grid.lmax:
        raise ValueError("coefficients exceed grid resolution")
    p, dp, ddp = _grid_tables(grid.polar, grid.azimuth, lmax)
    nt, npd = deriv.count("t"), deriv.count("p")
    table = (p, dp, ddp)[nt]
    return _synth(grid, C, table, lambda m: (1j * m) ** npd)


def sh_fields(grid: SphereGrid, C: np.ndarray) -> dict[str, np.ndarray]:
    return {d: sh_synthesis(grid, C, d) for d in ("", "t", "p", "tt", "tp", "pp")}


def support_hessian(grid: SphereGrid, C: np.ndarray):
    """Entries (a11, a12, a22) of the restricted Hessian of the 1-homogeneous
    extension, in the orthonormal frame (e_theta, e_phi)."""
    f = sh_fields(grid, C)
    x = np.repeat(grid.x, grid.azimuth)
    s = np.sqrt(1 - x * x)
    cot = x / s
    a11 = f["tt"] + f[""]
    a12 = (f["tp"] - cot * f["p"]) / s
    a22 = f["pp"] / (s * s) + cot * f["t"] + f[""]
    return a11, a12, a22


def _dirs_angles(dirs: np.ndarray):
    dirs = np.asarray(dirs, dtype=float).reshape(-1, 3)
    r = np.linalg.norm(dirs, axis=1)
    z = np.clip(dirs[:, 2] / r, -1, 1)
    ph = np.arctan2(dirs[:, 1], dirs[:, 0])
    return z, ph


def sh_evaluate(C: np.ndarray, dirs) -> np.ndarray:
    """Point evaluation of an expansion at arbitrary unit vectors."""
    z, ph = _dirs_angles(dirs)
    lmax = C.shape[0] - 1
    out = np.empty(len(z))
    m = np.arange(lmax + 1)
    wm = np.where(m == 0, 1.0, 2.0)
    for a in range(0, len(z), _CHUNK):
        sl = slice(a, a + _CHUNK)
        p = _assoc_legendre(lmax, z[sl])
        G = np.einsum("lm,lmq->qm", C, p)
        e = np.exp(1j * np.outer(ph[sl], m))
        out[sl] = np.real(G * e) @ wm
    return out


def sh_point_coeffs(dirs, masses, lmax: int) -> np.ndarray:
    """Coefficients of the discrete measure sum_i m_i delta_{u_i}."""
    z, ph = _dirs_angles(dirs)
    masses = np.asarray(masses, dtype=float).ravel()
    C = np.zeros((lmax + 1, lmax + 1), dtype=complex)
    m = np.arange(lmax + 1)
    for a in range(0, len(z), _CHUNK):
        sl = slice(a, a + _CHUNK)
        p = _assoc_legendre(lmax, z[sl])
        e = np.exp(-1j * np.outer(ph[sl], m)) * masses[sl, None]
        C += np.einsum("lmq,qm->lm", p, e)
    return C


def degree_multiply(C: np.ndarray, mult) -> np.ndarray:
    """Scale degree l by mult[l] (a Funk-Hecke multiplier transform)."""
    mult = np.asarray(mult, dtype=float)
    lmax = C.shape[0] - 1
    if len(mult) < lmax + 1:
        raise ValueError("multiplier sequence too short")
    return C * mult[: lmax + 1, None]


def pad_coeffs(C: np.ndarray, lmax: int) -> np.ndarray:
    out = np.zeros((lmax + 1, lmax + 1), dtype=complex)
    m = min(lmax, C.shape[0] - 1)
    out[: m + 1, : m + 1] = C[: m + 1, : m + 1]
    return out


def zonal_coeffs(coeffs) -> np.ndarray:
    """SH coefficients of the zonal function sum (2k+1)/(4 pi) c_k P_k(u . e3)."""
    c = np.asarray(coeffs, dtype=float)
    L = len(c) - 1
    C = np.zeros((L + 1, L + 1), dtype=complex)
    k = np.arange(L + 1)
    C[:, 0] = c * np.sqrt((2 * k + 1) / (4 * np.pi))
    return C


def linear_coeffs(x) -> np.ndarray:
    """SH coefficients (degree <= 1) of u -> u . x."""
    x = np.asarray(x, dtype=float)
    C = np.zeros((2, 2), dtype=complex)
    c = math.sqrt(4 * math.pi / 3)
    C[1, 0] = c * x[2]
    C[1, 1] = math.sqrt(2 * math.pi / 3) * (x[0] - 1j * x[1])
    return C


def degree_energy(C: np.ndarray) -> np.ndarray:
    w = np.full(C.shape[1], 2.0)
    w[0] = 1.0
    return (np.abs(C) ** 2) @ w


# ------------------------------------------------------ projection / convolution


def sh_project(f: GridFunction, k: int) -> GridFunction:
    """pi_k f on the grid via the reproducing kernel (2k+1)/(4 pi) P_k(u . v)."""
    g = f.grid
    if 2 * k > g.exactness:
        raise ValueError("degree exceeds half the grid exactness")
    wf = g.weights * f.values
    out = np.empty(g.size)
    for a in range(0, g.size, _CHUNK):
        dots = np.clip(g.nodes[a : a + _CHUNK] @ g.nodes.T, -1, 1)
        out[a : a + _CHUNK] = special.eval_legendre(k, dots) @ wf
    return GridFunction(g, out * (2 * k + 1) / (4 * math.pi))


def convolve_measure(sigma, kernel: Callable, grid: SphereGrid) -> GridFunction:
    """(sigma * f)(v) = integral of f(u . v) d sigma(u), evaluated node by node.

    ``sigma`` is a density GridFunction or a pair (directions, masses).
    """
    if isinstance(sigma, GridFunction):
        dirs, masses = sigma.grid.nodes, sigma.grid.weights * sigma.values
    else:
        dirs, masses = sigma
        dirs = np.asarray(dirs, dtype=float).reshape(-1, 3)
        masses = np.asarray(masses, dtype=float).ravel()
    out = np.empty(grid.size)
    for a in range(0, grid.size, _CHUNK):
        dots = np.clip(grid.nodes[a : a + _CHUNK] @ dirs.T, -1, 1)
        out[a : a + _CHUNK] = np.asarray(kernel(dots)) @ masses
    return GridFunction(grid, out)


# --------------------------------------------------------- sublinearity


@dataclass(frozen=True)
class SupportCheck:
    ok: bool
    worst_margin: float
    tolerance: float
    n_tests: int
    worst_node: int

    def __bool__(self) -> bool:
        return self.ok


@lru_cache(maxsize=8)
def _structured_triples(polar: int, azimuth: int):
    """Index triples (a, b, d) whose cone contains node c, with the conic weights."""
    g = make_grid(polar, azimuth)
    Q, P = polar, azimuth
    idx = lambda q, p: q * P + (p % P)  # noqa: E731
    cs, trip = [], []
    stencils = []
    for s in (1, 2, 4):
        stencils += [
            ((-s, 0), (s, -s), (s, s)),
            ((s, 0), (-s, -s), (-s, s)),
            ((0, -s), (0, s), (s, 0)),
            ((0, -s), (0, s), (-s, 0)),
            ((-s, 0), (s, 0), (0, s)),
        ]
    for q in range(Q):
        for p in range(P):
            for st in stencils:
                qs = [q + dq for dq, _ in st]
                if min(qs) < 0 or max(qs) >= Q:
                    continue
                cs.append(idx(q, p))
                trip.append([idx(q + dq, p + dp) for dq, dp in st])
    return _conic_filter(g.nodes, np.array(cs), np.array(trip))


def _conic_filter(nodes, cs, trip):
    M = nodes[trip]  # (K, 3, 3), rows are generators
    det = np.linalg.det(M)
    keep = np.abs(det) > 1e-9
    cs, trip, M = cs[keep], trip[keep], M[keep]
    coef = np.linalg.solve(np.transpose(M, (0, 2, 1)), nodes[cs][..., None])[..., 0]
    ok = np.all(coef >= 0, axis=1)
    return cs[ok], trip[ok], coef[ok]


def _random_triples(grid: SphereGrid, count: int, rng: np.random.Generator):
    tree = cKDTree(grid.nodes)
    cs = rng.integers(0, grid.size, count)
    radius = rng.uniform(0.05, 1.2, count)
    trip = np.empty((count, 3), dtype=int)
    for i, (c, r) in enumerate(zip(cs, radius)):
        near = tree.query_ball_point(grid.nodes[c], r)
        trip[i] = rng.choice(near, 3, replace=len(near) < 3)
    return _conic_filter(grid.nodes, cs, trip)


def is_support_function(h: GridFunction, pair_samples: int = 2000, tol: float | None = None,
                        seed: int = 0) -> SupportCheck:
    """Sampled sublinearity test of the 1-homogeneous extension of h.

    Every test is a conic identity u_c = a u_1 + b u_2 + d u_3 between grid
    nodes (a, b, d >= 0), so H(u_c) <= a H(u_1) + b H(u_2) + d H(u_3) must hold
    for a support function; only node values enter, no interpolation.
    Structured stencils cover neighbouring nodes at several spacings; the
    random part draws ``pair_samples`` further combinations.
    """
    g = h.grid
    v = h.values
    tol = 1e-6 * float(np.max(np.abs(v))) if tol is None else tol
    cs, trip, coef = _structured_triples(g.polar, g.azimuth)
    if pair_samples:
        rc, rt, rw = _random_triples(g, pair_samples, np.random.default_rng(seed))
        cs, trip, coef = np.concatenate([cs, rc]), np.concatenate([trip, rt]), np.concatenate([coef, rw])
    margins = np.einsum("kj,kj->k", coef, v[trip]) - v[cs]
    w = int(np.argmin(margins))
    worst = float(margins[w])
    return SupportCheck(worst >= -tol, worst, tol, len(cs), int(cs[w]))
