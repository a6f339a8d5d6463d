"""One record per inequality evaluation.  Multiplicative inequalities are
compared in log space, so margins are scale free."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import body as bd
from .. import measures as ms
from .. import minkval as mv
from ..body import ConvexBody, OrliczFunction
from ..minkval import MinkowskiValuation


@dataclass
class Record:
    inequality: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    probe: str = "random"  # random | equality | perturbed
    expect: str = "nonneg"  # nonneg | zero | strict
    params: dict = field(default_factory=dict)
    scenario: str = ""
    case: str = ""
    digest: str = ""
    provenance: dict = field(default_factory=dict)
    error: str | None = None
    tolerance_eq: float = 1e-5

    @property
    def passed(self) -> bool:
        return self.error is None and self.margin >= -self.tolerance

    @property
    def probe_ok(self) -> bool:
        """Equality probes must vanish; strict expectations must separate."""
        if self.error is not None:
            return False
        if self.expect == "zero":
            return abs(self.margin) <= self.tolerance_eq
        if self.expect == "strict":
            return self.margin > self.tolerance_eq
        return True

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["probe_ok"] = self.probe_ok
        return d


def _check_nontrivial(phi: MinkowskiValuation, i: int):
    if phi.is_trivial():
        raise ValueError("valuation is trivial")
    if not phi.in_class(i - 1):
        raise ValueError(f"{phi.label} is not declared in MVal_{{{phi.degree},{i - 1}}}")


def w_of(phi: MinkowskiValuation, i: int, K: ConvexBody, grid=None) -> float:
    """W_{n-i}(Phi K), required positive."""
    w = ms.quermassintegral(mv.apply(phi, K, validate=False, grid=grid), phi.n - i)
    if not w > 0:
        raise ValueError("degenerate body at resolution")
    return w


def _log_margin(wm: float, wk: float, wl: float, lam: float):
    rhs = (1 - lam) * math.log(wk) + lam * math.log(wl)
    return math.log(wm), rhs, math.log(wm) - rhs


def verify_bm(phi: MinkowskiValuation, i: int, K: ConvexBody, L: ConvexBody, lam: float,
              tol: float = 1e-6, grid=None, **meta) -> Record:
    _check_nontrivial(phi, i)
    M = bd.minkowski_combine(K, L, 1 - lam, lam)
    lhs, rhs, m = _log_margin(w_of(phi, i, M, grid), w_of(phi, i, K, grid), w_of(phi, i, L, grid), lam)
    return Record("bm", lhs, rhs, m, tol, params={"i": i, "lambda": lam, "valuation": phi.label}, **meta)


def verify_orlicz_bm(phi: MinkowskiValuation, i: int, K: ConvexBody, L: ConvexBody,
                     phi_o: OrliczFunction, lam: float, tol: float = 1e-6, grid=None, **meta) -> Record:
    _check_nontrivial(phi, i)
    M = bd.orlicz_combine(K, L, phi_o, lam)
    lhs, rhs, m = _log_margin(w_of(phi, i, M, grid), w_of(phi, i, K, grid), w_of(phi, i, L, grid), lam)
    return Record("orlicz_bm", lhs, rhs, m, tol,
                  params={"i": i, "lambda": lam, "phi": phi_o.tag, "valuation": phi.label}, **meta)


def verify_lp_additive(phi: MinkowskiValuation, i: int, p: float, K: ConvexBody, L: ConvexBody,
                       lam: float, tol: float = 1e-6, grid=None, **meta) -> Record:
    """V_i(Phi((1-lam).K +_p lam.L))^{p/ij} against the convex combination
    of the endpoint values; margin is log(lhs) - log(rhs)."""
    _check_nontrivial(phi, i)
    if not p > 1:
        raise ValueError("p must exceed 1")
    j = phi.degree
    e = p / (i * j)
    M = bd.lp_combine(K, L, p, 1 - lam, lam)
    v = [ms.intrinsic_volume(mv.apply(phi, X, validate=False, grid=grid), i) for X in (M, K, L)]
    if min(v) <= 0:
        raise ValueError("degenerate body at resolution")
    lhs = v[0] ** e
    rhs = (1 - lam) * v[1] ** e + lam * v[2] ** e
    return Record("lp_additive", lhs, rhs, math.log(lhs) - math.log(rhs), tol,
                  params={"i": i, "p": p, "lambda": lam, "valuation": phi.label}, **meta)


def verify_monotone(phi: MinkowskiValuation, i: int, K: ConvexBody, L: ConvexBody,
                    tol: float = 1e-6, hausdorff_tol: float = 1e-6, grid=None, **meta) -> Record:
    _check_nontrivial(phi, i)
    if not bd.contains(L, K, tol=1e-9, grid=grid):
        raise ValueError("containment violated")
    wk, wl = w_of(phi, i, K, grid), w_of(phi, i, L, grid)
    meta.setdefault("expect", "zero" if bd.hausdorff(K, L, grid) < hausdorff_tol else "strict")
    return Record("monotone", math.log(wl), math.log(wk), math.log(wl) - math.log(wk), tol,
                  params={"i": i, "valuation": phi.label}, **meta)


def verify_quermass_bm(m: int, K: ConvexBody, L: ConvexBody, lam: float, tol: float = 1e-6, **meta) -> Record:
    """Classical W_m((1-lam)K + lam L) >= W_m(K)^{1-lam} W_m(L)^lam."""
    M = bd.minkowski_combine(K, L, 1 - lam, lam)
    w = [ms.quermassintegral(X, m) for X in (M, K, L)]
    lhs, rhs, mg = _log_margin(*w, lam)
    return Record("quermass_bm", lhs, rhs, mg, tol, params={"m": m, "lambda": lam}, **meta)


def verify_inclusion(K: ConvexBody, L: ConvexBody, phi_o: OrliczFunction, lam: float,
                     tol: float = 1e-9, **meta) -> Record:
    """Pointwise h(K +_phi L) >= (1-lam) h_K + lam h_L, relative to max h."""
    kind, hk, hl = bd._pointwise_pair(K, L)
    hk, hl = bd._origin_check(hk, hl)
    ho = bd.orlicz_solve(hk, hl, phi_o, lam)
    lin = (1 - lam) * hk + lam * hl
    scale_ = float(np.max(np.abs(lin))) or 1.0
    gap = float(np.min(ho - lin)) / scale_
    return Record("orlicz_inclusion", float(np.min(ho)), float(np.min(lin)), gap, tol,
                  params={"lambda": lam, "phi": phi_o.tag}, **meta)


def verify_switch(phi: MinkowskiValuation, i: int, K: ConvexBody, L: ConvexBody,
                  tol: float = 1e-3, **meta) -> Record:
    r = mv.switch_identity_check(phi, i, K, L)
    return Record("switch", r.lhs, r.rhs, -r.gap, tol, expect="zero", params={"i": i, "valuation": phi.label},
                  tolerance_eq=tol, **meta)


def verify_ratio(phi: MinkowskiValuation, bodies, tol: float = 1e-5, **meta) -> Record:
    r = mv.ratio_r(phi, bodies)
    return Record("ratio", r.r, r.r, -r.max_deviation, tol, expect="zero",
                  params={"bodies": len(bodies), "valuation": phi.label}, tolerance_eq=tol, **meta)


def verify_steiner(phi: MinkowskiValuation, K: ConvexBody, tol: float = 1e-6, grid=None, **meta) -> Record:
    M = mv.apply(phi, K, validate=False, grid=grid)
    s = float(np.linalg.norm(bd.steiner_point(M)))
    d = float(M.diameter) or 1.0
    return Record("steiner", s, 0.0, -s / d, tol, expect="zero", params={"valuation": phi.label},
                  tolerance_eq=tol, **meta)
