"""Scenario matrix runner: expands a JSON config into independent cases,
runs them (optionally on a thread pool) and writes JSON and CSV reports."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .. import body as bd
from .. import minkval as mv
from .. import sphere3 as s3
from ..body import Ball, OrliczFunction, ZonalBody
from . import generators as gen
from . import golden
from . import inequalities as iq
from .inequalities import Record

SCHEMA_VERSION = 1

INEQUALITIES = (
    "bm", "orlicz_bm", "lp_additive", "monotone", "quermass_bm", "orlicz_inclusion",
    "switch", "ratio", "steiner", "lambda_fd", "weak_monotone", "multipliers",
)

# the inequality battery proper (the rest are identities and golden checks)
BATTERY = ("bm", "orlicz_bm", "lp_additive", "monotone", "quermass_bm", "orlicz_inclusion")

# log-margin floor by grid resolution; finer grids than listed use the last entry
TOLERANCE_LADDER = ((24, 1e-4), (48, 1e-5))


def ladder_tolerance(grid: s3.SphereGrid) -> float:
    tol = TOLERANCE_LADDER[0][1]
    for polar, t in TOLERANCE_LADDER:
        if grid.polar >= polar:
            tol = t
    return tol


@dataclass(frozen=True)
class Scenario:
    id: str
    inequality: str
    n: int = 3
    pipeline: str = "s2"
    valuations: tuple = ()
    orders: tuple = ()
    families: tuple = ("hull",)
    cases: int = 4
    lambdas: tuple = (0.5,)
    phis: tuple = ()
    ps: tuple = ()
    tol: float = 1e-6
    probes: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        if d.get("inequality") not in INEQUALITIES:
            raise ValueError(f"unknown inequality id {d.get('inequality')!r}")
        lam = tuple(float(x) for x in d.get("lambdas", (0.5,)))
        if any(not 0 < x < 1 for x in lam):
            raise ValueError("lambda values must lie in (0, 1)")
        pipeline = d.get("pipeline", "s2" if int(d.get("n", 3)) == 3 else "zonal")
        if pipeline not in ("s2", "zonal"):
            raise ValueError("pipeline is 's2' or 'zonal'")
        return cls(
            id=str(d["id"]), inequality=d["inequality"], n=int(d.get("n", 3)), pipeline=pipeline,
            valuations=tuple(d.get("valuations", ())), orders=tuple(int(i) for i in d.get("orders", ())),
            families=tuple(d.get("families", ("hull",))), cases=int(d.get("cases", 4)), lambdas=lam,
            phis=tuple(float(x) for x in d.get("phis", ())), ps=tuple(float(x) for x in d.get("ps", ())),
            tol=float(d.get("tol", 1e-6)), probes=bool(d.get("probes", True)),
        )

    def as_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        return _sha(json.dumps(self.as_dict(), sort_keys=True))[:16]


@dataclass
class Context:
    seed: int
    grid: s3.SphereGrid
    kmax: int
    constants: dict = field(default_factory=dict)
    config_digest: str = ""

    @property
    def lmax(self) -> int:
        return min(self.grid.lmax, self.kmax)


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def git_style_digest(text: str) -> str:
    data = text.encode()
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


# ------------------------------------------------------------------ bodies

_SPHEROID = {"type": "spheroid", "equatorial": 0.7, "polar": 1.2}


def make_body(family: str, rng: np.random.Generator, n: int, ctx: Context):
    g, lmax = ctx.grid, ctx.lmax
    if family == "hull":
        return gen.random_hull(rng, points=int(rng.integers(8, 16)), inflate=0.05 + 0.1 * rng.random())
    if family == "cube":
        return gen.cube(0.8 + 0.6 * rng.random(), 0.05 + 0.1 * rng.random())
    if family == "harmonic":
        return bd.scale(gen.random_harmonic_body(rng, g, lmax), 0.7 + 0.6 * rng.random())
    if family == "ellipsoid":
        return gen.ellipsoid(0.6 + 0.8 * rng.random(3), g, lmax)
    if family == "ball":
        return Ball(n, 0.5 + rng.random())
    if family == "zonal":
        return gen.random_zonal(rng, n, ctx.kmax)
    if family == "spheroid":
        return gen.spheroid(n, 0.6 + 0.6 * rng.random(), 0.6 + 0.6 * rng.random(), ctx.kmax)
    raise ValueError(f"unknown body family {family!r}")


def make_pair(sc: Scenario, c: int, rng, ctx: Context):
    fam = sc.families[c % len(sc.families)]
    fk, _, fl = fam.partition("/")
    return make_body(fk, rng, sc.n, ctx), make_body(fl or fk, rng, sc.n, ctx)


def random_shift(rng, n: int, scale_: float = 0.3) -> np.ndarray:
    x = np.zeros(n)
    if n == 3:
        x[:] = scale_ * rng.normal(size=3)
    else:
        x[-1] = scale_ * rng.normal()  # zonal bodies move along the axis only
    return x


def make_valuation(spec: dict, sc: Scenario, ctx: Context) -> mv.MinkowskiValuation:
    spec = dict(spec)
    spec.setdefault("n", sc.n)
    if spec.get("type") == "conv_generated":
        L = dict(spec.get("L", _SPHEROID))
        L.setdefault("n", sc.n)
        spec["L"] = L
    return mv.from_spec(spec, kmax=ctx.kmax, constants=ctx.constants)


# ------------------------------------------------------------------ jobs


@dataclass(frozen=True)
class Job:
    label: str
    run: Callable  # (rng) -> list[Record]


def _orlicz(p: float) -> OrliczFunction:
    return OrliczFunction.power(p)


def _jobs_for(sc: Scenario, ctx: Context) -> list[Job]:
    n, g = sc.n, (ctx.grid if sc.pipeline == "s2" else None)
    vals = [(spec, make_valuation(spec, sc, ctx)) for spec in sc.valuations]
    jobs: list[Job] = []
    add = lambda label, fn: jobs.append(Job(label, fn))  # noqa: E731
    kind = sc.inequality

    for vi, (_, phi) in enumerate(vals):
        vtag = f"v{vi}"
        if kind == "bm":
            for i in sc.orders:
                for c in range(sc.cases):
                    lam = sc.lambdas[c % len(sc.lambdas)]

                    def f(rng, phi=phi, i=i, c=c, lam=lam):
                        K, L = make_pair(sc, c, rng, ctx)
                        return [iq.verify_bm(phi, i, K, L, lam, sc.tol, grid=g)], (K, L)
                    add(f"{vtag}/i{i}/c{c}", f)
                if sc.probes:
                    def eq(rng, phi=phi, i=i):
                        K, _ = make_pair(sc, 0, rng, ctx)
                        L = bd.translate(K, random_shift(rng, n))
                        return [iq.verify_bm(phi, i, K, L, 0.5, sc.tol, grid=g, probe="equality",
                                             expect="zero")], (K, L)

                    def pt(rng, phi=phi, i=i):
                        K, _ = make_pair(sc, 0, rng, ctx)
                        L = bd.translate(gen.perturb(K, rng), random_shift(rng, n))
                        return [iq.verify_bm(phi, i, K, L, 0.5, sc.tol, grid=g, probe="perturbed",
                                             expect="strict", tolerance_eq=10 * 1e-5)], (K, L)
                    add(f"{vtag}/i{i}/equality", eq)
                    add(f"{vtag}/i{i}/perturbed", pt)
        elif kind == "orlicz_bm":
            for i in sc.orders:
                for p in sc.phis:
                    for c in range(sc.cases):
                        lam = sc.lambdas[c % len(sc.lambdas)]

                        def f(rng, phi=phi, i=i, p=p, c=c, lam=lam):
                            K, L = make_pair(sc, c, rng, ctx)
                            return [iq.verify_orlicz_bm(phi, i, K, L, _orlicz(p), lam, sc.tol, grid=g)], (K, L)
                        add(f"{vtag}/i{i}/phi{p:g}/c{c}", f)
                    if sc.probes:
                        def eq(rng, phi=phi, i=i, p=p):
                            K, _ = make_pair(sc, 0, rng, ctx)
                            return [iq.verify_orlicz_bm(phi, i, K, K, _orlicz(p), 0.5, sc.tol, grid=g,
                                                        probe="equality", expect="zero")], (K, K)

                        def st(rng, phi=phi, i=i, p=p):
                            K, L = Ball(n, 1.0), Ball(n, 2.0)
                            exp = "strict" if p > 1 else "nonneg"
                            return [iq.verify_orlicz_bm(phi, i, K, L, _orlicz(p), 0.5, sc.tol, grid=g,
                                                        probe="perturbed", expect=exp)], (K, L)
                        add(f"{vtag}/i{i}/phi{p:g}/equality", eq)
                        add(f"{vtag}/i{i}/phi{p:g}/balls", st)
        elif kind == "lp_additive":
            for i in sc.orders:
                for p in sc.ps:
                    for c in range(sc.cases):
                        lam = sc.lambdas[c % len(sc.lambdas)]

                        def f(rng, phi=phi, i=i, p=p, c=c, lam=lam):
                            K, L = make_pair(sc, c, rng, ctx)
                            return [iq.verify_lp_additive(phi, i, p, K, L, lam, sc.tol, grid=g)], (K, L)
                        add(f"{vtag}/i{i}/p{p:g}/c{c}", f)
                    if sc.probes:
                        def eq(rng, phi=phi, i=i, p=p):
                            K, _ = make_pair(sc, 0, rng, ctx)
                            L = bd.scale(K, 2.0)
                            return [iq.verify_lp_additive(phi, i, p, K, L, 0.5, sc.tol, grid=g,
                                                          probe="equality", expect="zero")], (K, L)

                        def pt(rng, phi=phi, i=i, p=p):
                            K, _ = make_pair(sc, 0, rng, ctx)
                            L = bd.scale(gen.perturb(K, rng), 2.0)
                            return [iq.verify_lp_additive(phi, i, p, K, L, 0.5, sc.tol, grid=g, probe="perturbed",
                                                          expect="strict", tolerance_eq=10 * 1e-5)], (K, L)
                        add(f"{vtag}/i{i}/p{p:g}/dilate", eq)
                        add(f"{vtag}/i{i}/p{p:g}/perturbed", pt)
        elif kind == "monotone":
            for i in sc.orders:
                for c in range(sc.cases):
                    def f(rng, phi=phi, i=i, c=c):
                        L, _ = make_pair(sc, c, rng, ctx)
                        K = gen.shrink_inside(L, rng)
                        return [iq.verify_monotone(phi, i, K, L, sc.tol, grid=g)], (K, L)
                    add(f"{vtag}/i{i}/c{c}", f)
                if sc.probes:
                    def eq(rng, phi=phi, i=i):
                        K, _ = make_pair(sc, 0, rng, ctx)
                        return [iq.verify_monotone(phi, i, K, K, sc.tol, grid=g, probe="equality")], (K, K)

                    def st(rng, phi=phi, i=i):
                        K, L = Ball(n, 1.0), Ball(n, 2.0)
                        return [iq.verify_monotone(phi, i, K, L, sc.tol, grid=g, probe="perturbed")], (K, L)
                    add(f"{vtag}/i{i}/equal", eq)
                    add(f"{vtag}/i{i}/balls", st)
        elif kind == "switch":
            for i in sc.orders:
                for c in range(sc.cases):
                    def f(rng, phi=phi, i=i, c=c):
                        K, L = make_pair(sc, c, rng, ctx)
                        return [iq.verify_switch(phi, i, K, L, sc.tol)], (K, L)
                    add(f"{vtag}/i{i}/c{c}", f)
        elif kind == "ratio":
            def f(rng, phi=phi):
                B = [make_body(fam, rng, n, ctx) for fam in sc.families for _ in range(max(1, sc.cases))]
                return [iq.verify_ratio(phi, B, sc.tol)], tuple(B)
            add(f"{vtag}/ratio", f)
        elif kind == "steiner":
            for c in range(sc.cases):
                def f(rng, phi=phi, c=c):
                    K, _ = make_pair(sc, c, rng, ctx)
                    K = bd.translate(K, random_shift(rng, n))
                    return [iq.verify_steiner(phi, K, sc.tol, grid=g)], (K,)
                add(f"{vtag}/c{c}", f)
        elif kind == "lambda_fd":
            for c in range(sc.cases):
                def f(rng, phi=phi, c=c):
                    K, _ = make_pair(sc, c, rng, ctx)
                    return [lambda_fd_record(phi, K, sc.tol, g)], (K,)
                add(f"{vtag}/c{c}", f)
        elif kind == "weak_monotone":
            for c in range(sc.cases):
                def f(rng, phi=phi, c=c):
                    L, _ = make_pair(sc, c, rng, ctx)
                    K = gen.shrink_inside(L, rng)
                    r = mv.weak_monotone_check(phi, K, L)
                    return [Record("weak_monotone", r.slack, 0.0, -r.slack, sc.tol,
                                   params={"valuation": phi.label})], (K, L)
                add(f"{vtag}/c{c}", f)

    if kind == "quermass_bm":
        for m in sc.orders:
            for c in range(sc.cases):
                lam = sc.lambdas[c % len(sc.lambdas)]

                def f(rng, m=m, c=c, lam=lam):
                    K, L = make_pair(sc, c, rng, ctx)
                    return [iq.verify_quermass_bm(m, K, L, lam, sc.tol)], (K, L)
                add(f"m{m}/c{c}", f)
            if sc.probes:
                def eq(rng, m=m):
                    K, _ = make_pair(sc, 0, rng, ctx)
                    L = bd.translate(K, random_shift(rng, n))
                    return [iq.verify_quermass_bm(m, K, L, 0.5, sc.tol, probe="equality", expect="zero")], (K, L)
                add(f"m{m}/equality", eq)
    elif kind == "orlicz_inclusion":
        for p in sc.phis:
            for c in range(sc.cases):
                lam = sc.lambdas[c % len(sc.lambdas)]

                def f(rng, p=p, c=c, lam=lam):
                    K, L = make_pair(sc, c, rng, ctx)
                    return [iq.verify_inclusion(K, L, _orlicz(p), lam, sc.tol)], (K, L)
                add(f"phi{p:g}/c{c}", f)
    elif kind == "multipliers":
        def f(rng):
            return [Record("multipliers", r.value, r.expected, -r.rel_error, r.tolerance,
                           params={"group": r.group, "label": r.label}) for r in golden.all_rows()], ()
        add("golden", f)
    return jobs


def lambda_fd_record(phi: mv.MinkowskiValuation, K, tol: float, grid=None,
                     steps=(1e-2, 1e-3)) -> Record:
    """Observed order of the difference quotient of Phi(K + tB) towards
    (Lambda Phi)(K); margin is order - 1."""
    gaps, scale_ = lambda_fd_gaps(phi, K, steps, grid)
    params = {"valuation": phi.label, "gaps": gaps, "steps": list(steps)}
    if max(gaps) <= EXACT_QUOTIENT * scale_:
        # degree one: S_1(K + tB) is affine in t, so the quotient is exact
        return Record("lambda_fd", 1.0, 1.0, 0.0, tol, params=params | {"exact": True})
    order = math.log(gaps[0] / gaps[1]) / math.log(steps[0] / steps[1])
    return Record("lambda_fd", order, 1.0, order - 1.0, tol, params=params)


EXACT_QUOTIENT = 1e-9


def lambda_fd_gaps(phi: mv.MinkowskiValuation, K, steps=(1e-2, 1e-3), grid=None) -> tuple[list[float], float]:
    def values(M):
        if isinstance(M, ZonalBody) or (M.n != 3):
            t = np.linspace(-1, 1, 201)
            return bd.as_zonal(M, phi.kmax).h(t)
        return bd.band_values(M, grid or getattr(M, "grid", None) or bd.default_grid())

    ref = values(mv.apply(mv.lambda_power(phi, 1), K, validate=False, grid=grid))
    h0 = values(mv.apply(phi, K, validate=False, grid=grid))
    out = []
    for t in steps:
        ht = values(mv.apply(phi, bd.minkowski_combine(K, Ball(K.n, t)), validate=False, grid=grid))
        out.append(float(np.max(np.abs((ht - h0) / t - ref))))
    return out, float(np.max(np.abs(ref))) or 1.0


# ------------------------------------------------------------------ default matrix

_CONV = {"type": "conv_generated"}
_PI2 = {"type": "projection", "i": 2}
_M2 = {"type": "mean_section", "i": 2}

DEFAULT_CONFIG = {
    "seed": 20240601,
    "grid": "48x96",
    "kmax": 32,
    "constants": {"c_nj": {}, "p_ni": {}},
    "scenarios": [
        {"id": "multipliers", "inequality": "multipliers"},
        {"id": "bm_s2", "inequality": "bm", "valuations": [_PI2, _CONV, _M2], "orders": [1, 2, 3],
         "families": ["hull", "harmonic", "ball/cube", "ellipsoid"], "cases": 6, "lambdas": [0.3, 0.5, 0.7]},
        {"id": "bm_zonal", "inequality": "bm", "n": 5,
         "valuations": [dict(_CONV, j=2), dict(_CONV, j=3)], "orders": [1, 2, 3, 4, 5],
         "families": ["zonal", "spheroid/zonal"], "cases": 3, "lambdas": [0.25, 0.6]},
        {"id": "orlicz_s2", "inequality": "orlicz_bm", "valuations": [_CONV], "orders": [1, 2, 3],
         "phis": [1.5, 2, 4], "families": ["harmonic", "ellipsoid/ball"], "cases": 3, "lambdas": [0.4, 0.6]},
        {"id": "orlicz_zonal", "inequality": "orlicz_bm", "n": 5, "valuations": [dict(_CONV, j=2)],
         "orders": [2, 4, 5], "phis": [2], "families": ["zonal"], "cases": 3, "lambdas": [0.5]},
        {"id": "lp_s2", "inequality": "lp_additive", "valuations": [_CONV], "orders": [1, 2, 3],
         "ps": [1.5, 2, 4], "families": ["harmonic", "ball/ellipsoid"], "cases": 2, "lambdas": [0.3, 0.7]},
        {"id": "lp_zonal", "inequality": "lp_additive", "n": 5, "valuations": [dict(_CONV, j=3)],
         "orders": [2, 5], "ps": [1.5, 2, 4], "families": ["ball/zonal", "zonal"], "cases": 2, "lambdas": [0.5]},
        {"id": "monotone_s2", "inequality": "monotone", "valuations": [_PI2, _CONV], "orders": [1, 2, 3],
         "families": ["hull", "harmonic"], "cases": 4},
        {"id": "monotone_zonal", "inequality": "monotone", "n": 5, "valuations": [dict(_CONV, j=2)],
         "orders": [1, 3, 5], "families": ["zonal"], "cases": 3},
        {"id": "orlicz_inclusion", "inequality": "orlicz_inclusion", "phis": [1.5, 2, 4],
         "families": ["harmonic", "hull", "ellipsoid/ball"], "cases": 4, "lambdas": [0.2, 0.5, 0.8], "tol": 1e-9},
        {"id": "quermass_bm", "inequality": "quermass_bm", "orders": [0, 1, 2],
         "families": ["hull", "harmonic", "cube/ball"], "cases": 6, "lambdas": [0.3, 0.6]},
        {"id": "quermass_bm_zonal", "inequality": "quermass_bm", "n": 5, "orders": [0, 2, 4],
         "families": ["zonal"], "cases": 2, "lambdas": [0.5]},
        {"id": "switch_s2", "inequality": "switch", "valuations": [_CONV], "orders": [1, 2, 3],
         "families": ["harmonic/hull", "ellipsoid/cube"], "cases": 2, "tol": 1e-3},
        {"id": "switch_zonal", "inequality": "switch", "n": 5, "valuations": [dict(_CONV, j=2)],
         "orders": [2, 4, 5], "families": ["zonal"], "cases": 2, "tol": 1e-3},
        {"id": "ratio_s2", "inequality": "ratio", "valuations": [_PI2, _CONV, _M2],
         "families": ["ball", "cube", "hull", "harmonic", "ellipsoid"], "cases": 1, "tol": 1e-5},
        {"id": "ratio_zonal", "inequality": "ratio", "n": 5, "valuations": [dict(_CONV, j=2)],
         "families": ["ball", "zonal", "spheroid"], "cases": 2, "tol": 1e-5},
        {"id": "steiner", "inequality": "steiner", "valuations": [_PI2, _CONV, _M2],
         "families": ["hull", "harmonic"], "cases": 2},
        {"id": "lambda_fd", "inequality": "lambda_fd", "valuations": [_CONV, dict(_CONV, lambda_steps=1)],
         "families": ["hull", "harmonic"], "cases": 2},
        {"id": "weak_monotone", "inequality": "weak_monotone", "valuations": [_CONV],
         "families": ["hull", "harmonic"], "cases": 2, "tol": 1e-8},
    ],
}


# ------------------------------------------------------------------ runner


@dataclass
class Report:
    records: list[Record]
    meta: dict
    runtime: float = 0.0

    @property
    def failures(self) -> list[Record]:
        return [r for r in self.records if not (r.passed and r.probe_ok)]

    def summary(self) -> dict:
        ok = [r for r in self.records if r.error is None]
        by: dict[str, dict] = {}
        for r in self.records:
            b = by.setdefault(r.inequality, {"cases": 0, "failed": 0, "min_margin": math.inf})
            b["cases"] += 1
            b["failed"] += int(not (r.passed and r.probe_ok))
            if r.error is None and r.expect == "nonneg":
                b["min_margin"] = min(b["min_margin"], r.margin)
        for b in by.values():
            if b["min_margin"] == math.inf:
                b["min_margin"] = None
        rand = [r for r in ok if r.probe == "random" and r.inequality in BATTERY]
        return {
            "cases": len(self.records),
            "battery_random_cases": len(rand),
            "probes": sum(r.probe != "random" for r in self.records),
            "passed": sum(r.passed and r.probe_ok for r in self.records),
            "failed": len(self.failures),
            "errors": sum(r.error is not None for r in self.records),
            "min_margin": min((r.margin for r in rand), default=None),
            "by_inequality": by,
        }

    def as_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, **self.meta, "summary": self.summary(),
                "records": [r.as_dict() for r in self.records]}

    def write(self, out: Path) -> dict[str, Path]:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"json": out / "report.json", "csv": out / "report.csv", "timing": out / "timing.json"}
        paths["json"].write_text(json.dumps(_clean(self.as_dict()), indent=1, sort_keys=True) + "\n")
        with paths["csv"].open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["scenario", "case", "lhs", "rhs", "margin", "pass"])
            for r in self.records:
                w.writerow([r.scenario, r.case, repr(r.lhs), repr(r.rhs), repr(r.margin),
                            int(r.passed and r.probe_ok)])
        # wall time is kept out of the report so reruns are byte-identical
        paths["timing"].write_text(json.dumps({"runtime_seconds": self.runtime}) + "\n")
        return paths


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, np.integer):
        return int(x)
    return x


def _inputs_digest(sc: Scenario, label: str, bodies) -> str:
    specs = []
    for K in bodies:
        try:
            specs.append(bd.to_spec(K))
        except Exception:  # noqa: BLE001
            specs.append(repr(K))
    return _sha(json.dumps({"scenario": sc.id, "case": label, "bodies": _clean(specs)}, sort_keys=True))[:16]


def _run_job(sc: Scenario, index: int, job: Job, ctx: Context) -> list[Record]:
    ss = np.random.SeedSequence([ctx.seed, int(sc.digest()[:8], 16), index])
    rng = np.random.default_rng(ss)
    prov = {"scenario_hash": sc.digest(), "config_digest": ctx.config_digest,
            "grid": ctx.grid.label(), "kmax": ctx.kmax, "seed": ctx.seed, "case_index": index}
    try:
        records, bodies = job.run(rng)
        digest = _inputs_digest(sc, job.label, bodies)
    except Exception as exc:  # noqa: BLE001  per-case errors are recorded, the suite continues
        records = [Record(sc.inequality, math.nan, math.nan, math.nan, sc.tol, error=f"{type(exc).__name__}: {exc}")]
        digest = _inputs_digest(sc, job.label, ())
    for k, r in enumerate(records):
        r.scenario, r.case = sc.id, job.label if len(records) == 1 else f"{job.label}/{k}"
        r.digest, r.provenance = digest, prov
    return records


def load_config(path: str | Path | None) -> dict:
    if path is None:
        return json.loads(json.dumps(DEFAULT_CONFIG))
    return json.loads(Path(path).read_text())


def run_suite(config: dict | str | Path | None = None, seed: int | None = None, grid: str | None = None,
              kmax: int | None = None, filter: str | None = None, workers: int = 1) -> Report:
    cfg = config if isinstance(config, dict) else load_config(config)
    cfg = json.loads(json.dumps(cfg))
    if seed is not None:
        cfg["seed"] = int(seed)
    if grid is not None:
        cfg["grid"] = grid
    if kmax is not None:
        cfg["kmax"] = int(kmax)
    canon = json.dumps(cfg, sort_keys=True)
    g = s3.parse_grid(cfg.get("grid", "48x96"))
    ctx = Context(int(cfg.get("seed", 0)), g, int(cfg.get("kmax", bd.DEFAULT_KMAX)),
                  cfg.get("constants", {}), git_style_digest(canon))
    scenarios = [Scenario.from_dict(d) for d in cfg["scenarios"]]
    if filter:
        pat = re.compile(filter)
        scenarios = [s for s in scenarios if pat.search(s.id)]
    t0 = time.perf_counter()
    tasks = []
    for sc in scenarios:
        try:
            jobs = _jobs_for(sc, ctx)
        except Exception as exc:  # noqa: BLE001
            jobs = [Job("setup", lambda rng, exc=exc: (_ for _ in ()).throw(exc))]
        tasks.extend((sc, k, job) for k, job in enumerate(jobs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda a: _run_job(*a, ctx), tasks))
    else:
        parts = [_run_job(sc, k, job, ctx) for sc, k, job in tasks]
    records = [r for p in parts for r in p]
    meta = {"seed": ctx.seed, "grid": g.label(), "kmax": ctx.kmax, "config_digest": ctx.config_digest,
            "tolerance_ladder": {f"{p}x{2 * p}": t for p, t in TOLERANCE_LADDER},
            "resolution_floor": ladder_tolerance(g), "filter": filter}
    return Report(records, meta, time.perf_counter() - t0)
