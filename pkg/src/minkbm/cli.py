"""Command line entry point: ``minkbm {multipliers,body,apply,verify}``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import body as bd
from . import measures as ms
from . import minkval as mv
from . import specfun as sf
from . import sphere3 as s3
from .harness import golden
from .harness import suite


def _json_arg(text: str):
    """Inline JSON or a path to a JSON file."""
    p = Path(text)
    if p.suffix == ".json" and p.exists():
        return json.loads(p.read_text())
    return json.loads(text)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="base seed (u64)")
    p.add_argument("--grid", help="S^2 grid as <polar>x<azimuth>, e.g. 48x96")
    p.add_argument("--kmax", type=int, help="harmonic truncation degree")
    p.add_argument("--out", help="output directory")
    p.add_argument("--filter", help="regex on scenario ids")


def _grid(args):
    return s3.parse_grid(args.grid) if args.grid else bd.default_grid()


def _kmax(args) -> int:
    return args.kmax if args.kmax is not None else bd.DEFAULT_KMAX


def _emit(obj, args) -> None:
    text = json.dumps(suite._clean(obj), indent=1, sort_keys=True)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.json").write_text(text + "\n")
    print(text)


def body_summary(K) -> dict:
    n = K.n
    W = [ms.quermassintegral(K, m) for m in range(n + 1)]
    return {
        "type": type(K).__name__,
        "n": n,
        "quermassintegrals": W,
        "intrinsic_volumes": [ms.intrinsic_volume(K, i) for i in range(n + 1)],
        "steiner_point": bd.steiner_point(K).tolist(),
        "diameter": float(K.diameter),
    }


def cmd_multipliers(args) -> int:
    if args.golden:
        groups = [f for name, f in golden.GROUPS.items() if not args.filter or re.search(args.filter, name)]
        rows = [r for f in groups for r in f()]
        bad = [r for r in rows if not r.passed]
        for r in rows if args.verbose else bad:
            print(f"{'ok  ' if r.passed else 'FAIL'} {r.group:10s} {r.label:18s} {r.value:+.15e} rel_err={r.rel_error:.2e}")
        print(f"{len(rows) - len(bad)}/{len(rows)} golden checks passed")
        return 1 if bad else 0
    seq = sf.berg_multiplier_sequence(args.n, args.j, _kmax(args))
    rows = [{"k": k, "a_k": (None if k in seq.annihilated else float(v))} for k, v in enumerate(seq.values)]
    _emit({"n": args.n, "j": args.j, "multipliers": rows}, args)
    return 0


def cmd_body(args) -> int:
    K = bd.from_spec(_json_arg(args.spec), _grid(args), _kmax(args))
    out = body_summary(K)
    if args.directions:
        u = np.asarray(_json_arg(args.directions), dtype=float).reshape(-1, K.n)
        out["support"] = bd.support(K, u).tolist()
    _emit(out, args)
    return 0


def cmd_apply(args) -> int:
    cfg = suite.load_config(args.config) if args.config else {}
    phi = mv.from_spec(_json_arg(args.valuation), n=int(args.n), kmax=_kmax(args),
                       constants=cfg.get("constants", {}))
    K = bd.from_spec(_json_arg(args.spec), _grid(args), _kmax(args))
    M = mv.apply(phi, K, method=args.method, validate=args.validate, grid=_grid(args))
    ok, margin = mv.support_check(M)
    out = {"valuation": phi.label, "degree": phi.degree, "input": body_summary(K),
           "output": body_summary(M), "support_check": {"ok": bool(ok), "worst_margin": margin}}
    if args.directions:
        u = np.asarray(_json_arg(args.directions), dtype=float).reshape(-1, K.n)
        exact = args.method == "direct" and phi.pointwise is not None
        out["output"]["support"] = (mv.support_at(phi, K, u) if exact else bd.support(M, u)).tolist()
    _emit(out, args)
    return 0


def cmd_verify(args) -> int:
    if args.dump_config:
        print(json.dumps(suite.DEFAULT_CONFIG, indent=1))
        return 0
    rep = suite.run_suite(args.config, seed=args.seed, grid=args.grid, kmax=args.kmax,
                          filter=args.filter, workers=args.workers)
    s = rep.summary()
    if args.out:
        paths = rep.write(Path(args.out))
        print(f"wrote {paths['json']} and {paths['csv']}")
    for name, b in sorted(s["by_inequality"].items()):
        mm = "-" if b["min_margin"] is None else f"{b['min_margin']:.3e}"
        print(f"{name:18s} cases={b['cases']:4d} failed={b['failed']:3d} min_margin={mm}")
    for r in rep.failures[:20]:
        print(f"FAIL {r.scenario} {r.case} margin={r.margin:.3e} expect={r.expect} {r.error or ''}")
    print(f"{s['passed']}/{s['cases']} cases passed ({s['battery_random_cases']} randomized battery cases) "
          f"in {rep.runtime:.1f}s")
    return 1 if s["failed"] else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minkbm", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("multipliers", help="print Berg multiplier tables or run golden checks")
    _common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--j", type=int, default=3)
    p.add_argument("--golden", action="store_true")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_multipliers)

    p = sub.add_parser("body", help="evaluate a body spec: volumes, Steiner point, supports")
    _common(p)
    p.add_argument("spec", help="body spec (JSON text or .json file)")
    p.add_argument("--directions", help="JSON list of direction vectors")
    p.set_defaults(func=cmd_body)

    p = sub.add_parser("apply", help="apply a valuation spec to a body spec")
    _common(p)
    p.add_argument("valuation", help="valuation spec (JSON text or .json file)")
    p.add_argument("spec", help="body spec (JSON text or .json file)")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--method", choices=("spectral", "direct"), default="spectral")
    p.add_argument("--validate", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--directions", help="JSON list of direction vectors")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("verify", help="run the verification suite")
    _common(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dump-config", action="store_true", help="print the default config and exit")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
