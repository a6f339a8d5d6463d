import csv
import json

import numpy as np
import pytest

from minkbm import body as bd
from minkbm import cli
from minkbm import minkval as mv
from minkbm.body import Ball, OrliczFunction
from minkbm.harness import generators as gen
from minkbm.harness import golden
from minkbm.harness import inequalities as iq
from minkbm.harness import suite


@pytest.fixture(scope="module")
def conv():
    return mv.convolution_generated(3, 2, gen.spheroid(3, 0.7, 1.2))


def test_bm_examples(conv, rng):
    K = gen.random_harmonic_body(rng)
    r = iq.verify_bm(conv, 2, K, bd.translate(K, [0.2, 0.1, -0.3]), 0.5)
    assert abs(r.margin) < 1e-5
    r = iq.verify_bm(mv.projection_body(3, 2), 2, Ball(3), gen.cube(1.0, 0.1), 0.5)
    assert r.margin >= 0
    assert iq.verify_bm(conv, 3, K, K, 0.3).margin == pytest.approx(0, abs=1e-12)


def test_bm_errors(conv, unit_cube):
    with pytest.raises(ValueError, match="trivial"):
        iq.verify_bm(mv.custom_kernel(3, 2, [0.0]), 2, unit_cube, unit_cube, 0.5)
    with pytest.raises(ValueError, match="declared"):
        iq.verify_bm(mv.projection_body(3, 2), 4, unit_cube, unit_cube, 0.5)
    neg = mv.custom_kernel(3, 2, [-1.0])
    with pytest.raises(ValueError, match="degenerate body at resolution"):
        iq.verify_bm(neg, 1, gen.cube(1, 0.1), gen.cube(1, 0.1), 0.5)


def test_orlicz_examples(conv, rng):
    K, L = gen.random_harmonic_body(rng), gen.ellipsoid((1, 0.8, 1.1))
    a = iq.verify_orlicz_bm(conv, 2, K, L, OrliczFunction.power(1), 0.4)
    b = iq.verify_bm(conv, 2, K, L, 0.4)
    assert a.margin == pytest.approx(b.margin, abs=1e-10)
    assert abs(iq.verify_orlicz_bm(conv, 2, K, K, OrliczFunction.power(2), 0.5).margin) < 1e-10
    assert iq.verify_orlicz_bm(conv, 2, Ball(3), Ball(3, 2.0), OrliczFunction.power(2), 0.5).margin > 1e-4


def test_lp_examples(conv, rng):
    K = gen.random_harmonic_body(rng)
    for p in (1.5, 2, 4):
        assert abs(iq.verify_lp_additive(conv, 2, p, K, bd.scale(K, 2.0), 0.5).margin) < 1e-5
    c5 = mv.convolution_generated(5, 3, gen.spheroid(5, 0.7, 1.2))
    Z = gen.random_zonal(rng)
    assert iq.verify_lp_additive(c5, 2, 2.0, Ball(5), Z, 0.5).margin >= -1e-6
    r = iq.verify_lp_additive(conv, 2, 2.0, K, gen.cube(1, 0.1), 1e-9)
    assert r.lhs == pytest.approx(r.rhs, rel=1e-6)
    with pytest.raises(ValueError):
        iq.verify_lp_additive(conv, 2, 1.0, K, K, 0.5)


def test_monotone_examples(conv, rng):
    assert iq.verify_monotone(conv, 2, Ball(3), Ball(3, 2.0)).probe_ok
    assert iq.verify_monotone(conv, 2, Ball(3), Ball(3, 2.0)).expect == "strict"
    same = iq.verify_monotone(conv, 2, Ball(3), Ball(3))
    assert same.expect == "zero" and same.probe_ok
    L = gen.random_hull(rng)
    assert iq.verify_monotone(conv, 3, gen.shrink_inside(L, rng), L).margin >= 0
    with pytest.raises(ValueError, match="containment violated"):
        iq.verify_monotone(conv, 2, Ball(3, 2.0), Ball(3))


def test_record_probe_semantics():
    r = iq.Record("bm", 0, 0, 2e-6, 1e-6, expect="zero")
    assert r.passed and r.probe_ok
    r = iq.Record("bm", 0, 0, 2e-6, 1e-6, expect="strict")
    assert not r.probe_ok
    r = iq.Record("bm", 0, 0, -2e-6, 1e-6)
    assert not r.passed
    assert iq.Record("bm", 0, 0, 0, 1, error="x").as_dict()["passed"] is False


def test_scenario_validation():
    with pytest.raises(ValueError, match="unknown inequality"):
        suite.Scenario.from_dict({"id": "x", "inequality": "nope"})
    with pytest.raises(ValueError, match="lambda"):
        suite.Scenario.from_dict({"id": "x", "inequality": "bm", "lambdas": [1.0]})
    with pytest.raises(ValueError, match="pipeline"):
        suite.Scenario.from_dict({"id": "x", "inequality": "bm", "pipeline": "s3"})
    sc = suite.Scenario.from_dict({"id": "x", "inequality": "bm", "n": 5})
    assert sc.pipeline == "zonal" and len(sc.digest()) == 16


def test_ladder():
    assert suite.ladder_tolerance(bd.default_grid()) == 1e-5
    from minkbm import sphere3 as s3
    assert suite.ladder_tolerance(s3.make_grid(24, 48)) == 1e-4


def test_golden_rows_all_pass():
    rows = golden.all_rows()
    assert len(rows) > 600 and all(r.passed for r in rows)


def _small_config():
    cfg = suite.load_config(None)
    cfg["scenarios"] = [s for s in cfg["scenarios"] if s["id"] in ("steiner", "ratio_zonal", "quermass_bm_zonal")]
    return cfg


def test_run_suite_reproducible(tmp_path):
    a = suite.run_suite(_small_config()).write(tmp_path / "a")
    b = suite.run_suite(_small_config(), workers=3).write(tmp_path / "b")
    assert a["json"].read_bytes() == b["json"].read_bytes()
    assert a["csv"].read_bytes() == b["csv"].read_bytes()
    c = suite.run_suite(_small_config(), seed=7).write(tmp_path / "c")
    assert a["json"].read_bytes() != c["json"].read_bytes()
    rows = list(csv.reader(a["csv"].open()))
    assert rows[0] == ["scenario", "case", "lhs", "rhs", "margin", "pass"]
    rep = json.loads(a["json"].read_text())
    prov = rep["records"][0]["provenance"]
    assert {"scenario_hash", "config_digest", "grid"} <= set(prov)
    assert "runtime_seconds" in json.loads(a["timing"].read_text())


def test_filter_multipliers_only():
    rep = suite.run_suite(filter="^multipliers$")
    assert {r.inequality for r in rep.records} == {"multipliers"}
    assert not rep.failures


def test_per_case_errors_are_recorded():
    cfg = _small_config()
    cfg["scenarios"].append({"id": "broken", "inequality": "bm", "valuations": [{"type": "conv_generated"}],
                             "orders": [2], "families": ["teapot"], "cases": 1, "probes": False})
    rep = suite.run_suite(cfg)
    bad = [r for r in rep.records if r.scenario == "broken"]
    assert bad and all("teapot" in r.error for r in bad)
    assert any(r.scenario == "steiner" and r.passed for r in rep.records)
    assert rep.summary()["errors"] == len(bad)


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["multipliers", "--golden"]) == 0
    assert cli.main(["multipliers", "--n", "4", "--j", "3", "--kmax", "4"]) == 0
    out = capsys.readouterr().out
    assert "2.094395" in out  # a_0 = 2 pi / 3
    assert cli.main(["body", '{"type": "cube"}', "--directions", "[[1, 1, 1]]"]) == 0
    assert cli.main(["body", '{"type": "torus"}']) == 2
    assert cli.main(["apply", '{"type": "projection", "i": 2}', '{"type": "cube"}', "--method", "direct",
                     "--directions", "[[1, 2, 0]]", "--out", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "apply.json").read_text())
    assert res["output"]["support"][0] == pytest.approx(3.0, rel=1e-12)
    cfg = _small_config()
    cfg["scenarios"] = [{"id": "broken", "inequality": "steiner", "valuations": [{"type": "conv_generated"}],
                         "families": ["teapot"], "cases": 1}]
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert cli.main(["verify", "--config", str(p)]) == 1
    assert cli.main(["verify", "--filter", "^steiner$", "--out", str(tmp_path / "rep")]) == 0
    assert (tmp_path / "rep" / "report.csv").exists()


def test_generators_are_convex(rng, grid):
    assert bd.check_convex(gen.random_harmonic_body(rng))
    Z = gen.random_zonal(rng)
    assert bd.zonal_convexity_margin(Z) > 0
    H = gen.random_hull(rng)
    assert np.min(H.support(grid.nodes)) > 0
    K = gen.shrink_inside(H, rng)
    assert bd.contains(H, K)
    P = gen.perturb(H, rng)
    assert bd.hausdorff(P, H) > 0
