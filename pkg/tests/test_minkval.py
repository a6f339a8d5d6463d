import math

import numpy as np
import pytest

from minkbm import body as bd
from minkbm import measures as ms
from minkbm import minkval as mv
from minkbm import specfun as sf
from minkbm import zonal as zn
from minkbm.harness import generators as gen

from oracles import shadow_area

RNG_DIRS = np.random.default_rng(7).normal(size=(25, 3))


def _conv(n=3, j=2, eq=0.7, pol=1.2):
    return mv.convolution_generated(n, j, gen.spheroid(n, eq, pol))


def test_degree_one_coefficient_forced_and_degree_checked():
    phi = mv.custom_kernel(3, 1, [1.0, 5.0, 0.3])
    assert phi.coeffs[1] == 0
    assert not phi.declared_valid
    with pytest.raises(ValueError):
        mv.custom_kernel(3, 3, [1.0])
    with pytest.raises(ValueError):
        phi.coeffs[0] = 2.0


def test_projection_kernel_parity():
    phi = mv.projection_body(3, 2, 16)
    np.testing.assert_allclose(phi.coeffs[1::2], 0, atol=1e-15)
    assert phi.coeffs[0] == pytest.approx(math.pi)  # integral of |t|/2 over S^2
    assert "truncated" in phi.label and not phi.smooth
    with pytest.raises(ValueError):
        mv.projection_body(3, 3)


def test_projection_cube_direct_is_exact(grid, unit_cube):
    phi = mv.projection_body(3, 2)
    M = mv.apply(phi, unit_cube, method="direct")
    ref = np.abs(grid.nodes).sum(axis=1)
    assert np.max(np.abs(M.values - ref) / ref) < 1e-12


def test_projection_cube_spectral_truncation_is_reported(grid, unit_cube):
    # the |t|/2 kernel is not smooth; its degree-32 truncation is off by about 2%
    M = mv.apply(mv.projection_body(3, 2), unit_cube)
    ref = np.abs(grid.nodes).sum(axis=1)
    err = np.max(np.abs(M.values - ref) / ref)
    assert 1e-3 < err < 5e-2


def test_projection_matches_shadow_area_oracle():
    rng = np.random.default_rng(11)
    P = bd.Polytope(rng.normal(size=(14, 3)))
    phi = mv.projection_body(3, 2)
    got = mv.support_at(phi, P, RNG_DIRS)
    ref = [shadow_area(P.vertices, u) * np.linalg.norm(u) for u in RNG_DIRS]
    np.testing.assert_allclose(got, ref, rtol=1e-12)


def test_projection_translation_invariance():
    rng = np.random.default_rng(5)
    P = bd.Polytope(rng.normal(size=(10, 3)), 0.1)
    phi = mv.projection_body(3, 2)
    a = mv.support_at(phi, P, RNG_DIRS)
    b = mv.support_at(phi, bd.translate(P, [0.4, -1.0, 2.0]), RNG_DIRS)
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_projection_of_ball():
    for r in (0.5, 1.0, 2.0):
        M = mv.apply(mv.projection_body(3, 2), bd.Ball(3, r))
        assert isinstance(M, bd.Ball)
        assert M.radius == pytest.approx(math.pi * r * r, rel=1e-12)


def test_equivariance_under_rotation():
    rng = np.random.default_rng(2)
    P = bd.Polytope(rng.normal(size=(9, 3)), 0.05)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    phi = mv.projection_body(3, 2)
    a = mv.support_at(phi, bd.rotate(P, q), RNG_DIRS @ q.T)
    b = mv.support_at(phi, P, RNG_DIRS)
    np.testing.assert_allclose(a, b, rtol=1e-10)


def test_mean_section_examples():
    phi = mv.mean_section(4, 3, 12)
    assert phi.degree == 2
    assert phi.coeffs[1] == 0
    assert phi.coeffs[0] == pytest.approx(2 * math.pi / 3, rel=1e-13)
    m = mv.mean_section(3, 3, 12)
    assert m.degree == 1
    assert isinstance(mv.apply(m, bd.Ball(3, 1.3)), bd.Ball)
    assert mv.mean_section(3, 2, 12, p_ni=2.0).coeffs[0] == pytest.approx(2 * sf.berg_multiplier_closed(3, 2, 0))
    with pytest.raises(ValueError):
        mv.mean_section(3, 1)


def test_convolution_with_ball_is_ball(grid):
    r = 0.8
    phi = mv.convolution_generated(3, 2, bd.Ball(3, r))
    K = gen.cube(1.0, 0.1)
    M = mv.apply(phi, K)
    # constant kernel r: h = r times the total mass of S_2(K)
    np.testing.assert_allclose(M.values, r * ms.area_measure(K, 2).total_mass(), rtol=1e-10)


def test_convolution_requires_symmetric_generator():
    with pytest.raises(ValueError, match="symmetric"):
        mv.convolution_generated(3, 2, bd.translate(gen.spheroid(3, 1, 0.5), [0, 0, 0.3]))
    with pytest.raises(ValueError):
        mv.convolution_generated(4, 2, gen.spheroid(3, 1, 0.5))


def test_convolution_output_is_support_function(rng):
    phi = _conv()
    for K in (gen.random_hull(rng), gen.random_harmonic_body(rng), gen.cube(1.0, 0.1)):
        ok, margin = mv.support_check(mv.apply(phi, K))
        assert ok, margin


def test_spectral_and_direct_agree_for_smooth_kernel(rng, grid):
    phi = _conv()
    K = gen.random_harmonic_body(rng)
    a = mv.apply(phi, K).values
    b = mv.apply(phi, K, method="direct").values
    assert np.max(np.abs(a - b)) < 1e-8 * np.max(np.abs(a))


def test_zonal_pipeline_direct_matches_spectral():
    phi = _conv(5, 2)
    K = gen.spheroid(5, 1.0, 0.6)
    a, b = mv.apply(phi, K), mv.apply(phi, K, method="direct")
    t = np.linspace(-1, 1, 41)
    np.testing.assert_allclose(a.h(t), b.h(t), rtol=1e-8)


def test_steiner_point_vanishes(rng):
    for phi in (mv.projection_body(3, 2), _conv(), mv.mean_section(3, 2)):
        K = bd.translate(gen.random_hull(rng), [0.5, -0.3, 0.2])
        M = mv.apply(phi, K, method="direct" if phi.pointwise is not None else "spectral")
        assert np.linalg.norm(bd.steiner_point(M)) < 1e-6 * M.diameter


def test_apply_validation_error(grid):
    bad = mv.custom_kernel(3, 2, [4 * math.pi, 0, 0, 0, 60.0], declared_valid=True)
    E = gen.ellipsoid((1, 0.8, 0.6), grid)
    with pytest.raises(ValueError, match="not a support function.*margin"):
        mv.apply(bad, E)
    mv.apply(bad, E, validate=False)


def test_apply_errors():
    phi = _conv()
    with pytest.raises(ValueError, match="dimension"):
        mv.apply(phi, bd.Ball(4))
    with pytest.raises(ValueError):
        mv.apply(phi, gen.cube(), method="fourier")


def test_lambda_power_scaling_and_roundtrip():
    phi = _conv(5, 3)
    lam = mv.lambda_power(phi, 1)
    assert lam.degree == 2
    np.testing.assert_allclose(lam.coeffs, 3 * phi.coeffs, rtol=1e-15)
    up = mv.lambda_power(phi, -1)
    assert up.degree == 4
    back = mv.lambda_power(up, 1)
    np.testing.assert_allclose(back.coeffs, phi.coeffs, rtol=1e-15)
    two = mv.lambda_power(phi, 2)
    np.testing.assert_allclose(two.coeffs, 6 * phi.coeffs, rtol=1e-15)


def test_lambda_power_guards():
    with pytest.raises(ValueError, match="declared"):
        mv.lambda_power(mv.projection_body(5, 2), -1)
    with pytest.raises(ValueError, match="range"):
        mv.lambda_power(_conv(3, 2), -1)
    with pytest.raises(ValueError, match="range"):
        mv.lambda_power(_conv(3, 1), 2)


def test_lefschetz_examples():
    phi = mv.projection_body(3, 1, 16)
    L = mv.lefschetz(phi)
    assert L.degree == 2 and L.coeffs[1] == 0
    m = mv.lefschetz_multipliers(3, 1, 16)
    assert np.all(np.delete(m, 1) != 0)  # injective on kernels with c_1 = 0
    ref = [sf.berg_multiplier_closed(3, 2, k) / sf.berg_multiplier_closed(3, 3, k) for k in (0, 2, 5)]
    np.testing.assert_allclose(m[[0, 2, 5]], ref)
    other = mv.custom_kernel(3, 1, np.r_[phi.coeffs[:3], np.zeros(14)])
    assert not np.allclose(mv.lefschetz(other).coeffs, L.coeffs)
    with pytest.raises(ValueError):
        mv.lefschetz(mv.projection_body(3, 2))
    assert mv.lefschetz(phi, 2.0).coeffs[0] == pytest.approx(2 * L.coeffs[0])


def test_lefschetz_ratio_constancy():
    phi = mv.lefschetz(_conv(5, 2))
    bodies = [bd.Ball(5, 1.0), gen.spheroid(5, 1.0, 0.5), gen.spheroid(5, 0.6, 1.3),
              gen.random_zonal(np.random.default_rng(0))]
    assert mv.ratio_r(phi, bodies).max_deviation < 1e-6


def test_ratio_examples(unit_cube):
    assert mv.ratio_r(mv.custom_kernel(3, 2, np.zeros(5)), [bd.Ball(3), gen.cube()]).r == 0
    pi2 = mv.projection_body(3, 2)
    r = mv.ratio_r(pi2, [bd.Ball(3), unit_cube])
    assert r.max_deviation < 1e-10
    rc = mv.ratio_r(_conv(), [bd.Ball(3), gen.cube(1, 0.1), gen.spheroid(3, 1, 0.5)])
    assert rc.max_deviation < 1e-6


def test_class_membership_convolution_generated():
    phi = _conv()
    bodies = [bd.Ball(3), gen.spheroid(3, 1.0, 0.15), gen.cube(1.0, 0.1)]
    for i in (1, 2):
        assert mv.class_membership(phi, i, bodies).passed


def test_kiderlen_example_fails_top_order():
    g = zn.analyze(lambda t: np.exp(-40 * (1 - t * t)), 3, 32)
    kd = mv.kiderlen(3, g)
    flat, ball = gen.spheroid(3, 1.0, 0.15), bd.Ball(3)
    assert mv.class_membership(kd, 1, [flat, ball]).passed
    top = mv.class_membership(kd, 2, [flat, ball], ["flat", "ball"])
    assert not top.passed and top.worst_margin < 0
    assert dict((lab, ok) for lab, ok, _ in top.per_body)["ball"]
    with pytest.raises(ValueError, match="nonnegative"):
        mv.kiderlen(3, zn.band_limited(3, [0.0, 0.0, 1.0]))


def test_kiderlen_reproduces_mean_width_convolution():
    # S_1(K) * f equals h(K) * g, up to the linear part
    g = zn.analyze(lambda t: 1 + t * t, 3, 16)
    kd = mv.kiderlen(3, g)
    K = gen.spheroid(3, 1.0, 0.5, 16)
    out = mv.apply(kd, K).profile.coeffs
    ref = K.profile.coeffs * g.coeffs
    np.testing.assert_allclose(np.delete(out, 1), np.delete(ref, 1), rtol=1e-9, atol=1e-12)


def test_switch_identity_balls_and_random(rng):
    phi = _conv()
    for i in (1, 2, 3):
        r = mv.switch_identity_check(phi, i, bd.Ball(3, 1.0), bd.Ball(3, 1.0))
        assert r.gap < 1e-12
    K, L = gen.random_harmonic_body(rng), gen.random_harmonic_body(rng)
    assert mv.switch_identity_check(phi, 3, K, L).gap < 1e-4
    with pytest.raises(ValueError):
        mv.switch_identity_check(mv.projection_body(3, 2), 4, K, L)


def test_switch_identity_beyond_degree_plus_one():
    phi = _conv(5, 2)
    rng = np.random.default_rng(4)
    K, L = gen.random_zonal(rng), gen.random_zonal(rng)
    assert mv.switch_identity_check(phi, 4, K, L).gap < 1e-3


def test_weak_monotone(rng):
    phi = _conv()
    L = gen.random_hull(rng)
    K = gen.shrink_inside(L, rng)
    assert mv.weak_monotone_check(phi, K, L).feasible
    assert not mv.weak_monotone_check(phi, bd.Ball(3, 2.0), bd.Ball(3, 1.0)).feasible


def test_from_spec_variants():
    assert mv.from_spec({"type": "projection", "i": 2}).degree == 2
    ms_ = mv.from_spec({"type": "mean_section", "i": 2}, constants={"p_ni": {"2": 3.0}})
    assert ms_.constants["p_ni"] == 3.0
    cg = mv.from_spec({"type": "conv_generated", "n": 5, "j": 2,
                       "L": {"type": "spheroid", "n": 5, "equatorial": 1, "polar": 0.5}})
    assert cg.max_class == 4
    lf = mv.from_spec({"type": "projection", "i": 1, "lefschetz_steps": 1})
    assert lf.degree == 2
    ls = mv.from_spec({"type": "conv_generated", "L": {"type": "ball"}, "lambda_steps": 1})
    assert ls.degree == 1
    ck = mv.from_spec({"type": "custom_kernel", "j": 2, "coeffs": [1, 0, 0.1]})
    assert not ck.declared_valid
    with pytest.raises(ValueError, match="unknown"):
        mv.from_spec({"type": "nope"})
