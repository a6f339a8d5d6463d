"""Randomized properties of the pipelines."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkbm import body as bd
from minkbm import measures as ms
from minkbm import minkval as mv
from minkbm import zonal as zn
from minkbm.harness import generators as gen

seeds = st.integers(0, 2**31 - 1)
CONV = mv.convolution_generated(3, 2, gen.spheroid(3, 0.7, 1.2))
CONV1 = mv.convolution_generated(3, 1, gen.spheroid(3, 0.7, 1.2))


@settings(max_examples=10)
@given(seeds, st.floats(0.3, 3.0))
def test_homogeneity_of_degree_j(seed, c):
    K = gen.random_harmonic_body(np.random.default_rng(seed))
    for phi in (CONV, CONV1):
        a = mv.apply(phi, bd.scale(K, c)).values
        b = c**phi.degree * mv.apply(phi, K).values
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-12)


@settings(max_examples=10)
@given(seeds)
def test_degree_one_is_minkowski_additive(seed):
    rng = np.random.default_rng(seed)
    K, L = gen.random_harmonic_body(rng), gen.ellipsoid(0.6 + rng.random(3))
    a = mv.apply(CONV1, bd.minkowski_combine(K, L)).values
    b = mv.apply(CONV1, K).values + mv.apply(CONV1, L).values
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-12)


@settings(max_examples=10)
@given(seeds)
def test_translation_invariance_of_outputs(seed):
    rng = np.random.default_rng(seed)
    K = gen.random_harmonic_body(rng)
    x = rng.normal(size=3)
    a = mv.apply(CONV, K).values
    b = mv.apply(CONV, bd.translate(K, x)).values
    np.testing.assert_allclose(a, b, atol=1e-9)
    for m in range(4):
        assert ms.quermassintegral(bd.translate(K, x), m) == pytest.approx(ms.quermassintegral(K, m), rel=1e-8)


@settings(max_examples=10)
@given(seeds)
def test_polytope_rotation_equivariance(seed):
    rng = np.random.default_rng(seed)
    P = gen.random_hull(rng)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    u = rng.normal(size=(6, 3))
    phi = mv.projection_body(3, 2)
    np.testing.assert_allclose(mv.support_at(phi, bd.rotate(P, q), u @ q.T), mv.support_at(phi, P, u), rtol=1e-9)


@settings(max_examples=10)
@given(seeds)
def test_lambda_matches_ball_derivative_coefficientwise(seed):
    # S_2(K + tB) = S_2(K) + 2t S_1(K) + t^2 S_0, so the t-derivative at 0 is 2 S_1(K)
    K = gen.random_harmonic_body(np.random.default_rng(seed))
    h = 1e-4
    d = (mv.apply(CONV, bd.minkowski_combine(K, bd.Ball(3, h))).values
         - mv.apply(CONV, K).values) / h
    ref = mv.apply(mv.lambda_power(CONV, 1), K).values
    assert np.max(np.abs(d - ref)) < 1e-3 * np.max(np.abs(ref))


@settings(max_examples=25)
@given(st.lists(st.floats(0.0, 3.0, allow_subnormal=False), min_size=3, max_size=3),
       st.lists(st.floats(0.0, 3.0, allow_subnormal=False), min_size=3, max_size=3),
       st.sampled_from([1.5, 2.0, 4.0]), st.floats(0.05, 0.95))
def test_orlicz_solve_meets_the_constraint(hk, hl, p, lam):
    hk, hl = np.array(hk), np.array(hl)
    phi = bd.OrliczFunction.power(p)
    a = bd.orlicz_solve(hk, hl, phi, lam)
    live = a > 0
    g = (1 - lam) * phi(hk[live] / a[live]) + lam * phi(hl[live] / a[live])
    np.testing.assert_allclose(g, 1.0, rtol=1e-9)
    hi = np.maximum(np.maximum(hk, hl), 1e-300)  # normalized so the reference cannot underflow
    ref = hi * ((1 - lam) * (hk / hi) ** p + lam * (hl / hi) ** p) ** (1 / p)
    np.testing.assert_allclose(a, ref, rtol=1e-12)
    assert np.all(a >= (1 - lam) * hk + lam * hl - 1e-12)


@settings(max_examples=15)
@given(seeds)
def test_body_spec_roundtrip(seed):
    rng = np.random.default_rng(seed)
    for K in (gen.random_hull(rng), gen.random_zonal(rng, 4, 16)):
        K2 = bd.from_spec(json.loads(json.dumps(bd.to_spec(K))))
        u = rng.normal(size=(5, K.n))
        np.testing.assert_allclose(K2.support(u), K.support(u), atol=1e-12)


@settings(max_examples=15)
@given(seeds, st.integers(3, 7))
def test_zonal_analysis_roundtrip(seed, n):
    c = np.random.default_rng(seed).normal(size=7)
    np.testing.assert_allclose(zn.analyze(zn.band_limited(n, c), n, 6).coeffs, c, atol=1e-11)


@settings(max_examples=10)
@given(seeds)
def test_steiner_point_of_outputs_vanishes(seed):
    rng = np.random.default_rng(seed)
    K = bd.translate(gen.random_hull(rng), rng.normal(size=3))
    M = mv.apply(CONV, K)
    assert np.linalg.norm(bd.steiner_point(M)) < 1e-6 * M.diameter
