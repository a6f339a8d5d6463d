import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkbm import body as bd
from minkbm import measures as ms
from minkbm import specfun as sf
from minkbm.harness import generators as gen

from oracles import ellipsoid_volume, steiner_cube


def test_cube_quermassintegrals(unit_cube):
    W = [ms.quermassintegral(unit_cube, m) for m in range(4)]
    np.testing.assert_allclose(W, [1.0, 2.0, math.pi, 4 * math.pi / 3], rtol=1e-12)
    V = [ms.intrinsic_volume(unit_cube, i) for i in range(4)]
    np.testing.assert_allclose(V, [1.0, 3.0, 3.0, 1.0], rtol=1e-12)


@pytest.mark.parametrize("edge,eps", [(1.0, 0.1), (2.0, 0.5), (0.5, 1.0)])
def test_inflated_cube_against_steiner_polynomial(edge, eps):
    K = gen.cube(edge, eps)
    ref = steiner_cube(edge, eps)
    for m in range(4):
        assert ms.quermassintegral(K, m) == pytest.approx(ref[m], rel=1e-12)


def test_ellipsoid_volume(grid):
    E = gen.ellipsoid((1.0, 0.7, 1.3), grid)
    assert ms.quermassintegral(E, 0) == pytest.approx(ellipsoid_volume(1.0, 0.7, 1.3), rel=1e-6)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_zonal_ball_quermassintegrals(n):
    Z = bd.as_zonal(bd.Ball(n, 1.5), 8)
    for m in range(n + 1):
        assert ms.quermassintegral(Z, m) == pytest.approx(sf.kappa(n) * 1.5 ** (n - m), rel=1e-12)


def test_spheroid_volume_zonal():
    Z = gen.spheroid(3, 1.2, 0.7)
    assert ms.quermassintegral(Z, 0) == pytest.approx(ellipsoid_volume(1.2, 1.2, 0.7), rel=1e-6)


def test_mixed_w_symmetry(grid):
    K = gen.ellipsoid((1.0, 0.6, 1.2), grid)
    L = bd.as_grid_body(gen.cube(1.0, 0.2), grid)
    # W_{n-2}(K, L) = V(K, L, B) is symmetric in K and L
    assert ms.mixed_w(K, L, 1) == pytest.approx(ms.mixed_w(L, K, 1), rel=1e-6)


def test_mixed_w_with_ball_is_quermass(unit_cube):
    K = gen.cube(1.0, 0.3)
    assert ms.mixed_w(K, bd.Ball(3), 2) == pytest.approx(ms.quermassintegral(K, 1), rel=1e-10)


def test_steiner_formula_for_grid_body(grid):
    E = gen.ellipsoid((1.0, 0.8, 0.6), grid)
    r = 0.4
    Er = bd.minkowski_combine(E, bd.Ball(3, r))
    W = [ms.quermassintegral(E, m) for m in range(4)]
    lhs = ms.quermassintegral(Er, 0)
    rhs = sum(math.comb(3, k) * r**k * W[k] for k in range(4))
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_area_measures_have_no_moment(grid, unit_cube):
    for K in (gen.cube(1, 0.2), gen.ellipsoid((1, 0.5, 0.9), grid), gen.spheroid(5, 1, 0.6)):
        for i in range(1, K.n):
            S = ms.area_measure(K, i)
            assert np.linalg.norm(S.moment()) <= 1e-9 * S.total_mass()


def test_s1_from_support_matches_curvature_measure(grid):
    E = gen.ellipsoid((1.0, 0.9, 0.7), grid)
    a = ms.s1_from_support(E).total_mass()
    b = ms.area_measure(E, 1).total_mass()
    assert a == pytest.approx(b, rel=1e-9)


def test_order_and_index_errors(unit_cube):
    with pytest.raises(ValueError):
        ms.area_measure(unit_cube, 3)
    with pytest.raises(ValueError):
        ms.quermassintegral(unit_cube, 4)
    with pytest.raises(ValueError, match="lower-order"):
        ms.area_measure(unit_cube, 1)


def test_zonal_measure_needs_zonal_integrand(unit_cube):
    S = ms.area_measure(gen.spheroid(3, 1, 0.5), 2)
    with pytest.raises(TypeError):
        S.integrate(unit_cube)
    # mixed_w falls back to the grid representation
    assert ms.mixed_w(gen.spheroid(3, 1, 0.5), bd.as_grid_body(unit_cube), 2) > 0


def test_nonconvex_input_warns(grid):
    z = grid.nodes[:, 2]
    bad = bd.GridBody.from_values(grid, 1.5 - 2 * z**4)  # mean radius < 0 near z^2 = 1/3
    with pytest.warns(RuntimeWarning, match="not convex"):
        ms.s1_from_support(bad)


@settings(max_examples=15)
@given(st.floats(0.2, 3.0), st.integers(0, 3))
def test_property_homogeneity(c, m):
    K = gen.cube(1.0, 0.25)
    assert ms.quermassintegral(bd.scale(K, c), m) == pytest.approx(c ** (3 - m) * ms.quermassintegral(K, m),
                                                                    rel=1e-10)
