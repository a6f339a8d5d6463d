import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkbm import specfun as sf
from minkbm import zonal as zn

T = np.linspace(-0.95, 0.95, 19)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_analysis_synthesis_roundtrip(n):
    c = np.array([1.0, 0.3, -0.2, 0.05, 0.0, 0.01])
    p = zn.band_limited(n, c)
    q = zn.analyze(p, n, 5)
    np.testing.assert_allclose(q.coeffs, c, atol=1e-13)


def test_constant_profile_coefficient():
    # a_0 of the constant 1 is the sphere area
    p = zn.analyze(lambda t: np.ones_like(t), 4, 3)
    assert p.coeffs[0] == pytest.approx(sf.omega(4))
    np.testing.assert_allclose(p.coeffs[1:], 0, atol=1e-13)


def test_analyze_rejects_loose_samples():
    with pytest.raises(ValueError):
        zn.analyze(np.ones(5), 3, 2)
    q = sf.jacobi_quadrature(3, 10)
    with pytest.raises(ValueError):
        zn.analyze(np.ones(7), 3, 2, q)


def test_derivative_of_profile():
    p = zn.band_limited(3, [0.0, 0.0, 1.0, 0.5])
    h = 1e-5
    fd = (p(T + h) - p(T - h)) / (2 * h)
    np.testing.assert_allclose(p.derivative(T), fd, atol=1e-7)


def test_pair_matches_parseval():
    n, kmax = 4, 8
    quad = sf.jacobi_quadrature(n, zn.default_order(n, kmax))
    f = zn.analyze(lambda t: np.exp(t), n, kmax, quad)
    dens = zn.analyze(lambda t: 1 + t**2, n, kmax, quad)
    sigma = zn.ZonalMeasure(n, dens, ((0.3, 0.7),))
    fb = zn.band_limited(n, f.coeffs, quad)
    assert zn.pair(sigma, fb) == pytest.approx(zn.parseval_pair(sigma, fb), rel=1e-12)


def test_uniform_measure_mass():
    assert zn.uniform_measure(5).total_mass() == pytest.approx(sf.omega(5))
    assert zn.uniform_measure(5).first_moment() == pytest.approx(0, abs=1e-13)


def test_tau_pole_is_convolution_unit_off_degree_one():
    n, kmax = 3, 10
    tau = zn.tau_pole(n, kmax)
    c = tau.coeffs(kmax)
    assert c[1] == pytest.approx(0, abs=1e-12)
    np.testing.assert_allclose(np.delete(c, 1), 1.0, rtol=1e-12)
    assert tau.first_moment() == pytest.approx(0, abs=1e-12)


def test_atom_outside_interval_rejected():
    with pytest.raises(ValueError):
        zn.ZonalMeasure(3, None, ((1.5, 1.0),))


def test_berg_inverse_roundtrip():
    n = 5
    c = np.array([1.0, 0.0, 0.4, -0.1, 0.05, 0.02])
    p = zn.band_limited(n, c)
    for j in (2, 3, 4, 5):
        back = zn.box_j_inverse_transform(zn.berg_transform(p, j), n, j)
        np.testing.assert_allclose(back.coeffs, c, atol=1e-12)


def test_inverse_refuses_degree_one():
    p = zn.band_limited(3, [1.0, 0.5, 0.2])
    with pytest.raises(ValueError, match="degree-1"):
        zn.box_j_inverse_transform(p, 3, 3)


def test_box_of_same_dimension_berg_is_identity_off_degree_one():
    p = zn.band_limited(4, [1.0, 0.0, 0.3, 0.2, 0.1])
    out = zn.box_n(zn.berg_transform(p, 4))
    np.testing.assert_allclose(out.coeffs, p.coeffs, atol=1e-13)


def test_laplacian_eigenvalues():
    p = zn.band_limited(4, [0.0, 0.0, 0.0, 1.0])
    assert zn.laplacian(p).coeffs[3] == pytest.approx(-3 * (3 + 2))


def test_convolve_coefficient_vs_direct():
    n, kmax = 3, 12
    quad = sf.jacobi_quadrature(n, zn.default_order(n, kmax))
    sigma = zn.ZonalMeasure(n, zn.analyze(lambda t: 1 + 0.5 * t**2, n, kmax, quad), ((0.2, 0.4),))
    f = zn.band_limited(n, [0.5, 0.1, 0.2, 0.0, 0.05], quad)
    spectral = zn.convolve(sigma, f)(T)
    direct = zn.convolve_direct(sigma, f, T)
    np.testing.assert_allclose(direct, spectral, atol=1e-11)


def test_ring_average_of_linear():
    # mean of (u . v) over the ring {v . e = t} is s t
    s = np.array([0.1, -0.4, 0.9])
    for n in (3, 4, 6):
        np.testing.assert_allclose(zn.ring_average(n, lambda z: z, s, 0.3), 0.3 * s, atol=1e-14)


def test_ball_radii_and_density():
    p = zn.band_limited(4, [2 * sf.omega(4) / sf.harmonic_dim(4, 0)])  # constant 2 after synthesis
    rm, rr = zn.principal_radii(p, T)
    np.testing.assert_allclose(rm, p(T))
    np.testing.assert_allclose(rr, p(T))
    for i in range(4):
        np.testing.assert_allclose(zn.elementary_density(p, i, T), p(T) ** i)


def test_tail_energy_and_degree_one_ratio():
    p = zn.band_limited(3, [1.0, 0.0, 0.0, 0.0])
    assert p.tail_energy_ratio(1) == 0.0
    assert zn.degree_one_ratio(zn.band_limited(3, [0.0, 1.0])) == pytest.approx(1.0)


@given(st.integers(3, 7), st.lists(st.floats(-1, 1), min_size=2, max_size=6))
def test_property_synthesis_linear(n, c):
    c = np.array(c)
    a = zn.synthesize(n, c, T)
    b = zn.synthesize(n, 2 * c, T)
    np.testing.assert_allclose(b, 2 * a, atol=1e-12)


def test_legendre_norm_square():
    for n, k in ((3, 2), (5, 4)):
        q = sf.jacobi_quadrature(n, 20)
        p = sf.legendre_p(n, k, q.nodes)
        assert q.integrate(p * p) == pytest.approx(zn.legendre_norm_sq(n, k), rel=1e-12)
