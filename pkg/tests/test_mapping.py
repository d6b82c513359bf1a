import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pluriharm import linalg, mapping
from pluriharm.errors import BadDirection, DomainError
from pluriharm.extremal import ExtremalSpec, build_extremal
from pluriharm.mapping import MapModel, PolynomialModel, linear_model
from pluriharm.random_maps import random_polynomial_map

from oracles import fd_real_jacobian, sphere_search_extremes


def scalar(coeffs):
    """n = 1 polynomial from ``{power: coefficient}``."""
    return PolynomialModel(1, {(p,): [c] for p, c in coeffs.items()})


def affine(k):
    """``z + k conj(z)``."""
    return MapModel(scalar({1: 1.0}), scalar({1: k}))


def random_point(rng, n, rmax=0.9):
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z) * rmax * rng.uniform() ** (1 / (2 * n))


maps = st.tuples(st.integers(1, 3), st.integers(0, 10**6))


def build(spec):
    n, seed = spec
    rng = np.random.default_rng(seed)
    return random_polynomial_map(n, rng), random_point(rng, n)


def test_evaluate_examples():
    np.testing.assert_allclose(mapping.evaluate(mapping.identity_map(2), [0.3, 0.4j]), [0.3, 0.4j])
    f = MapModel(scalar({1: 1.0}), scalar({1: 0.5}))
    assert mapping.evaluate(f, [0.2])[0] == pytest.approx(0.3)
    ext = build_extremal(ExtremalSpec("upper_thm2", 1.0, 0.0, 0.0))
    assert mapping.evaluate(ext, [0.5])[0] == pytest.approx(1.0)


def test_evaluate_rejects_outside_ball():
    with pytest.raises(DomainError):
        mapping.evaluate(mapping.identity_map(2), [0.8, 0.6])
    with pytest.raises(DomainError):
        mapping.evaluate(mapping.identity_map(1), [1 - 1e-10])
    with pytest.raises(DomainError):
        mapping.evaluate(mapping.identity_map(2), [0.1])


def test_derivatives_examples(rng):
    d = mapping.derivatives(mapping.identity_map(3), [0.1, 0.2, 0.3])
    np.testing.assert_allclose(d.Dh, np.eye(3))
    np.testing.assert_allclose(d.Dg, 0)
    assert scalar({2: 1.0}).jacobian(np.array([0.3]))[0, 0] == pytest.approx(0.6)
    f = random_polynomial_map(3, rng, degree=4)
    z = random_point(rng, 3)
    np.testing.assert_allclose(f.h.jacobian(z), mapping.fd_jacobian(f.h, z), atol=1e-6)
    np.testing.assert_allclose(f.g.jacobian(z), mapping.fd_jacobian(f.g, z), atol=1e-6)


def test_polynomial_hessian_matches_fd(rng):
    f = random_polynomial_map(2, rng, degree=4)
    z = random_point(rng, 2)
    np.testing.assert_allclose(f.h.hessian(z), mapping.fd_hessian(f.h, z), atol=1e-5)


def test_polynomial_degree_cap():
    with pytest.raises(DomainError):
        PolynomialModel(1, {(17,): [1.0]})


def test_directional_derivative_examples(rng):
    theta = np.array([0.6, 0.8j])
    np.testing.assert_allclose(mapping.directional_derivative(mapping.identity_map(2), [0.1, 0.1], theta), theta)
    k = 0.3
    for t in np.linspace(0, 2 * math.pi, 13):
        d = mapping.directional_derivative(affine(k), [0.2j], [np.exp(1j * t)])[0]
        assert d == pytest.approx(np.exp(1j * t) + k * np.exp(-1j * t))
        assert 1 - k - 1e-12 <= abs(d) <= 1 + k + 1e-12
    with pytest.raises(BadDirection):
        mapping.directional_derivative(affine(k), [0.0], [2.0])


@given(maps)
def test_directional_derivative_difference_quotient(spec):
    f, z = build(spec)
    rng = np.random.default_rng(spec[1] + 1)
    theta = rng.standard_normal(f.n) + 1j * rng.standard_normal(f.n)
    theta /= np.linalg.norm(theta)
    rho = 1e-6
    quotient = (mapping.evaluate(f, z + rho * theta) - mapping.evaluate(f, z)) / rho
    np.testing.assert_allclose(mapping.directional_derivative(f, z, theta), quotient, atol=1e-5)


def test_dilatation_examples():
    assert mapping.dilatation_norm(mapping.identity_map(2), [0.1, 0.2]) == 0.0
    h = scalar({1: 1.0, 2: 0.3})
    g = scalar({1: 0.4, 2: 0.12})
    assert mapping.dilatation_norm(MapModel(h, g), [0.5j]) == pytest.approx(0.4)
    f = MapModel(mapping.identity_model(2), linear_model(np.diag([0.1, 0.3])))
    assert mapping.dilatation_norm(f, [0.1, 0.0]) == pytest.approx(0.3)


def test_real_jacobian_examples(rng):
    np.testing.assert_allclose(mapping.real_jacobian(mapping.identity_map(2), [0.1, 0.2]), np.eye(4))
    k = 0.4
    np.testing.assert_allclose(mapping.real_jacobian(affine(k), [0.3]), [[1 + k, 0], [0, 1 - k]], atol=1e-15)
    f = random_polynomial_map(2, rng, degree=3)
    z = random_point(rng, 2)
    np.testing.assert_allclose(mapping.real_jacobian(f, z), fd_real_jacobian(f, z), atol=1e-6)


def test_lambda_extremes_examples():
    assert mapping.lambda_extremes(mapping.identity_map(3), [0.0, 0.1, 0.2]) == pytest.approx((1, 1))
    assert mapping.lambda_extremes(affine(0.25), [0.5]) == pytest.approx((1.25, 0.75))


def test_det_jacobian_examples(rng):
    assert mapping.det_jacobian(mapping.identity_map(2), [0.1, 0.1]) == pytest.approx(1.0)
    assert mapping.det_jacobian(affine(0.5), [0.2]) == pytest.approx(0.75)
    f = random_polynomial_map(2, rng)
    z = random_point(rng, 2)
    direct = np.linalg.det(mapping.real_jacobian(f, z))
    assert abs(mapping.det_jacobian(f, z) - direct) <= 1e-9 * abs(direct)


def test_is_sense_preserving_examples():
    assert mapping.is_sense_preserving(mapping.identity_map(2), [0.1, 0.1], 0.0)
    f = MapModel(scalar({1: 1.0}), scalar({1: 0.5}))
    assert not mapping.is_sense_preserving(f, [0.3], 0.4)
    assert mapping.is_sense_preserving(f, [0.3], 0.5)
    singular = MapModel(scalar({2: 1.0}), scalar({}))
    assert not mapping.is_sense_preserving(singular, [0.0], 0.5)


def test_second_derivative_examples():
    d2 = mapping.second_derivative_at_zero(mapping.identity_model(2))
    np.testing.assert_allclose(d2([1, 0], [0, 1]), 0)
    a = 0.7 - 0.2j
    d2 = mapping.second_derivative_at_zero(scalar({1: 1.0, 2: a}))
    theta = np.exp(0.3j)
    assert d2([theta], [theta])[0] == pytest.approx(2 * a * theta ** 2)
    for alpha in (1.0, 2.0, 3.5):
        h = build_extremal(ExtremalSpec("pommerenke", alpha)).h
        d2 = mapping.second_derivative_at_zero(h)
        # h''(0) = 2 alpha by hand from the Taylor series
        assert abs(d2([1.0], [1.0])[0]) / 2 == pytest.approx(alpha, abs=1e-6)


@given(maps)
def test_directional_norm_between_extremes(spec):
    f, z = build(spec)
    big, small = mapping.lambda_extremes(f, z)
    rng = np.random.default_rng(spec[1] + 2)
    for _ in range(8):
        theta = rng.standard_normal(f.n) + 1j * rng.standard_normal(f.n)
        theta /= np.linalg.norm(theta)
        d = np.linalg.norm(mapping.directional_derivative(f, z, theta))
        assert small - 1e-9 <= d <= big + 1e-9


@given(maps)
def test_sandwich_against_dh_norm(spec):
    f, z = build(spec)
    kappa = mapping.dilatation_norm(f, z)
    ndh = linalg.operator_norm(f.h.jacobian(z))
    big, _ = mapping.lambda_extremes(f, z)
    assert (1 - kappa) * ndh - 1e-9 <= big <= (1 + kappa) * ndh + 1e-9


@given(maps)
def test_det_identities(spec):
    f, z = build(spec)
    direct = np.linalg.det(mapping.real_jacobian(f, z))
    if abs(direct) <= 1e-8:
        return
    assert abs(mapping.det_jacobian(f, z) - direct) <= 1e-9 * abs(direct)
    block = np.linalg.det(mapping.complex_block_jacobian(f, z))
    assert abs(block.imag) <= 1e-9 * abs(direct)
    assert abs(block.real - direct) <= 1e-9 * abs(direct)


@given(maps)
def test_small_dilatation_gives_positive_jacobian(spec):
    f, z = build(spec)
    if mapping.dilatation_norm(f, z) < 1:
        assert mapping.det_jacobian(f, z) > 0


def test_closed_form_self_check():
    f = build_extremal(ExtremalSpec("upper_thm2", 2.0, 0.5, 0.7))
    pts = [np.array([0.3 * np.exp(1j * t)]) for t in range(6)]
    assert f.h.self_check(pts) <= 1e-6
    assert f.g.self_check(pts) <= 1e-6


def test_lambda_extremes_match_sphere_search(rng):
    for n in (1, 2, 3):
        f = random_polynomial_map(n, rng)
        z = random_point(rng, n)
        big, small = mapping.lambda_extremes(f, z)
        s_big, s_small = sphere_search_extremes(f, z)
        assert abs(big - s_big) <= 1e-6 and abs(small - s_small) <= 1e-6
