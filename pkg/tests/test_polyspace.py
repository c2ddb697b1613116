import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import scalar_map, system
from fractal_cubature import (
    IFS,
    AffineMap,
    MeasureSpec,
    Polynomial,
    SpaceSpec,
    compose_affine,
    ruelle_apply,
    ruelle_block,
    spectral_radius_bound,
)
from fractal_cubature.errors import ValidationError
from fractal_cubature.polyspace import homogeneous_basis, total_degree_basis

GALLERY = ["cantor", "cantor-dust", "vicsek", "vicsek:0.4", "vicsek:pi/4", "sierpinski-fat", "cantor-dust-asym"]


def random_poly(rng, n, degree, terms=6):
    coeffs = {}
    basis = total_degree_basis(n, degree)
    for _ in range(terms):
        alpha = basis[rng.integers(len(basis))]
        coeffs[alpha] = coeffs.get(alpha, 0.0) + rng.uniform(-1, 1)
    return Polynomial(coeffs, n)


def random_ifs(rng, n, L):
    maps = []
    for _ in range(L):
        A = rng.uniform(-1, 1, (n, n))
        A *= rng.uniform(0.1, 0.9) / np.linalg.norm(A, 2)
        maps.append(AffineMap(A, rng.uniform(-1, 1, n)))
    return IFS(tuple(maps)), MeasureSpec(rng.dirichlet(np.ones(L)) * 0.98 + 0.02 / L)


class TestSpaces:
    @pytest.mark.parametrize("n,k", [(1, 5), (2, 4), (3, 3)])
    def test_sizes(self, n, k):
        assert SpaceSpec("total", n, k).size == math.comb(n + k, n)
        assert SpaceSpec("tensor", n, k).size == (k + 1) ** n

    def test_graded_lex_order(self):
        assert SpaceSpec("total", 2, 2).basis == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        assert homogeneous_basis(2, 3) == [(3, 0), (2, 1), (1, 2), (0, 3)]

    def test_tensor_basis_members(self):
        basis = SpaceSpec("tensor", 2, 2).basis
        assert set(basis) == {(i, j) for i in range(3) for j in range(3)}
        assert [sum(a) for a in basis] == sorted(sum(a) for a in basis)


class TestPolynomial:
    def test_no_zero_coefficients(self):
        p = Polynomial({(1, 0): 1.0, (0, 1): 0.0}, 2)
        assert (0, 1) not in p.coeffs
        assert (p - p).coeffs == {}

    def test_evaluation(self):
        p = Polynomial({(2, 0): 3.0, (0, 1): -1.0, (0, 0): 0.5}, 2)
        x = np.array([[1.5, 2.0], [-1.0, 0.25]])
        np.testing.assert_allclose(p(x), 3 * x[:, 0] ** 2 - x[:, 1] + 0.5)

    def test_product_degree(self):
        p = Polynomial({(1,): 1.0, (0,): 1.0}, 1)
        q = p * p * p
        assert q.degree == 3
        assert q.coeffs[(2,)] == pytest.approx(3.0)


class TestComposeAffine:
    def test_constant(self):
        m = AffineMap(np.array([[0.2, 0.1], [0.0, 0.3]]), np.array([1.0, 2.0]))
        assert compose_affine(Polynomial.constant(1.0, 2), m).allclose(Polynomial.constant(1.0, 2))

    def test_linear_1d(self):
        q = compose_affine(Polynomial.monomial((1,)), scalar_map(1 / 3, 2 / 3))
        assert q.allclose(Polynomial({(1,): 1 / 3, (0,): 2 / 3}, 1), atol=1e-15)

    def test_product_under_rotation_reflection(self):
        # (x1 + x2)(x1 - x2) / 2
        A = math.sqrt(2) / 2 * np.array([[1.0, 1.0], [1.0, -1.0]])
        m = AffineMap.composed(A, np.zeros(2), 1.0)
        q = compose_affine(Polynomial.monomial((1, 1)), m)
        assert q.allclose(Polynomial({(2, 0): 0.5, (0, 2): -0.5}, 2), atol=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 3), st.integers(0, 8), st.integers(0, 2**32 - 1))
    def test_pointwise_identity(self, n, degree, seed):
        rng = np.random.default_rng(seed)
        p = random_poly(rng, n, degree)
        ifs, _ = random_ifs(rng, n, 2)
        m = ifs.maps[0]
        q = compose_affine(p, m)
        x = rng.uniform(-1, 1, (20, n))
        np.testing.assert_allclose(q(x), p(x @ m.A.T + m.b), rtol=1e-11, atol=1e-11)
        assert q.degree <= p.degree

    def test_degree_cap(self):
        with pytest.raises(ValidationError):
            compose_affine(Polynomial.monomial((61,)), scalar_map(0.5, 0.0))


class TestRuelle:
    def test_constant_fixed(self):
        s = system("vicsek:0.4")
        one = Polynomial.constant(1.0, 2)
        assert ruelle_apply(one, s.ifs, s.measure).allclose(one, atol=1e-15)

    def test_cantor_linear(self, cantor, half_mu):
        q = ruelle_apply(Polynomial.monomial((1,)), cantor, half_mu)
        assert q.allclose(Polynomial({(1,): 1 / 3, (0,): 1 / 3}, 1), atol=1e-15)

    def test_degree_non_increase_random(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            n = int(rng.integers(1, 4))
            p = random_poly(rng, n, int(rng.integers(0, 9)))
            ifs, mu = random_ifs(rng, n, int(rng.integers(2, 5)))
            assert ruelle_apply(p, ifs, mu).degree <= p.degree

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
    def test_linearity(self, n, a, seed):
        rng = np.random.default_rng(seed)
        p, q = random_poly(rng, n, 6), random_poly(rng, n, 6)
        ifs, mu = random_ifs(rng, n, 3)
        lhs = ruelle_apply(p * a + q, ifs, mu)
        rhs = ruelle_apply(p, ifs, mu) * a + ruelle_apply(q, ifs, mu)
        assert lhs.allclose(rhs, atol=1e-12)


class TestRuelleBlock:
    def test_degree_zero(self, any_system):
        np.testing.assert_array_equal(ruelle_block(any_system.ifs, any_system.measure, 0), [[1.0]])

    def test_positive_scalars(self):
        rhos, mu = (0.5, 0.25, 0.2), MeasureSpec((0.2, 0.3, 0.5))
        ifs = IFS(tuple(scalar_map(r, 0.1) for r in rhos))
        for k in range(1, 12):
            expected = sum(m * r**k for m, r in zip(mu.weights, rhos))
            block = ruelle_block(ifs, mu, k)
            assert block.shape == (1, 1)
            assert block[0, 0] == pytest.approx(expected, rel=1e-12)
            assert np.linalg.eigvals(block)[0].real == pytest.approx(expected, rel=1e-12)

    def test_signed_scalars(self):
        ifs = IFS((scalar_map(-0.5, 0.0), scalar_map(0.3, 0.5)))
        mu = MeasureSpec((0.4, 0.6))
        for k in range(1, 6):
            assert ruelle_block(ifs, mu, k)[0, 0] == pytest.approx(0.4 * (-0.5) ** k + 0.6 * 0.3**k, rel=1e-12)

    def test_diagonal_matrices(self):
        diags = [(0.5, 0.2), (0.1, 0.7)]
        ifs = IFS(tuple(AffineMap(np.diag(d), np.array([0.3, -0.1])) for d in diags))
        mu = MeasureSpec((0.25, 0.75))
        k = 3
        block = ruelle_block(ifs, mu, k)
        expected = [sum(m * d[0] ** a[0] * d[1] ** a[1] for m, d in zip(mu.weights, diags))
                    for a in homogeneous_basis(2, k)]
        np.testing.assert_allclose(block, np.diag(expected), atol=1e-15)

    @pytest.mark.parametrize("name", GALLERY)
    def test_eigenvalues_in_disk(self, name):
        s = system(name)
        for k in range(1, 7):
            r = spectral_radius_bound(s.ifs, s.measure, k)
            eig = np.linalg.eigvals(ruelle_block(s.ifs, s.measure, k))
            assert np.max(np.abs(eig)) <= r + 1e-10


class TestSpectralRadiusBound:
    def test_cantor(self, cantor, half_mu):
        assert spectral_radius_bound(cantor, half_mu, 1) == pytest.approx(1 / 3, rel=1e-15)
        assert spectral_radius_bound(cantor, half_mu, 2) == pytest.approx(1 / 9, rel=1e-15)

    def test_degree_zero_rejected(self, cantor, half_mu):
        with pytest.raises(ValidationError):
            spectral_radius_bound(cantor, half_mu, 0)

    @pytest.mark.parametrize("name", GALLERY)
    def test_below_rho_max_power(self, name):
        s = system(name)
        for k in range(1, 10):
            assert spectral_radius_bound(s.ifs, s.measure, k) <= s.ifs.rhos.max() ** k * (1 + 1e-15)
