"""Multivariate polynomials, the spaces P_k / Q_k, and the Ruelle operator on them.

Multi-indices are plain tuples of non-negative ints. Bases are listed in
graded-lexicographic order: ascending total degree, then lexicographically
descending exponents (``x1**2, x1*x2, x2**2`` in degree 2). The ordering is a
convention of this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import comb

import numpy as np

from .errors import ValidationError
from .ifs import IFS, AffineMap
from .measure import MeasureSpec

MAX_DEGREE = 60


def graded_lex_key(alpha: tuple[int, ...]):
    return (sum(alpha), tuple(-a for a in alpha))


def homogeneous_basis(n: int, k: int) -> list[tuple[int, ...]]:
    """All exponent tuples of length ``n`` with total degree exactly ``k``."""
    if n == 1:
        return [(k,)]
    out = []
    for first in range(k, -1, -1):
        for rest in homogeneous_basis(n - 1, k - first):
            out.append((first,) + rest)
    return out


def total_degree_basis(n: int, k: int) -> list[tuple[int, ...]]:
    return [a for d in range(k + 1) for a in homogeneous_basis(n, d)]


def tensor_degree_basis(n: int, k: int) -> list[tuple[int, ...]]:
    return sorted(product(range(k + 1), repeat=n), key=graded_lex_key)


@dataclass(frozen=True)
class SpaceSpec:
    """Either ``P_k`` (``kind="total"``) or ``Q_k`` (``kind="tensor"``) in ``dim`` variables."""

    kind: str
    dim: int
    degree: int

    def __post_init__(self):
        if self.kind not in ("total", "tensor"):
            raise ValidationError(f"unknown space kind {self.kind!r}")
        if self.dim < 1 or self.degree < 0:
            raise ValidationError("space needs dim >= 1 and degree >= 0")

    @cached_property
    def basis(self) -> list[tuple[int, ...]]:
        if self.kind == "total":
            return total_degree_basis(self.dim, self.degree)
        return tensor_degree_basis(self.dim, self.degree)

    @property
    def size(self) -> int:
        if self.kind == "total":
            return comb(self.dim + self.degree, self.dim)
        return (self.degree + 1) ** self.dim

    @property
    def max_total_degree(self) -> int:
        return self.degree if self.kind == "total" else self.dim * self.degree


class Polynomial:
    """Sparse real polynomial: a map from exponent tuples to nonzero coefficients."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, coeffs=None, dim: int | None = None):
        coeffs = dict(coeffs or {})
        if dim is None:
            if not coeffs:
                raise ValidationError("dim is required for the zero polynomial")
            dim = len(next(iter(coeffs)))
        clean = {}
        for alpha, c in coeffs.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim or any(a < 0 for a in alpha):
                raise ValidationError(f"bad exponent {alpha} for dimension {dim}")
            c = float(c)
            if c != 0.0:
                clean[alpha] = clean.get(alpha, 0.0) + c
        self.dim = dim
        self.coeffs = {a: c for a, c in clean.items() if c != 0.0}

    @classmethod
    def monomial(cls, alpha, coeff: float = 1.0) -> "Polynomial":
        alpha = tuple(alpha)
        return cls({alpha: coeff}, dim=len(alpha))

    @classmethod
    def constant(cls, value: float, dim: int) -> "Polynomial":
        return cls({(0,) * dim: value}, dim=dim)

    @classmethod
    def from_dense(cls, arr: np.ndarray) -> "Polynomial":
        """Inverse of :meth:`to_dense`: ``arr[alpha]`` is the coefficient of ``x**alpha``."""
        idx = np.nonzero(arr)
        return cls({tuple(int(i) for i in a): arr[a] for a in zip(*idx)}, dim=arr.ndim)

    def to_dense(self, size: int | None = None) -> np.ndarray:
        size = self.degree + 1 if size is None else size
        arr = np.zeros((max(size, 1),) * self.dim)
        for alpha, c in self.coeffs.items():
            arr[alpha] = c
        return arr

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree 0 here."""
        return max((sum(a) for a in self.coeffs), default=0)

    def terms(self):
        return sorted(self.coeffs.items(), key=lambda t: graded_lex_key(t[0]))

    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial({a: c for a, c in self.coeffs.items() if sum(a) == k}, dim=self.dim)

    def __call__(self, x):
        """Evaluate at points with shape (..., n)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1])
        for alpha, c in self.coeffs.items():
            out = out + c * np.prod(x ** np.array(alpha), axis=-1)
        return out

    def _check(self, other: "Polynomial"):
        if other.dim != self.dim:
            raise ValidationError("polynomials live in different dimensions")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.dim)
        self._check(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0.0) + c
        return Polynomial(out, dim=self.dim)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({a: -c for a, c in self.coeffs.items()}, dim=self.dim)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial({a: c * other for a, c in self.coeffs.items()}, dim=self.dim)
        self._check(other)
        out: dict = {}
        for a, c in self.coeffs.items():
            for b, d in other.coeffs.items():
                key = tuple(i + j for i, j in zip(a, b))
                out[key] = out.get(key, 0.0) + c * d
        return Polynomial(out, dim=self.dim)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Polynomial({dict(self.terms())!r}, dim={self.dim})"

    def allclose(self, other: "Polynomial", atol: float = 1e-12) -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self.coeffs.get(a, 0.0) - other.coeffs.get(a, 0.0)) <= atol for a in keys)


def _times_linear(arr: np.ndarray, row: np.ndarray, shift: float) -> np.ndarray:
    """Multiply a dense coefficient array by ``row . x + shift`` (no overflow past the array)."""
    out = shift * arr
    for j, a in enumerate(row):
        if a == 0.0:
            continue
        src = [slice(None)] * arr.ndim
        dst = [slice(None)] * arr.ndim
        src[j] = slice(0, -1)
        dst[j] = slice(1, None)
        out[tuple(dst)] += a * arr[tuple(src)]
    return out


class _MonomialImages:
    """Dense coefficient arrays of ``x**alpha o S`` for one affine map, built by recursion.

    ``x**alpha o S = (x**(alpha - e_i) o S) * (A[i] . x + b[i])`` with ``i`` the
    first nonzero exponent, so every image costs one multiplication by a linear form.
    """

    def __init__(self, A: np.ndarray, b: np.ndarray, degree: int):
        if degree > MAX_DEGREE:
            raise ValidationError(f"degree {degree} exceeds the supported maximum {MAX_DEGREE}")
        self.A = A
        self.b = b
        self.size = degree + 1
        n = A.shape[0]
        one = np.zeros((self.size,) * n)
        one[(0,) * n] = 1.0
        self._cache = {(0,) * n: one}

    def __call__(self, alpha: tuple[int, ...]) -> np.ndarray:
        hit = self._cache.get(alpha)
        if hit is not None:
            return hit
        i = next(j for j, a in enumerate(alpha) if a > 0)
        parent = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1 :]
        arr = _times_linear(self(parent), self.A[i], self.b[i])
        self._cache[alpha] = arr
        return arr


def compose_affine(p: Polynomial, m: AffineMap) -> Polynomial:
    """The polynomial ``x -> p(A x + b)``, expanded exactly."""
    if m.dim != p.dim:
        raise ValidationError("polynomial and map dimensions differ")
    images = _MonomialImages(m.A, m.b, p.degree)
    acc = np.zeros((images.size,) * p.dim)
    for alpha, c in p.coeffs.items():
        acc += c * images(alpha)
    return Polynomial.from_dense(acc)


def ruelle_apply(p: Polynomial, ifs: IFS, mu: MeasureSpec) -> Polynomial:
    """``F[p] = sum_l mu_l * p o S_l``."""
    if len(mu) != len(ifs):
        raise ValidationError("measure and IFS have different numbers of maps")
    size = p.degree + 1
    acc = np.zeros((size,) * p.dim)
    for w, m in zip(mu.weights, ifs.maps):
        if m.dim != p.dim:
            raise ValidationError("polynomial and map dimensions differ")
        images = _MonomialImages(m.A, m.b, p.degree)
        for alpha, c in p.coeffs.items():
            acc += (w * c) * images(alpha)
    return Polynomial.from_dense(acc)


def ruelle_block(ifs: IFS, mu: MeasureSpec, k: int) -> np.ndarray:
    """Matrix of the diagonal block ``F_{k,k} p = sum_l mu_l p(A_l x)`` on ``H_k``.

    Column ``j`` holds the coefficients of the image of the ``j``-th monomial of
    :func:`homogeneous_basis` ``(n, k)``.
    """
    if k < 0:
        raise ValidationError("k must be >= 0")
    if k == 0:
        return np.ones((1, 1))
    basis = homogeneous_basis(ifs.dim, k)
    block = np.zeros((len(basis), len(basis)))
    zero = np.zeros(ifs.dim)
    for w, m in zip(mu.weights, ifs.maps):
        images = _MonomialImages(m.A, zero, k)
        for j, alpha in enumerate(basis):
            arr = images(alpha)
            block[:, j] += w * np.array([arr[beta] for beta in basis])
    return block


def spectral_radius_bound(ifs: IFS, mu: MeasureSpec, k: int) -> float:
    """``r_k = sum_l mu_l rho_l**k``, a bound on the spectrum of ``F_{k,k}`` for ``k >= 1``."""
    if k < 1:
        raise ValidationError("the bound applies to k >= 1 only (F_00 is the identity)")
    return float(np.sum(mu.weights * ifs.rhos**k))
