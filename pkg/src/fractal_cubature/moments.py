"""Exact polynomial moments of invariant measures, degree by degree.

For ``|alpha| = d`` the invariance ``int f dmu = int F[f] dmu`` applied to
``x**alpha`` splits into the degree-``d`` block of ``F`` and lower-degree
terms whose moments are already known, giving ``(I - F_d^T) M_d = R_d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError
from .ifs import IFS
from .measure import MeasureSpec
from .polyspace import Polynomial, _MonomialImages, homogeneous_basis

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class MomentTable:
    dim: int
    degree: int
    values: dict[tuple[int, ...], float]
    residuals: list[float] = field(default_factory=list)

    def __getitem__(self, alpha) -> float:
        alpha = tuple(alpha)
        if sum(alpha) > self.degree:
            raise ValidationError(f"moment {alpha} exceeds table degree {self.degree}")
        return self.values[alpha]

    def as_dense(self) -> np.ndarray:
        arr = np.zeros((self.degree + 1,) * self.dim)
        for alpha, v in self.values.items():
            arr[alpha] = v
        return arr


def compute_moments(ifs: IFS, mu: MeasureSpec, k: int) -> MomentTable:
    """All moments ``m_alpha = int x**alpha dmu`` with ``|alpha| <= k``."""
    if k < 0:
        raise ValidationError("degree must be >= 0")
    if len(mu) != len(ifs):
        raise ValidationError("measure and IFS have different numbers of maps")
    n = ifs.dim
    known = np.zeros((k + 1,) * n)
    known[(0,) * n] = 1.0
    values = {(0,) * n: 1.0}
    residuals = [0.0]
    images = [(w, _MonomialImages(m.A, m.b, k)) for w, m in zip(mu.weights, ifs.maps)]
    for d in range(1, k + 1):
        basis = homogeneous_basis(n, d)
        size = len(basis)
        block = np.zeros((size, size))
        rhs = np.zeros(size)
        for j, alpha in enumerate(basis):
            image = sum(w * img(alpha) for w, img in images)
            block[:, j] = [image[beta] for beta in basis]
            # degree-d entries of `known` are still zero, so this pairs only lower degrees
            rhs[j] = np.sum(image * known)
        system = np.eye(size) - block.T
        sol = np.linalg.solve(system, rhs)
        res = float(np.max(np.abs(system @ sol - rhs)))
        if res > RESIDUAL_TOL * (1.0 + float(np.max(np.abs(rhs)))):
            raise NumericalError(f"moment solve at degree {d} has residual {res:.3e}")
        residuals.append(res)
        for alpha, v in zip(basis, sol):
            known[alpha] = v
            values[alpha] = float(v)
    return MomentTable(n, k, values, residuals)


def integrate_polynomial(p: Polynomial, table: MomentTable) -> float:
    """``sum_alpha c_alpha m_alpha``."""
    if p.dim != table.dim:
        raise ValidationError("polynomial and moment table dimensions differ")
    if p.degree > table.degree:
        raise ValidationError(f"polynomial degree {p.degree} exceeds table degree {table.degree}")
    return float(sum(c * table.values[a] for a, c in p.terms()))
