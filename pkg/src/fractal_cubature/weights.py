"""Cubature weights as the fixed vector of ``S^T``.

``S[i, j] = sum_l mu_l L_j(S_l(x_i))``. The weights solve ``S^T w = w`` with
``sum(w) = 1``; in the invariant case this reproduces the exact interpolatory
weights, otherwise it defines the rule.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError
from .ifs import IFS
from .interpolation import TensorGrid
from .measure import MeasureSpec
from .moments import MomentTable
from .polyspace import SpaceSpec

ROW_SUM_TOL = 1e-8
DENSE_LIMIT = 4096


def assemble_S(ifs: IFS, mu: MeasureSpec, grid: TensorGrid) -> np.ndarray:
    """Dense ``M x M`` matrix with rows ``sum_l mu_l (L_j(S_l x_i))_j``."""
    if ifs.dim != grid.dim:
        raise ValidationError("grid and IFS dimensions differ")
    if len(mu) != len(ifs):
        raise ValidationError("measure and IFS have different numbers of maps")
    X = grid.points
    S = np.zeros((X.shape[0], X.shape[0]))
    for w, m in zip(mu.weights, ifs.maps):
        S += w * grid.lagrange_matrix(m(X))
    dev = float(np.max(np.abs(S.sum(axis=1) - 1.0)))
    if dev > ROW_SUM_TOL:
        raise NumericalError(f"row sums of S deviate from 1 by {dev:.3e}; interpolation is unstable")
    return S


@dataclass
class WeightSolve:
    weights: np.ndarray
    residual: float
    iterations: int
    method: str
    second_modulus: float

    @property
    def gap(self) -> float:
        return 1.0 - self.second_modulus


def _second_modulus(S: np.ndarray, w: np.ndarray, iterations: int = 300) -> float:
    """Estimate ``|lambda_2|`` of ``S^T`` by power iteration on ``S^T - w 1^T``."""
    M = S.shape[0]
    if M == 1:
        return 0.0
    ST = S.T
    v = np.cos(np.arange(M) * 1.234567) + 0.5
    v -= w * v.sum()
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return 0.0
    v /= norm
    logs = []
    for _ in range(iterations):
        u = ST @ v
        u -= w * u.sum()
        norm = np.linalg.norm(u)
        if norm <= 1e-300:
            return 0.0
        logs.append(np.log(norm))
        v = u / norm
    tail = logs[len(logs) // 2 :]
    return float(np.exp(np.mean(tail)))


def _dense_solve(S: np.ndarray) -> np.ndarray:
    if S.shape[0] > DENSE_LIMIT:
        raise NumericalError(f"dense eigen-solve refused for M = {S.shape[0]} > {DENSE_LIMIT}")
    vals, vecs = np.linalg.eig(S.T)
    near = np.abs(vals - 1.0)
    if np.count_nonzero(near <= 1e-8) > 1:
        raise NumericalError("eigenvalue 1 not numerically simple")
    v = vecs[:, int(np.argmin(near))].real
    total = v.sum()
    if abs(total) < 1e-14 * np.max(np.abs(v)):
        raise NumericalError("eigenvector of eigenvalue 1 is orthogonal to the constants")
    return v / total


def solve_weights(
    S: np.ndarray,
    tol: float = 1e-13,
    max_iter: int = 100_000,
    full_output: bool = False,
    stall_window: int = 200,
):
    """Weights ``w`` with ``S^T w = w`` and ``sum(w) = 1``.

    Power iteration on ``S^T`` from the all-ones vector with max-norm
    normalisation, stopped once ``|S^T v - v|_inf <= tol |v|_inf``. Falls back to
    a dense eigen-solve if the iteration stalls or ``v`` is nearly orthogonal to
    the constants. With ``full_output`` a :class:`WeightSolve` is returned.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValidationError("S must be square")
    ST = S.T
    v = np.ones(S.shape[0])
    best = np.inf
    since_best = 0
    method = "power"
    iterations = 0
    converged = False
    while iterations < max_iter:
        iterations += 1
        u = ST @ v
        res = float(np.max(np.abs(u - v)))
        if res <= tol:
            v = u
            converged = True
            break
        if res < best:
            best, since_best = res, 0
        else:
            since_best += 1
            if since_best >= stall_window:
                break
        v = u / np.max(np.abs(u))
    if converged and abs(v.sum()) >= 1e-8 * np.max(np.abs(v)):
        w = v / v.sum()
    else:
        method = "dense"
        w = _dense_solve(S)
    residual = float(np.max(np.abs(ST @ w - w)))
    if not full_output:
        return w
    return WeightSolve(w, residual, iterations, method, _second_modulus(S, w))


@dataclass
class CubatureRule:
    """Points ``X``, real weights ``w`` (``sum(w) = 1``) and solver diagnostics."""

    points: np.ndarray
    weights: np.ndarray
    residual: float
    gap: float
    space: SpaceSpec
    iterations: int = 0
    method: str = "power"
    grid: TensorGrid | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def l1_norm(self) -> float:
        return float(np.abs(self.weights).sum())

    def apply(self, values) -> complex | float:
        return np.dot(self.weights, values)


def build_rule(ifs: IFS, mu: MeasureSpec, grid: TensorGrid, tol: float = 1e-13, max_iter: int = 100_000) -> CubatureRule:
    """Assemble ``S`` on ``grid`` and solve for the weights."""
    S = assemble_S(ifs, mu, grid)
    sol = solve_weights(S, tol=tol, max_iter=max_iter, full_output=True)
    if sol.second_modulus > 1.0 - 1e-6:
        warnings.warn(
            f"second eigenvalue of S has modulus {sol.second_modulus:.8f}; "
            "eigenvalue 1 may not be simple",
            RuntimeWarning,
            stacklevel=2,
        )
    return CubatureRule(
        points=grid.points,
        weights=sol.weights,
        residual=sol.residual,
        gap=sol.gap,
        space=SpaceSpec("tensor", grid.dim, grid.degree),
        iterations=sol.iterations,
        method=sol.method,
        grid=grid,
    )


@dataclass
class ExactnessReport:
    max_error: float
    errors: dict[tuple[int, ...], float]

    @property
    def worst(self) -> tuple[int, ...]:
        return max(self.errors, key=self.errors.get)


def verify_exactness(rule: CubatureRule, table: MomentTable, space: SpaceSpec) -> ExactnessReport:
    """Compare ``Q[x**alpha]`` with the moment table on every basis monomial of ``space``."""
    if space.max_total_degree > table.degree:
        raise ValidationError(
            f"moment table degree {table.degree} is below the space degree {space.max_total_degree}"
        )
    errors = {}
    X = rule.points
    for alpha in space.basis:
        q = float(np.dot(rule.weights, np.prod(X ** np.array(alpha), axis=1)))
        errors[alpha] = abs(q - table.values[alpha])
    return ExactnessReport(max(errors.values()), errors)
