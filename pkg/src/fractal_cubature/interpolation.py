"""Tensor Chebyshev grids and barycentric evaluation of their Lagrange bases."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import ValidationError
from .ifs import BoundingBox

_EPS = np.finfo(float).eps


def chebyshev_nodes(a: float, b: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    """First-kind Chebyshev nodes on ``[a, b]`` (ascending) with barycentric weights."""
    if not a < b:
        raise ValidationError(f"need a < b, got [{a}, {b}]")
    if N < 0:
        raise ValidationError("N must be >= 0")
    theta = (2 * np.arange(N + 1) + 1) * np.pi / (2 * N + 2)
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * np.cos(theta)
    weights = (-1.0) ** np.arange(N + 1) * np.sin(theta)
    return nodes[::-1].copy(), weights[::-1].copy()


def barycentric_weights(nodes) -> np.ndarray:
    """Weights ``1 / prod_{k != j} (t_j - t_k)`` for arbitrary distinct nodes, rescaled to max 1."""
    t = np.asarray(nodes, dtype=float)
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, 1.0)
    # scale by the interval length to avoid over/underflow in the product
    scale = (t.max() - t.min()) / 4.0 if t.size > 1 else 1.0
    w = 1.0 / np.prod(diff / scale, axis=1)
    return w / np.max(np.abs(w))


def lagrange_1d(nodes: np.ndarray, weights: np.ndarray, x) -> np.ndarray:
    """Values of all 1D Lagrange polynomials at ``x``; shape ``(len(x), len(nodes))``.

    Second barycentric form; a coordinate within ``4 eps`` (relative) of a node
    returns the cardinal vector of that node.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diff = x[:, None] - nodes[None, :]
    hit = np.abs(diff) <= 4 * _EPS * np.maximum(np.maximum(np.abs(x)[:, None], np.abs(nodes)[None, :]), 1.0)
    rows = hit.any(axis=1)
    diff[hit] = 1.0
    terms = weights[None, :] / diff
    denom = terms.sum(axis=1, keepdims=True)
    denom[rows] = 1.0  # overwritten below
    out = terms / denom
    if rows.any():
        first = np.argmax(hit[rows], axis=1)
        card = np.zeros((int(rows.sum()), nodes.size))
        card[np.arange(card.shape[0]), first] = 1.0
        out[rows] = card
    return out


@dataclass(frozen=True)
class TensorGrid:
    """Tensor-product point set ``X`` on a box, flattened row-major (axis 0 slowest).

    ``nodes[i]`` and ``weights[i]`` are the 1D nodes and barycentric weights on axis ``i``.
    """

    box: BoundingBox
    nodes: tuple[np.ndarray, ...]
    weights: tuple[np.ndarray, ...]

    @classmethod
    def chebyshev(cls, box: BoundingBox, N: int) -> "TensorGrid":
        pairs = [chebyshev_nodes(lo, hi, N) for lo, hi in zip(box.lo, box.hi)]
        return cls(box, tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def from_nodes(cls, box: BoundingBox, nodes_per_axis) -> "TensorGrid":
        """Grid from explicit 1D nodes (all axes must have the same count)."""
        nodes = tuple(np.asarray(t, dtype=float) for t in nodes_per_axis)
        if len(nodes) != box.dim:
            raise ValidationError("need one node array per box axis")
        if len({t.size for t in nodes}) != 1:
            raise ValidationError("all axes need the same number of nodes")
        for t in nodes:
            if np.any(np.diff(t) <= 0):
                raise ValidationError("nodes must be strictly increasing")
        return cls(box, nodes, tuple(barycentric_weights(t) for t in nodes))

    @property
    def dim(self) -> int:
        return self.box.dim

    @property
    def degree(self) -> int:
        return self.nodes[0].size - 1

    @property
    def size(self) -> int:
        return (self.degree + 1) ** self.dim

    @property
    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.nodes, indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=-1)

    def lagrange_matrix(self, X) -> np.ndarray:
        """``L[p, i] = L_i(X[p])`` for a stack of points ``X`` with shape ``(P, n)``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValidationError(f"points must have {self.dim} coordinates")
        out = lagrange_1d(self.nodes[0], self.weights[0], X[:, 0])
        for axis in range(1, self.dim):
            vals = lagrange_1d(self.nodes[axis], self.weights[axis], X[:, axis])
            out = (out[:, :, None] * vals[:, None, :]).reshape(X.shape[0], -1)
        return out


def lagrange_eval_all(grid: TensorGrid, x) -> np.ndarray:
    """Vector ``(L_1(x), ..., L_M(x))``; ``x`` may lie outside the box."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    if not np.all(np.isfinite(x)):
        raise ValidationError("evaluation point is not finite")
    return grid.lagrange_matrix(x)[0]


def lebesgue_estimate(grid: TensorGrid, sample_count: int = 4096) -> float:
    """Max of ``sum_i |L_i(x)|`` over the box corners and a Halton sample.

    A lower bound on the Lebesgue constant of the grid over the box.
    """
    if sample_count < 1:
        raise ValidationError("sample_count must be >= 1")
    unit = qmc.Halton(d=grid.dim, scramble=False).random(sample_count)
    box = grid.box
    pts = np.vstack([box.corners(), box.lo + unit * (box.hi - box.lo)])
    vals = np.abs(grid.lagrange_matrix(pts)).sum(axis=1)
    return float(vals.max())
