"""Applying rules: the p-version ``Q[f]`` and the composite h-version ``Q_h[f]``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NumericalError, ValidationError
from .ifs import IFS, BoundingBox
from .measure import MeasureSpec
from .weights import CubatureRule

DEFAULT_WORD_CAP = 10_000_000


@dataclass(frozen=True)
class Integrand:
    """A vectorised integrand: maps points of shape ``(..., n)`` to values of shape ``(...)``."""

    func: Callable[[np.ndarray], np.ndarray]
    name: str = "f"
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


def _as_integrand(f) -> Integrand:
    return f if isinstance(f, Integrand) else Integrand(f)


def _collapse(value: complex) -> complex | float:
    return value.real if value.imag == 0.0 else value


def _fsum(values: np.ndarray) -> complex:
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return complex(math.fsum(values), 0.0)


def apply_rule(rule: CubatureRule, f) -> complex | float:
    """``Q[f] = sum_i w_i f(x_i)``."""
    vals = np.asarray(_as_integrand(f)(rule.points))
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericalError(f"integrand is not finite at point {rule.points[i].tolist()}")
    return _collapse(_fsum(rule.weights * vals))


@dataclass
class Mesh:
    """The word set ``L_h`` in depth-first letter order, with composed maps.

    ``A[k], b[k]`` define ``S_m`` for ``words[k]``; ``rho`` and ``mu`` hold the
    products of contraction factors and measure weights along each word.
    """

    words: list[tuple[int, ...]]
    rho: np.ndarray
    mu: np.ndarray
    A: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    h: float
    diameter: float
    iterations: int
    k_star: int

    def __len__(self) -> int:
        return len(self.words)

    @property
    def mesh_size(self) -> float:
        """Realised mesh size ``max_m rho_m * diameter`` (at most ``h``)."""
        return float(self.rho.max() * self.diameter)


def stopping_level(rho_max: float, h: float, diameter: float) -> int:
    """Smallest ``k`` with ``rho_max**k * diameter <= h``."""
    k, r = 0, 1.0
    while r * diameter > h:
        r *= rho_max
        k += 1
    return k


def build_mesh(
    ifs: IFS,
    mu: MeasureSpec,
    h: float,
    diameter: float,
    max_words: int = DEFAULT_WORD_CAP,
) -> Mesh:
    """Refine ``{empty word}`` until every word satisfies ``rho_m * diameter <= h``.

    Each pass replaces all violating words by their one-letter extensions, in place.
    """
    if not h > 0.0 or not diameter > 0.0:
        raise ValidationError("h and diameter must be positive")
    if len(mu) != len(ifs):
        raise ValidationError("measure and IFS have different numbers of maps")
    L, n = len(ifs), ifs.dim
    map_rho = ifs.rhos
    map_mu = mu.weights
    map_A = np.array([m.A for m in ifs.maps])
    map_b = np.array([m.b for m in ifs.maps])

    words: list[tuple[int, ...]] = [()]
    rho = np.ones(1)
    weight = np.ones(1)
    A = np.eye(n)[None]
    b = np.zeros((1, n))
    iterations = 0
    while True:
        split = rho * diameter > h
        count = int(split.sum())
        if count == 0:
            break
        new_size = len(words) + (L - 1) * count
        if new_size > max_words:
            raise ValidationError(f"mesh for h = {h:g} would exceed {max_words} words; increase h")
        iterations += 1
        reps = np.where(split, L, 1)
        parent = np.repeat(np.arange(len(words)), reps)
        # letter for each new slot: 0..L-1 for children, -1 for kept words
        offsets = np.cumsum(reps) - reps
        letter = np.arange(new_size) - np.repeat(offsets, reps)
        letter[~np.repeat(split, reps)] = -1
        child = letter >= 0
        lc = letter[child]
        pc = parent[child]

        new_rho = rho[parent].copy()
        new_mu = weight[parent].copy()
        new_A = A[parent].copy()
        new_b = b[parent].copy()
        new_rho[child] *= map_rho[lc]
        new_mu[child] *= map_mu[lc]
        # S_m o S_l: x -> A_m (A_l x + b_l) + b_m
        new_b[child] = np.einsum("wij,wj->wi", A[pc], map_b[lc]) + b[pc]
        new_A[child] = A[pc] @ map_A[lc]
        words = [words[p] + (int(l),) if l >= 0 else words[p] for p, l in zip(parent.tolist(), letter.tolist())]
        rho, weight, A, b = new_rho, new_mu, new_A, new_b

    k_star = stopping_level(float(map_rho.max()), h, diameter)
    if iterations > k_star:
        raise NumericalError(f"mesh refinement took {iterations} passes, more than the bound {k_star}")
    return Mesh(words, rho, weight, A, b, float(h), float(diameter), iterations, k_star)


def h_integrate(rule: CubatureRule, mesh: Mesh, f, chunk_points: int = 2_000_000) -> complex | float:
    """``Q_h[f] = sum_m mu_m Q[f o S_m]``; per-word sums are combined in mesh order."""
    f = _as_integrand(f)
    X = rule.points
    per_word = []
    step = max(1, chunk_points // max(1, X.shape[0]))
    for start in range(0, len(mesh), step):
        A = mesh.A[start : start + step]
        b = mesh.b[start : start + step]
        pts = np.einsum("wij,pj->wpi", A, X) + b[:, None, :]
        vals = np.asarray(f(pts))
        bad = ~np.isfinite(vals)
        if bad.any():
            w, i = np.unravel_index(int(np.argmax(bad)), bad.shape)
            raise NumericalError(
                f"integrand is not finite at word {mesh.words[start + w]} point {pts[w, i].tolist()}"
            )
        per_word.append(vals @ rule.weights)
    q = np.concatenate(per_word) if per_word else np.zeros(0)
    return _collapse(_fsum(mesh.mu * q))


def mesh_boxes(mesh: Mesh, box: BoundingBox) -> np.ndarray:
    """Corners of the parallelotopes ``S_m(K)``; shape ``(words, 2**n, n)``."""
    corners = box.corners()
    return np.einsum("wij,cj->wci", mesh.A, corners) + mesh.b[:, None, :]


def in_parallelotope(points: np.ndarray, A: np.ndarray, b: np.ndarray, box: BoundingBox, rtol: float = 1e-9) -> np.ndarray:
    """Membership of ``points`` in ``S(box)`` for the affine map ``(A, b)``, via the preimage."""
    pre = np.linalg.lstsq(A, (np.asarray(points) - b).T, rcond=None)[0].T
    return box.contains(pre, rtol=rtol)
