"""Affine iterated function systems: maps, words, bounding boxes, chaos sampling."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

from .errors import NumericalError, ValidationError

if TYPE_CHECKING:
    from .measure import MeasureSpec

_BURN_IN = 100


def spectral_norm(A, tol: float = 1e-14, max_iter: int = 10_000) -> float:
    """Largest singular value of ``A`` by power iteration on ``A.T @ A``.

    Falls back to a dense symmetric eigensolve if the iteration stalls.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    G = A.T @ A
    if not np.any(G):
        return 0.0
    v = np.ones(G.shape[0]) / np.sqrt(G.shape[0])
    # all-ones may be orthogonal to the top singular vector; perturb deterministically
    v = v + 1e-3 * np.arange(1, G.shape[0] + 1)
    v /= np.linalg.norm(v)
    lam = v @ G @ v
    for _ in range(max_iter):
        u = G @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            break
        u /= nu
        lam_new = u @ G @ u
        if abs(lam_new - lam) <= tol * lam_new and np.linalg.norm(u - v) <= 1e-7:
            return float(np.sqrt(lam_new))
        v, lam = u, lam_new
    return float(np.sqrt(np.linalg.eigvalsh(G)[-1]))


@dataclass(frozen=True)
class AffineMap:
    """The affine map ``x -> A x + b`` with cached contraction factor ``rho``.

    Direct construction enforces ``rho < 1``; use :meth:`composed` for maps
    that need not be contractive (the identity of the empty word).
    """

    A: np.ndarray
    b: np.ndarray
    rho: float = field(default=-1.0)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError(f"A must be square, got shape {A.shape}")
        if b.shape != (A.shape[0],):
            raise ValidationError(f"b must have length {A.shape[0]}, got shape {b.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValidationError("map has non-finite coefficients")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        if self.rho < 0:
            rho = spectral_norm(A)
            if rho >= 1.0:
                raise ValidationError(f"contraction factor >= 1 (rho = {rho:.6g})")
            object.__setattr__(self, "rho", rho)

    @classmethod
    def composed(cls, A, b, rho: float) -> "AffineMap":
        """Build a map without the contraction check; ``rho`` is taken as given."""
        return cls(A, b, rho=float(rho))

    @classmethod
    def similarity(cls, ratio: float, angle: float = 0.0, center=None) -> "AffineMap":
        """2D map ``x -> ratio R(angle) x + (1 - ratio) center`` (1D if angle is 0 and center 1D)."""
        if center is None:
            center = np.zeros(2)
        center = np.atleast_1d(np.asarray(center, dtype=float))
        n = center.shape[0]
        if n == 2:
            c, s = np.cos(angle), np.sin(angle)
            A = ratio * np.array([[c, -s], [s, c]])
        else:
            if angle != 0.0:
                raise ValidationError("rotations are only supported in 2D")
            A = ratio * np.eye(n)
        return cls(A, (1.0 - ratio) * center)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def __call__(self, x):
        """Apply to a point or a stack of points with shape (..., n)."""
        return np.asarray(x, dtype=float) @ self.A.T + self.b


@dataclass(frozen=True)
class IFS:
    maps: tuple[AffineMap, ...]

    def __post_init__(self):
        maps = tuple(self.maps)
        if len(maps) < 2:
            raise ValidationError(f"an IFS needs at least 2 maps, got {len(maps)}")
        dims = {m.dim for m in maps}
        if len(dims) != 1:
            raise ValidationError(f"maps have inconsistent dimensions {sorted(dims)}")
        object.__setattr__(self, "maps", maps)

    @property
    def dim(self) -> int:
        return self.maps[0].dim

    def __len__(self) -> int:
        return len(self.maps)

    @property
    def rhos(self) -> np.ndarray:
        return np.array([m.rho for m in self.maps])

    def fixed_points(self) -> np.ndarray:
        return np.array([fixed_point(m) for m in self.maps])


@dataclass(frozen=True)
class Word:
    """A finite word over the map alphabet (0-based letters)."""

    indices: tuple[int, ...] = ()

    def rho(self, ifs: IFS) -> float:
        r = 1.0
        for i in self.indices:
            r *= ifs.maps[i].rho
        return r

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class BoundingBox:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValidationError("box bounds must be vectors of equal length")
        if not np.all(lo < hi):
            raise ValidationError(f"box needs lo < hi componentwise, got {lo} and {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.hi - self.lo))

    def corners(self) -> np.ndarray:
        return np.array(list(product(*zip(self.lo, self.hi))))

    def contains(self, pts, rtol: float = 1e-12) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        slack = rtol * (self.hi - self.lo)
        return np.all((pts >= self.lo - slack) & (pts <= self.hi + slack), axis=-1)

    def is_invariant(self, ifs: IFS) -> bool:
        """Corner test: every ``S_l(corner)`` inside the box implies ``S_l(box)`` inside the box."""
        if ifs.dim != self.dim:
            return False
        corners = self.corners()
        return all(bool(np.all(self.contains(m(corners)))) for m in ifs.maps)


def fixed_point(m: AffineMap) -> np.ndarray:
    """Solve ``(I - A) c = b``."""
    n = m.dim
    try:
        c = np.linalg.solve(np.eye(n) - m.A, m.b)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("I - A is singular; map has no unique fixed point") from exc
    if np.max(np.abs(m(c) - c)) > 1e-12 * (1.0 + np.max(np.abs(c))):
        raise NumericalError("fixed point solve is inaccurate")
    return c


def compose_word(ifs: IFS, word) -> AffineMap:
    """Affine map of ``S_{m1} o ... o S_{mp}``; the empty word gives the identity."""
    indices = word.indices if isinstance(word, Word) else tuple(word)
    n = ifs.dim
    A = np.eye(n)
    b = np.zeros(n)
    rho = 1.0
    for i in indices:
        if not 0 <= i < len(ifs):
            raise ValidationError(f"word letter {i} out of range for {len(ifs)} maps")
        m = ifs.maps[i]
        # (A, b) o (A_i, b_i): x -> A (A_i x + b_i) + b
        b = A @ m.b + b
        A = A @ m.A
        rho *= m.rho
    return AffineMap.composed(A, b, rho)


def _box_objective(z, ifs: IFS) -> float:
    return max(np.max(np.abs(z - m(z))) / (1.0 - m.rho) for m in ifs.maps)


def bounding_box(
    ifs: IFS,
    seed=None,
    inflation: float = 1.001,
    max_retries: int = 40,
) -> BoundingBox:
    """Hypercube ``K`` with ``S_l(K)`` inside ``K`` for every map.

    Minimises ``z -> max_l |z - S_l z|_inf / (1 - rho_l)`` from ``seed`` (default:
    mean of the fixed points) with Nelder-Mead, then uses the optimal value as
    half-width. The inflation doubles until the corner test passes.
    """
    if seed is None:
        seed = ifs.fixed_points().mean(axis=0)
    seed = np.atleast_1d(np.asarray(seed, dtype=float))
    res = minimize(
        _box_objective,
        seed,
        args=(ifs,),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20_000},
    )
    z = res.x if res.fun <= _box_objective(seed, ifs) else seed
    radius = _box_objective(z, ifs)
    factor = inflation
    for _ in range(max_retries + 1):
        half = radius * factor
        if half <= 0.0:
            half = max(1e-12, 1e-12 * float(np.max(np.abs(z))))
        try:
            box = BoundingBox(z - half, z + half)
        except ValidationError:
            box = None
        if box is not None and box.is_invariant(ifs):
            return box
        factor *= 2.0
    raise NumericalError(f"no invariant bounding box found after {max_retries} retries")


def chaos_sample(ifs: IFS, measure: "MeasureSpec", count: int, rng_seed: int = 42) -> np.ndarray:
    """Orbit of the random iteration algorithm, shape ``(count, n)``.

    Starts at the fixed point of the first map and discards a burn-in of 100 iterates.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    if len(measure.weights) != len(ifs):
        raise ValidationError("measure and IFS have different numbers of maps")
    rng = np.random.default_rng(rng_seed)
    letters = rng.choice(len(ifs), size=count + _BURN_IN, p=measure.weights)
    As = np.array([m.A for m in ifs.maps])
    bs = np.array([m.b for m in ifs.maps])
    x = fixed_point(ifs.maps[0])
    out = np.empty((count, ifs.dim))
    for k, ell in enumerate(letters):
        x = As[ell] @ x + bs[ell]
        if k >= _BURN_IN:
            out[k - _BURN_IN] = x
    return out


def point_cloud_diameter(pts: np.ndarray) -> float:
    pts = np.asarray(pts, dtype=float)
    if pts.shape[1] == 1:
        return float(pts.max() - pts.min())
    try:
        pts = pts[ConvexHull(pts).vertices]
    except (QhullError, ValueError):
        pass
    best = 0.0
    for i in range(len(pts) - 1):
        best = max(best, float(np.max(np.linalg.norm(pts[i + 1 :] - pts[i], axis=1))))
    return best


def estimate_diameter(ifs: IFS, measure: "MeasureSpec", count: int = 100_000, rng_seed: int = 42) -> float:
    """Diameter of a chaos-game sample; a lower estimate of the attractor diameter."""
    return point_cloud_diameter(chaos_sample(ifs, measure, count, rng_seed))
