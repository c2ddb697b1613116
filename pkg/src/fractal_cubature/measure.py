"""Probability vectors defining invariant measures, including the Hausdorff choice."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .ifs import IFS

_RENORMALIZE_TOL = 1e-6


@dataclass(frozen=True)
class MeasureSpec:
    """Weights ``mu_l`` of the invariant measure.

    ``origin`` is ``"explicit"`` or ``"hausdorff"``; for the latter ``dimension``
    holds the similarity dimension used. For self-affine (non-similar) systems the
    Hausdorff choice is only a formal one.
    """

    weights: np.ndarray
    origin: str = "explicit"
    dimension: float | None = None

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if w.ndim != 1 or w.size < 1:
            raise ValidationError("measure weights must be a non-empty vector")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValidationError("measure weights must be finite and strictly positive")
        total = w.sum()
        if abs(total - 1.0) > _RENORMALIZE_TOL:
            raise ValidationError(f"measure weights sum to {total:.12g}, expected 1")
        w = w / total
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, count: int) -> "MeasureSpec":
        return cls(np.full(count, 1.0 / count))

    def __len__(self) -> int:
        return self.weights.shape[0]


def hausdorff_dimension(rhos, tol: float = 1e-14) -> float:
    """Solve ``sum(rho_l ** d) == 1`` for ``d`` by bisection."""
    rhos = np.asarray(rhos, dtype=float)
    if rhos.size < 2:
        raise ValidationError("need at least two contraction factors")
    if np.any(rhos <= 0.0) or np.any(rhos >= 1.0):
        raise ValidationError("contraction factors must lie in (0, 1)")

    def g(d):
        return float(np.sum(rhos**d)) - 1.0

    lo, hi = 0.0, 1.0
    while g(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def hausdorff_weights(ifs: IFS) -> MeasureSpec:
    """``mu_l = rho_l ** d`` with ``d`` the similarity dimension."""
    rhos = ifs.rhos
    d = hausdorff_dimension(rhos)
    return MeasureSpec(rhos**d, origin="hausdorff", dimension=d)
