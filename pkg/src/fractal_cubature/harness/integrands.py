"""Built-in integrands."""

from __future__ import annotations

import numpy as np

from ..cubature import Integrand
from ..polyspace import Polynomial

DEFAULT_KAPPA = 5.0
DEFAULT_X0 = (0.1, -2.0)


def default_x0(dim: int) -> tuple[float, ...]:
    """``(0.1, -2)`` padded with zeros; ``(-2,)`` on the line."""
    if dim == 1:
        return (-2.0,)
    return DEFAULT_X0 + (0.0,) * (dim - 2)


def helmholtz_integrand(kappa: float = DEFAULT_KAPPA, x0=None, dim: int = 2) -> Integrand:
    """``f(x) = exp(i kappa |x - x0|) / |x - x0|``; non-finite at ``x0``.

    ``x0`` defaults to :func:`default_x0` of ``dim``.
    """
    x0 = np.atleast_1d(np.asarray(default_x0(dim) if x0 is None else x0, dtype=float))
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")

    def f(x):
        r = np.linalg.norm(x - x0, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(1j * kappa * r) / r

    return Integrand(f, "helmholtz", {"kappa": float(kappa), "x0": x0.tolist()})


def polynomial_integrand(p: Polynomial) -> Integrand:
    return Integrand(p, "polynomial", {"degree": p.degree})


def constant_integrand(value: float = 1.0) -> Integrand:
    return Integrand(lambda x: np.full(x.shape[:-1], value), "constant", {"value": value})
