"""Reference values and p-/h-convergence studies."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..cubature import Integrand, apply_rule, build_mesh, h_integrate
from ..errors import NumericalError, ValidationError
from ..interpolation import TensorGrid
from ..weights import CubatureRule, build_rule
from .config import System

REFERENCE_DEGREE = 14


@dataclass
class Row:
    param: float
    size: int
    value: complex
    abs_err: float = math.nan
    rel_err: float = math.nan
    weight_l1: float = math.nan
    eoc: float = math.nan
    runtime_s: float = 0.0
    mesh_size: float = math.nan


@dataclass
class ExperimentResult:
    kind: str
    rows: list[Row] = field(default_factory=list)
    reference: complex | None = None
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    @property
    def fitted_order(self) -> float:
        """Least-squares slope of ``log(abs_err)`` against ``log(mesh_size)`` (h-version only)."""
        h = self.column("mesh_size")
        e = self.column("abs_err")
        ok = np.isfinite(h) & (e > 0)
        if np.unique(h[ok]).size < 2:
            return math.nan
        return float(np.polyfit(np.log(h[ok]), np.log(e[ok]), 1)[0])


@dataclass(frozen=True)
class ReferenceValue:
    value: complex
    error_proxy: float
    h_coarse: float
    h_fine: float
    words: int


def rule_for(system: System, degree: int) -> CubatureRule:
    return build_rule(system.ifs, system.measure, TensorGrid.chebyshev(system.box, degree))


def reference_value(
    system: System,
    integrand: Integrand,
    h: float | None = None,
    degree: int = REFERENCE_DEGREE,
    diameter: float | None = None,
    rtol: float = 1e-10,
) -> ReferenceValue:
    """h-version value with a ``Q_degree`` rule, checked against the next coarser mesh.

    The fine ``h`` is the coarse one halved, halving further while the mesh is
    unchanged. Raises :class:`NumericalError` if the two values differ by more than
    ``rtol * (1 + |value|)``.
    """
    diam = system.diameter() if diameter is None else diameter
    h = diam / 4.0 if h is None else h
    rule = rule_for(system, degree)
    coarse_mesh = build_mesh(system.ifs, system.measure, h, diam)
    h_fine = h / 2.0
    fine_mesh = build_mesh(system.ifs, system.measure, h_fine, diam)
    while len(fine_mesh) == len(coarse_mesh):
        h_fine /= 2.0
        fine_mesh = build_mesh(system.ifs, system.measure, h_fine, diam)
    coarse = complex(h_integrate(rule, coarse_mesh, integrand))
    fine = complex(h_integrate(rule, fine_mesh, integrand))
    proxy = abs(fine - coarse)
    if proxy > rtol * (1.0 + abs(fine)):
        raise NumericalError(
            f"reference error proxy {proxy:.3e} too large at h = {h:g}; use a smaller h or a smoother integrand"
        )
    return ReferenceValue(fine, proxy, h, h_fine, len(fine_mesh))


def _errors(row: Row, reference: complex | None):
    if reference is None:
        return
    row.abs_err = abs(row.value - reference)
    row.rel_err = row.abs_err / abs(reference) if reference != 0 else math.nan


def converge_p(
    system: System,
    integrand: Integrand,
    degrees,
    reference: complex | None = None,
    timing: bool = True,
) -> ExperimentResult:
    """One row per tensor degree ``N``: ``Q_N[f]``, error and ``|w|_1``."""
    degrees = list(degrees)
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValidationError("degrees must be strictly ascending")
    result = ExperimentResult("p", reference=reference, meta={"system": system.name, "integrand": integrand.name})
    for N in degrees:
        t0 = time.perf_counter()
        rule = rule_for(system, N)
        value = complex(apply_rule(rule, integrand))
        row = Row(float(N), rule.size, value, weight_l1=rule.l1_norm)
        row.runtime_s = time.perf_counter() - t0 if timing else 0.0
        _errors(row, reference)
        result.rows.append(row)
    return result


def converge_h(
    system: System,
    integrand: Integrand,
    rule_degree: int,
    h_values,
    reference: complex | None = None,
    diameter: float | None = None,
    timing: bool = True,
) -> ExperimentResult:
    """One row per ``h`` using a ``Q_k`` rule on the mesh ``L_h``.

    ``eoc`` between consecutive rows uses the realised mesh size
    ``max_m rho_m * diameter``; it is NaN when the mesh did not change.
    """
    h_values = [float(h) for h in h_values]
    if any(b >= a for a, b in zip(h_values, h_values[1:])):
        raise ValidationError("h values must be strictly descending")
    diam = system.diameter() if diameter is None else diameter
    rule = rule_for(system, rule_degree)
    result = ExperimentResult(
        "h",
        reference=reference,
        meta={"system": system.name, "integrand": integrand.name, "rule_degree": rule_degree, "diameter": diam},
    )
    for h in h_values:
        t0 = time.perf_counter()
        mesh = build_mesh(system.ifs, system.measure, h, diam)
        value = complex(h_integrate(rule, mesh, integrand))
        row = Row(h, len(mesh), value, weight_l1=rule.l1_norm, mesh_size=mesh.mesh_size)
        row.runtime_s = time.perf_counter() - t0 if timing else 0.0
        _errors(row, reference)
        if result.rows:
            prev = result.rows[-1]
            if prev.mesh_size != row.mesh_size and prev.abs_err > 0 and row.abs_err > 0:
                row.eoc = math.log(prev.abs_err / row.abs_err) / math.log(prev.mesh_size / row.mesh_size)
        result.rows.append(row)
    return result
