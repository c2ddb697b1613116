"""CSV and plot-data JSON writers."""

from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from ..cubature import Mesh
from ..moments import MomentTable
from ..polyspace import graded_lex_key
from ..weights import CubatureRule
from .experiments import ExperimentResult

COLUMNS = ["param", "M_or_words", "value_re", "value_im", "abs_err", "rel_err", "weight_l1", "eoc", "runtime_s"]


def fmt(x) -> str:
    """17 significant digits, enough for an exact round trip of a double."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def result_table(result: ExperimentResult) -> list[list]:
    rows = []
    for r in result.rows:
        rows.append(
            [r.param, r.size, r.value.real, r.value.imag, r.abs_err, r.rel_err, r.weight_l1, r.eoc, r.runtime_s]
        )
    return rows


def _write_rows(fh, header: list[str], rows) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else (v if isinstance(v, str) else fmt(v)) for v in row])


def _write_csv(path, header: list[str], rows) -> None:
    """Write to ``path``, or to stdout when ``path`` is None."""
    if path is None:
        _write_rows(sys.stdout, header, rows)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_rows(fh, header, rows)


def emit(result: ExperimentResult, format: str, path) -> Path | None:
    """Write ``result`` as CSV (``format="csv"``) or plot-data JSON (``format="json"``).

    ``path=None`` writes CSV to stdout.
    """
    table = result_table(result)
    if path is None:
        _write_csv(None, COLUMNS, table)
        return None
    path = Path(path)
    if format == "csv":
        _write_csv(path, COLUMNS, table)
    elif format == "json":
        cols = {name: [None if not math.isfinite(row[i]) else row[i] for row in table] for i, name in enumerate(COLUMNS)}
        payload = {"kind": result.kind, "meta": result.meta, "columns": cols}
        path.write_text(json.dumps(payload, indent=1, sort_keys=True), encoding="utf-8")
    else:
        raise ValueError(f"unknown format {format!r}")
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(v) for v in row] for row in reader]
    arr = np.array(data).reshape(len(data), len(header))
    return {name: arr[:, i] for i, name in enumerate(header)}


def write_moments(table: MomentTable, path) -> None:
    header = [f"alpha{i + 1}" for i in range(table.dim)] + ["degree", "value", "residual"]
    rows = [
        list(alpha) + [sum(alpha), table.values[alpha], table.residuals[sum(alpha)]]
        for alpha in sorted(table.values, key=graded_lex_key)
    ]
    _write_csv(path, header, rows)


def write_rule(rule: CubatureRule, path) -> None:
    header = [f"x{i + 1}" for i in range(rule.points.shape[1])] + ["weight"]
    rows = [list(p) + [w] for p, w in zip(rule.points, rule.weights)]
    _write_csv(path, header, rows)


def rule_diagnostics(rule: CubatureRule) -> dict:
    return {
        "M": rule.size,
        "degree": rule.space.degree,
        "residual": rule.residual,
        "gap": rule.gap,
        "l1_norm": rule.l1_norm,
        "weight_sum": float(rule.weights.sum()),
        "iterations": rule.iterations,
        "method": rule.method,
    }


def write_mesh(mesh: Mesh, path) -> None:
    depth = max((len(w) for w in mesh.words), default=0)
    header = [f"l{i + 1}" for i in range(depth)] + ["rho_m", "mu_m"]
    rows = [list(w) + [None] * (depth - len(w)) + [r, m] for w, r, m in zip(mesh.words, mesh.rho, mesh.mu)]
    _write_csv(path, header, rows)


def write_points(points: np.ndarray, path) -> None:
    header = [f"x{i + 1}" for i in range(points.shape[1])]
    _write_csv(path, header, points.tolist())
