"""Built-in fractal systems.

The Vicsek system uses ``S_0 x = rho R_theta x``: a pure rotation (``rho = 1``)
would not be a contraction. Koch snowflake and Barnsley fern coefficients come
from outside sources (Barnsley, *Fractals Everywhere*, Table 3.8.3 for the fern)
and are only available with ``external_constants=True``.
"""

from __future__ import annotations

import math
import re

import numpy as np

from ..errors import ValidationError
from .config import FractalConfig

EXTERNAL_NAMES = ("koch-snowflake", "barnsley-fern")


def _rot(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _similarity(rho: float, theta: float, center) -> tuple:
    A = rho * _rot(theta)
    b = (1.0 - rho) * np.asarray(center, dtype=float)
    return (tuple(tuple(float(v) for v in row) for row in A), tuple(float(v) for v in b))


def _matrix_map(A, b) -> tuple:
    return (tuple(tuple(float(v) for v in row) for row in A), tuple(float(v) for v in b))


def parse_angle(text: str) -> float:
    """Accepts a float or multiples/fractions of pi such as ``pi/4`` or ``0.5*pi``."""
    text = text.strip().replace(" ", "")
    try:
        return float(text)
    except ValueError:
        pass
    m = re.fullmatch(r"(?:([0-9.]+)\*?)?pi(?:/([0-9.]+))?", text)
    if not m:
        raise ValidationError(f"cannot parse angle {text!r}")
    num = float(m.group(1)) if m.group(1) else 1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * math.pi / den


def cantor() -> FractalConfig:
    rho = 1.0 / 3.0
    maps = (((rho,),), (0.0,)), (((rho,),), (1.0 - rho,))
    return FractalConfig("cantor", 1, maps, "hausdorff", ((0.0,), (1.0,)))


def cantor_dust() -> FractalConfig:
    centers = [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    maps = tuple(_similarity(1.0 / 3.0, 0.0, c) for c in centers)
    return FractalConfig("cantor-dust", 2, maps, "hausdorff", ((-1.0, -1.0), (1.0, 1.0)))


def vicsek(theta: float = 0.0) -> FractalConfig:
    rho = 1.0 / 3.0
    centers = [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    maps = (_similarity(rho, theta, (0.0, 0.0)),) + tuple(_similarity(rho, 0.0, c) for c in centers)
    name = "vicsek" if theta == 0.0 else f"vicsek:{theta!r}"
    return FractalConfig(name, 2, maps, (0.2,) * 5, ((-1.0, -1.0), (1.0, 1.0)))


def sierpinski_fat() -> FractalConfig:
    rho = (math.sqrt(5.0) - 1.0) / 2.0
    vertices = [(0.0, 1.0), (-math.sqrt(3.0) / 2.0, -0.5), (math.sqrt(3.0) / 2.0, -0.5)]
    maps = tuple(_similarity(rho, 0.0, v) for v in vertices)
    return FractalConfig("sierpinski-fat", 2, maps, (1.0 / 3.0,) * 3, None)


def cantor_dust_asym() -> FractalConfig:
    params = [
        (0.25, 0.4, (-1.4, -1.1)),
        (0.35, 0.2, (0.8, -0.7)),
        (0.3, 0.3, (1.2, 1.3)),
        (0.4, 0.1, (-1.3, 0.9)),
    ]
    maps = tuple(_similarity(r, t, c) for r, t, c in params)
    return FractalConfig("cantor-dust-asym", 2, maps, "hausdorff", None)


def koch_snowflake() -> FractalConfig:
    tips = [(math.cos(math.pi / 2 + j * math.pi / 3), math.sin(math.pi / 2 + j * math.pi / 3)) for j in range(6)]
    maps = (_similarity(1.0 / math.sqrt(3.0), math.pi / 6, (0.0, 0.0)),) + tuple(
        _similarity(1.0 / 3.0, 0.0, t) for t in tips
    )
    return FractalConfig(
        "koch-snowflake", 2, maps, "hausdorff", None,
        note="seven-piece decomposition of the snowflake; mu_l = rho_l**2",
    )


def barnsley_fern() -> FractalConfig:
    table = [
        ([[0.0, 0.0], [0.0, 0.16]], [0.0, 0.0], 0.01),
        ([[0.85, 0.04], [-0.04, 0.85]], [0.0, 1.6], 0.85),
        ([[0.2, -0.26], [0.23, 0.22]], [0.0, 1.6], 0.07),
        ([[-0.15, 0.28], [0.26, 0.24]], [0.0, 0.44], 0.07),
    ]
    maps = tuple(_matrix_map(A, b) for A, b, _ in table)
    return FractalConfig(
        "barnsley-fern", 2, maps, tuple(p for *_, p in table), None,
        note="Barnsley, Fractals Everywhere, Table 3.8.3",
    )


def gallery(name: str, external_constants: bool = False) -> FractalConfig:
    """Look up a built-in system; ``vicsek:THETA`` selects the rotation angle."""
    key, _, arg = name.partition(":")
    key = key.strip().lower()
    if key == "vicsek":
        return vicsek(parse_angle(arg) if arg else 0.0)
    if arg:
        raise ValidationError(f"gallery entry {key!r} takes no parameter")
    builders = {
        "cantor": cantor,
        "cantor-dust": cantor_dust,
        "sierpinski-fat": sierpinski_fat,
        "cantor-dust-asym": cantor_dust_asym,
    }
    external = {"koch-snowflake": koch_snowflake, "barnsley-fern": barnsley_fern}
    if key in builders:
        return builders[key]()
    if key in external:
        if not external_constants:
            raise ValidationError(f"{key!r} uses externally sourced constants; pass external_constants=True")
        return external[key]()
    raise ValidationError(f"unknown gallery entry {name!r}; available: {', '.join(available())}")


def available(external_constants: bool = False) -> list[str]:
    names = ["cantor", "cantor-dust", "vicsek[:theta]", "sierpinski-fat", "cantor-dust-asym"]
    if external_constants:
        names += list(EXTERNAL_NAMES)
    return names


def core_systems() -> list[str]:
    """Gallery names used for property checks (external-constant systems excluded)."""
    return ["cantor", "cantor-dust", "vicsek", "vicsek:0.4", "vicsek:pi/4", "sierpinski-fat", "cantor-dust-asym"]
