"""JSON configuration of fractal systems.

Schema (top-level keys)::

    name        string
    dimension   int
    maps        [{"A": [[...], ...], "b": [...]}, ...]   (A row-major)
    measure     {"type": "weights", "values": [...]} | {"type": "hausdorff"}
    box         {"lo": [...], "hi": [...]}               (optional)
    diameter    number                                   (optional)
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..ifs import IFS, AffineMap, BoundingBox, bounding_box, estimate_diameter
from ..measure import MeasureSpec, hausdorff_weights

_KEYS = {"name", "dimension", "maps", "measure", "box", "diameter"}
_REQUIRED = {"name", "dimension", "maps"}


@dataclass(frozen=True)
class FractalConfig:
    """Plain-data description of a system; ``measure`` is ``"hausdorff"`` or a weight list."""

    name: str
    dimension: int
    maps: tuple[tuple[tuple[tuple[float, ...], ...], tuple[float, ...]], ...]
    measure: str | tuple[float, ...] = "hausdorff"
    box: tuple[tuple[float, ...], tuple[float, ...]] | None = None
    diameter: float | None = None
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "dimension": self.dimension,
            "maps": [{"A": [list(r) for r in A], "b": list(b)} for A, b in self.maps],
            "measure": (
                {"type": "hausdorff"}
                if self.measure == "hausdorff"
                else {"type": "weights", "values": list(self.measure)}
            ),
        }
        if self.box is not None:
            out["box"] = {"lo": list(self.box[0]), "hi": list(self.box[1])}
        if self.diameter is not None:
            out["diameter"] = self.diameter
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class System:
    """A validated IFS with its measure, invariant box and optional diameter override."""

    name: str
    ifs: IFS
    measure: MeasureSpec
    box: BoundingBox
    diameter_override: float | None = None

    def diameter(self, seed: int = 42, count: int = 100_000) -> float:
        if self.diameter_override is not None:
            return self.diameter_override
        return estimate_diameter(self.ifs, self.measure, count=count, rng_seed=seed)


def _fail(path: str, msg: str):
    raise ValidationError(f"{path}: {msg}")


def _vector(value, n: int, path: str) -> tuple[float, ...]:
    if not isinstance(value, list) or len(value) != n:
        _fail(path, f"expected an array of {n} numbers")
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        _fail(path, "entries must be numbers")
    return tuple(float(v) for v in value)


def config_from_dict(data) -> FractalConfig:
    if not isinstance(data, dict):
        _fail("$", "top level must be an object")
    extra = set(data) - _KEYS
    if extra:
        _fail("$", f"unknown keys {sorted(extra)}")
    missing = _REQUIRED - set(data)
    if missing:
        _fail("$", f"missing keys {sorted(missing)}")
    if not isinstance(data["name"], str):
        _fail("$.name", "must be a string")
    n = data["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        _fail("$.dimension", "must be a positive integer")
    if not isinstance(data["maps"], list):
        _fail("$.maps", "must be an array")
    maps = []
    for i, m in enumerate(data["maps"]):
        path = f"$.maps[{i}]"
        if not isinstance(m, dict) or set(m) != {"A", "b"}:
            _fail(path, 'each map needs exactly the keys "A" and "b"')
        if not isinstance(m["A"], list) or len(m["A"]) != n:
            _fail(path + ".A", f"expected {n} rows")
        A = tuple(_vector(r, n, f"{path}.A[{j}]") for j, r in enumerate(m["A"]))
        maps.append((A, _vector(m["b"], n, path + ".b")))
    measure: str | tuple[float, ...] = "hausdorff"
    if "measure" in data:
        spec = data["measure"]
        if not isinstance(spec, dict) or spec.get("type") not in ("weights", "hausdorff"):
            _fail("$.measure", 'type must be "weights" or "hausdorff"')
        if spec["type"] == "weights":
            if set(spec) != {"type", "values"}:
                _fail("$.measure", 'weights measure needs exactly "type" and "values"')
            measure = _vector(spec["values"], len(maps), "$.measure.values")
        elif set(spec) != {"type"}:
            _fail("$.measure", 'hausdorff measure takes no other keys')
    box = None
    if "box" in data:
        b = data["box"]
        if not isinstance(b, dict) or set(b) != {"lo", "hi"}:
            _fail("$.box", 'needs exactly "lo" and "hi"')
        box = (_vector(b["lo"], n, "$.box.lo"), _vector(b["hi"], n, "$.box.hi"))
    diameter = None
    if "diameter" in data:
        d = data["diameter"]
        if not isinstance(d, (int, float)) or isinstance(d, bool) or not d > 0:
            _fail("$.diameter", "must be a positive number")
        diameter = float(d)
    return FractalConfig(data["name"], n, tuple(maps), measure, box, diameter)


def build_system(config: FractalConfig) -> System:
    """Validate a config into an IFS, measure and invariant box."""
    maps = []
    for i, (A, b) in enumerate(config.maps):
        try:
            maps.append(AffineMap(np.array(A), np.array(b)))
        except ValidationError as exc:
            _fail(f"$.maps[{i}]", str(exc))
    try:
        ifs = IFS(tuple(maps))
    except ValidationError as exc:
        _fail("$.maps", str(exc))
    if config.measure == "hausdorff":
        measure = hausdorff_weights(ifs)
    else:
        try:
            measure = MeasureSpec(np.array(config.measure))
        except ValidationError as exc:
            _fail("$.measure.values", str(exc))
    if config.box is None:
        box = bounding_box(ifs)
    else:
        try:
            box = BoundingBox(np.array(config.box[0]), np.array(config.box[1]))
        except ValidationError as exc:
            _fail("$.box", str(exc))
        if not box.is_invariant(ifs):
            _fail("$.box", "box is not mapped into itself by every map")
    return System(config.name, ifs, measure, box, config.diameter)


def parse_config(text: str) -> tuple[IFS, MeasureSpec, BoundingBox]:
    """Parse JSON text into a validated ``(ifs, measure, box)`` triple."""
    system = load_system(text)
    return system.ifs, system.measure, system.box


def load_system(text: str) -> System:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"$: invalid JSON ({exc})") from exc
    return build_system(config_from_dict(data))
