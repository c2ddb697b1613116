import numpy as np
import pytest

from fractal_cubature import IFS, AffineMap, BoundingBox, MeasureSpec
from fractal_cubature.harness import build_system, core_systems, gallery


def scalar_map(a: float, b: float) -> AffineMap:
    return AffineMap(np.array([[a]]), np.array([b]))


def cantor_ifs() -> IFS:
    return IFS((scalar_map(1 / 3, 0.0), scalar_map(1 / 3, 2 / 3)))


@pytest.fixture
def cantor():
    return cantor_ifs()


@pytest.fixture
def half_mu():
    return MeasureSpec((0.5, 0.5))


@pytest.fixture
def unit_box():
    return BoundingBox([0.0], [1.0])


_SYSTEMS = {}


def system(name: str):
    if name not in _SYSTEMS:
        _SYSTEMS[name] = build_system(gallery(name))
    return _SYSTEMS[name]


@pytest.fixture(params=core_systems())
def any_system(request):
    return system(request.param)
