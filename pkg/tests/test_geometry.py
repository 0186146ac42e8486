import math

import pytest

from diskflow.errors import NotInDiskError
from diskflow.geometry import (
    DiskPoint,
    StolzRegion,
    cayley,
    horocycle_distance,
    in_stolz,
    inverse_cayley,
)


def test_cayley_roundtrip():
    for z in (0j, 0.5 + 0.2j, -0.8j, 0.99):
        assert inverse_cayley(cayley(z)) == pytest.approx(z, abs=1e-12)


def test_cayley_known_values():
    # 0 -> 1 and the boundary point -1 -> 0 under w = (1+z)/(1-z)
    assert cayley(0j) == pytest.approx(1.0)
    assert cayley(-1.0 + 0j) == pytest.approx(0.0)
    assert inverse_cayley(1j).imag != 0


def test_horocycle_distance_values():
    # d(0) = 1; level sets are horocycles tangent at 1
    assert horocycle_distance(0j) == pytest.approx(1.0)
    assert horocycle_distance(0.5 + 0j) == pytest.approx(0.25 / 0.75)
    # points on the same horocycle through 0: |1-z|^2 = 1-|z|^2
    z = 0.5 + 0.5j
    assert horocycle_distance(z) == pytest.approx(abs(1 - z) ** 2 / (1 - abs(z) ** 2))


def test_disk_point_rejects_outside():
    DiskPoint(0.5 + 0.1j)
    with pytest.raises(NotInDiskError):
        DiskPoint(1.5 + 0j)


def test_stolz_region_membership():
    region = StolzRegion(aperture=1.0)
    assert in_stolz(0.9 + 0j, region)
    # a point creeping along the circle toward the vertex is outside
    tangential = (1 - 1e-4) * complex(math.cos(0.02), math.sin(0.02))
    assert not in_stolz(tangential, region)


def test_stolz_aperture_validation():
    with pytest.raises(ValueError):
        StolzRegion(aperture=2.0)
