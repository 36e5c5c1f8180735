import numpy as np
import pytest

from spinflow.errors import DegenerateVector
from spinflow.vecalg import cross, dot, norm, normalize, triple


def const_field(v, shape=(8, 8)):
    out = np.empty((3,) + shape)
    out[0], out[1], out[2] = v
    return out


def test_basis_cross_and_dot():
    e1, e2 = const_field((1, 0, 0)), const_field((0, 1, 0))
    c = cross(e1, e2)
    assert np.abs(c - const_field((0, 0, 1))).max() == 0.0
    assert np.abs(dot(e1, e2)).max() == 0.0


def test_parallel_cross_vanishes():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(3, 10, 12))
    assert np.abs(cross(a, a)).max() == 0.0


def test_triple_of_basis_is_one():
    e1, e2, e3 = (const_field(v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert np.abs(triple(e1, e2, e3) - 1.0).max() == 0.0


def test_cross_orthogonality_pointwise():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(3, 16, 16))
    b = rng.normal(size=(3, 16, 16))
    assert np.abs(dot(a, cross(a, b))).max() < 1e-13


def test_normalize_unit_output():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(3, 16, 16)) + 2.0
    n = normalize(a)
    assert np.abs(norm(n) - 1.0).max() < 1e-14


def test_normalize_degenerate_raises():
    a = const_field((1.0, 0.0, 0.0), (4, 4))
    a[:, 2, 3] = 1e-14
    with pytest.raises(DegenerateVector) as exc:
        normalize(a)
    assert exc.value.node == (2, 3)
