import random
from fractions import Fraction

import pytest

from conftest import apply_unimodular, rand_affine_variety, rand_unimodular
from toricmld import (
    Fan,
    Lattice,
    NonSimplicialError,
    NotInLatticeError,
    ToricVariety,
    WrongShapeError,
    ZeroVectorError,
    barycentric,
    find_containing_cone,
    is_complete,
    log_discrepancy,
)

F = Fraction


def smooth_plane():
    return ToricVariety(Lattice.standard(2), Fan.build([(1, 0), (0, 1)], [[0, 1]]))


def quotient_17():
    lat = Lattice.from_generators(2, [(F(1, 17), F(1, 17))])
    return ToricVariety(lat, Fan.build([(1, 0), (0, 1)], [[0, 1]]))


def fiber_triangle(l=2):
    # complete fan on the vertices (1,0), (-(l-1),1), (-(l-1),-1)
    rays = [(1, 0), (-(l - 1), 1), (-(l - 1), -1)]
    return ToricVariety(
        Lattice.standard(2), Fan.build(rays, [[0, 1], [0, 2], [1, 2]])
    )


def test_barycentric_orthant():
    cone = smooth_plane().fan.max_cones[0]
    assert barycentric(cone, (3, 5)) == (F(3), F(5))
    assert barycentric(cone, (-1, 0)) == (F(-1), F(0))


def test_barycentric_skew_cone():
    fan = Fan.build([(1, 0), (-1, 1)], [[0, 1]])
    x = barycentric(fan.max_cones[0], (0, 1))
    assert x == (F(1), F(1))
    # round-trip: coefficients reproduce the input exactly
    g = fan.max_cones[0].generator_matrix
    assert tuple(x[0] * g[0][j] + x[1] * g[1][j] for j in range(2)) == (F(0), F(1))


def test_barycentric_roundtrip_random():
    rng = random.Random(41)
    for _ in range(40):
        v = rand_affine_variety(rng, rng.randint(1, 3), 30)
        cone = v.fan.max_cones[0]
        point = tuple(F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(v.dim))
        x = barycentric(cone, point)
        g = cone.generator_matrix
        recon = tuple(
            sum(x[i] * g[i][j] for i in range(len(g))) for j in range(v.dim)
        )
        assert recon == point


def test_log_discrepancy_smooth():
    v = smooth_plane()
    assert log_discrepancy(v, (1, 0)) == 1
    assert log_discrepancy(v, (2, 3)) == 5
    assert log_discrepancy(v, (-1, 0)) is None


def test_log_discrepancy_quotient_point():
    v = quotient_17()
    assert log_discrepancy(v, (F(1, 17), F(1, 17))) == F(2, 17)


def test_log_discrepancy_errors():
    v = smooth_plane()
    with pytest.raises(ZeroVectorError):
        log_discrepancy(v, (0, 0))
    with pytest.raises(NotInLatticeError):
        log_discrepancy(v, (F(1, 2), F(1, 2)))


def test_ray_generators_have_value_one():
    rng = random.Random(42)
    for _ in range(30):
        v = rand_affine_variety(rng, rng.randint(1, 3), 40)
        for r in v.fan.rays:
            assert log_discrepancy(v, r) == 1


def test_homogeneity():
    rng = random.Random(43)
    for _ in range(30):
        v = rand_affine_variety(rng, rng.randint(1, 3), 30)
        coeffs = [rng.randint(0, 4) for _ in v.fan.rays]
        if all(c == 0 for c in coeffs):
            continue
        point = tuple(
            sum(c * r[j] for c, r in zip(coeffs, v.fan.rays)) for j in range(v.dim)
        )
        k = rng.randint(1, 5)
        scaled = tuple(k * c for c in point)
        assert log_discrepancy(v, scaled) == k * log_discrepancy(v, point)


def test_value_agrees_across_shared_cones():
    # a point on a shared ray of the triangle fan evaluates equally through
    # every cone containing it
    v = fiber_triangle(3)
    shared = v.fan.rays[0]
    values = []
    for cone in v.fan.max_cones:
        if 0 in cone.ray_indices:
            x = barycentric(cone, shared)
            if all(c >= 0 for c in x):
                values.append(sum(x))
    assert len(values) >= 2
    assert len(set(values)) == 1


def test_unimodular_invariance_of_values():
    rng = random.Random(44)
    for _ in range(25):
        v = rand_affine_variety(rng, rng.randint(2, 3), 30)
        u = rand_unimodular(rng, v.dim)
        v2 = apply_unimodular(v, u)
        coeffs = [rng.randint(0, 3) for _ in v.fan.rays]
        if all(c == 0 for c in coeffs):
            continue
        point = tuple(
            sum(c * r[j] for c, r in zip(coeffs, v.fan.rays)) for j in range(v.dim)
        )
        point2 = tuple(
            sum(point[i] * u[i][j] for i in range(v.dim)) for j in range(v.dim)
        )
        assert log_discrepancy(v, point) == log_discrepancy(v2, point2)


def test_find_containing_cone_line():
    lat = Lattice.standard(1)
    v = ToricVariety(lat, Fan.build([(1,), (-1,)], [[0], [1]]))
    assert find_containing_cone(v, (-3,)) == 1
    assert find_containing_cone(v, (2,)) == 0


def test_find_containing_cone_triangle():
    v = fiber_triangle(2)
    # (-1,-1) is the third vertex: cones {0,2} and {1,2} both contain it,
    # the lowest index wins
    assert find_containing_cone(v, (-1, -1)) == 1
    assert find_containing_cone(v, (0, 0)) == 0
    assert find_containing_cone(v, (5, 1)) == 0


def test_is_complete():
    line = Fan.build([(1,), (-1,)], [[0], [1]])
    assert is_complete(line)
    plane = Fan.build([(1, 0), (0, 1), (-1, -1)], [[0, 1], [0, 2], [1, 2]])
    assert is_complete(plane)
    lopsided = Fan.build([(1, 0), (0, 1), (1, 1)], [[0, 1], [0, 2], [1, 2]])
    assert not is_complete(lopsided)


def test_is_complete_wrong_shape():
    with pytest.raises(WrongShapeError):
        is_complete(Fan.build([(1, 0), (0, 1)], [[0, 1]]))


def test_fan_rejects_bad_input():
    with pytest.raises(NonSimplicialError):
        Fan.build([(1, 0), (2, 0)], [[0, 1]])
    with pytest.raises(ValueError):
        Fan.build([(1, 0), (1, 0)], [[0], [1]])  # duplicate rays
    with pytest.raises(ValueError):
        Fan.build([(1, 0), (0, 1)], [[0]])  # ray 1 uncovered
    with pytest.raises(ValueError):
        Fan.build([(1, 0)], [[0, 3]])  # index out of range


def test_variety_rejects_nonlattice_ray():
    lat = Lattice.standard(2)
    with pytest.raises(NotInLatticeError):
        ToricVariety(lat, Fan.build([(F(1, 2), F(0)), (0, 1)], [[0, 1]]))


def test_barycentric_lower_dimensional_cone():
    fan = Fan.build([(1, 0, 0), (1, 1, 0), (0, 0, 1)], [[0, 1, 2], [0, 1]])
    face = fan.max_cones[1]
    assert barycentric(face, (2, 1, 0)) == (F(1), F(1))
    with pytest.raises(ValueError):
        barycentric(face, (0, 0, 1))  # off the span of the face


def test_barycentric_dimension_mismatch():
    from toricmld import DimensionMismatchError

    cone = smooth_plane().fan.max_cones[0]
    with pytest.raises(DimensionMismatchError):
        barycentric(cone, (1, 2, 3))
