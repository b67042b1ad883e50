import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import norm_oracle
from susyqm.geometry import (
    RADIUS_EPSILON,
    SingularPointError,
    as_config,
    exchange_12,
    exchange_12_vector,
    pair_distance,
    particle_radius,
    random_shell_points,
    unit_vector_lift,
)

coords = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def test_particle_radius_pythagorean():
    assert particle_radius([3.0, 4.0, 0.0], 0) == 5.0


def test_particle_radius_origin():
    assert particle_radius([0.0, 0.0, 0.0], 0) == 0.0


def test_particle_radius_second_particle_matches_norm_oracle():
    x = [0.3, -2.0, 7.0, 1.0, 1.0, 1.0]
    assert particle_radius(x, 1) == pytest.approx(norm_oracle([1.0, 1.0, 1.0]), abs=1e-15)
    assert particle_radius(x, 1) == pytest.approx(np.sqrt(3.0), abs=1e-15)


def test_particle_radius_index_out_of_range():
    with pytest.raises(IndexError):
        particle_radius([1.0, 2.0, 3.0], 1)


def test_config_length_must_be_multiple_of_three():
    with pytest.raises(ValueError):
        as_config([1.0, 2.0])


def test_pair_distance_simple():
    assert pair_distance([0, 0, 0, 0, 0, 2], 0, 1) == 2.0


def test_pair_distance_same_particle_rejected():
    with pytest.raises(ValueError):
        pair_distance([0, 0, 0, 0, 0, 2], 1, 1)


def test_pair_distance_against_oracle(rng):
    for x in rng.normal(scale=3.0, size=(200, 6)):
        expected = norm_oracle(x[:3] - x[3:])
        assert abs(pair_distance(x, 0, 1) - expected) < 1e-14
        assert pair_distance(x, 0, 1) == pair_distance(x, 1, 0)


@given(arrays(float, 9, elements=coords))
def test_pair_distance_triangle_inequality(x):
    d01, d12, d02 = pair_distance(x, 0, 1), pair_distance(x, 1, 2), pair_distance(x, 0, 2)
    assert d02 <= d01 + d12 + 1e-9 * (1 + d01 + d12)


def test_unit_vector_lift_single_particle():
    np.testing.assert_array_equal(unit_vector_lift([2.0, 0.0, 0.0], 0), [1.0, 0.0, 0.0])


def test_unit_vector_lift_embeds_in_block():
    v = unit_vector_lift([0.3, 0.1, -2.0, 0.0, 0.0, 5.0], 1)
    np.testing.assert_array_equal(v, [0, 0, 0, 0, 0, 1])


def test_unit_vector_lift_norm_random(rng):
    x = rng.normal(size=(1000, 6))
    v = unit_vector_lift(x, 0)
    assert np.max(np.abs(np.linalg.norm(v, axis=-1) - 1)) < 1e-12
    assert np.all(v[:, 3:] == 0)


def test_unit_vector_lift_rejects_origin():
    with pytest.raises(SingularPointError):
        unit_vector_lift([RADIUS_EPSILON / 2, 0, 0], 0)


def test_exchange_swaps_blocks():
    np.testing.assert_array_equal(exchange_12([1, 2, 3, 4, 5, 6]), [4, 5, 6, 1, 2, 3])


@given(arrays(float, 6, elements=coords))
def test_exchange_is_an_involution(x):
    np.testing.assert_array_equal(exchange_12(exchange_12(x)), x)


def test_exchange_vector_swaps_point_and_components():
    p, v = exchange_12_vector([1, 2, 3, 4, 5, 6], [0, 0, 1, 0, 1, 0])
    np.testing.assert_array_equal(p, [4, 5, 6, 1, 2, 3])
    np.testing.assert_array_equal(v, [0, 1, 0, 0, 0, 1])


def test_exchange_requires_two_particles():
    with pytest.raises(NotImplementedError):
        exchange_12([1, 2, 3])
    with pytest.raises(NotImplementedError):
        exchange_12(np.zeros(9))


@settings(max_examples=25)
@given(st.integers(1, 3), st.floats(0.1, 1.0), st.floats(1.5, 30.0))
def test_random_shell_points_respect_radius_band(n, r_min, r_max):
    x = random_shell_points(np.random.default_rng(0), 50, n, r_min, r_max)
    for i in range(n):
        r = particle_radius(x, i)
        assert np.all(r >= r_min - 1e-12) and np.all(r <= r_max + 1e-12)
