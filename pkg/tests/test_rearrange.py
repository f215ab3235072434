import numpy as np
import pytest

from analysis.rearrange import (
    RearrangementClass,
    class_from_spec,
    distribution_function,
    enumerate_class,
    is_comonotone,
    linear_maximizer_is_unique,
    maximize_linear,
    mixture,
    parse_generator,
    parse_generator_spec,
)


def test_parse_generators(interval):
    grid = interval(8)
    np.testing.assert_array_equal(parse_generator("binary{0.25}", grid), [1, 1, 0, 0, 0, 0, 0, 0])
    np.testing.assert_allclose(parse_generator("linear-ramp{0, 1}", grid), np.linspace(0, 1, 8))
    np.testing.assert_array_equal(parse_generator("constant{2}", grid), np.full(8, 2.0))
    np.testing.assert_array_equal(parse_generator([0, 1, 0, 1, 0, 1, 0, 1], grid)[:2], [0, 1])


@pytest.mark.parametrize(
    "spec",
    [
        "binary{0}",
        "binary{1.5}",
        "binary{a}",
        "linear-ramp{1}",
        "linear-ramp{0,0}",
        "constant{-1}",
        "gaussian{1}",
        [0.0, 0.0],
        [1.0, -1.0],
        3.0,
    ],
)
def test_invalid_generator_specs(spec):
    with pytest.raises(ValueError):
        parse_generator_spec(spec)


def test_explicit_generator_length_is_checked(interval):
    with pytest.raises(ValueError):
        parse_generator([1.0, 0.0, 1.0], interval(4))


def test_class_membership(rng):
    cls = RearrangementClass.from_generator([3.0, 1.0, 2.0, 0.0])
    assert cls.bound == 3.0
    np.testing.assert_array_equal(cls.sorted_values, [3, 2, 1, 0])
    assert cls.contains([0.0, 1.0, 2.0, 3.0])
    assert not cls.contains([0.0, 1.0, 2.0, 2.0])
    assert not cls.contains([0.0, 1.0, 2.0])
    for _ in range(5):
        assert cls.contains(cls.random_member(rng))


@pytest.mark.parametrize("g0", [[], [0.0, 0.0], [1.0, -0.5], [np.inf, 1.0]])
def test_invalid_generators(g0):
    with pytest.raises(ValueError):
        RearrangementClass.from_generator(g0)


def test_maximize_linear():
    cls = RearrangementClass.from_generator([0.0, 1.0, 1.0])
    np.testing.assert_array_equal(maximize_linear(cls, [3.0, 1.0, 2.0]), [1.0, 0.0, 1.0])
    # Ties go to the lower cell index
    np.testing.assert_array_equal(maximize_linear(cls, [1.0, 1.0, 1.0]), [1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        maximize_linear(cls, [1.0, 2.0])


def test_maximize_linear_beats_every_member(rng):
    cls = RearrangementClass.from_generator([0.0, 0.5, 1.0, 1.0, 2.0])
    w = rng.normal(size=5)
    best = maximize_linear(cls, w) @ w
    assert all(g @ w <= best + 1e-14 for g in enumerate_class(cls))


def test_linear_maximizer_uniqueness():
    cls = RearrangementClass.from_generator([0.0, 1.0, 1.0])
    assert linear_maximizer_is_unique(cls, [3.0, 1.0, 2.0])
    assert not linear_maximizer_is_unique(cls, [3.0, 1.0, 1.0])
    assert not linear_maximizer_is_unique(cls, [3.0, 3.0, 3.0])
    # Tied cells 1 and 2 receive the same value either way
    single = RearrangementClass.from_generator([1.0, 0.0, 0.0])
    assert linear_maximizer_is_unique(single, [3.0, 1.0, 1.0])


def test_comonotone():
    assert is_comonotone([0.0, 1.0, 1.0], [0.1, 0.5, 0.3])
    assert not is_comonotone([1.0, 0.0, 0.0, 1.0], [0.1, 0.2, 0.3, 0.4])
    with pytest.raises(ValueError):
        is_comonotone([1.0], [1.0, 2.0])


def test_distribution_function_is_preserved(interval, rng):
    grid = interval(8)
    cls = class_from_spec("linear-ramp{0,1}", grid)
    g = cls.random_member(rng)
    for t in (0.0, 0.3, 0.99):
        assert distribution_function(grid, g, t) == distribution_function(grid, cls.generator, t)
    assert distribution_function(grid, g, 0.0) == pytest.approx(7 / 8)


@pytest.mark.parametrize(
    "g0, count",
    [
        ([1.0, 0.0, 0.0], 3),
        ([1.0, 2.0, 3.0], 6),
        (list(range(1, 9)), 40320),
        ([1, 1, 1, 1, 0, 0, 0, 0], 70),
    ],
)
def test_enumerate_class_counts(g0, count):
    cls = RearrangementClass.from_generator(g0)
    assert cls.size() == count
    members = [tuple(m) for m in enumerate_class(cls)]
    assert len(members) == count
    assert len(set(members)) == count


def test_enumerate_class_cap():
    cls = RearrangementClass.from_generator(list(range(1, 9)))
    with pytest.raises(ValueError, match="cap"):
        enumerate_class(cls, cap=100)


def test_mixture():
    cls = RearrangementClass.from_generator([1.0, 0.0])
    strict = mixture(cls, [[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5])
    np.testing.assert_allclose(strict.values, [0.5, 0.5])
    assert strict.is_strict

    trivial = mixture(cls, [[1.0, 0.0], [0.0, 1.0]], [1.0, 0.0])
    assert trivial.is_member
    np.testing.assert_array_equal(trivial.values, [1.0, 0.0])


@pytest.mark.parametrize(
    "members, theta",
    [
        ([[1.0, 0.0]], [0.5]),
        ([[1.0, 0.0], [0.0, 1.0]], [0.7, 0.7]),
        ([[1.0, 0.0], [0.0, 1.0]], [1.5, -0.5]),
        ([[1.0, 1.0]], [1.0]),
        ([[1.0, 0.0]], [0.5, 0.5]),
    ],
)
def test_invalid_mixtures(members, theta):
    cls = RearrangementClass.from_generator([1.0, 0.0])
    with pytest.raises(ValueError):
        mixture(cls, members, theta)
