import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hvc.core import (
    DirectionSet,
    HvcEstimate,
    Method,
    Orientation,
    SolutionSet,
    dominates,
    to_maximize,
    validate_set,
    weakly_dominated_mask,
)

vec3 = st.lists(st.integers(-3, 3).map(float), min_size=3, max_size=3)


@pytest.mark.parametrize(
    "a, b, expected",
    [((1, 1), (0, 0), True), ((1, 0), (0, 1), False), ((0.5, 0.5), (0.5, 0.5), False)],
)
def test_dominates_examples(a, b, expected):
    assert dominates(a, b, Orientation.MAXIMIZE) is expected


def test_dominates_minimize_and_mismatch():
    assert dominates((0, 0), (1, 1), "min")
    with pytest.raises(ValueError):
        dominates((1, 2), (1, 2, 3))


@given(vec3)
def test_dominates_irreflexive(a):
    assert not dominates(a, a)


@given(vec3, vec3, vec3)
def test_dominates_transitive(a, b, c):
    if dominates(a, b) and dominates(b, c):
        assert dominates(a, c)


@given(vec3, vec3)
def test_negation_duality(a, b):
    na, nb = [-x for x in a], [-x for x in b]
    assert dominates(a, b, Orientation.MAXIMIZE) == dominates(na, nb, Orientation.MINIMIZE)


def test_validate_set_examples():
    assert validate_set([[1, 1]], [0, 0]).clean
    report = validate_set([[1, 1], [1, 1]], [0, 0])
    assert report.duplicates == ((0, 1),)
    assert report.dominated == ()
    assert validate_set([[0.5, 0.5], [1, 1]], [0, 0]).dominated == (0,)
    assert validate_set([[0.0, 1.0], [1, 1]], [0, 0]).not_better_than_ref == (0,)


def test_validate_set_does_not_mutate():
    A = SolutionSet(np.array([[0.5, 0.5], [1.0, 1.0]]))
    before = A.points.copy()
    validate_set(A, [0, 0])
    np.testing.assert_array_equal(A.points, before)


def test_solution_set_validation():
    with pytest.raises(ValueError):
        SolutionSet(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError):
        SolutionSet(np.array([[1.0], [2.0]]))
    A = SolutionSet([[1.0, 2.0], [3.0, 4.0]], "min")
    assert A.orientation is Orientation.MINIMIZE
    assert A.m == 2 and len(A) == 2
    assert not A.points.flags.writeable
    np.testing.assert_array_equal(A.without(0).points, [[3.0, 4.0]])


def test_to_maximize_negates_minimization():
    pts, ref = to_maximize(SolutionSet([[1.0, 2.0]], Orientation.MINIMIZE), [3.0, 3.0])
    np.testing.assert_array_equal(pts, [[-1.0, -2.0]])
    np.testing.assert_array_equal(ref, [-3.0, -3.0])
    with pytest.raises(ValueError):
        to_maximize([[1.0, 2.0]], [0.0])


def test_direction_set_invariants():
    s = np.sqrt(0.5)
    DirectionSet([[s, s]])
    with pytest.raises(ValueError):
        DirectionSet([[1.0, 0.0]])
    with pytest.raises(ValueError):
        DirectionSet([[0.5, 0.5]])


def test_estimate_rejects_negative_values():
    with pytest.raises(ValueError):
        HvcEstimate(Method.EXACT, [0.1, -0.1])
    assert len(HvcEstimate("r2hvc", [0.0, 1.0])) == 2


def test_weakly_dominated_mask_keeps_first_duplicate():
    pts = np.array([[1.0, 1.0], [1.0, 1.0], [0.5, 0.5], [2.0, 0.0]])
    np.testing.assert_array_equal(weakly_dominated_mask(pts), [False, True, True, False])
