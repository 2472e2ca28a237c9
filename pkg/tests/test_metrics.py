import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hvc.core import HvcEstimate, Method
from hvc.metrics import (
    aggregate_runs,
    argmin_lowest,
    consistency_rate,
    correct_identification,
    identification_rate,
)


def brute_consistency(t, a):
    agree = total = 0
    for i, j in itertools.combinations(range(len(t)), 2):
        total += 1
        agree += np.sign(t[i] - t[j]) == np.sign(a[i] - a[j])
    return agree / total


def test_consistency_examples():
    assert consistency_rate([1, 2, 3], [10, 20, 30]) == 1.0
    assert consistency_rate([1, 2, 3], [3, 2, 1]) == 0.0
    assert consistency_rate([1, 2, 3], [1, 3, 2]) == pytest.approx(2 / 3)
    assert consistency_rate([1, 1, 2], [5, 5, 9]) == 1.0
    assert consistency_rate([1, 1, 2], [5, 6, 9]) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        consistency_rate([1], [1])
    with pytest.raises(ValueError):
        consistency_rate([1, 2], [1, 2, 3])


def test_truth_must_be_exact():
    est = HvcEstimate(Method.MONTE_CARLO, [1.0, 2.0])
    with pytest.raises(ValueError):
        consistency_rate(est, [1.0, 2.0])
    assert consistency_rate(HvcEstimate(Method.EXACT, [1.0, 2.0]), est) == 1.0


def test_identification():
    assert argmin_lowest(np.array([0.3, 0.1, 0.1])) == 1
    assert argmin_lowest(np.array([0.1 + 1e-13, 0.1])) == 0
    assert correct_identification([0.2, 0.1, 0.3], [5.0, 1.0, 9.0])
    assert not correct_identification([0.2, 0.1, 0.3], [0.0, 1.0, 9.0])
    assert identification_rate([([0, 1], [0, 1]), ([0, 1], [1, 0])]) == 0.5
    with pytest.raises(ValueError):
        identification_rate([])


def test_aggregate_runs():
    s = aggregate_runs([0.5, 0.7, 0.9], 3)
    assert s.mean == pytest.approx(0.7) and s.stddev == pytest.approx(0.2)
    assert aggregate_runs([0.4], 1) == (0.4, 0.0)
    with pytest.raises(ValueError):
        aggregate_runs([0.4, 0.5], 3)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=2, max_size=12), st.integers(0, 10**6))
def test_matches_pairwise_reference(values, seed):
    t = np.asarray(values, dtype=float)
    a = np.random.default_rng(seed).integers(0, 5, size=len(t)).astype(float)
    assert consistency_rate(t, a) == pytest.approx(brute_consistency(t, a))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 1000), min_size=2, max_size=15, unique=True))
def test_invariant_under_monotone_maps(values):
    t = np.asarray(values) / 1000.0
    a = np.random.default_rng(len(t)).permutation(t)
    base = consistency_rate(t, a)
    assert consistency_rate(t, 3 * a**3 + 7) == base
    assert consistency_rate(t, t) == 1.0


def test_random_ranking_averages_one_half():
    rng = np.random.default_rng(7)
    rates = [consistency_rate(rng.random(20), rng.random(20)) for _ in range(500)]
    assert np.mean(rates) == pytest.approx(0.5, abs=0.05)
