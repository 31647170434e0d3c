import numpy as np
import pytest

from boostlab import LearningCurve, accuracy, confusion
from boostlab.metrics import learning_curve


def test_accuracy_values():
    assert accuracy([1, 2, 3], [1, 2, 3]) == 1.0
    assert accuracy([0, 1, 1, 0], [0, 1, 0, 0]) == 0.75
    assert accuracy([1, 1], [0, 0]) == 0.0
    with pytest.raises(ValueError):
        accuracy([], [])


def test_confusion_orientation():
    np.testing.assert_array_equal(confusion([0, 1, 1], [0, 0, 1], 2), [[1, 1], [0, 1]])
    np.testing.assert_array_equal(confusion([2, 0, 1], [2, 0, 1], 3), np.eye(3, dtype=int))


def test_confusion_out_of_range():
    with pytest.raises(ValueError):
        confusion([0, 3], [0, 1], 3)


def test_trace_matches_accuracy_and_permutation_invariance():
    rng = np.random.default_rng(0)
    for _ in range(200):
        K = int(rng.integers(2, 6))
        n = int(rng.integers(1, 60))
        pred, truth = rng.integers(0, K, n), rng.integers(0, K, n)
        m = confusion(pred, truth, K)
        assert m.sum() == n
        assert np.trace(m) / n == accuracy(pred, truth)
        np.testing.assert_array_equal(m.sum(axis=1), np.bincount(truth, minlength=K))
        perm = rng.permutation(n)
        np.testing.assert_array_equal(confusion(pred[perm], truth[perm], K), m)


def test_learning_curve_validation():
    curve = learning_curve([(1, 0.5), (2, 0.75)], [(1, 0.4), (2, 0.6)])
    assert list(curve.rows()) == [(1, 0.5, 0.4), (2, 0.75, 0.6)]
    with pytest.raises(ValueError):
        LearningCurve((2, 1), (0.5, 0.5), (0.5, 0.5))
    with pytest.raises(ValueError):
        LearningCurve((1,), (1.5,), (0.5,))
    with pytest.raises(ValueError):
        learning_curve([(1, 0.5)], [(2, 0.5)])
