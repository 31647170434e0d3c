"""Accuracy, confusion matrices and learning curves."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

__all__ = ["accuracy", "confusion", "LearningCurve", "learning_curve"]


def accuracy(pred, truth) -> float:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError("pred and truth must be aligned")
    if truth.size == 0:
        raise ValueError("accuracy of an empty set is undefined")
    return float(np.count_nonzero(pred == truth) / truth.size)


def confusion(pred, truth, n_classes: int) -> np.ndarray:
    """``(K, K)`` counts; rows are true classes, columns predicted classes."""
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if pred.shape != truth.shape:
        raise ValueError("pred and truth must be aligned")
    for name, v in (("pred", pred), ("truth", truth)):
        if v.size and (v.min() < 0 or v.max() >= n_classes):
            raise ValueError(f"{name} has labels outside [0, {n_classes})")
    matrix = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(matrix, (truth, pred), 1)
    return matrix


@dataclass(frozen=True)
class LearningCurve:
    rounds: tuple[int, ...]
    train_accuracy: tuple[float, ...]
    test_accuracy: tuple[float, ...]

    def __post_init__(self) -> None:
        if not len(self.rounds) == len(self.train_accuracy) == len(self.test_accuracy):
            raise ValueError("learning curve columns must have equal length")
        if any(b <= a for a, b in zip(self.rounds, self.rounds[1:])):
            raise ValueError("rounds must be strictly increasing")
        for acc in (*self.train_accuracy, *self.test_accuracy):
            if not 0.0 <= acc <= 1.0:
                raise ValueError(f"accuracy {acc} outside [0, 1]")

    def __len__(self) -> int:
        return len(self.rounds)

    def rows(self):
        return zip(self.rounds, self.train_accuracy, self.test_accuracy)


def learning_curve(train_stages: Sequence[tuple[int, float]], test_stages: Sequence[tuple[int, float]]) -> LearningCurve:
    """Join staged train and test accuracies that cover the same rounds."""
    if [t for t, _ in train_stages] != [t for t, _ in test_stages]:
        raise ValueError("train and test stages cover different rounds")
    return LearningCurve(
        tuple(t for t, _ in train_stages),
        tuple(a for _, a in train_stages),
        tuple(a for _, a in test_stages),
    )
