"""Binary gradient boosting with logistic loss and line-searched steps.

The model is ``F(x) = f0 + sum_m gamma_m * h_m(x)`` where each ``h_m`` is a
regression stump fitted to the pseudo-residuals of the current scores and
``gamma_m`` minimizes the total logistic loss along ``h_m``. Labels are
mapped ``0 -> -1`` and ``1 -> +1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, TrainingError
from .weak_learners import TIE_TOLERANCE

__all__ = [
    "GBConfig",
    "GBModel",
    "RegressionStump",
    "logistic_loss",
    "pseudo_residuals",
    "line_search_gamma",
    "fit_regression_stump",
    "fit_gradboost",
    "gb_predict",
    "staged_accuracy",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GBConfig:
    n_stages: int = 100
    loss: str = "logistic"
    gamma_max: float = 10.0
    line_search_tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if int(self.n_stages) < 1:
            raise ConfigError("n_stages must be >= 1")
        if self.loss != "logistic":
            raise ConfigError(f"only logistic loss is supported, got {self.loss!r}")
        if not self.gamma_max > 0:
            raise ConfigError("gamma_max must be > 0")
        if not self.line_search_tolerance > 0:
            raise ConfigError("line_search_tolerance must be > 0")


@dataclass(frozen=True)
class RegressionStump:
    feature_index: int
    threshold: float
    left_value: float
    right_value: float

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return np.where(X[:, self.feature_index] <= self.threshold, self.left_value, self.right_value)


@dataclass(frozen=True)
class GBModel:
    """Additive score model.

    ``train_loss[0]`` is the training loss of ``f0`` alone and
    ``train_loss[m]`` the loss after stage ``m``.
    """

    f0: float
    stages: tuple[tuple[RegressionStump, float], ...]
    loss: str = "logistic"
    train_loss: tuple[float, ...] = ()
    gamma_max: float = 10.0

    @property
    def gammas(self) -> np.ndarray:
        return np.array([g for _, g in self.stages])

    def staged_decision_function(self, X: np.ndarray):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        score = np.full(X.shape[0], self.f0)
        for stump, gamma in self.stages:
            score = score + gamma * stump.predict(X)
            yield score

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        score = np.full(X.shape[0], self.f0)
        for score in self.staged_decision_function(X):
            pass
        return score

    def predict(self, X: np.ndarray) -> np.ndarray:
        # score exactly 0 goes to class 0
        return (self.decision_function(X) > 0).astype(np.int64)


def logistic_loss(labels, scores) -> float:
    """Total ``sum_i log(1 + exp(-y_i F_i))`` for labels in {-1, +1}."""
    y = np.asarray(labels, dtype=np.float64)
    F = np.asarray(scores, dtype=np.float64)
    if y.shape != F.shape:
        raise ValueError("labels and scores must be aligned")
    return float(np.logaddexp(0.0, -y * F).sum())


def _sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def pseudo_residuals(labels, scores) -> np.ndarray:
    """Negative gradient of the logistic loss: ``y / (1 + exp(y F))``."""
    y = np.asarray(labels, dtype=np.float64)
    F = np.asarray(scores, dtype=np.float64)
    if y.shape != F.shape:
        raise ValueError("labels and scores must be aligned")
    return y * _sigmoid(-y * F)


def line_search_gamma(labels, scores, h_outputs, config: GBConfig | None = None) -> float:
    """Golden-section minimization of ``L(y, F + gamma h)`` over ``[0, gamma_max]``.

    The loss is convex in ``gamma``. Both end points are compared with the
    bracketed minimum at the end, so boundary optima come back exactly and
    the returned step never increases the loss.
    """
    config = config or GBConfig()
    y = np.asarray(labels, dtype=np.float64)
    F = np.asarray(scores, dtype=np.float64)
    h = np.asarray(h_outputs, dtype=np.float64)
    if not y.shape == F.shape == h.shape:
        raise ValueError("labels, scores and h_outputs must be aligned")
    if not np.any(h != 0):
        raise ValueError("weak learner output is identically zero")

    def loss(g: float) -> float:
        return logistic_loss(y, F + g * h)

    a, b = 0.0, float(config.gamma_max)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = loss(c), loss(d)
    while b - a > config.line_search_tolerance:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = loss(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = loss(d)

    candidates = [(loss(0.0), 0.0), (loss(float(config.gamma_max)), float(config.gamma_max))]
    mid = (a + b) / 2.0
    candidates.append((loss(mid), mid))
    # lowest loss wins; exact ties prefer the end points listed first
    return min(candidates, key=lambda c: c[0])[1]


def fit_regression_stump(X: np.ndarray, target: np.ndarray) -> RegressionStump:
    """Least-squares stump with leaf values equal to the side means.

    Ties in squared error go to the lowest feature index, then the lowest
    threshold. With no usable split the stump is constant at the mean.
    """
    X = np.asarray(X, dtype=np.float64)
    r = np.asarray(target, dtype=np.float64)
    n = r.size
    total = r.sum()
    # SSE = sum r^2 - (S_L^2 / n_L + S_R^2 / n_R); maximize the bracket
    best = None
    best_gain = -np.inf
    tol = TIE_TOLERANCE * max(1.0, float(r @ r))
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        cut = np.flatnonzero(xs[:-1] < xs[1:])
        if cut.size == 0:
            continue
        left_sum = np.cumsum(r[order])[cut]
        n_left = cut + 1.0
        n_right = n - n_left
        gain = left_sum**2 / n_left + (total - left_sum) ** 2 / n_right
        for t in range(cut.size):
            if gain[t] > best_gain + tol:
                best_gain = gain[t]
                i = cut[t]
                best = (
                    j,
                    float((xs[i] + xs[i + 1]) / 2.0),
                    float(left_sum[t] / n_left[t]),
                    float((total - left_sum[t]) / n_right[t]),
                )
    if best is None:
        mean = float(total / n)
        return RegressionStump(0, float("inf"), mean, mean)
    # leaf means recomputed directly to avoid cumulative-sum drift
    j, thr, _, _ = best
    left = X[:, j] <= thr
    return RegressionStump(j, thr, float(r[left].mean()), float(r[~left].mean()))


def _signed_labels(data: Dataset) -> np.ndarray:
    if data.n_classes != 2:
        raise TrainingError(f"gradient boosting is binary only, dataset has K={data.n_classes}")
    return np.where(data.labels == 1, 1.0, -1.0)


def fit_gradboost(train: Dataset, config: GBConfig | None = None) -> GBModel:
    config = config or GBConfig()
    y = _signed_labels(train)
    X = train.features

    p = float(np.mean(y > 0))
    p = min(max(p, 1e-10), 1.0 - 1e-10)
    f0 = 0.5 * math.log(p / (1.0 - p))

    F = np.full(y.size, f0)
    losses = [logistic_loss(y, F)]
    stages = []
    for _ in range(int(config.n_stages)):
        stump = fit_regression_stump(X, pseudo_residuals(y, F))
        h = stump.predict(X)
        gamma = line_search_gamma(y, F, h, config) if np.any(h != 0) else 0.0
        F = F + gamma * h
        stages.append((stump, gamma))
        losses.append(logistic_loss(y, F))
    return GBModel(f0, tuple(stages), config.loss, tuple(losses), float(config.gamma_max))


def gb_predict(model: GBModel, x) -> tuple[float, int]:
    score = float(model.decision_function(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])
    return score, int(score > 0)


def staged_accuracy(model: GBModel, data: Dataset) -> list[tuple[int, float]]:
    return [
        (m, float(np.mean((score > 0).astype(np.int64) == data.labels)))
        for m, score in enumerate(model.staged_decision_function(data.features), start=1)
    ]
