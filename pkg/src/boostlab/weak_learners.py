"""Sample-weight-aware base estimators for boosting.

Two families share one contract: ``predict(X)`` returns hard labels and
``predict_proba(X)`` returns rows that sum to one. Both accept a single
``d``-vector or an ``(n, d)`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, TrainingError

__all__ = [
    "WeakLearnerSpec",
    "GaussianNBModel",
    "StumpModel",
    "WeakLearner",
    "gnb_fit",
    "gnb_predict_proba",
    "stump_fit",
    "learner_predict",
    "fit_learner",
    "TIE_TOLERANCE",
]

# Candidate splits whose weighted errors differ by less than this fraction
# of the total weight are treated as ties.
TIE_TOLERANCE = 1e-12

_LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class WeakLearnerSpec:
    kind: str = "gnb"
    variance_smoothing_factor: float = 1e-9

    def __post_init__(self) -> None:
        if self.kind not in ("gnb", "stump"):
            raise ConfigError(f"unknown weak learner kind {self.kind!r}")
        if not self.variance_smoothing_factor > 0:
            raise ConfigError("variance_smoothing_factor must be > 0")


def _as_matrix(X: np.ndarray) -> tuple[np.ndarray, bool]:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        return X[np.newaxis, :], True
    return X, False


def _check_weights(weights: np.ndarray, n: int) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise ValueError(f"weights shape {w.shape} does not match {n} rows")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    if w.sum() <= 0:
        raise ValueError("weights must have positive total mass")
    return w


@dataclass(frozen=True)
class GaussianNBModel:
    """Fitted Gaussian naive Bayes.

    Attributes
    ----------
    priors : (K,) array
        Weighted class mass, normalized to sum to one. Classes absent from
        the training rows get prior 0 and never receive probability.
    means, variances : (K, d) arrays
        Weighted per-class feature moments; variances include ``smoothing``.
    smoothing : float
        Additive variance floor that was applied.
    """

    priors: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    smoothing: float

    @property
    def n_classes(self) -> int:
        return self.priors.shape[0]

    def joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        X, _ = _as_matrix(X)
        with np.errstate(divide="ignore"):
            log_prior = np.log(self.priors)
        diff = X[:, np.newaxis, :] - self.means[np.newaxis, :, :]
        log_density = -0.5 * (_LOG_2PI + np.log(self.variances) + diff * diff / self.variances)
        return log_prior + log_density.sum(axis=2)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X, single = _as_matrix(X)
        jll = self.joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        proba = np.exp(jll)
        proba /= proba.sum(axis=1, keepdims=True)
        return proba[0] if single else proba

    def predict(self, X: np.ndarray) -> np.ndarray | int:
        X, single = _as_matrix(X)
        labels = np.argmax(self.predict_proba(X), axis=1)
        return int(labels[0]) if single else labels


def gnb_fit(data: Dataset, weights: np.ndarray, variance_smoothing_factor: float = 1e-9) -> GaussianNBModel:
    """Weighted Gaussian naive Bayes.

    Priors, means and (population) variances are all weight-weighted, and
    every variance is floored by ``variance_smoothing_factor`` times the
    largest weighted global feature variance. Rows with zero weight
    therefore have no influence at all.
    """
    X, y = data.features, data.labels
    w = _check_weights(weights, data.n_samples)
    K, d = data.n_classes, data.n_features
    total = w.sum()

    global_mean = w @ X / total
    global_var = w @ (X - global_mean) ** 2 / total
    base = float(global_var.max())
    # all features constant: fall back to an absolute floor so variances stay positive
    smoothing = variance_smoothing_factor * (base if base > 0 else 1.0)

    priors = np.zeros(K)
    means = np.zeros((K, d))
    variances = np.zeros((K, d))
    for k in range(K):
        mask = y == k
        if not mask.any():
            continue
        wk = w[mask]
        mass = wk.sum()
        if mass <= 0:
            raise TrainingError(f"class {data.class_names[k]!r} has zero total weight")
        Xk = X[mask]
        priors[k] = mass
        means[k] = wk @ Xk / mass
        variances[k] = wk @ (Xk - means[k]) ** 2 / mass
    variances += smoothing
    return GaussianNBModel(priors / priors.sum(), means, variances, smoothing)


def gnb_predict_proba(model: GaussianNBModel, x: np.ndarray) -> np.ndarray:
    return model.predict_proba(x)


@dataclass(frozen=True)
class StumpModel:
    """One-split classifier: ``x[feature_index] <= threshold`` goes left."""

    feature_index: int
    threshold: float
    left_class: int
    right_class: int
    n_classes: int

    def predict(self, X: np.ndarray) -> np.ndarray | int:
        X, single = _as_matrix(X)
        goes_left = X[:, self.feature_index] <= self.threshold
        labels = np.where(goes_left, self.left_class, self.right_class).astype(np.int64)
        return int(labels[0]) if single else labels

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X, single = _as_matrix(X)
        labels = self.predict(X)
        proba = np.zeros((X.shape[0], self.n_classes))
        proba[np.arange(X.shape[0]), labels] = 1.0
        return proba[0] if single else proba


def _first_within(values: np.ndarray, tol: float) -> np.ndarray:
    """Per row, the lowest column whose value is within ``tol`` of the row max."""
    return np.argmax(values >= values.max(axis=1, keepdims=True) - tol, axis=1)


def stump_fit(data: Dataset, weights: np.ndarray) -> StumpModel:
    """Exhaustive weighted 0/1-error stump.

    Every feature and every midpoint between consecutive distinct sorted
    values is tried, with the best left and right labels among the observed
    classes. Ties go to the lowest feature index, then the lowest threshold,
    then the lowest labels. If no feature has two distinct values the result
    is a constant stump predicting the heaviest class.
    """
    X, y = data.features, data.labels
    w = _check_weights(weights, data.n_samples)
    K = data.n_classes
    total = w.sum()
    tol = TIE_TOLERANCE * total

    observed = np.zeros(K, dtype=bool)
    observed[y] = True
    class_mass = np.bincount(y, weights=w, minlength=K)

    # unobserved classes can never be chosen
    masked = np.where(observed, 0.0, -np.inf)

    best = None
    best_err = np.inf
    for j in range(data.n_features):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        onehot = np.zeros((xs.size, K))
        onehot[np.arange(xs.size), y[order]] = w[order]
        left_mass = np.cumsum(onehot, axis=0)[:-1]
        cut = np.flatnonzero(xs[:-1] < xs[1:])
        if cut.size == 0:
            continue
        left_mass = left_mass[cut]
        right_mass = class_mass - left_mass + masked
        left_mass = left_mass + masked
        left_lab = _first_within(left_mass, tol)
        right_lab = _first_within(right_mass, tol)
        rows = np.arange(cut.size)
        err = total - left_mass[rows, left_lab] - right_mass[rows, right_lab]
        thresholds = (xs[cut] + xs[cut + 1]) / 2.0
        for t in range(cut.size):
            if err[t] < best_err - tol:
                best_err = err[t]
                best = (j, float(thresholds[t]), int(left_lab[t]), int(right_lab[t]))

    if best is None:
        heaviest = int(np.argmax(np.where(observed, class_mass, -np.inf)))
        return StumpModel(0, float("inf"), heaviest, heaviest, K)
    return StumpModel(*best, n_classes=K)


WeakLearner = Union[GaussianNBModel, StumpModel]


def learner_predict(model: WeakLearner, x: np.ndarray) -> int:
    return int(model.predict(np.asarray(x, dtype=np.float64).reshape(-1)))


def fit_learner(spec: WeakLearnerSpec, data: Dataset, weights: np.ndarray) -> WeakLearner:
    if spec.kind == "gnb":
        return gnb_fit(data, weights, spec.variance_smoothing_factor)
    return stump_fit(data, weights)
