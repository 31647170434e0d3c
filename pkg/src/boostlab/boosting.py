"""AdaBoost and AdaBoost with dynamic weight adjustment (DWA).

Both variants share one loop. They differ only in how instance weights
move after each round:

* ``standard`` multiplies the weight of every misclassified instance by
  ``exp(alpha)``;
* ``dwa`` multiplies every weight by ``exp(alpha * e_i)`` where
  ``e_i = 1 - p_t(y_i | x_i)`` is the probability mass the round's learner
  failed to put on the true class.

With a learner that only emits 0/1 probabilities the two coincide exactly.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, TrainingError
from .weak_learners import WeakLearner, WeakLearnerSpec, fit_learner

__all__ = [
    "BoostConfig",
    "RoundRecord",
    "Ensemble",
    "init_weights",
    "weighted_error",
    "alpha_from_error",
    "random_guess_error",
    "update_weights_indicator",
    "update_weights_dynamic",
    "clip_soft_margin",
    "fit_adaboost",
    "predict_ensemble",
    "staged_accuracy",
    "MAX_CONSECUTIVE_RESETS",
]

VARIANTS = ("standard", "dwa")
ALPHA_RULES = ("binary_half_log", "samme")
INIT_MODES = ("uniform", "class_balanced")
POLICIES = ("stop", "skip_and_reset")
MAX_CONSECUTIVE_RESETS = 5


@dataclass(frozen=True)
class BoostConfig:
    """Settings for :func:`fit_adaboost`.

    ``alpha_rule=None`` picks ``binary_half_log`` for two classes and
    ``samme`` otherwise. ``soft_margin_cap`` is an absolute cap on any
    single instance weight, the string ``"auto"`` for ``min(1, 10 / N)``,
    or ``None`` to disable capping.
    """

    n_rounds: int = 50
    variant: str = "standard"
    alpha_rule: str | None = None
    epsilon_min: float = 1e-10
    soft_margin_cap: float | str | None = None
    init_weights: str = "uniform"
    base: WeakLearnerSpec = field(default_factory=WeakLearnerSpec)
    worse_than_random_policy: str = "stop"

    def __post_init__(self) -> None:
        if int(self.n_rounds) < 1:
            raise ConfigError("n_rounds must be >= 1")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.alpha_rule is not None and self.alpha_rule not in ALPHA_RULES:
            raise ConfigError(f"alpha_rule must be one of {ALPHA_RULES}, got {self.alpha_rule!r}")
        if not 0.0 < self.epsilon_min < 0.5:
            raise ConfigError("epsilon_min must lie in (0, 0.5)")
        cap = self.soft_margin_cap
        if cap is not None and cap != "auto":
            if isinstance(cap, str) or not 0.0 < float(cap) <= 1.0:
                raise ConfigError(f"soft_margin_cap must be in (0, 1], 'auto' or None, got {cap!r}")
        if self.init_weights not in INIT_MODES:
            raise ConfigError(f"init_weights must be one of {INIT_MODES}")
        if self.worse_than_random_policy not in POLICIES:
            raise ConfigError(f"worse_than_random_policy must be one of {POLICIES}")

    def resolved_alpha_rule(self, n_classes: int) -> str:
        if self.alpha_rule is not None:
            return self.alpha_rule
        return "binary_half_log" if n_classes == 2 else "samme"

    def resolved_cap(self, n_samples: int) -> float | None:
        if self.soft_margin_cap is None:
            return None
        if self.soft_margin_cap == "auto":
            return min(1.0, 10.0 / n_samples)
        return float(self.soft_margin_cap)


@dataclass(frozen=True)
class RoundRecord:
    """One boosting round.

    ``weights`` is the distribution the learner was trained on.
    """

    epsilon: float
    alpha: float
    learner: WeakLearner
    accepted: bool
    weights: np.ndarray


@dataclass(frozen=True)
class Ensemble:
    rounds: tuple[RoundRecord, ...]
    n_classes: int
    alpha_rule: str
    variant: str
    history: tuple[RoundRecord, ...] = ()
    final_weights: np.ndarray | None = None

    @property
    def alphas(self) -> np.ndarray:
        return np.array([r.alpha for r in self.rounds])

    def staged_votes(self, X: np.ndarray):
        """Yield the ``(n, K)`` alpha-weighted vote totals after each round."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        votes = np.zeros((X.shape[0], self.n_classes))
        rows = np.arange(X.shape[0])
        for record in self.rounds:
            votes[rows, record.learner.predict(X)] += record.alpha
            yield votes.copy()

    def staged_predict(self, X: np.ndarray):
        for votes in self.staged_votes(X):
            yield np.argmax(votes, axis=1)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Argmax of alpha-weighted votes; ties go to the lower class index."""
        if not self.rounds:
            raise ValueError("empty ensemble")
        pred = None
        for pred in self.staged_predict(X):
            pass
        return pred


def init_weights(n: int, mode: str = "uniform", labels: Sequence[int] | np.ndarray | None = None) -> np.ndarray:
    """Initial instance distribution.

    ``class_balanced`` gives each instance ``1 / (K * n_k)`` where ``K`` is
    the number of distinct labels present and ``n_k`` the size of its class,
    so every present class carries the same total mass.
    """
    if n < 1:
        raise ValueError("need at least one instance")
    if mode == "uniform":
        return np.full(n, 1.0 / n)
    if mode != "class_balanced":
        raise ValueError(f"unknown init mode {mode!r}")
    if labels is None:
        raise ValueError("class_balanced initialization needs labels")
    y = np.asarray(labels, dtype=np.int64)
    if y.shape != (n,):
        raise ValueError("labels must have length n")
    classes, inverse, counts = np.unique(y, return_inverse=True, return_counts=True)
    return 1.0 / (classes.size * counts[inverse])


def weighted_error(predictions, labels, weights) -> float:
    pred = np.asarray(predictions)
    y = np.asarray(labels)
    w = np.asarray(weights, dtype=np.float64)
    if not pred.shape == y.shape == w.shape:
        raise ValueError("predictions, labels and weights must be aligned")
    return float(w[pred != y].sum() / w.sum())


def random_guess_error(rule: str, n_classes: int) -> float:
    """Error at which ``alpha_from_error`` is zero under ``rule``."""
    return 0.5 if rule == "binary_half_log" else (n_classes - 1) / n_classes


def alpha_from_error(epsilon: float, n_classes: int = 2, rule: str = "binary_half_log", epsilon_min: float = 1e-10) -> float:
    """Classifier weight from its weighted error.

    The error is clamped to ``[epsilon_min, 1 - epsilon_min]`` first, so the
    result is always finite.

    >>> alpha_from_error(0.5)
    0.0
    """
    if n_classes < 2:
        raise ValueError("n_classes must be >= 2")
    eps = min(max(float(epsilon), epsilon_min), 1.0 - epsilon_min)
    log_odds = math.log((1.0 - eps) / eps)
    if rule == "binary_half_log":
        return 0.5 * log_odds
    if rule == "samme":
        return log_odds + math.log(n_classes - 1)
    raise ValueError(f"unknown alpha rule {rule!r}")


def _normalize(w: np.ndarray) -> np.ndarray:
    return w / w.sum()


def update_weights_indicator(weights, alpha: float, correct) -> np.ndarray:
    """Multiply misclassified weights by ``exp(alpha)`` and renormalize."""
    w = np.asarray(weights, dtype=np.float64)
    wrong = ~np.asarray(correct, dtype=bool)
    return _normalize(w * np.exp(alpha * wrong.astype(np.float64)))


def update_weights_dynamic(weights, alpha: float, per_instance_error) -> np.ndarray:
    """Multiply each weight by ``exp(alpha * e_i)`` and renormalize."""
    w = np.asarray(weights, dtype=np.float64)
    e = np.asarray(per_instance_error, dtype=np.float64)
    if e.shape != w.shape:
        raise ValueError("per_instance_error must align with weights")
    if np.any(~(e >= 0.0) | ~(e <= 1.0)):
        raise ValueError("per-instance errors must lie in [0, 1]")
    return _normalize(w * np.exp(alpha * e))


def clip_soft_margin(weights, cap: float) -> np.ndarray:
    """Cap every weight at ``cap`` by water-filling.

    Clipped weights are pinned at ``cap`` and the remaining mass is spread
    over the unclipped ones in proportion to their current values, repeating
    until nothing exceeds the cap.
    """
    w = _normalize(np.asarray(weights, dtype=np.float64))
    n = w.size
    if cap * n < 1.0 - 1e-12:
        raise ValueError(f"cap {cap} is below 1/N = {1.0 / n}")
    clipped = np.zeros(n, dtype=bool)
    out = w.copy()
    while True:
        over = ~clipped & (out > cap)
        if not over.any():
            break
        clipped |= over
        free = ~clipped
        if not free.any():
            return np.full(n, 1.0 / n)
        residual = 1.0 - cap * clipped.sum()
        out = np.where(clipped, cap, w * (residual / w[free].sum()))
    return out


def _per_instance_error(learner: WeakLearner, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    proba = learner.predict_proba(X)
    e = 1.0 - proba[np.arange(y.size), y]
    # rounding in the normalization can leave e a hair outside [0, 1]
    return np.clip(e, 0.0, 1.0)


def fit_adaboost(train: Dataset, config: BoostConfig | None = None) -> Ensemble:
    """Run ``config.n_rounds`` boosting iterations.

    A round whose weighted error reaches the random-guess level of the alpha
    rule (0.5 for ``binary_half_log``, ``(K-1)/K`` for ``samme``) is
    rejected. Under ``stop`` boosting ends there; under ``skip_and_reset``
    the weights return to their initial values and the loop goes on, ending
    after more than ``MAX_CONSECUTIVE_RESETS`` rejections in a row. Rejected
    rounds still consume an iteration.

    Raises
    ------
    TrainingError
        If no round was accepted.
    """
    config = config or BoostConfig()
    X, y = train.features, train.labels
    K = train.n_classes
    rule = config.resolved_alpha_rule(K)
    threshold = random_guess_error(rule, K)
    cap = config.resolved_cap(train.n_samples)
    if cap is not None and cap * train.n_samples < 1.0 - 1e-12:
        raise ConfigError(f"soft_margin_cap {cap} is below 1/N for N={train.n_samples}")

    start = init_weights(train.n_samples, config.init_weights, y)
    w = start
    rounds: list[RoundRecord] = []
    history: list[RoundRecord] = []
    resets = 0
    for _ in range(int(config.n_rounds)):
        learner = fit_learner(config.base, train, w)
        pred = learner.predict(X)
        eps = weighted_error(pred, y, w)

        if eps >= threshold:
            history.append(RoundRecord(eps, 0.0, learner, False, w))
            if config.worse_than_random_policy == "stop" or resets >= MAX_CONSECUTIVE_RESETS:
                break
            resets += 1
            w = start
            continue
        resets = 0

        alpha = alpha_from_error(eps, K, rule, config.epsilon_min)
        record = RoundRecord(eps, alpha, learner, True, w)
        rounds.append(record)
        history.append(record)

        if config.variant == "dwa":
            w = update_weights_dynamic(w, alpha, _per_instance_error(learner, X, y))
        else:
            w = update_weights_indicator(w, alpha, pred == y)
        if cap is not None:
            w = clip_soft_margin(w, cap)

    if not rounds:
        raise TrainingError(
            f"no boosting round was accepted: first weighted error {history[0].epsilon:.4f} "
            f">= random-guess level {threshold:.4f}"
        )
    return Ensemble(tuple(rounds), K, rule, config.variant, tuple(history), w)


def predict_ensemble(model: Ensemble, x) -> int:
    return int(model.predict(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])


def staged_accuracy(model: Ensemble, data: Dataset) -> list[tuple[int, float]]:
    """Accuracy of the ensemble truncated to its first ``t`` rounds, for every ``t``."""
    if not model.rounds:
        raise ValueError("empty ensemble")
    return [
        (t, float(np.mean(pred == data.labels)))
        for t, pred in enumerate(model.staged_predict(data.features), start=1)
    ]
