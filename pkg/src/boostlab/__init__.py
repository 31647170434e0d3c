"""boostlab: AdaBoost, dynamic-weight AdaBoost and logistic gradient boosting."""

__version__ = "0.1.0"

from .boosting import (
    BoostConfig,
    Ensemble,
    RoundRecord,
    alpha_from_error,
    clip_soft_margin,
    fit_adaboost,
    init_weights,
    predict_ensemble,
    staged_accuracy,
    update_weights_dynamic,
    update_weights_indicator,
    weighted_error,
)
from .dataset import Dataset, PreprocessConfig, SplitSpec, load_csv, train_test_split
from .errors import BoostlabError, ConfigError, DataError, TrainingError
from .gradboost import GBConfig, GBModel, fit_gradboost, gb_predict
from .metrics import LearningCurve, accuracy, confusion
from .weak_learners import GaussianNBModel, StumpModel, WeakLearnerSpec, gnb_fit, stump_fit

__all__ = [
    "BoostConfig",
    "BoostlabError",
    "ConfigError",
    "DataError",
    "Dataset",
    "Ensemble",
    "GBConfig",
    "GBModel",
    "GaussianNBModel",
    "LearningCurve",
    "PreprocessConfig",
    "RoundRecord",
    "SplitSpec",
    "StumpModel",
    "TrainingError",
    "WeakLearnerSpec",
    "accuracy",
    "alpha_from_error",
    "clip_soft_margin",
    "confusion",
    "fit_adaboost",
    "fit_gradboost",
    "gb_predict",
    "gnb_fit",
    "init_weights",
    "load_csv",
    "predict_ensemble",
    "staged_accuracy",
    "stump_fit",
    "train_test_split",
    "update_weights_dynamic",
    "update_weights_indicator",
    "weighted_error",
]
