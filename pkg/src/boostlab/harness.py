"""Experiment runner: load, split, fit several models, and write reports.

An experiment config is a JSON object::

    {
      "dataset": {"path": "rice.csv", "label_column": "Class",
                  "impute_numeric": "mean", "drop_duplicates": true,
                  "drop_columns": [], "delimiter": ","},
      "split": {"test_fraction": 0.3, "seed": 42, "stratified": false},
      "models": [
        {"name": "standard", "kind": "adaboost", "n_rounds": 50},
        {"name": "dwa", "kind": "adaboost", "variant": "dwa", "n_rounds": 50,
         "base": {"kind": "gnb", "variance_smoothing_factor": 1e-9}},
        {"name": "gradboost", "kind": "gradboost", "n_stages": 50}
      ],
      "output_dir": "out",
      "max_workers": 1
    }

AdaBoost entries accept every :class:`~boostlab.boosting.BoostConfig` field
and gradient boosting entries every :class:`~boostlab.gradboost.GBConfig`
field. When ``kind`` is omitted it is inferred from the name
(``gradboost`` or ``gb`` means gradient boosting); when ``variant`` is
omitted a model named ``dwa`` gets the DWA update. A relative dataset path
is resolved against the directory of the config file.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

import numpy as np

from . import __version__
from . import gradboost as gb
from .boosting import BoostConfig, fit_adaboost, staged_accuracy
from .dataset import Dataset, PreprocessConfig, SplitSpec, load_csv, train_test_split
from .errors import BoostlabError, ConfigError
from .metrics import LearningCurve, accuracy, confusion, learning_curve
from .weak_learners import WeakLearnerSpec

__all__ = [
    "DatasetConfig",
    "ModelConfig",
    "ExperimentConfig",
    "ModelReport",
    "ReportBundle",
    "run_experiment",
    "emit_reports",
    "load_experiment_config",
]

log = logging.getLogger(__name__)

_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


@dataclass(frozen=True)
class DatasetConfig:
    path: Path
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)


@dataclass(frozen=True)
class ModelConfig:
    name: str
    params: Union[BoostConfig, gb.GBConfig]

    @property
    def kind(self) -> str:
        return "gradboost" if isinstance(self.params, gb.GBConfig) else "adaboost"


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: DatasetConfig
    split: SplitSpec
    models: tuple[ModelConfig, ...]
    output_dir: Path | None = None
    max_workers: int = 1

    def __post_init__(self) -> None:
        if not self.models:
            raise ConfigError("an experiment needs at least one model")
        names = [m.name for m in self.models]
        if len(set(names)) != len(names):
            raise ConfigError(f"model names must be unique, got {names}")
        for name in names:
            if not _NAME_RE.match(name):
                raise ConfigError(f"model name {name!r} may only use letters, digits, '_', '.', '-'")
        if self.max_workers < 1:
            raise ConfigError("max_workers must be >= 1")

    @classmethod
    def from_dict(cls, raw: dict[str, Any], base_dir: Path | None = None) -> ExperimentConfig:
        try:
            ds = dict(raw["dataset"])
            path = Path(ds.pop("path"))
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            preprocess = PreprocessConfig(**ds)
            split = SplitSpec(**raw.get("split", {}))
            models = tuple(model_config_from_dict(m) for m in raw["models"])
            out = raw.get("output_dir")
            if out is not None and base_dir is not None and not Path(out).is_absolute():
                out = base_dir / out
            return cls(
                DatasetConfig(path, preprocess),
                split,
                models,
                Path(out) if out is not None else None,
                int(raw.get("max_workers", 1)),
            )
        except BoostlabError as exc:
            raise ConfigError(str(exc)) from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid experiment config: {exc!r}") from exc

    def to_dict(self) -> dict[str, Any]:
        return {
            "dataset": {"path": str(self.dataset.path), **_plain(self.dataset.preprocess)},
            "split": _plain(self.split),
            "models": [{"name": m.name, "kind": m.kind, **_plain(m.params)} for m in self.models],
            "output_dir": None if self.output_dir is None else str(self.output_dir),
            "max_workers": self.max_workers,
        }


def _plain(obj) -> dict[str, Any]:
    out = dataclasses.asdict(obj)
    return {k: list(v) if isinstance(v, tuple) else v for k, v in out.items()}


def model_config_from_dict(raw: dict[str, Any]) -> ModelConfig:
    raw = dict(raw)
    name = raw.pop("name")
    kind = raw.pop("kind", "gradboost" if name in ("gradboost", "gb") else "adaboost")
    if kind == "gradboost":
        return ModelConfig(name, gb.GBConfig(**raw))
    if kind != "adaboost":
        raise ConfigError(f"unknown model kind {kind!r}")
    if "base" in raw:
        raw["base"] = WeakLearnerSpec(**raw["base"])
    raw.setdefault("variant", "dwa" if name == "dwa" else "standard")
    return ModelConfig(name, BoostConfig(**raw))


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return ExperimentConfig.from_dict(raw, base_dir=path.parent)


@dataclass
class ModelReport:
    name: str
    kind: str
    error: str | None = None
    train_accuracy: float | None = None
    test_accuracy: float | None = None
    rounds: list[dict[str, Any]] = field(default_factory=list)
    confusion: np.ndarray | None = None
    curve: LearningCurve | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def accepted_rounds(self) -> int:
        return 0 if self.curve is None else len(self.curve)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "status": "ok" if self.ok else "error",
            "error": self.error,
            "accuracy": self.test_accuracy,
            "train_accuracy": self.train_accuracy,
            "accepted_rounds": self.accepted_rounds,
            "rounds": self.rounds,
            "confusion": None if self.confusion is None else self.confusion.tolist(),
            "learning_curve": None
            if self.curve is None
            else {
                "round": list(self.curve.rounds),
                "train_accuracy": list(self.curve.train_accuracy),
                "test_accuracy": list(self.curve.test_accuracy),
            },
        }


@dataclass
class ReportBundle:
    config: ExperimentConfig
    class_names: tuple[str, ...]
    feature_names: tuple[str, ...]
    n_train: int
    n_test: int
    models: list[ModelReport]
    duration_seconds: float = 0.0

    @property
    def partial(self) -> bool:
        return any(not m.ok for m in self.models)

    def model(self, name: str) -> ModelReport:
        for m in self.models:
            if m.name == name:
                return m
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "library": "boostlab",
            "version": __version__,
            "config": self.config.to_dict(),
            "data": {
                "n_train": self.n_train,
                "n_test": self.n_test,
                "class_names": list(self.class_names),
                "feature_names": list(self.feature_names),
            },
            "partial": self.partial,
            "models": [m.to_dict() for m in self.models],
            "duration_seconds": self.duration_seconds,
        }


def _fit_one(model: ModelConfig, train: Dataset, test: Dataset) -> ModelReport:
    report = ModelReport(model.name, model.kind)
    try:
        if isinstance(model.params, gb.GBConfig):
            fitted = gb.fit_gradboost(train, model.params)
            report.rounds = [
                {"stage": m, "gamma": gamma, "train_loss": loss}
                for m, ((_, gamma), loss) in enumerate(zip(fitted.stages, fitted.train_loss[1:]), start=1)
            ]
            train_stages = gb.staged_accuracy(fitted, train)
            test_stages = gb.staged_accuracy(fitted, test)
        else:
            fitted = fit_adaboost(train, model.params)
            report.rounds = [
                {"round": t, "epsilon": r.epsilon, "alpha": r.alpha, "accepted": r.accepted}
                for t, r in enumerate(fitted.history, start=1)
            ]
            train_stages = staged_accuracy(fitted, train)
            test_stages = staged_accuracy(fitted, test)
        pred = fitted.predict(test.features)
    except (BoostlabError, ValueError, ArithmeticError) as exc:
        log.warning("model %s failed: %s", model.name, exc)
        report.error = f"{type(exc).__name__}: {exc}"
        return report

    report.curve = learning_curve(train_stages, test_stages)
    report.train_accuracy = accuracy(fitted.predict(train.features), train.labels)
    report.test_accuracy = accuracy(pred, test.labels)
    report.confusion = confusion(pred, test.labels, test.n_classes)
    return report


def run_experiment(config: ExperimentConfig, write: bool = True) -> ReportBundle:
    """Run every configured model on one seeded split.

    A failing model is recorded with its error and the others still run;
    check :attr:`ReportBundle.partial`. Reports are written to
    ``config.output_dir`` when it is set and ``write`` is true.
    """
    start = time.perf_counter()
    data = load_csv(config.dataset.path, config.dataset.preprocess)
    train, test = train_test_split(data, config.split)
    log.info("loaded %s: %d train / %d test rows, K=%d", config.dataset.path, train.n_samples, test.n_samples, data.n_classes)

    if config.max_workers > 1:
        with ThreadPoolExecutor(max_workers=config.max_workers) as pool:
            reports = list(pool.map(lambda m: _fit_one(m, train, test), config.models))
    else:
        reports = [_fit_one(m, train, test) for m in config.models]

    bundle = ReportBundle(
        config=config,
        class_names=data.class_names,
        feature_names=data.feature_names,
        n_train=train.n_samples,
        n_test=test.n_samples,
        models=reports,
        duration_seconds=time.perf_counter() - start,
    )
    if write and config.output_dir is not None:
        emit_reports(bundle, config.output_dir)
    return bundle


def write_curve_csv(bundle: ReportBundle, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "round", "train_accuracy", "test_accuracy"])
        for m in bundle.models:
            if m.curve is None:
                continue
            for t, tr, te in m.curve.rows():
                writer.writerow([m.name, t, repr(tr), repr(te)])


def emit_reports(bundle: ReportBundle, directory: str | Path, curve_only: bool = False) -> list[Path]:
    """Write ``results.json``, ``curve.csv`` and one ``confusion_<model>.csv`` per fitted model."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        written = [directory / "curve.csv"]
        write_curve_csv(bundle, written[0])
        if curve_only:
            return written

        results = directory / "results.json"
        results.write_text(json.dumps(bundle.to_dict(), indent=2) + "\n")
        written.append(results)
        for m in bundle.models:
            if m.confusion is None:
                continue
            path = directory / f"confusion_{m.name}.csv"
            with path.open("w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(bundle.class_names)
                writer.writerows(m.confusion.tolist())
            written.append(path)
    except OSError as exc:
        raise ConfigError(f"cannot write reports to {directory}: {exc}") from exc
    return written
