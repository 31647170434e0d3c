"""Command line entry point.

    boostlab run --config experiment.json
    boostlab compare --data rice.csv --label-col Class --models standard,dwa --out out/
    boostlab curve --data rice.csv --label-col Class --models standard,dwa --out out/

Exit codes: 0 success, 1 config error, 2 data error, 3 training error
(including a partially failed experiment).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .dataset import PreprocessConfig, SplitSpec
from .errors import BoostlabError, ConfigError, DataError, TrainingError
from .harness import (
    DatasetConfig,
    ExperimentConfig,
    ReportBundle,
    model_config_from_dict,
    emit_reports,
    load_experiment_config,
    run_experiment,
)

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_TRAINING = 0, 1, 2, 3


def _label_column(value: str) -> str | int:
    try:
        return int(value)
    except ValueError:
        return value


def _cap(value: str) -> float | str:
    return value if value == "auto" else float(value)


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, type=Path, help="CSV file with a header row")
    p.add_argument("--label-col", required=True, type=_label_column, help="label column name or 0-based index")
    p.add_argument("--models", default="standard,dwa", help="comma-separated: standard, dwa, gradboost")
    p.add_argument("--estimators", type=int, default=50, help="boosting rounds (or gradient stages)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--test-fraction", type=float, default=0.3)
    p.add_argument("--stratified", action="store_true")
    p.add_argument("--base", choices=("gnb", "stump"), default="gnb")
    p.add_argument("--soft-margin-cap", type=_cap, default=None, help="weight cap in (0, 1] or 'auto' (10/N)")
    p.add_argument("--init-weights", choices=("uniform", "class_balanced"), default="uniform")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--jobs", type=int, default=1, help="models fitted concurrently")
    p.add_argument("--out", required=True, type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boostlab", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a JSON config")
    run.add_argument("--config", required=True, type=Path)

    compare = sub.add_parser("compare", help="fit models on one split and write all reports")
    _add_experiment_flags(compare)
    curve = sub.add_parser("curve", help="like compare, but only write curve.csv")
    _add_experiment_flags(curve)
    return parser


def _config_from_flags(args: argparse.Namespace) -> ExperimentConfig:
    names = [n.strip() for n in args.models.split(",") if n.strip()]
    models = []
    for name in names:
        if name in ("gradboost", "gb"):
            models.append(model_config_from_dict({"name": name, "kind": "gradboost", "n_stages": args.estimators}))
        elif name in ("standard", "adaboost", "dwa"):
            models.append(
                model_config_from_dict(
                    {
                        "name": name,
                        "kind": "adaboost",
                        "n_rounds": args.estimators,
                        "base": {"kind": args.base},
                        "soft_margin_cap": args.soft_margin_cap,
                        "init_weights": args.init_weights,
                    }
                )
            )
        else:
            raise ConfigError(f"unknown model {name!r}; expected standard, dwa or gradboost")
    return ExperimentConfig(
        DatasetConfig(args.data, PreprocessConfig(label_column=args.label_col, delimiter=args.delimiter)),
        SplitSpec(args.test_fraction, args.seed, args.stratified),
        tuple(models),
        args.out,
        args.jobs,
    )


def _summarize(bundle: ReportBundle) -> None:
    print(f"{'model':<12} {'test acc':>9} {'train acc':>9} {'rounds':>6}")
    for m in bundle.models:
        if m.ok:
            print(f"{m.name:<12} {m.test_accuracy:>9.4f} {m.train_accuracy:>9.4f} {m.accepted_rounds:>6}")
        else:
            print(f"{m.name:<12} FAILED: {m.error}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "run":
            bundle = run_experiment(load_experiment_config(args.config))
        else:
            try:
                config = _config_from_flags(args)
            except BoostlabError as exc:
                raise ConfigError(str(exc)) from exc
            bundle = run_experiment(config, write=False)
            emit_reports(bundle, config.output_dir, curve_only=args.command == "curve")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TrainingError as exc:
        print(f"training error: {exc}", file=sys.stderr)
        return EXIT_TRAINING

    _summarize(bundle)
    return EXIT_TRAINING if bundle.partial else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
