"""Command-line interface.

Subcommands: train, predict, experiment, margins, stats, toygen.  Exit
codes: 0 success, 1 usage error, 2 data or computation error.  All output
is CSV or JSON files; error text goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .adaboost import AdaBoostParams, train_adaboost
from .core import MDBoostError, load_ensemble, save_ensemble
from .datasets import load_csv, make_toy_dataset, save_csv
from .experiments import (
    DEFAULT_D_GRID,
    ExperimentConfig,
    resolve_data_path,
    run_experiment,
    save_results,
)
from .margins import margin_report, write_margin_csv
from .stats import bonferroni_dunn, friedman, read_error_table, wilcoxon_signed_rank
from .training import TrainParams, predict_many, train


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="mdboost", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train a boosting model")
    p.add_argument("--data", required=True, help="training CSV (last column = label)")
    p.add_argument("--algo", required=True, choices=("mdboost", "adaboost"))
    p.add_argument("--d", type=float, help="weight budget D (mdboost only)")
    p.add_argument("--delta", type=float, default=1e-6)
    p.add_argument("--epsilon", type=float, default=1e-5)
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model JSON path")

    p = sub.add_parser("predict", help="predict labels with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="predictions CSV path")

    p = sub.add_parser("experiment", help="run a repeated-split experiment")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="results JSON path")

    p = sub.add_parser("margins", help="margin-distribution report for a model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="margins CSV path")

    p = sub.add_parser("stats", help="classifier-comparison tests on an error table")
    p.add_argument("--errors", required=True, help="error-table CSV")
    p.add_argument("--test", required=True,
                   choices=("wilcoxon", "friedman", "bonferroni-dunn"))
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--control", help="control algorithm for bonferroni-dunn "
                                     "(default: every algorithm in turn)")
    p.add_argument("--out", required=True, help="decisions JSON path")

    p = sub.add_parser("toygen", help="generate the 2-D two-moons toy dataset")
    p.add_argument("--n", type=int, default=800)
    p.add_argument("--noise", type=float, default=0.12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="dataset CSV path")

    return parser


def _cmd_train(args) -> int:
    dataset = load_csv(resolve_data_path(args.data))
    if args.algo == "mdboost":
        if args.d is None:
            raise MDBoostError("--d is required for mdboost")
        params = TrainParams(d=args.d, epsilon=args.epsilon, delta=args.delta,
                             n_max=args.max_iters, seed=args.seed)
        ensemble, trace = train(dataset, params)
        save_ensemble(args.out, ensemble, args.delta)
    else:
        ensemble, trace = train_adaboost(
            dataset, AdaBoostParams(t_max=args.max_iters, seed=args.seed))
        save_ensemble(args.out, ensemble, None)
    print(f"{args.algo}: {len(ensemble)} stumps, "
          f"coefficient sum {ensemble.weight_sum():.6g}, "
          f"terminated: {trace.termination}")
    return 0


def _cmd_predict(args) -> int:
    ensemble, _ = load_ensemble(args.model)
    dataset = load_csv(resolve_data_path(args.data))
    preds = predict_many(ensemble, dataset.features)
    with open(args.out, "w") as fh:
        fh.write("prediction\n")
        for p in preds:
            fh.write(f"{int(p)}\n")
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config) as fh:
        config = ExperimentConfig.from_dict(json.load(fh))
    table = run_experiment(config)
    save_results(args.out, table)
    return 0


def _cmd_margins(args) -> int:
    ensemble, _ = load_ensemble(args.model)
    dataset = load_csv(resolve_data_path(args.data))
    write_margin_csv(args.out, margin_report(ensemble, dataset))
    return 0


def _decision_doc(decision) -> dict:
    return {
        "statistic": decision.statistic,
        "critical_value": decision.critical_value,
        "better": decision.better,
        "degenerate": decision.degenerate,
    }


def _cmd_stats(args) -> int:
    table = read_error_table(args.errors)
    doc: dict = {"test": args.test, "alpha": args.alpha,
                 "algorithms": list(table.algorithms)}
    if args.test == "wilcoxon":
        results = []
        for a in table.algorithms:
            for b in table.algorithms:
                if a == b:
                    continue
                decision = wilcoxon_signed_rank(
                    table.column(a), table.column(b), alpha=args.alpha)
                results.append({"algorithm": a, "against": b,
                                **_decision_doc(decision)})
        doc["results"] = results
    elif args.test == "friedman":
        statistic, avg_ranks, reject = friedman(table, alpha=args.alpha)
        doc["results"] = {
            "statistic": statistic,
            "average_ranks": {name: float(r) for name, r
                              in zip(table.algorithms, avg_ranks)},
            "reject": reject,
        }
    else:
        _, avg_ranks, _ = friedman(table, alpha=args.alpha)
        controls = [args.control] if args.control else list(table.algorithms)
        results = []
        for control in controls:
            if control not in table.algorithms:
                raise MDBoostError(f"unknown control algorithm {control!r}")
            ci = table.algorithms.index(control)
            decisions = bonferroni_dunn(avg_ranks, len(table.datasets), ci,
                                        alpha=args.alpha)
            others = [name for name in table.algorithms if name != control]
            for name, decision in zip(others, decisions):
                results.append({"control": control, "against": name,
                                **_decision_doc(decision)})
        doc["results"] = results
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return 0


def _cmd_toygen(args) -> int:
    save_csv(args.out, make_toy_dataset(args.n, noise=args.noise, seed=args.seed))
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "predict": _cmd_predict,
    "experiment": _cmd_experiment,
    "margins": _cmd_margins,
    "stats": _cmd_stats,
    "toygen": _cmd_toygen,
}


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _COMMANDS[args.command](args)
    except MDBoostError as exc:
        print(f"mdboost {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"mdboost {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
