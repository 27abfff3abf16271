"""Command-line interface.

Exit codes: 0 success, 1 malformed input or bad configuration, 2 numerical
failure.
"""

import argparse
import json
import sys

import numpy as np

from . import bench
from ._io import dumps
from .errors import NumericalError, ValidationError
from .gaussian import LogitGaussian, validate
from .metrics import accuracy, auroc, correctness_log_prob, ece, log_prob_score
from .moments import pushforward_moments
from .predictives import (
    closed_form_predictive,
    laplace_bridge_predictive,
    mc_predictive,
    mean_field_softmax_predictive,
    shekhovtsov_flach_predictive,
)
from .second_order import (
    dirichlet_expected_entropy,
    dirichlet_mean,
    dirichlet_mutual_information,
    match_dirichlet,
    predictive_entropy,
)

PREDICT_CHOICES = (
    "exp",
    "normcdf",
    "sigmoid",
    "softmax-mf",
    "laplace-bridge",
    "shekhovtsov",
    "mc",
)


class InputError(ValidationError):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def load_gaussian_batch(path):
    """Parse a Gaussian batch file into a list of validated LogitGaussians."""
    doc = _read_json(path)
    if not isinstance(doc, dict) or "items" not in doc or "C" not in doc:
        raise InputError("batch file needs top-level 'C' and 'items'")
    C = doc["C"]
    if not isinstance(C, int) or isinstance(C, bool):
        raise InputError("'C' must be an integer")
    items = doc["items"]
    if not isinstance(items, list):
        raise InputError("'items' must be a list")
    out = []
    for i, item in enumerate(items):
        try:
            if not isinstance(item, dict):
                raise InputError("item is not an object")
            for key in ("mean", "var"):
                if key not in item:
                    raise InputError(f"missing field '{key}'")
                if len(item[key]) != C:
                    raise InputError(f"field '{key}' has {len(item[key])} entries, expected {C}")
            cov = item.get("cov")
            g = LogitGaussian(
                np.asarray(item["mean"], dtype=np.float64),
                np.asarray(item["var"], dtype=np.float64),
                None if cov is None else np.asarray(cov, dtype=np.float64),
            )
            validate(g)
        except (ValidationError, TypeError, ValueError) as exc:
            raise InputError(f"item {i}: {exc}") from None
        out.append(g)
    return out


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _predict_one(g, args):
    a = args.activation
    if a in ("exp", "normcdf", "sigmoid"):
        return closed_form_predictive(g, a)
    if a == "softmax-mf":
        return mean_field_softmax_predictive(g)
    if a == "laplace-bridge":
        return laplace_bridge_predictive(g).predictive
    if a == "shekhovtsov":
        return shekhovtsov_flach_predictive(g)
    return mc_predictive(g, args.mc_activation, samples=args.samples, seed=args.seed)


def cmd_predict(args):
    batch = load_gaussian_batch(args.input)
    rows = []
    for i, g in enumerate(batch):
        try:
            rows.append(np.asarray(_predict_one(g, args)))
        except NumericalError as exc:
            raise type(exc)(f"item {i}: {exc}") from None
    _write(args.out, dumps(rows) + "\n")
    return 0


def cmd_dirichlet(args):
    batch = load_gaussian_batch(args.input)
    out = []
    for i, g in enumerate(batch):
        try:
            d = match_dirichlet(pushforward_moments(g, args.activation))
        except NumericalError as exc:
            raise type(exc)(f"item {i}: {exc}") from None
        mean = dirichlet_mean(d)
        out.append(
            {
                "gamma": d.gamma,
                "mean": mean.probs,
                "expected_entropy": dirichlet_expected_entropy(d),
                "mutual_information": dirichlet_mutual_information(d),
                "predictive_entropy": predictive_entropy(mean),
            }
        )
    _write(args.out, dumps(out) + "\n")
    return 0


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_pair(text):
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}")
    return lo, hi


def _synthetic_config(args, class_counts):
    ranges = bench.default_ranges()
    if args.sigma_range is not None:
        lo, hi = args.sigma_range
        ranges = {
            k: bench.ActivationRange(r.mu_lo, r.mu_hi, lo, hi) for k, r in ranges.items()
        }
    return bench.SyntheticConfig(
        class_counts=class_counts,
        datasets_per_c=args.datasets,
        truth_samples=args.truth_samples,
        budget=args.budget,
        master_seed=args.seed,
        ranges=ranges,
        sigma_mode=args.sigma_mode,
        kl_direction=args.kl_direction,
        high_truth=args.high_truth,
        threads=args.threads,
    )


def _print_table(rows, header):
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) for i, h in enumerate(header)]
    print("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(str(v).ljust(w) for v, w in zip(r, widths)))


def cmd_bench(args):
    if args.kind == "fig1":
        cfg = _synthetic_config(args, args.classes or bench.DEFAULT_CLASSES)
        report = bench.run_fig1(cfg)
        bench.write_outputs(args.out_dir, "fig1", report.to_csv(), report.sidecar())
        _print_table(
            [(r.method, r.C, f"{r.mean_kl:.3e}", f"{r.std_kl:.3e}", r.n_excluded) for r in report.rows],
            ("method", "C", "mean_kl", "std_kl", "n_excluded"),
        )
    elif args.kind == "mc-scaling":
        cfg = _synthetic_config(args, args.classes or (10, 100, 1000))
        report = bench.run_mc_scaling(cfg)
        bench.write_outputs(args.out_dir, "mc_scaling", report.to_csv(), report.sidecar())
        rows = [(f, C, f"{v:.3e}") for f, t in report.mean_kl.items() for C, v in t.items()]
        _print_table(rows, ("activation", "C", "mean_kl"))
        for f, s in report.slopes.items():
            print(f"slope[{f}] = {'undefined (degenerate)' if s is None else f'{s:.3f}'}")
    else:
        classes = args.classes or (10,)
        if len(classes) != 1:
            raise ValidationError("theorem check takes a single class count")
        rep = bench.run_theorem_check(
            args.mu_range,
            args.var_range,
            classes[0],
            trials=args.trials,
            seed=args.seed,
            grid_samples=args.grid_samples,
            truth_samples=args.truth_samples,
        )
        bench.write_outputs(args.out_dir, "theorem", rep.to_csv(), rep.summary())
        for k, v in rep.summary().items():
            print(f"{k}: {v}")
    return 0


def _load_predictions(path):
    doc = _read_json(path)
    if not isinstance(doc, dict) or "probs" not in doc or "labels" not in doc:
        raise InputError("predictions file needs 'probs' and 'labels'")
    try:
        probs = np.asarray(doc["probs"], dtype=np.float64)
        labels = np.asarray(doc["labels"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"predictions file: {exc}") from None
    if probs.ndim != 2:
        raise InputError("'probs' must be a list of equal-length rows")
    return doc, probs, labels


def _uncertainty(probs):
    with np.errstate(divide="ignore", invalid="ignore"):
        return -np.sum(np.where(probs > 0, probs * np.log(probs), 0.0), axis=1)


def cmd_eval(args):
    doc, probs, labels = _load_predictions(args.input)
    results = {}
    for name in args.metrics:
        if name == "nll":
            results[name] = -log_prob_score(probs, labels)
        elif name == "acc":
            results[name] = accuracy(probs, labels)
        elif name == "ece":
            results[name] = ece(probs, labels, bins=args.bins)
        elif name == "binary-logprob":
            results[name] = correctness_log_prob(probs, labels)
        elif name == "auroc":
            if "ood" not in doc:
                raise InputError("auroc needs an 'ood' list of binary labels")
            scores = np.asarray(doc["scores"], dtype=np.float64) if "scores" in doc else _uncertainty(probs)
            results[name] = auroc(scores, np.asarray(doc["ood"]))
    for name, value in results.items():
        print(f"{name}: {value:.17g}")
    return 0


def _metric_list(text):
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    allowed = {"nll", "ece", "auroc", "acc", "binary-logprob"}
    bad = [n for n in names if n not in allowed]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown metrics {bad}")
    return names


def build_parser():
    p = argparse.ArgumentParser(prog="logitsimplex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("predict", help="predictive probability vectors")
    pr.add_argument("input")
    pr.add_argument("--activation", choices=PREDICT_CHOICES, default="normcdf")
    pr.add_argument(
        "--mc-activation",
        choices=("exp", "normcdf", "sigmoid", "softmax"),
        default="softmax",
        help="activation sampled by --activation mc",
    )
    pr.add_argument("--samples", type=int, default=1000)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--out", default="-")
    pr.set_defaults(func=cmd_predict)

    di = sub.add_parser("dirichlet", help="moment-matched Dirichlet parameters and estimators")
    di.add_argument("input")
    di.add_argument("--activation", choices=("exp", "normcdf", "sigmoid"), default="normcdf")
    di.add_argument("--out", default="-")
    di.set_defaults(func=cmd_dirichlet)

    be = sub.add_parser("bench", help="synthetic benchmarks")
    be.add_argument("kind", choices=("fig1", "mc-scaling", "theorem"))
    be.add_argument("--classes", type=_int_list, default=None)
    be.add_argument("--datasets", type=int, default=100)
    be.add_argument("--truth-samples", type=int, default=None)
    be.add_argument("--budget", type=int, default=10_000)
    be.add_argument("--high-truth", action="store_true")
    be.add_argument("--sigma-mode", choices=("sigma", "variance"), default="sigma")
    be.add_argument("--sigma-range", type=_float_pair, default=None, help="override every sigma range")
    be.add_argument("--kl-direction", choices=("true-approx", "approx-true"), default="true-approx")
    be.add_argument("--mu-range", type=_float_pair, default=(-1.0, 1.0))
    be.add_argument("--var-range", type=_float_pair, default=(0.0, 1.0))
    be.add_argument("--trials", type=int, default=100)
    be.add_argument("--grid-samples", type=int, default=100_000)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--out-dir", default="bench_out")
    be.add_argument("--threads", type=int, default=None, help="worker threads; SIMPLEX_THREADS overrides")
    be.set_defaults(func=cmd_bench)

    ev = sub.add_parser("eval", help="metrics for labelled predictions")
    ev.add_argument("input")
    ev.add_argument("--metrics", type=_metric_list, default=("nll", "ece", "acc"))
    ev.add_argument("--bins", type=int, default=15)
    ev.set_defaults(func=cmd_eval)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    if getattr(args, "command", None) == "bench" and args.truth_samples is None:
        args.truth_samples = 100_000 if args.kind == "theorem" else 10_000
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
