"""Command-line harness: data generation, training, sweeps, sparsification
and bound evaluation.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io, relaxlp, transport
from .datasets import gen_data, mnist_import
from .grid import GridTooLargeError, bounding_domain, build_grid, step_for_size
from .model import RELU, Dataset, ParamDomain, accuracy, active_count, l1_norm
from .parallel import worker_count
from .sgdtrain import TrainConfig, TrainingDiverged, train_with_log
from .simplex import SimplexStallError
from .sparsify import sparsify_with_trace

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2
DEFAULT_GRID_POINTS = 2000
DEFAULT_SWEEP_COUNT = 21


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _domain(args, train: Dataset) -> ParamDomain:
    if args.unit_ball:
        return ParamDomain.unit_ball(train.dim + 1)
    if args.domain_from:
        theta, _ = io.load_model(args.domain_from)
        if theta.dim != train.dim:
            raise UsageError(f"model dimension {theta.dim} does not match data dimension {train.dim}")
        return bounding_domain(theta, args.margin)
    raise UsageError("give --domain-from MODEL or --unit-ball")


def _grid(args, train: Dataset):
    domain = _domain(args, train)
    step = args.grid_step if args.grid_step else step_for_size(domain, args.grid_points)
    try:
        return build_grid(domain, step, train)
    except GridTooLargeError as exc:
        raise UsageError(str(exc)) from exc


def _plot(path, x, series: dict, xlabel: str, ylabel: str, logx: bool = False):
    """Line chart written as a standalone SVG file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in series.items():
        ax.plot(x, y, marker="o", ms=3, label=label)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg")
    plt.close(fig)


def accuracy_table(results, grid, test: Dataset, name: str) -> tuple:
    """(csv text, accuracies) with one row per sweep parameter."""
    rows = [f"{name},status,value,active,l1,accuracy"]
    accs = []
    for r in results:
        if r.ok:
            theta = relaxlp.extract_theta(r.solution, grid)
            acc = accuracy(theta, test)
            rows.append(f"{r.param!r},{r.status},{r.value!r},{theta.size},{l1_norm(theta)!r},{acc!r}")
        else:
            acc = float("nan")
            rows.append(f"{r.param!r},{r.status},nan,0,nan,nan")
        accs.append(acc)
    return "\n".join(rows) + "\n", np.array(accs)


def _c_xx(args, train: Dataset, test: Dataset) -> float:
    if args.c_xx is not None:
        return args.c_xx
    return transport.kr_distance(transport.feature_measure(train), transport.feature_measure(test), "auto")


# commands


def cmd_gen_data(args) -> int:
    split = gen_data(args.noise_std, args.n, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, X, y in (("train", split.train_x, split.train_y), ("test", split.test_x, split.test_y)):
        lines = [",".join([f"x{k + 1}" for k in range(X.shape[1])] + ["y"])]
        lines += [",".join(repr(float(v)) for v in (*row, lab)) for row, lab in zip(X, y)]
        _write(out / f"{name}.csv", "\n".join(lines) + "\n")
    print(f"wrote {len(split.train_y)} train / {len(split.test_y)} test points to {out}")
    return EXIT_OK


def cmd_mnist_import(args) -> int:
    keep = [int(v) for v in args.keep.split(",")]
    train, idx = mnist_import(args.images, args.labels, keep, args.count, args.seed)
    io.save_dataset(args.out, train)
    print(f"wrote {train.n} samples of dimension {train.dim} to {args.out}")
    if args.test_out:
        test, _ = mnist_import(args.images, args.labels, keep, args.test_count, args.seed + 1, exclude=idx)
        io.save_dataset(args.test_out, test)
        print(f"wrote {test.n} test samples to {args.test_out}")
    return EXIT_OK


def cmd_pretrain(args) -> int:
    train = io.load_dataset(args.train)
    cfg = TrainConfig(
        neuron_count=args.neurons, lam=args.lam, fidelity=args.fidelity, epochs=args.epochs,
        learning_rate=args.lr, batch_size=args.batch_size, seed=args.seed, adam=args.adam,
    )
    theta, log = train_with_log(train, cfg, log_every=args.log_every)
    io.save_model(args.out, theta)
    if args.log:
        _write(args.log, log.to_text())
    print(f"trained {theta.size} neurons, final objective {log.rows[-1][1]:.6g}, "
          f"train accuracy {accuracy(theta, train):.4f}")
    return EXIT_OK


def cmd_lp_train(args) -> int:
    if (args.eps is None) == (args.lam is None):
        raise UsageError("give exactly one of --eps and --lambda")
    train = io.load_dataset(args.train)
    grid = _grid(args, train)
    if args.eps is not None:
        res = relaxlp.solve_pd_eps(grid, train.labels, args.eps)
    else:
        res = relaxlp.solve_pd_reg(grid, train.labels, args.lam)
    if not res.ok:
        raise SimplexStallError(f"{res.kind} is {res.status} at parameter {res.param}")
    theta = relaxlp.extract_theta(res.solution, grid)
    io.save_model(args.out, theta)
    msg = f"M = {grid.m}, value {res.value:.10g}, {theta.size} active neurons"
    if args.test:
        msg += f", test accuracy {accuracy(theta, io.load_dataset(args.test)):.4f}"
    print(msg)
    return EXIT_OK


def _sweep(args, kind: str) -> int:
    train, test = io.load_dataset(args.train), io.load_dataset(args.test)
    grid = _grid(args, train)
    c_xx = _c_xx(args, train, test)
    out = Path(args.out)
    if kind == "eps":
        params = args.eps if args.eps else np.linspace(0.0, args.eps_max, args.count)
        results = relaxlp.sweep_eps(grid, train.labels, params, args.workers)
        curve = relaxlp.curve_U(grid, train.labels, params, c_xx, args.certificates, results)
        name, logx = "eps", False
    else:
        params = args.lam if args.lam else np.logspace(
            np.log10(args.lambda_min), np.log10(args.lambda_max), args.count)
        results = relaxlp.sweep_lambda(grid, train.labels, params, args.workers)
        curve = relaxlp.curve_L(grid, train.labels, params, c_xx, results)
        name, logx = "lambda", True
    table, accs = accuracy_table(results, grid, test, name)
    _write(out / "curve.csv", curve.to_csv())
    _write(out / "accuracy.csv", table)
    if args.plot:
        _plot(out / "curve.svg", curve.params, {curve.kind: curve.values}, name, "bound")
        _plot(out / "accuracy.svg", np.asarray(params), {"test accuracy": accs}, name, "accuracy", logx)
    best = int(np.nanargmax(accs)) if np.any(np.isfinite(accs)) else None
    print(f"M = {grid.m}, c_xx = {c_xx:.6g}, curve argmin {name} = {curve.argmin():.6g}")
    if best is not None:
        print(f"best test accuracy {accs[best]:.4f} at {name} = {float(params[best]):.6g}")
    if curve.infeasible:
        print(f"infeasible at {name} = {curve.infeasible}")
    return EXIT_OK


def cmd_sweep_eps(args) -> int:
    return _sweep(args, "eps")


def cmd_sweep_lambda(args) -> int:
    return _sweep(args, "lambda")


def cmd_sparsify(args) -> int:
    theta, act = io.load_model(args.model)
    train = io.load_dataset(args.train)
    out_theta, trace = sparsify_with_trace(theta, train.features, act)
    io.save_model(args.out, out_theta, act)
    if args.trace:
        lines = ["iteration,l1,active"]
        lines += [f"{k},{l1!r},{n}" for k, (l1, n) in enumerate(zip(trace.l1_history, trace.active_history))]
        _write(args.trace, "\n".join(lines) + "\n")
    msg = (f"{theta.size} -> {active_count(out_theta)} neurons in {trace.iterations} iterations, "
           f"l1 {l1_norm(theta):.6g} -> {l1_norm(out_theta):.6g}")
    if args.test:
        test = io.load_dataset(args.test)
        msg += f", test accuracy {accuracy(theta, test, act):.4f} -> {accuracy(out_theta, test, act):.4f}"
    print(msg)
    return EXIT_OK


def cmd_eval_bound(args) -> int:
    theta, act = io.load_model(args.model)
    train, test = io.load_dataset(args.train), io.load_dataset(args.test)
    rep = transport.generalization_report(theta, train, test, act, args.method)
    text = rep.to_text()
    if train.n == test.n:
        for p in (1.0, 2.0, np.inf):
            m = transport.mean_lp_report(theta, train, test, p, act)
            text += f"mean_l{p:g}\tlhs {m.lhs:.12g}\trhs {m.rhs:.12g}\tmargin {m.margin:.12g}\n"
    if args.out:
        _write(args.out, text)
    print(text, end="")
    return EXIT_OK


# parser


def _add_grid_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--domain-from", help="model whose parameters' bounding box is the domain")
    g.add_argument("--unit-ball", action="store_true", help="use the unit ball as the domain")
    p.add_argument("--margin", type=float, default=0.0, help="widening of the bounding box")
    s = p.add_mutually_exclusive_group()
    s.add_argument("--grid-step", type=float, help="lattice cell side")
    s.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS, help="target grid size M")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sparseshallow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-data", help="four-class Gaussian blobs, split half/half")
    p.add_argument("--noise-std", type=float, required=True)
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory (train.csv, test.csv)")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("mnist-import", help="seeded subset of MNIST IDX files")
    p.add_argument("--images", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--keep", default="0,1,2", help="comma-separated labels to keep")
    p.add_argument("--count", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--test-out", help="also write a disjoint test subset here")
    p.add_argument("--test-count", type=int, default=1000)
    p.set_defaults(func=cmd_mnist_import)

    p = sub.add_parser("pretrain", help="minibatch SGD on the primal regression problem")
    p.add_argument("--train", required=True)
    p.add_argument("--neurons", type=int, help="P (default 2N)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0, help="0 trains on fidelity only")
    p.add_argument("--fidelity", choices=("square", "abs"), default="square")
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--adam", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log", help="per-epoch training log (CSV)")
    p.add_argument("--log-every", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pretrain)

    p = sub.add_parser("lp-train", help="solve PD_eps or PD_reg on a grid")
    p.add_argument("--train", required=True)
    p.add_argument("--test")
    p.add_argument("--eps", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    _add_grid_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lp_train)

    for name, func in (("sweep-eps", cmd_sweep_eps), ("sweep-lambda", cmd_sweep_lambda)):
        p = sub.add_parser(name, help=f"{name[6:]} sweep with bound curve and accuracy table")
        p.add_argument("--train", required=True)
        p.add_argument("--test", required=True)
        _add_grid_flags(p)
        p.add_argument("--count", type=int, default=DEFAULT_SWEEP_COUNT)
        if name == "sweep-eps":
            p.add_argument("--eps", type=float, nargs="+", help="explicit eps values")
            p.add_argument("--eps-max", type=float, default=1.0)
            p.add_argument("--certificates", action="store_true", help="add c_eps/C_eps columns")
        else:
            p.add_argument("--lambda", dest="lam", type=float, nargs="+", help="explicit lambda values")
            p.add_argument("--lambda-min", type=float, default=1.0)
            p.add_argument("--lambda-max", type=float, default=1e5)
        p.add_argument("--c-xx", type=float, help="bound constant (default d_KR of the feature sets)")
        p.add_argument("--workers", type=int, help="parallel solves (capped by SPARSESHALLOW_THREADS)")
        p.add_argument("--plot", action="store_true", help="also write SVG charts")
        p.add_argument("--out", required=True, help="output directory")
        p.set_defaults(func=func)

    p = sub.add_parser("sparsify", help="reduce a model to at most N active neurons")
    p.add_argument("--model", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--test")
    p.add_argument("--trace", help="per-iteration l1 and active count (CSV)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("eval-bound", help="generalization bound report")
    p.add_argument("--model", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--method", choices=("auto", "lp", "matching"), default="auto")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval_bound)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (SimplexStallError, TrainingDiverged, RuntimeError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
