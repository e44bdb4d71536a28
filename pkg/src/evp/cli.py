"""Command-line entry point: ``evp {curve,simulate,compare,weights}``.

Data goes to ``--out`` (or stdout); diagnostics go to stderr.

Exit status: 0 on success, 1 for input/output or argument errors, 2 for
usage errors (argparse), 3 when the better pool cannot be determined.
"""

import argparse
import os
import sys
import tempfile

from . import __version__
from .combinatorics import KINDS, EstimatorKind
from .comparison import IndeterminateTruthError, comparison_report
from .curves import evp_curve
from .estimators import weight_vector
from .io import read_scores, write_curve, write_report
from .rng import RandomSource
from .simulation import TruncatedNormal, bias_variance_mse_report, build_bag_two_stage

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INDETERMINATE = 3


class CliError(Exception):
    pass


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def seed_int(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def budget_range(text):
    """``15..30``, ``15-30``, ``15:30`` (inclusive) or a comma list ``15,20,25``."""
    text = text.strip()
    if not text:
        return []
    for sep in ("..", ":", "-"):
        if sep in text:
            lo, hi = (positive_int(part) for part in text.split(sep, 1))
            return list(range(lo, hi + 1))
    return [positive_int(part) for part in text.split(",")]


def estimator_selector(text):
    text = text.strip().lower()
    if text == "all":
        return KINDS
    try:
        return (EstimatorKind.parse(text),)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_output(p):
    p.add_argument("--out", "-o", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_run_controls(p):
    p.add_argument("--seed", type=seed_int, default=0)
    p.add_argument("--threads", type=positive_int, default=1,
                   help="worker threads; results do not depend on this")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="evp",
        description="Expected maximum of n trials from B results, and Monte-Carlo studies of its estimators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="expected-max curve for n = 1..B over a score file")
    p.add_argument("--input", "-i", required=True, help="score file (one per line, or csv with a 'score' column)")
    p.add_argument("--estimator", "-e", type=estimator_selector, default=KINDS, help="u, v, w or all")
    _add_output(p)

    p = sub.add_parser("simulate", help="bias / variance / MSE study on a truncated-normal bag")
    p.add_argument("--mu", type=float, default=0.6)
    p.add_argument("--sigma", type=float, default=0.07)
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--source-count", type=positive_int, default=100_000)
    p.add_argument("--bag-size", type=positive_int, default=10_000)
    p.add_argument("--bag-replace", action="store_true",
                   help="draw the bag subsample with replacement")
    p.add_argument("--B", dest="budget", type=int, default=30)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--truth-reps", type=int, default=50_000)
    p.add_argument("--without-replacement", dest="replace", action="store_false",
                   help="draw each pool of B from the bag without replacement")
    _add_run_controls(p)
    _add_output(p)

    p = sub.add_parser("compare", help="incorrect-conclusion rates for two score pools")
    p.add_argument("--input-a", "-a", required=True)
    p.add_argument("--input-b", "-b", required=True)
    p.add_argument("--budgets", type=budget_range, default=list(range(15, 31)),
                   help="inclusive range like 15..30, or a comma list (default 15..30)")
    p.add_argument("--resamples", type=int, default=50_000)
    p.add_argument("--truth", type=str.upper, choices=("A", "B"),
                   help="declare the better pool instead of deriving it")
    p.add_argument("--with-replacement", dest="replace", action="store_true",
                   help="draw each budget-B subsample with replacement")
    _add_run_controls(p)
    _add_output(p)

    p = sub.add_parser("weights", help="probability mass on each order statistic")
    p.add_argument("--estimator", "-e", type=estimator_selector, required=True, help="u, v, w or all")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--B", dest="budget", type=int, required=True)
    _add_output(p)
    return parser


def _emit(data, out):
    """Write all bytes or nothing: files are written to a temp name then renamed."""
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".evp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(path, label="input"):
    try:
        return read_scores(path)
    except FileNotFoundError:
        raise CliError(f"{label} file not found: {path}") from None
    except OSError as exc:
        raise CliError(f"cannot read {label} file {path}: {exc.strerror}") from None


def cmd_curve(args):
    pool = _load(args.input)
    curves = [evp_curve(kind, pool) for kind in args.estimator]
    return write_curve(curves, args.format)


def cmd_simulate(args):
    if args.trials < 2:
        raise CliError(f"--trials must be >= 2 (variance is undefined for {args.trials} trial)")
    if args.truth_reps < 2:
        raise CliError("--truth-reps must be >= 2")
    if args.budget < 1:
        raise CliError("--B must be >= 1")
    rng = RandomSource(args.seed)
    params = TruncatedNormal(args.mu, args.sigma, args.lo, args.hi)
    bag = build_bag_two_stage(args.source_count, args.bag_size, params, rng.spawn(0),
                              replace=args.bag_replace)
    report = bias_variance_mse_report(bag, args.budget, args.trials, args.truth_reps,
                                      rng.spawn(1), replace=args.replace, threads=args.threads)
    return write_report(report, args.format)


def cmd_compare(args):
    if args.resamples < 1:
        raise CliError("--resamples must be >= 1")
    pool_a = _load(args.input_a, "input-a")
    pool_b = _load(args.input_b, "input-b")
    report = comparison_report(pool_a, pool_b, args.budgets, args.resamples,
                               RandomSource(args.seed), truth=args.truth,
                               replace=args.replace, threads=args.threads)
    return write_report(report, args.format)


def cmd_weights(args):
    lines = ["estimator,i,mass"]
    for kind in args.estimator:
        masses = weight_vector(kind, args.n, args.budget).masses
        lines.extend(f"{kind.letter},{i},{format(float(m), '.17g')}" for i, m in enumerate(masses, 1))
    return ("\n".join(lines) + "\n").encode("utf-8")


COMMANDS = {
    "curve": cmd_curve,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "weights": cmd_weights,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        data = COMMANDS[args.command](args)
        _emit(data, args.out)
    except IndeterminateTruthError as exc:
        print(f"evp {args.command}: indeterminate truth: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (CliError, ValueError, OSError) as exc:
        print(f"evp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
