"""Command-line interface: ``tsallisop {compute,verify,gen}``.

Exit codes: 0 success (and, for ``verify``, every certified suite passed),
1 an inequality was violated beyond tolerance, 2 usage, parse or
precondition error.
"""

import argparse
import sys

import numpy as np

from . import __version__, io, operators, scalar
from .errors import ConvergenceError
from .generators import random_partition, random_prob_vector, random_spd
from .verify import EXPLORATORY, SUITE_NAMES, TrialConfig, run_all

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

MATRIX_FUNCTIONALS = ("tsallis-op", "roe", "groe", "gen-tsallis", "natural-power", "quantum-tsallis")
VECTOR_FUNCTIONALS = ("tsallis-scalar", "dq")


class UsageError(Exception):
    pass


def int_range(text):
    """``"3"`` or ``"1..8"`` -> ``(lo, hi)``."""
    lo, sep, hi = text.partition("..")
    try:
        bounds = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if bounds[0] > bounds[1]:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return bounds


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{args.functional} requires --{name.replace('_', '-')}")


def _compute(args):
    f = args.functional
    _require(args, "a", "b")
    if f in VECTOR_FUNCTIONALS:
        a, b = io.vector_arg(args.a), io.vector_arg(args.b)
        if f == "tsallis-scalar":
            _require(args, "lam")
            return scalar.tsallis_relative(a, b, args.lam)
        _require(args, "q")
        return scalar.dq_statistical(a, b, args.q)

    a, b = io.matrix_arg(args.a), io.matrix_arg(args.b)
    if f == "quantum-tsallis":
        _require(args, "q")
        return operators.quantum_tsallis(a, b, args.q)
    pair = operators.OperatorPair(a, b)
    if f == "roe":
        return pair.relative_entropy()
    if f == "groe":
        return pair.generalized_relative_entropy(0.0 if args.lam is None else args.lam)
    _require(args, "lam")
    if f == "natural-power":
        return pair.natural_power(args.lam)
    if f == "tsallis-op":
        return pair.tsallis(args.lam, relaxed=args.relaxed)
    _require(args, "mu", "k")
    return pair.generalized_tsallis(args.mu, args.k, args.lam)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args):
    result = _compute(args)
    if isinstance(result, np.ndarray):
        doc = io.matrix_to_doc(result)
        if args.functional == "tsallis-op" and args.relaxed and not 0 < args.lam <= 1:
            doc["relaxed_range"] = True
        _emit(io.dumps(doc), args.out)
    else:
        _emit(io.format_float(result) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args):
    cfg = TrialConfig(
        seed=args.seed,
        trials=args.trials,
        dims=args.dims,
        partition_sizes=args.partition_sizes,
        tol=args.tol,
        condition_cap=args.condition_cap,
    )
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    report = run_all(cfg, names, threads=args.threads)
    text = io.dumps(report.to_dict())
    if args.out:
        _emit(text, args.out)
        for s in report.suites:
            status = "PASS" if s.passed else ("INFO" if s.exploratory else "FAIL")
            print(
                f"{status} {s.name}: {s.passes}/{s.trials} trials, "
                f"worst violation {s.worst_violation:.3e} (seed {s.worst_instance_seed})"
            )
    else:
        _emit(text, None)
    return EXIT_OK if report.overall_pass else EXIT_VIOLATION


def cmd_gen(args):
    rng = np.random.default_rng(args.seed)
    if args.kind == "spd":
        doc = io.matrix_to_doc(random_spd(args.dim, args.condition_cap, rng))
    elif args.kind == "partition":
        blocks = random_partition(args.n, args.dim, rng, args.condition_cap)
        doc = {"n_blocks": len(blocks), "dim": args.dim, "blocks": [io.matrix_to_doc(m) for m in blocks]}
    else:
        doc = random_prob_vector(args.n, rng).tolist()
    _emit(io.dumps(doc), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="tsallisop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate one entropy functional")
    p.add_argument("functional", choices=MATRIX_FUNCTIONALS + VECTOR_FUNCTIONALS)
    p.add_argument("--a", help="matrix/vector: JSON file path or inline JSON")
    p.add_argument("--b", help="matrix/vector: JSON file path or inline JSON")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--relaxed", action="store_true", help="allow lambda outside (0, 1] for tsallis-op")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("verify", help="run verification suites and write a JSON report")
    p.add_argument("--suite", default="all", choices=SUITE_NAMES + ("all", EXPLORATORY))
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--dims", type=int_range, default=(1, 8), metavar="LO..HI")
    p.add_argument("--partition-sizes", type=int_range, default=(1, 5), metavar="LO..HI")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--condition-cap", type=float, default=1e4)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("gen", help="write seeded random instances")
    p.add_argument("kind", choices=("spd", "partition", "probvec"))
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--condition-cap", type=float, default=1e4)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (UsageError, ValueError, ConvergenceError, OSError, RuntimeError) as exc:
        print(f"tsallisop {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
