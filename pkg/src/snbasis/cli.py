"""Command-line front end.

Exit codes: 0 success, 1 verification rows failed, 2 usage or parse error,
3 tensor not invariant, 4 dissociated parameters, 5 extrapolation did not
converge.
"""

from __future__ import annotations

import argparse
import sys

from .errors import Dissociated, NonConvergent, NotInvariant, format_index
from .graphs import enumerate_graphs, parse_signature, signature_text
from .harmonic_model import ALL_SIGNATURES, ModelParams, derive_params, first_order_coefficients
from .invariants import decompose, nonzero_count
from .io import FormatError, parse_tensor, write_table, write_tables
from .oracle import Ladder
from .report import verify

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NOT_INVARIANT, EXIT_DISSOCIATED, EXIT_NONCONVERGENT = range(6)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="number of particles")
    p.add_argument("--omega-t", type=float, default=1.0, help="trap frequency")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--omega-p2", type=float, help="pair coupling omega_p^2")
    grp.add_argument("--lambda", dest="lam", type=float, help="omega_int / omega_t")


def _params(args) -> ModelParams:
    if args.lam is not None:
        if args.n < 2:
            raise ValueError("need at least two particles")
        return ModelParams.from_lambda(args.n, args.lam, args.omega_t)
    return derive_params(args.n, args.omega_t, args.omega_p2 or 0.0)


def cmd_graphs(args) -> int:
    sig = parse_signature(args.sig)
    lines = [f"{g.text()} {nonzero_count(g, args.n, sig)}" for g in enumerate_graphs(sig, args.n)]
    _emit("".join(ln + "\n" for ln in lines), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    with open(args.tensor_file, encoding="utf-8") as fh:
        tensor = parse_tensor(fh.read())
    try:
        table = decompose(tensor, args.tol)
    except NotInvariant as exc:
        print(f"not invariant: graph {exc.graph.text()} element {format_index(exc.index)} "
              f"deviates by {exc.deviation:.3e}", file=sys.stderr)
        return EXIT_NOT_INVARIANT
    _emit(write_table(table), args.out)
    return EXIT_OK


def cmd_coefficients(args) -> int:
    coeffs = first_order_coefficients(_params(args))
    sigs = [signature_text(parse_signature(args.sig))] if args.sig else list(ALL_SIGNATURES)
    _emit(write_tables(coeffs[s] for s in sigs), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _params(args)
    ladder = Ladder.parse(args.ladder) if args.ladder else None
    report = verify(p, args.tol, ladder, workers=args.threads)
    _emit(report.to_csv() if args.format == "csv" else report.to_table(), args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="snbasis", description="S_N binary-invariant tensors and the "
                     "first-order harmonic wave function")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("graphs", help="list the graph classes of a block signature")
    g.add_argument("--sig", required=True, help="slot kinds, e.g. ggr")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_graphs)

    d = sub.add_parser("decompose", help="resolve an SNTENSOR file on the binary invariants")
    d.add_argument("tensor_file")
    d.add_argument("--tol", type=float, default=1e-12)
    d.add_argument("--out")
    d.set_defaults(func=cmd_decompose)

    c = sub.add_parser("coefficients", aliases=["coeffs"], help="closed-form coefficient tables")
    _add_model_args(c)
    c.add_argument("--sig", help="single block (default: all)")
    c.add_argument("--out")
    c.set_defaults(func=cmd_coefficients)

    v = sub.add_parser("verify", help="closed form against the large-D oracle")
    _add_model_args(v)
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--ladder", help="D0,ratio,steps")
    v.add_argument("--format", choices=("csv", "table"), default="table")
    v.add_argument("--threads", type=int, help="worker threads (default SNBASIS_THREADS or 1)")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Dissociated as exc:
        print(f"snbasis: dissociated: {exc}", file=sys.stderr)
        return EXIT_DISSOCIATED
    except (FormatError, ValueError, OSError) as exc:
        print(f"snbasis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergent as exc:
        print(f"snbasis: not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT


if __name__ == "__main__":
    raise SystemExit(main())
