"""Command line front end.

Exit status: 0 when the run succeeds with a positive verdict, 1 for a valid
run with a negative verdict (certification failed, derivation is not a
solution, imperfect retrodiction), 2 for bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fixtures
from .construct import (
    error_basis_from_onb,
    index_family_from_squares,
    measurements_from_family,
    named_basis,
    named_square,
)
from .isomap import iso_forward
from .linalg import Tolerance, ValidationError
from .report import dumps, render_report, setup_from_json, setup_to_json, setup_table, vector
from .simulator import GameConfig, run_experiment
from .solutions import certify, derive_from_pvm, make_setup

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message, "arguments")


def _common(p: argparse.ArgumentParser, source: bool = True):
    if source:
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--input", metavar="FILE", help="setup JSON file")
        g.add_argument("--example", metavar="NAME", help=f"builtin: {', '.join(fixtures.NAMES)}")
    p.add_argument("--tol", type=float, default=1e-9, help="absolute tolerance (default 1e-9)")
    p.add_argument("--zero-eps", type=float, default=1e-9,
                   help="threshold for treating a coefficient as zero (default 1e-9)")
    p.add_argument("--format", choices=("json", "table"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meanking", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="certify a setup (conditions c1-c3)")
    _common(p)

    p = sub.add_parser("derive", help="error operators and index sets from a rank-1 PVM")
    _common(p)

    p = sub.add_parser("build", help="construct a solvable setup from a basis and Latin squares")
    _common(p, source=False)
    p.add_argument("--basis", default="computational", help="computational or fourier")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--squares", default="", help="comma list of cyclic, anticyclic")
    p.add_argument("--with-j0", action="store_true", help="include the row family")

    p = sub.add_parser("simulate", help="play the game and collect statistics")
    _common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=10000)
    p.add_argument("--prior", default="uniform", help="uniform or a comma list of weights")
    p.add_argument("--code-state", type=int, default=None,
                   help="use the k-th code basis vector (0-based) as initial state")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("example", help="dump a builtin setup")
    p.add_argument("name", nargs="?", help=f"one of {', '.join(fixtures.NAMES)}")
    p.add_argument("--example", metavar="NAME", help="same as the positional name")
    _common(p, source=False)
    return parser


def _load(args, tol: Tolerance):
    if args.example:
        return fixtures.builtin_example(args.example), None
    try:
        with open(args.input) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {args.input}: {exc.strerror}", "input") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {args.input}: {exc}", "input") from None
    return setup_from_json(data, tol), data


def _verify(args, tol, out):
    setup, _ = _load(args, tol)
    cert = certify(setup, tol)
    out.write(render_report(cert, args.format, setup.name, setup.pair_d))
    return EXIT_OK if cert.passed else EXIT_NEGATIVE


def _derive(args, tol, out):
    setup, data = _load(args, tol)
    s = setup.schmidt
    if data is not None and data.get("pvm_vectors") is not None:
        pvm = [vector(v, "pvm_vectors") for v in data["pvm_vectors"]]
    else:
        # Alice's basis is taken as the normalized images of the setup's error operators.
        pvm = []
        for L in setup.error_ops:
            v = iso_forward(L, s)
            n = np.linalg.norm(v)
            if n <= tol.zero_eps:
                raise ValidationError("error_ops: an operator maps to the zero vector",
                                      "error_ops")
            pvm.append(v / n)
    der = derive_from_pvm(s, pvm, setup.measurements, tol)
    out.write(render_report(der, args.format, setup.name, setup.pair_d))
    return EXIT_OK if der.is_solution else EXIT_NEGATIVE


def _build(args, tol, out):
    if args.d < 1:
        raise ValidationError("--d must be positive", "d")
    names = [n for n in args.squares.split(",") if n]
    squares = [named_square(n, args.d) for n in names]
    family = index_family_from_squares(squares, args.with_j0, d=args.d)
    if not family:
        raise ValidationError("no measurements requested: give --squares or --with-j0",
                              "squares")
    basis = named_basis(args.basis, args.d)
    Ls = error_basis_from_onb(basis, tol)
    setup = make_setup(measurements_from_family(Ls, family), Ls, family,
                       name=f"{args.basis}-d{args.d}", pair_d=args.d, tol=tol)
    cert = certify(setup, tol)
    if args.format == "json":
        out.write(dumps({"setup": setup_to_json(setup), "passed": cert.passed}))
    else:
        out.write(setup_table(setup) + f"\ncertified: {cert.passed}\n")
    return EXIT_OK if cert.passed else EXIT_NEGATIVE


def _prior(text: str):
    if text == "uniform":
        return None
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"--prior: expected 'uniform' or numbers, got {text!r}",
                              "prior") from None


def _simulate(args, tol, out):
    setup, _ = _load(args, tol)
    if args.rounds < 1:
        raise ValidationError("--rounds must be at least 1", "rounds")
    state = None
    if args.code_state is not None:
        if not 0 <= args.code_state < setup.code.n:
            raise ValidationError(f"--code-state must lie in 0..{setup.code.n - 1}",
                                  "code_state")
        state = setup.code.basis[args.code_state]
    config = GameConfig(setup, state, _prior(args.prior), args.seed, args.rounds, tol)
    stats = run_experiment(config, workers=max(1, args.workers))
    out.write(render_report(stats, args.format, setup.name))
    return EXIT_OK if stats.success_rate == 1.0 else EXIT_NEGATIVE


def _example(args, tol, out):
    name = args.name or args.example
    if not name:
        raise ValidationError("example: give a name", "example")
    setup = fixtures.builtin_example(name)
    out.write(render_report(setup, args.format))
    return EXIT_OK


_COMMANDS = {"verify": _verify, "derive": _derive, "build": _build,
             "simulate": _simulate, "example": _example}


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        tol = Tolerance(args.tol, args.zero_eps)
        return _COMMANDS[args.command](args, tol, out)
    except ValidationError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        err.write(f"error{where}: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
