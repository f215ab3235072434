import argparse
import sys
from typing import List, Optional

from core import Command
from core.pipeline import run_from_file


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracrearrange",
        description=(
            "Principal eigenvalues and Dirichlet energies of nonlocal p-Laplacian "
            "problems, optimized over rearrangement classes of a weight."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    help_text = {
        Command.EIGEN_SOLVE: "principal eigenpair for the configured weight",
        Command.EIG_MIN: "minimize the principal eigenvalue over the rearrangement class",
        Command.DIRICHLET_SOLVE: "solve the nonlinear Dirichlet problem for the configured datum",
        Command.ENERGY_MAX: "maximize the Dirichlet energy over the rearrangement class",
        Command.VALIDATE: "run the built-in oracle and property checks",
    }
    for command, text in help_text.items():
        sub = subparsers.add_parser(command.value, help=text)
        sub.add_argument("--config", help="run configuration (JSON or YAML)")
        sub.add_argument("--out", help="output directory (overrides output.output_dir)")
        sub.add_argument("--seed", type=int, help="seed for restarts and random starts")
        sub.add_argument(
            "--validate",
            action="store_true",
            help="cross-check against dense or brute-force oracles where feasible",
        )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and args.seed < 0:
        print("--seed must be a nonnegative integer", file=sys.stderr)
        return 2
    return run_from_file(
        args.config,
        command=args.command,
        output_dir=args.out,
        seed=args.seed,
        validate=args.validate,
    )


if __name__ == "__main__":
    sys.exit(main())
