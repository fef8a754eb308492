import argparse
import logging
import os
import sys

from dotenv import load_dotenv

from commands import equiv, fuzz, history, invariants, reduce, transform, verify
from engine.errors import GammaError
from utils import EXIT_INVALID_INPUT, CommandError

load_dotenv()

LOG_LEVEL = os.getenv("GAMMA_INVARIANTS_LOG_LEVEL", "WARNING").upper()


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input (1); 2 is kept for failed verification
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gamma-invariants",
        description="Exact gamma-factor algebra: moves, invariants, H*, numeric verification and fuzzing.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (-v info, -vv debug)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in (invariants, transform, reduce, equiv, verify, fuzz, history):
        command.register(subparsers)
    return parser


def configure_logging(verbose: int) -> None:
    level = {0: LOG_LEVEL, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except CommandError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except GammaError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(run())
