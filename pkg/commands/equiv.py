from engine.errors import GammaError
from engine.invariants import DEFAULT_DEPTH, equivalent
from schemas.invariant_schema import VerdictSchema
from utils import EXIT_INVALID_INPUT, EXIT_OK, CommandError, emit_json, load_gamma


def register(subparsers):
    parser = subparsers.add_parser("equiv", help="Compare fingerprints: distinct | fingerprint-equal(N)")
    parser.add_argument("file_a")
    parser.add_argument("file_b")
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    parser.add_argument("--json", action="store_true")
    parser.set_defaults(handler=equiv_command)


def equiv_command(args) -> int:
    a, b = load_gamma(args.file_a), load_gamma(args.file_b)
    try:
        verdict = equivalent(a, b, args.depth)
    except GammaError as e:
        raise CommandError(EXIT_INVALID_INPUT, e.detail)
    if args.json:
        emit_json(VerdictSchema.from_domain(verdict))
    else:
        print(verdict)
    return EXIT_OK
