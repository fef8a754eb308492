from engine.errors import GammaError
from engine.invariants import DEFAULT_DEPTH, extension, fingerprint, rational_extension_eval
from schemas.invariant_schema import FingerprintSchema
from utils import EXIT_INVALID_INPUT, EXIT_OK, CommandError, emit_json, load_gamma


def register(subparsers):
    parser = subparsers.add_parser("invariants", help="Fingerprint table: d, q, omega_F, H*(0..N)")
    parser.add_argument("file", help="decorated gamma factor (DSL text or .json)")
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help=f"largest n for H*(n) (default: {DEFAULT_DEPTH})")
    parser.add_argument("--extension", help="also evaluate a rational extension: degree, conductor, root_number, imag_mu_sum or h:<n>")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.set_defaults(handler=invariants_command)


def invariants_command(args) -> int:
    g = load_gamma(args.file)
    try:
        fp = fingerprint(g, args.depth)
        value = rational_extension_eval(extension(args.extension), g, args.depth) if args.extension else None
    except GammaError as e:
        raise CommandError(EXIT_INVALID_INPUT, e.detail)

    if args.json:
        doc = FingerprintSchema.from_domain(fp)
        if args.extension:
            doc.extension, doc.extension_value = args.extension, str(value)
        emit_json(doc)
        return EXIT_OK

    print(f"d = {fp.degree}")
    print(f"q = {fp.conductor}")
    print(f"omega_F = {fp.root_number}")
    for n, h in enumerate(fp.h_values):
        print(f"H*({n}) = {h}")
    if args.extension:
        print(f"{args.extension} = {value}")
    return EXIT_OK
