from engine.dsl import print_gamma, print_script
from engine.gamma_algebra import reduce
from schemas.gamma_schema import DecoratedGammaSchema, ReduceSchema
from utils import EXIT_OK, emit_json, load_gamma


def register(subparsers):
    parser = subparsers.add_parser("reduce", help="Expand until 0 <= Re(mu_j) < 1; print the result and its trace")
    parser.add_argument("file")
    parser.add_argument("--json", action="store_true")
    parser.set_defaults(handler=reduce_command)


def reduce_command(args) -> int:
    g, trace = reduce(load_gamma(args.file))
    if args.json:
        emit_json(ReduceSchema(result=DecoratedGammaSchema.from_domain(g), result_text=print_gamma(g), trace=print_script(trace)))
        return EXIT_OK
    print(print_gamma(g), end="")
    print(f"trace: {print_script(trace)}")
    return EXIT_OK
