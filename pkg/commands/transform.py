from engine.dsl import parse_script, print_gamma
from engine.errors import GammaError, MoveError
from engine.gamma_algebra import apply_move
from engine.invariants import DEFAULT_DEPTH, fingerprint
from schemas.gamma_schema import DecoratedGammaSchema, TransformSchema
from utils import (
    EXIT_INVALID_INPUT,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    CommandError,
    describe_delta,
    emit_json,
    fingerprint_delta,
    load_gamma,
)


def register(subparsers):
    parser = subparsers.add_parser("transform", help="Apply a move script and show per-step fingerprint deltas")
    parser.add_argument("file")
    parser.add_argument("--script", required=True, help='e.g. "split(0,2), merge(0..1,2), expand(0)"')
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    parser.add_argument("--json", action="store_true")
    parser.set_defaults(handler=transform_command)


def transform_command(args) -> int:
    g = load_gamma(args.file)
    try:
        trace = parse_script(args.script)
        before = fingerprint(g, args.depth)
    except GammaError as e:
        raise CommandError(EXIT_INVALID_INPUT, f"--script: {e.detail}")

    steps, lines = [], []
    for position, move in enumerate(trace):
        try:
            g = apply_move(g, move)
        except MoveError as e:
            raise CommandError(EXIT_INVALID_INPUT, f"move #{position} {move}: {e.detail}")
        after = fingerprint(g, args.depth)
        steps.append(fingerprint_delta(position + 1, str(move), before, after))
        lines.append(f"step {position + 1} {move}: {describe_delta(before, after)}")
        before = after

    stable = all(step.all_zero for step in steps)
    if args.json:
        emit_json(TransformSchema(steps=steps, result=DecoratedGammaSchema.from_domain(g), result_text=print_gamma(g)))
    else:
        for line in lines:
            print(line)
        print(print_gamma(g), end="")
    return EXIT_OK if stable else EXIT_VERIFICATION_FAILED
