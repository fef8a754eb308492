from engine.errors import OracleError
from engine.numeric_oracle import DEFAULT_TOLERANCE, SamplePlan, verify_move
from schemas.oracle_schema import VerifyReportSchema
from utils import EXIT_INVALID_INPUT, EXIT_OK, EXIT_VERIFICATION_FAILED, CommandError, emit_json, load_gamma


def register(subparsers):
    parser = subparsers.add_parser("verify", help="Numeric check that A(s) = c * B(s) with omega_B = omega_A * conj(c)/c")
    parser.add_argument("file_a", help="object before the move")
    parser.add_argument("file_b", help="object after the move")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help=f"relative tolerance (default: {DEFAULT_TOLERANCE:g})")
    parser.add_argument("--json", action="store_true")
    parser.set_defaults(handler=verify_command)


def verify_command(args) -> int:
    before, after = load_gamma(args.file_a), load_gamma(args.file_b)
    try:
        report = verify_move(before, after, SamplePlan(tolerance=args.tol))
    except OracleError as e:
        raise CommandError(EXIT_INVALID_INPUT, f"Failed to verify: {e.detail}")
    if args.json:
        emit_json(VerifyReportSchema.from_domain(report))
    else:
        print(f"c = {report.c.real:.12g}{report.c.imag:+.12g}i")
        print(f"max relative deviation = {report.max_rel_dev:.3e} over {report.points_used} points")
        print(f"omega consistent = {report.omega_consistent}")
    return EXIT_OK if report.ok else EXIT_VERIFICATION_FAILED
