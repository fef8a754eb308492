import logging

from pydantic import ValidationError

from database import get_session
from engine.fuzz_harness import run_suite
from schemas.fuzz_schema import DEFAULT_SEED, FuzzConfig, FuzzSummarySchema
from utils import EXIT_INVALID_INPUT, EXIT_OK, EXIT_VERIFICATION_FAILED, CommandError, emit_json, record_run

_logger = logging.getLogger(__name__)


def register(subparsers):
    defaults = FuzzConfig()
    parser = subparsers.add_parser("fuzz", help="Seeded invariance suite over random data and traces")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="overrides GAMMA_INVARIANTS_SEED")
    parser.add_argument("--cases", type=int, default=defaults.cases)
    parser.add_argument("--max-r", type=int, default=defaults.max_r, dest="max_r")
    parser.add_argument("--max-trace", type=int, default=defaults.max_trace, dest="max_trace")
    parser.add_argument("--max-m", type=int, default=defaults.max_m, dest="max_m")
    parser.add_argument("--max-numerator", type=int, default=defaults.max_numerator, dest="max_numerator")
    parser.add_argument("--max-denominator", type=int, default=defaults.max_denominator, dest="max_denominator")
    parser.add_argument("--depth", type=int, default=defaults.depth)
    parser.add_argument("--tol", type=float, default=defaults.tolerance, dest="tolerance")
    parser.add_argument("--no-numeric", action="store_true", help="skip the floating-point oracle")
    parser.add_argument("--workers", type=int, default=1, help="worker processes for independent cases")
    parser.add_argument("--record", action="store_true", help="store the run and its reproducers in the ledger database")
    parser.add_argument("--db-url", dest="db_url", help="ledger database URL (default: GAMMA_INVARIANTS_DB_URL)")
    parser.add_argument("--json", action="store_true")
    parser.set_defaults(handler=fuzz_command)


def fuzz_command(args) -> int:
    try:
        cfg = FuzzConfig(
            seed=args.seed,
            cases=args.cases,
            max_r=args.max_r,
            max_trace=args.max_trace,
            max_m=args.max_m,
            max_numerator=args.max_numerator,
            max_denominator=args.max_denominator,
            depth=args.depth,
            tolerance=args.tolerance,
            numeric=not args.no_numeric,
        )
    except ValidationError as e:
        raise CommandError(EXIT_INVALID_INPUT, f"invalid fuzz configuration: {e}")

    summary = FuzzSummarySchema.from_domain(run_suite(cfg, workers=max(1, args.workers)))

    if args.record:
        try:
            db = next(get_session(args.db_url))
            try:
                run = record_run(db, summary)
                _logger.info("recorded fuzz run %s", run.id)
            finally:
                db.close()
        except Exception as e:
            raise CommandError(EXIT_INVALID_INPUT, f"Failed to record fuzz run: {str(e)}")

    if args.json:
        emit_json(summary)
    else:
        families = ", ".join(f"{name}: {count}" for name, count in summary.moves_by_family.items()) or "none"
        print(f"seed {cfg.seed}: {summary.cases_run} cases, {summary.moves_checked} moves ({families})")
        print(f"numeric checks: {summary.numeric_checks} run, {summary.numeric_skipped} skipped")
        print(f"failures: {len(summary.failures)}")
        for f in summary.failures:
            print(f"- case {f.case}, move #{f.position} {f.move} [{f.family}/{f.kind}]: {f.detail}")
            print(f"  reproducer trace: {f.trace}")
            for line in f.gamma.splitlines():
                print(f"  {line}")
    return EXIT_OK if summary.ok else EXIT_VERIFICATION_FAILED
