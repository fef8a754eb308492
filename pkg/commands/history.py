from typing import List

from sqlmodel import SQLModel

from database import get_session
from models import FuzzRunModel
from schemas.gamma_schema import SCHEMA_VERSION
from utils import EXIT_INVALID_INPUT, EXIT_OK, CommandError, emit_json, recent_runs


class FuzzRunListSchema(SQLModel):
    schema_version: int = SCHEMA_VERSION
    runs: List[FuzzRunModel] = []


def register(subparsers):
    parser = subparsers.add_parser("history", help="List fuzz runs stored with `fuzz --record`, newest first")
    parser.add_argument("--limit", type=int, default=20)
    parser.add_argument("--db-url", dest="db_url")
    parser.add_argument("--json", action="store_true")
    parser.set_defaults(handler=history_command)


def history_command(args) -> int:
    try:
        db = next(get_session(args.db_url))
        try:
            runs = recent_runs(db, args.limit)
        finally:
            db.close()
    except Exception as e:
        raise CommandError(EXIT_INVALID_INPUT, f"Failed to read fuzz history: {str(e)}")

    if args.json:
        emit_json(FuzzRunListSchema(runs=runs))
        return EXIT_OK
    if not runs:
        print("no recorded runs")
    for run in runs:
        status = "ok" if run.ok else f"{run.failure_count} failures"
        print(f"#{run.id} {run.created_at:%Y-%m-%d %H:%M} seed={run.seed} cases={run.cases_run} moves={run.moves_checked} {status}")
    return EXIT_OK
