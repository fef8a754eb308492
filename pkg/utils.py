import json
from pathlib import Path
from typing import List

from pydantic import ValidationError
from sqlmodel import Session, select

from engine.dsl import parse
from engine.errors import GammaError
from engine.gamma_algebra import DecoratedGamma
from engine.invariants import Fingerprint
from models import FuzzFailureModel, FuzzRunModel
from schemas.fuzz_schema import FuzzSummarySchema
from schemas.gamma_schema import DecoratedGammaSchema, GaussSchema, TransformStepSchema, powers_from_domain

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_VERIFICATION_FAILED = 2


class CommandError(Exception):
    """Raised inside a command; main prints `detail` and exits with `exit_code`."""

    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail


# -------------------------------
# Input files
# -------------------------------
def load_gamma(path: str) -> DecoratedGamma:
    """
    Read a decorated gamma factor from a DSL file, or from its JSON mirror when the file
    name ends in .json.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CommandError(EXIT_INVALID_INPUT, f"{path}: cannot read file: {e.strerror}")
    try:
        if path.endswith(".json"):
            return DecoratedGammaSchema.model_validate_json(text).to_domain()
        return parse(text)
    except GammaError as e:
        raise CommandError(EXIT_INVALID_INPUT, f"{path}: {e.detail}")
    except ValidationError as e:
        raise CommandError(EXIT_INVALID_INPUT, f"{path}: invalid JSON document: {e}")


# -------------------------------
# Output
# -------------------------------
def emit_json(model) -> None:
    print(json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=False))


def fingerprint_delta(step: int, move: str, before: Fingerprint, after: Fingerprint) -> TransformStepSchema:
    """Field-wise change between fingerprints: differences, or quotients for q and omega."""
    delta_q = after.conductor / before.conductor
    delta_omega = after.root_number.relative_to(before.root_number)
    delta_h = [a - b for a, b in zip(after.h_values, before.h_values)]
    delta_degree = after.degree - before.degree
    return TransformStepSchema(
        step=step,
        move=move,
        delta_degree=str(delta_degree),
        delta_conductor=powers_from_domain(delta_q),
        delta_root_number=powers_from_domain(delta_omega),
        delta_h=[GaussSchema.from_domain(h) for h in delta_h],
        all_zero=delta_degree == 0 and delta_q.is_empty() and delta_omega.is_empty() and all(h.is_zero() for h in delta_h),
    )


def describe_delta(before: Fingerprint, after: Fingerprint) -> str:
    delta_omega = after.root_number.relative_to(before.root_number)
    delta_h = ", ".join(str(a - b) for a, b in zip(after.h_values, before.h_values))
    return (
        f"Δd={after.degree - before.degree} Δq={after.conductor / before.conductor} "
        f"Δω={delta_omega if not delta_omega.is_empty() else 1} ΔH*=[{delta_h}]"
    )


# -------------------------------
# Fuzz-run ledger
# -------------------------------
def record_run(db: Session, summary: FuzzSummarySchema) -> FuzzRunModel:
    run = FuzzRunModel(
        seed=summary.config.seed,
        config=summary.config.model_dump(mode="json"),
        cases_run=summary.cases_run,
        moves_checked=summary.moves_checked,
        numeric_checks=summary.numeric_checks,
        numeric_skipped=summary.numeric_skipped,
        failure_count=len(summary.failures),
        ok=summary.ok,
    )
    try:
        db.add(run)
        db.commit()
        db.refresh(run)
        for f in summary.failures:
            db.add(FuzzFailureModel(run_id=run.id, **f.model_dump()))
        db.commit()
        return run
    except Exception:
        db.rollback()
        raise


def recent_runs(db: Session, limit: int = 20) -> List[FuzzRunModel]:
    stmt = select(FuzzRunModel).order_by(FuzzRunModel.id.desc()).limit(limit)
    return list(db.exec(stmt).all())
