# fuzz_schema.py
import os
from typing import TYPE_CHECKING, Dict, List

from dotenv import load_dotenv
from pydantic import field_validator
from sqlmodel import Field, SQLModel

from engine.dsl import print_gamma, print_script
from engine.invariants import DEFAULT_DEPTH
from schemas.gamma_schema import SCHEMA_VERSION

if TYPE_CHECKING:
    from engine.fuzz_harness import Failure, SuiteSummary

load_dotenv()

DEFAULT_SEED = int(os.getenv("GAMMA_INVARIANTS_SEED", "20240101"))


class FuzzConfig(SQLModel):
    seed: int = DEFAULT_SEED
    cases: int = Field(default=1000, ge=0)
    max_r: int = Field(default=4, ge=0, description="Upper bound on the number of Gamma factors")
    max_trace: int = Field(default=12, ge=0, description="Upper bound on moves per trace")
    max_m: int = Field(default=6, ge=1, description="Largest multiplication-formula order")
    max_numerator: int = Field(default=20, ge=1)
    max_denominator: int = Field(default=20, ge=1)
    depth: int = Field(default=DEFAULT_DEPTH, ge=0, le=256, description="Fingerprint depth N")
    max_factors: int = Field(default=16, ge=1, description="Splits never grow r beyond this")
    numeric: bool = True
    tolerance: float = Field(default=1e-8, gt=0)

    @field_validator("seed", mode="before")
    @classmethod
    def validate_seed(cls, v):
        if isinstance(v, str):
            v = int(v.strip())
        if not -(2**63) <= v < 2**64:
            raise ValueError("seed must fit in 64 bits")
        return v


class FuzzFailureSchema(SQLModel):
    case: int
    position: int
    family: str
    move: str
    kind: str
    detail: str
    gamma: str
    trace: str

    @classmethod
    def from_domain(cls, f: "Failure") -> "FuzzFailureSchema":
        return cls(
            case=f.case,
            position=f.position,
            family=f.move.family,
            move=str(f.move),
            kind=f.kind,
            detail=f.detail,
            gamma=print_gamma(f.gamma),
            trace=print_script(f.trace),
        )


class FuzzSummarySchema(SQLModel):
    schema_version: int = SCHEMA_VERSION
    config: FuzzConfig
    cases_run: int
    moves_checked: int
    moves_by_family: Dict[str, int] = {}
    numeric_checks: int = 0
    numeric_skipped: int = 0
    failures: List[FuzzFailureSchema] = []
    ok: bool

    @classmethod
    def from_domain(cls, summary: "SuiteSummary") -> "FuzzSummarySchema":
        return cls(
            config=summary.config,
            cases_run=summary.cases_run,
            moves_checked=summary.moves_checked,
            moves_by_family=dict(summary.moves_by_family),
            numeric_checks=summary.numeric_checks,
            numeric_skipped=summary.numeric_skipped,
            failures=[FuzzFailureSchema.from_domain(f) for f in summary.failures],
            ok=summary.ok,
        )
