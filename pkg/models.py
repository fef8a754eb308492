# models.py
from datetime import datetime, timezone
from typing import Optional
from sqlmodel import SQLModel, Field
from sqlalchemy import Column, JSON


class FuzzRunModel(SQLModel, table=True):
    __tablename__ = "fuzz_runs"

    id: Optional[int] = Field(default=None, primary_key=True)
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc), index=True)
    seed: int = Field(index=True)
    config: dict = Field(sa_column=Column(JSON), default={})
    cases_run: int
    moves_checked: int
    numeric_checks: int = 0
    numeric_skipped: int = 0
    failure_count: int = 0
    ok: bool = Field(default=True, description="True when no case broke stability")


class FuzzFailureModel(SQLModel, table=True):
    __tablename__ = "fuzz_failures"

    id: Optional[int] = Field(default=None, primary_key=True)
    run_id: int = Field(foreign_key="fuzz_runs.id", index=True)
    case: int
    position: int
    family: str = Field(description="fact | mult")
    kind: str = Field(description="fingerprint | numeric | error")
    move: str
    detail: str
    # minimized reproducer in the text formats
    gamma: str
    trace: str
