# oracle_schema.py
from sqlmodel import SQLModel

from engine.numeric_oracle import VerifyReport
from schemas.gamma_schema import SCHEMA_VERSION


class VerifyReportSchema(SQLModel):
    schema_version: int = SCHEMA_VERSION
    c_re: float
    c_im: float
    max_rel_dev: float
    omega_consistent: bool
    points_used: int
    tolerance: float
    ok: bool

    @classmethod
    def from_domain(cls, report: VerifyReport) -> "VerifyReportSchema":
        return cls(
            c_re=report.c.real,
            c_im=report.c.imag,
            max_rel_dev=report.max_rel_dev,
            omega_consistent=report.omega_consistent,
            points_used=report.points_used,
            tolerance=report.tolerance,
            ok=report.ok,
        )
