# invariant_schema.py
from typing import List, Optional

from sqlmodel import SQLModel

from engine.invariants import Fingerprint, Verdict
from schemas.gamma_schema import SCHEMA_VERSION, GaussSchema, PhaseSchema, PowerSchema, powers_from_domain


class FingerprintSchema(SQLModel):
    schema_version: int = SCHEMA_VERSION
    depth: int
    degree: str
    conductor: List[PowerSchema] = []
    root_number: PhaseSchema
    h_values: List[GaussSchema] = []
    extension: Optional[str] = None
    extension_value: Optional[str] = None

    @classmethod
    def from_domain(cls, fp: Fingerprint) -> "FingerprintSchema":
        return cls(
            depth=fp.depth,
            degree=str(fp.degree),
            conductor=powers_from_domain(fp.conductor),
            root_number=PhaseSchema.from_domain(fp.root_number),
            h_values=[GaussSchema.from_domain(h) for h in fp.h_values],
        )


class VerdictSchema(SQLModel):
    schema_version: int = SCHEMA_VERSION
    verdict: str
    depth: int
    differing: List[str] = []

    @classmethod
    def from_domain(cls, v: Verdict) -> "VerdictSchema":
        return cls(verdict=v.kind, depth=v.depth, differing=list(v.differing))
