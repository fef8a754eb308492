# gamma_schema.py
import re
from fractions import Fraction
from typing import List, Tuple, Union

from pydantic import field_validator
from sqlmodel import SQLModel

from engine.dsl import TAG_PATTERN
from engine.exact_values import PI, GaussianRat, PowerProduct, Twist, UnitPhase
from engine.gamma_algebra import DecoratedGamma, GammaData, RationalFactor

SCHEMA_VERSION = 1

BaseKey = Union[int, str]


def _rat(value: str) -> Fraction:
    return Fraction(value)


def _validate_rat(v):
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        try:
            Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{v!r} is not an exact rational 'p/q'")
        return v.strip()
    raise ValueError("exact rationals are written as 'p/q' strings")


class GaussSchema(SQLModel):
    re: str = "0"
    im: str = "0"

    @field_validator("re", "im", mode="before")
    @classmethod
    def check_rat(cls, v):
        return _validate_rat(v)

    @classmethod
    def from_domain(cls, z: GaussianRat) -> "GaussSchema":
        return cls(re=str(z.re), im=str(z.im))

    def to_domain(self) -> GaussianRat:
        return GaussianRat(_rat(self.re), _rat(self.im))


class PowerSchema(SQLModel):
    base: BaseKey
    exp: str

    @field_validator("base", mode="before")
    @classmethod
    def check_base(cls, v):
        if v == PI:
            return v
        if isinstance(v, str) and v.isdigit():
            v = int(v)
        if not isinstance(v, int) or v < 2:
            raise ValueError("base must be 'pi' or an integer >= 2")
        return v

    @field_validator("exp", mode="before")
    @classmethod
    def check_exp(cls, v):
        return _validate_rat(v)


def powers_from_domain(p) -> List[PowerSchema]:
    return [PowerSchema(base=b, exp=str(e)) for b, e in p.factors]


def powers_to_mapping(powers: List[PowerSchema]) -> dict:
    mapping = {}
    for p in powers:
        mapping[p.base] = mapping.get(p.base, Fraction(0)) + _rat(p.exp)
    return mapping


class PhaseSchema(SQLModel):
    tag: str = "tag"
    twist: List[PowerSchema] = []

    @field_validator("tag")
    @classmethod
    def check_tag(cls, v):
        if not re.fullmatch(TAG_PATTERN, v):
            raise ValueError(f"tag {v!r} must be an identifier (letters, digits, _)")
        return v

    @classmethod
    def from_domain(cls, u: UnitPhase) -> "PhaseSchema":
        return cls(tag=u.tag, twist=powers_from_domain(u.twist))

    def to_domain(self) -> UnitPhase:
        return UnitPhase(self.tag, Twist.of(powers_to_mapping(self.twist)))


class FactorSchema(SQLModel):
    lam: str
    mu: GaussSchema

    @field_validator("lam", mode="before")
    @classmethod
    def check_lam(cls, v):
        return _validate_rat(v)


class RationalSchema(SQLModel):
    sign: int = 1
    kappa: List[PowerSchema] = []
    roots: List[GaussSchema] = []
    poles: List[GaussSchema] = []

    @field_validator("sign")
    @classmethod
    def check_sign(cls, v):
        if v not in (1, -1):
            raise ValueError("sign must be 1 or -1")
        return v


class DecoratedGammaSchema(SQLModel):
    schema_version: int = SCHEMA_VERSION
    omega: PhaseSchema
    Q: List[PowerSchema] = []
    factors: List[FactorSchema] = []
    rational: RationalSchema = RationalSchema()

    @classmethod
    def from_domain(cls, g: DecoratedGamma) -> "DecoratedGammaSchema":
        return cls(
            omega=PhaseSchema.from_domain(g.gamma.omega),
            Q=powers_from_domain(g.gamma.Q),
            factors=[FactorSchema(lam=str(lam), mu=GaussSchema.from_domain(mu)) for lam, mu in g.gamma.factors()],
            rational=RationalSchema(
                sign=g.rational.sign,
                kappa=powers_from_domain(g.rational.kappa),
                roots=[GaussSchema.from_domain(a) for a in g.rational.roots],
                poles=[GaussSchema.from_domain(b) for b in g.rational.poles],
            ),
        )

    def to_domain(self) -> DecoratedGamma:
        gamma = GammaData(
            omega=self.omega.to_domain(),
            Q=PowerProduct.of(powers_to_mapping(self.Q)),
            lambdas=tuple(_rat(f.lam) for f in self.factors),
            mus=tuple(f.mu.to_domain() for f in self.factors),
        )
        rational = RationalFactor(
            kappa=PowerProduct.of(powers_to_mapping(self.rational.kappa)),
            roots=tuple(a.to_domain() for a in self.rational.roots),
            poles=tuple(b.to_domain() for b in self.rational.poles),
            sign=self.rational.sign,
        )
        return DecoratedGamma(rational, gamma)


class TransformStepSchema(SQLModel):
    step: int
    move: str
    delta_degree: str
    delta_conductor: List[PowerSchema] = []
    delta_root_number: List[PowerSchema] = []
    delta_h: List[GaussSchema] = []
    all_zero: bool


class TransformSchema(SQLModel):
    schema_version: int = SCHEMA_VERSION
    steps: List[TransformStepSchema] = []
    result: DecoratedGammaSchema
    result_text: str


class ReduceSchema(SQLModel):
    schema_version: int = SCHEMA_VERSION
    result: DecoratedGammaSchema
    result_text: str
    trace: str
