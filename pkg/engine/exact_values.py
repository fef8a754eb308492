import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

from engine.errors import InvalidDataError, OracleOverflowError

PI = "pi"
Base = Union[int, str]
Number = Union[int, Fraction]

# Desk-scale inputs only: trial division is fast enough below this.
MAX_FACTOR_INPUT = 10**12


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InvalidDataError(f"expected an exact rational, got {value!r}")


def _base_key(base: Base):
    return (1, 0) if base == PI else (0, base)


def _log_base(base: Base) -> float:
    return math.log(math.pi) if base == PI else math.log(base)


def factor_integer(n: int) -> Dict[int, int]:
    """Prime factorization of n >= 1 by trial division."""
    if n < 1:
        raise InvalidDataError(f"cannot factor non-positive integer {n}")
    if n > MAX_FACTOR_INPUT:
        raise InvalidDataError(f"integer {n} is too large to factor (limit {MAX_FACTOR_INPUT})")
    out: Dict[int, int] = {}
    while n % 2 == 0:
        out[2] = out.get(2, 0) + 1
        n //= 2
    d = 3
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factor_rational(q: Fraction) -> Dict[int, int]:
    """Signed prime exponents of a positive rational."""
    q = as_fraction(q)
    if q <= 0:
        raise InvalidDataError(f"expected a positive rational, got {q}")
    exps: Dict[int, int] = dict(factor_integer(q.numerator))
    for p, e in factor_integer(q.denominator).items():
        exps[p] = exps.get(p, 0) - e
    return exps


@lru_cache(maxsize=4096)
def _prime_powers(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(factor_integer(n).items())


def _normalize(items: Iterable[Tuple[Base, Number]]) -> Tuple[Tuple[Base, Fraction], ...]:
    """Composite integer bases are split into primes, so 4^1 and 2^2 are the same map."""
    acc: Dict[Base, Fraction] = {}
    for base, exp in items:
        exp = as_fraction(exp)
        if base == PI:
            acc[PI] = acc.get(PI, Fraction(0)) + exp
            continue
        if not isinstance(base, int) or isinstance(base, bool) or base < 2:
            raise InvalidDataError(f"invalid base {base!r}: expected an integer >= 2 or pi")
        for p, k in _prime_powers(base):
            acc[p] = acc.get(p, Fraction(0)) + exp * k
    return tuple(sorted(((b, e) for b, e in acc.items() if e != 0), key=lambda be: _base_key(be[0])))


@dataclass(frozen=True)
class _ExponentMap:
    """Immutable, canonically ordered map  base -> nonzero rational exponent."""

    factors: Tuple[Tuple[Base, Fraction], ...] = field(default=())

    def __post_init__(self):
        items = self.factors.items() if isinstance(self.factors, Mapping) else self.factors
        object.__setattr__(self, "factors", _normalize(items))

    @classmethod
    def of(cls, mapping: Mapping) -> "_ExponentMap":
        return cls(tuple((base if base == PI else int(base), exp) for base, exp in mapping.items()))

    def as_dict(self) -> Dict[Base, Fraction]:
        return dict(self.factors)

    def is_empty(self) -> bool:
        return not self.factors

    def _combine(self, other: "_ExponentMap", sign: int):
        return type(self)(self.factors + tuple((b, sign * e) for b, e in other.factors))

    def scaled(self, k: Number):
        k = as_fraction(k)
        return type(self)(tuple((b, e * k) for b, e in self.factors))

    def log_sum(self) -> float:
        return sum(float(e) * _log_base(b) for b, e in self.factors)

    def render(self, term) -> str:
        return "*".join(term(b, e) for b, e in self.factors)


class PowerProduct(_ExponentMap):
    """The positive real  prod b^e ; 2*pi is stored as {2: 1, pi: 1}."""

    @classmethod
    def from_rational(cls, q) -> "PowerProduct":
        return cls(tuple(factor_rational(as_fraction(q)).items()))

    def __mul__(self, other):
        if isinstance(other, PowerProduct):
            return self._combine(other, 1)
        if isinstance(other, (int, Fraction)):
            return self._combine(PowerProduct.from_rational(other), 1)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerProduct):
            return self._combine(other, -1)
        if isinstance(other, (int, Fraction)):
            return self._combine(PowerProduct.from_rational(other), -1)
        return NotImplemented

    def __pow__(self, exponent) -> "PowerProduct":
        return self.scaled(exponent)

    def inverse(self) -> "PowerProduct":
        return self.scaled(-1)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return self.render(lambda b, e: f"{b}^{e}")


class Twist(_ExponentMap):
    """The unit complex  prod b^(i*t) ; composition adds exponent maps."""

    def __mul__(self, other):
        if isinstance(other, Twist):
            return self._combine(other, 1)
        return NotImplemented

    def inverse(self) -> "Twist":
        return self.scaled(-1)

    def __str__(self) -> str:
        return self.render(lambda b, t: f"{b}^i({t})")


DEFAULT_TAG = "tag"


# Equal phases means equal tag and twist map. Assumes log p (p prime) and log pi are
# linearly independent over Q; the numeric oracle checks phases separately.
@dataclass(frozen=True)
class UnitPhase:
    tag: str = DEFAULT_TAG
    twist: Twist = field(default_factory=Twist)

    def __mul__(self, other):
        if isinstance(other, Twist):
            return UnitPhase(self.tag, self.twist * other)
        return NotImplemented

    def relative_to(self, other: "UnitPhase") -> Twist:
        if self.tag != other.tag:
            raise InvalidDataError(f"phases with different tags ({self.tag!r}, {other.tag!r}) are not comparable")
        return self.twist * other.twist.inverse()

    def __str__(self) -> str:
        if self.twist.is_empty():
            return self.tag
        return f"{self.tag}*{self.twist}"


@dataclass(frozen=True, eq=False)
class GaussianRat:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "GaussianRat":
        if isinstance(value, GaussianRat):
            return value
        return cls(as_fraction(value), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, GaussianRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __add__(self, other):
        if not isinstance(other, (GaussianRat, int, Fraction)):
            return NotImplemented
        other = GaussianRat.coerce(other)
        return GaussianRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRat(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, (GaussianRat, int, Fraction)):
            return NotImplemented
        return self + (-GaussianRat.coerce(other))

    def __rsub__(self, other):
        return GaussianRat.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRat(self.re * other, self.im * other)
        if not isinstance(other, GaussianRat):
            return NotImplemented
        return GaussianRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRat":
        return GaussianRat(self.re, -self.im)

    def inverse(self) -> "GaussianRat":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("GaussianRat division by zero")
        return GaussianRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("GaussianRat division by zero")
            return GaussianRat(self.re / other, self.im / other)
        if not isinstance(other, GaussianRat):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRat.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "GaussianRat":
        # 0**0 == 1, which the root/pole power sums rely on
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def sort_key(self) -> Tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self) -> str:
        return f"GaussianRat({self})"


ZERO = GaussianRat(0, 0)
ONE = GaussianRat(1, 0)


# -------------------------------
# Module-level operations
# -------------------------------
def pow_product_from_rational(q) -> PowerProduct:
    return PowerProduct.from_rational(q)


def phase_twist(base, t) -> Twist:
    """Twist map of base^(i*t) for a positive rational base."""
    t = as_fraction(t)
    return Twist(tuple((p, e * t) for p, e in factor_rational(as_fraction(base)).items()))


def pow_product_to_float(p: PowerProduct) -> float:
    try:
        return math.exp(p.log_sum())
    except OverflowError:
        raise OracleOverflowError(f"power product {p} is outside floating range")


def phase_to_float(u: UnitPhase, tag_value: complex = 1.0) -> complex:
    return complex(tag_value) * cmath.exp(1j * u.twist.log_sum())
