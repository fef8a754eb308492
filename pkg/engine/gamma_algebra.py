# gamma_algebra.py
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from engine.errors import InvalidDataError, MoveError, PatternError
from engine.exact_values import (
    GaussianRat,
    PowerProduct,
    Twist,
    UnitPhase,
    as_fraction,
    phase_twist,
)

_logger = logging.getLogger(__name__)


def _sorted_multiset(values: Iterable[GaussianRat]) -> Tuple[GaussianRat, ...]:
    return tuple(sorted((GaussianRat.coerce(v) for v in values), key=GaussianRat.sort_key))


# -------------------------------
# Data types
# -------------------------------
@dataclass(frozen=True)
class GammaData:
    omega: UnitPhase = field(default_factory=UnitPhase)
    Q: PowerProduct = field(default_factory=PowerProduct)
    lambdas: Tuple[Fraction, ...] = ()
    mus: Tuple[GaussianRat, ...] = ()

    def __post_init__(self):
        lambdas = tuple(as_fraction(lam) for lam in self.lambdas)
        mus = tuple(GaussianRat.coerce(mu) for mu in self.mus)
        if len(lambdas) != len(mus):
            raise InvalidDataError(f"got {len(lambdas)} lambdas but {len(mus)} mus")
        for j, (lam, mu) in enumerate(zip(lambdas, mus)):
            if lam <= 0:
                raise InvalidDataError(f"factor {j}: λ must be positive (λ_j > 0 required), got {lam}")
            if mu.re < 0:
                raise InvalidDataError(f"factor {j}: Re(μ) must be >= 0 (Re(μ_j) >= 0 required), got {mu}")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "mus", mus)

    @property
    def r(self) -> int:
        return len(self.lambdas)

    def factors(self) -> List[Tuple[Fraction, GaussianRat]]:
        return list(zip(self.lambdas, self.mus))

    def with_factors(self, factors: Sequence[Tuple[Fraction, GaussianRat]], **changes) -> "GammaData":
        return GammaData(
            omega=changes.get("omega", self.omega),
            Q=changes.get("Q", self.Q),
            lambdas=tuple(lam for lam, _ in factors),
            mus=tuple(mu for _, mu in factors),
        )


@dataclass(frozen=True)
class RationalFactor:
    """R(s) = sign * kappa * prod (s - alpha) / prod (s - beta), kept in cancelled form."""

    kappa: PowerProduct = field(default_factory=PowerProduct)
    roots: Tuple[GaussianRat, ...] = ()
    poles: Tuple[GaussianRat, ...] = ()
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidDataError(f"kappa sign must be +1 or -1, got {self.sign}")
        roots, poles = Counter(_sorted_multiset(self.roots)), Counter(_sorted_multiset(self.poles))
        common = roots & poles
        object.__setattr__(self, "roots", _sorted_multiset((roots - common).elements()))
        object.__setattr__(self, "poles", _sorted_multiset((poles - common).elements()))

    def is_constant(self) -> bool:
        return not self.roots and not self.poles

    def is_trivial(self) -> bool:
        return self.is_constant() and self.sign == 1 and self.kappa.is_empty()

    def with_root(self, alpha: GaussianRat) -> "RationalFactor":
        return RationalFactor(self.kappa, self.roots + (alpha,), self.poles, self.sign)

    def with_pole(self, beta: GaussianRat) -> "RationalFactor":
        return RationalFactor(self.kappa, self.roots, self.poles + (beta,), self.sign)

    def scaled(self, q: Fraction) -> "RationalFactor":
        return RationalFactor(self.kappa * q, self.roots, self.poles, self.sign)


@dataclass(frozen=True)
class DecoratedGamma:
    rational: RationalFactor = field(default_factory=RationalFactor)
    gamma: GammaData = field(default_factory=GammaData)

    @classmethod
    def plain(cls, gamma: GammaData) -> "DecoratedGamma":
        return cls(RationalFactor(), gamma)


# -------------------------------
# Moves and traces
# -------------------------------
@dataclass(frozen=True)
class Expand:
    j: int
    family = "fact"

    def __str__(self) -> str:
        return f"expand({self.j})"


@dataclass(frozen=True)
class Contract:
    j: int
    family = "fact"

    def __str__(self) -> str:
        return f"contract({self.j})"


@dataclass(frozen=True)
class Split:
    j: int
    m: int
    family = "mult"

    def __str__(self) -> str:
        return f"split({self.j},{self.m})"


@dataclass(frozen=True)
class Merge:
    indices: Tuple[int, ...]
    m: int
    family = "mult"

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(self.indices)))

    def __str__(self) -> str:
        idx = self.indices
        if idx and list(idx) == list(range(idx[0], idx[-1] + 1)):
            return f"merge({idx[0]}..{idx[-1]},{self.m})"
        return "merge({" + ",".join(str(i) for i in idx) + "}," + str(self.m) + ")"


Move = Union[Expand, Contract, Split, Merge]


@dataclass(frozen=True)
class MoveTrace:
    moves: Tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __iter__(self):
        return iter(self.moves)

    def __len__(self) -> int:
        return len(self.moves)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return MoveTrace(self.moves[item])
        return self.moves[item]

    def __add__(self, other: "MoveTrace") -> "MoveTrace":
        return MoveTrace(self.moves + tuple(other))

    def __str__(self) -> str:
        return ", ".join(str(move) for move in self.moves)


# -------------------------------
# Factorial formula
# -------------------------------
def _check_index(g: DecoratedGamma, j: int) -> None:
    if not 0 <= j < g.gamma.r:
        raise MoveError(f"factor index {j} out of range (r = {g.gamma.r})")


def expand(g: DecoratedGamma, j: int) -> DecoratedGamma:
    """Gamma(lam s + mu) -> (lam s + mu - 1) Gamma(lam s + mu - 1); needs Re(mu) >= 1."""
    _check_index(g, j)
    lam, mu = g.gamma.lambdas[j], g.gamma.mus[j]
    if mu.re < 1:
        raise MoveError(f"expand({j}) needs Re(μ) >= 1 so that Re(μ - 1) >= 0, got μ = {mu}")
    # lam s + mu - 1 = lam * (s - (1 - mu)/lam)
    rational = g.rational.scaled(lam).with_root((1 - mu) / lam)
    factors = g.gamma.factors()
    factors[j] = (lam, mu - 1)
    _logger.debug("expand(%d): μ %s -> %s", j, mu, mu - 1)
    return DecoratedGamma(rational, g.gamma.with_factors(factors))


def contract(g: DecoratedGamma, j: int) -> DecoratedGamma:
    """Gamma(lam s + mu) -> (lam s + mu)^-1 Gamma(lam s + mu + 1)."""
    _check_index(g, j)
    lam, mu = g.gamma.lambdas[j], g.gamma.mus[j]
    rational = g.rational.scaled(1 / lam).with_pole(-mu / lam)
    factors = g.gamma.factors()
    factors[j] = (lam, mu + 1)
    _logger.debug("contract(%d): μ %s -> %s", j, mu, mu + 1)
    return DecoratedGamma(rational, g.gamma.with_factors(factors))


# -------------------------------
# Multiplication formula
# -------------------------------
def split(g: DecoratedGamma, j: int, m: int) -> Tuple[DecoratedGamma, Twist]:
    """
    Replace factor j by the m factors (lam/m, (mu + k)/m), k = 0..m-1.

    Returns the new decorated gamma and the twist c-bar/c applied to omega, where
    c = m^(mu - 1/2) (2 pi)^((1-m)/2), i.e. m^(-2 i Im mu).
    """
    _check_index(g, j)
    if m < 1:
        raise MoveError(f"split order must be >= 1, got {m}")
    if m == 1:
        return g, Twist()
    lam, mu = g.gamma.lambdas[j], g.gamma.mus[j]
    update = phase_twist(m, -2 * mu.im)
    factors = g.gamma.factors()
    factors[j:j + 1] = [(lam / m, (mu + k) / m) for k in range(m)]
    gamma = g.gamma.with_factors(
        factors,
        Q=g.gamma.Q * PowerProduct.from_rational(m) ** lam,
        omega=g.gamma.omega * update,
    )
    _logger.debug("split(%d,%d): λ=%s μ=%s", j, m, lam, mu)
    return DecoratedGamma(g.rational, gamma), update


def _progression_start(lam_mu: Sequence[Tuple[Fraction, GaussianRat]], m: int) -> Tuple[Fraction, GaussianRat]:
    lams = {lam for lam, _ in lam_mu}
    if len(lams) != 1:
        raise PatternError(f"merge needs equal λ's, got {sorted(lams)}")
    mus = [mu for _, mu in lam_mu]
    start = min(mus, key=GaussianRat.sort_key)
    expected = Counter(start + Fraction(k, m) for k in range(m))
    if Counter(mus) != expected:
        raise PatternError(
            "merge needs μ's of the form μ, μ+1/m, ..., μ+(m-1)/m; got " + ", ".join(str(mu) for mu in mus)
        )
    return lams.pop(), start


def merge(g: DecoratedGamma, indices: Iterable[int], m: int) -> Tuple[DecoratedGamma, Twist]:
    """Inverse of split: m factors (lam, mu + k/m) become (m lam, m mu) at the smallest index."""
    indices = sorted(indices)
    if m < 1:
        raise MoveError(f"merge order must be >= 1, got {m}")
    if len(indices) != m or len(set(indices)) != m:
        raise PatternError(f"merge of order {m} needs {m} distinct indices, got {indices}")
    for j in indices:
        _check_index(g, j)
    factors = g.gamma.factors()
    lam, mu = _progression_start([factors[j] for j in indices], m)
    if m == 1:
        return g, Twist()
    update = phase_twist(m, 2 * m * mu.im)
    merged = (m * lam, m * mu)
    chosen = set(indices)
    new_factors = []
    for k, factor in enumerate(factors):
        if k == indices[0]:
            new_factors.append(merged)
        elif k not in chosen:
            new_factors.append(factor)
    gamma = g.gamma.with_factors(
        new_factors,
        Q=g.gamma.Q * PowerProduct.from_rational(m) ** (-m * lam),
        omega=g.gamma.omega * update,
    )
    _logger.debug("merge(%s,%d): -> λ=%s μ=%s", indices, m, merged[0], merged[1])
    return DecoratedGamma(g.rational, gamma), update


# -------------------------------
# Traces and reduction
# -------------------------------
def apply_move(g: DecoratedGamma, move: Move) -> DecoratedGamma:
    if isinstance(move, Expand):
        return expand(g, move.j)
    if isinstance(move, Contract):
        return contract(g, move.j)
    if isinstance(move, Split):
        return split(g, move.j, move.m)[0]
    if isinstance(move, Merge):
        return merge(g, move.indices, move.m)[0]
    raise MoveError(f"unknown move {move!r}")


def apply_trace(g: DecoratedGamma, trace: Iterable[Move]) -> DecoratedGamma:
    for position, move in enumerate(trace):
        try:
            g = apply_move(g, move)
        except MoveError as e:
            raise type(e)(f"{move}: {e.detail}", position=position) from e
    return g


def is_reduced(g: DecoratedGamma) -> bool:
    return all(0 <= mu.re < 1 for mu in g.gamma.mus)


def reduce(g: DecoratedGamma) -> Tuple[DecoratedGamma, MoveTrace]:
    """
    Expand every factor until 0 <= Re(mu_j) < 1.

    The k = floor(Re mu_j) expands of a factor are applied at once: roots (1 - mu + i)/lam
    for i = 0..k-1 and kappa * lam^k, the same result as k single expands.
    """
    moves: List[Move] = []
    rational = g.rational
    factors = g.gamma.factors()
    for j, (lam, mu) in enumerate(factors):
        k = math.floor(mu.re)
        if k < 1:
            continue
        rational = RationalFactor(
            kappa=rational.kappa * PowerProduct.from_rational(lam) ** k,
            roots=rational.roots + tuple((1 - mu + i) / lam for i in range(k)),
            poles=rational.poles,
            sign=rational.sign,
        )
        factors[j] = (lam, mu - k)
        moves.extend([Expand(j)] * k)
        _logger.debug("reduce: factor %d expanded %d times", j, k)
    return DecoratedGamma(rational, g.gamma.with_factors(factors)), MoveTrace(tuple(moves))
