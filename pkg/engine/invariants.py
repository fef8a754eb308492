import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

from dotenv import load_dotenv

from engine.bernoulli import MAX_INDEX, bernoulli_poly_eval
from engine.errors import DepthError, InvalidDataError
from engine.exact_values import PI, ZERO, GaussianRat, PowerProduct, UnitPhase, phase_twist
from engine.gamma_algebra import DecoratedGamma, GammaData, RationalFactor

load_dotenv()

# H(0..N) with N = 12 already separates desk-scale data; raise it for wide products.
DEFAULT_DEPTH = int(os.getenv("GAMMA_INVARIANTS_DEPTH", "12"))

GammaLike = Union[GammaData, DecoratedGamma]


def _gamma_of(g: GammaLike) -> GammaData:
    return g.gamma if isinstance(g, DecoratedGamma) else g


def _check_depth(n: int, what: str = "index") -> None:
    if n < 0:
        raise DepthError(f"{what} must be >= 0, got {n}")
    if n > MAX_INDEX:
        raise DepthError(f"{what} {n} exceeds the supported maximum {MAX_INDEX}")


# -------------------------------
# Classical invariants
# -------------------------------
def degree(g: GammaLike) -> Fraction:
    return 2 * sum(_gamma_of(g).lambdas, Fraction(0))


def conductor(g: GammaLike) -> PowerProduct:
    """q = (2 pi)^d Q^2 prod lam_j^(2 lam_j)."""
    gamma = _gamma_of(g)
    d = degree(gamma)
    q = PowerProduct({2: d, PI: d}) * gamma.Q ** 2
    for lam in gamma.lambdas:
        q = q * PowerProduct.from_rational(lam) ** (2 * lam)
    return q


def root_number(g: GammaLike) -> UnitPhase:
    """omega_F = omega prod lam_j^(-2 i Im mu_j)."""
    gamma = _gamma_of(g)
    omega = gamma.omega
    for lam, mu in gamma.factors():
        omega = omega * phase_twist(lam, -2 * mu.im)
    return omega


# -------------------------------
# H-invariants and H*
# -------------------------------
def _bernoulli_sum(gamma: GammaData, n: int) -> GaussianRat:
    total = ZERO
    for lam, mu in gamma.factors():
        total = total + bernoulli_poly_eval(n, mu) / lam ** (n - 1)
    return 2 * total


def _root_pole_sum(rational: RationalFactor, n: int) -> GaussianRat:
    """(-1)^n 2n (sum beta^(n-1) - sum alpha^(n-1)), with 0^0 = 1."""
    poles = sum((beta ** (n - 1) for beta in rational.poles), ZERO)
    roots = sum((alpha ** (n - 1) for alpha in rational.roots), ZERO)
    return (-1) ** n * 2 * n * (poles - roots)


def h_invariant(g: GammaLike, n: int) -> GaussianRat:
    """H(n) = 2 sum_j B_n(mu_j) / lam_j^(n-1)."""
    _check_depth(n)
    return _bernoulli_sum(_gamma_of(g), n)


def h_star(g: DecoratedGamma, n: int) -> GaussianRat:
    _check_depth(n)
    if n == 0:
        return GaussianRat(degree(g))
    return _bernoulli_sum(g.gamma, n) + _root_pole_sum(g.rational, n)


# -------------------------------
# Fingerprints
# -------------------------------
@dataclass(frozen=True)
class Fingerprint:
    degree: Fraction
    conductor: PowerProduct
    root_number: UnitPhase
    h_values: Tuple[GaussianRat, ...]

    @property
    def depth(self) -> int:
        return len(self.h_values) - 1

    def differences(self, other: "Fingerprint") -> List[str]:
        """Names of the components in which two fingerprints differ."""
        diffs = []
        if self.degree != other.degree:
            diffs.append("degree")
        if self.conductor != other.conductor:
            diffs.append("conductor")
        if self.root_number != other.root_number:
            diffs.append("root_number")
        for n, (a, b) in enumerate(zip(self.h_values, other.h_values)):
            if a != b:
                diffs.append(f"H*({n})")
        if len(self.h_values) != len(other.h_values):
            diffs.append("depth")
        return diffs


def fingerprint(g: DecoratedGamma, N: int = DEFAULT_DEPTH) -> Fingerprint:
    _check_depth(N, "fingerprint depth")
    return Fingerprint(
        degree=degree(g),
        conductor=conductor(g),
        root_number=root_number(g),
        h_values=tuple(h_star(g, n) for n in range(N + 1)),
    )


@dataclass(frozen=True)
class Verdict:
    """`distinct` is definitive; `fingerprint-equal` only speaks for H*(0..depth)."""

    kind: str
    depth: int
    differing: Tuple[str, ...] = ()

    @property
    def is_distinct(self) -> bool:
        return self.kind == "distinct"

    def __str__(self) -> str:
        if self.is_distinct:
            return f"distinct ({', '.join(self.differing)})"
        return f"fingerprint-equal({self.depth})"


def equivalent(a: DecoratedGamma, b: DecoratedGamma, N: int = DEFAULT_DEPTH) -> Verdict:
    diffs = fingerprint(a, N).differences(fingerprint(b, N))
    if diffs:
        return Verdict("distinct", N, tuple(diffs))
    return Verdict("fingerprint-equal", N)


# -------------------------------
# Rational-extension combinator
# -------------------------------
def rational_extension_eval(f: Callable[[Fingerprint], object], g: DecoratedGamma, N: int = DEFAULT_DEPTH):
    """
    Evaluate I*(R, data) = f(fingerprint(R gamma)).

    Restricted to constant R this is f of the plain invariants, and it is stable under
    all four moves because every fingerprint component is.
    """
    return f(fingerprint(g, N))


def _h_projection(n: int) -> Callable[[Fingerprint], GaussianRat]:
    def project(fp: Fingerprint) -> GaussianRat:
        if n > fp.depth:
            raise DepthError(f"H*({n}) requested from a fingerprint of depth {fp.depth}")
        return fp.h_values[n]

    return project


EXTENSIONS: Dict[str, Callable[[Fingerprint], object]] = {
    "degree": lambda fp: fp.degree,
    "conductor": lambda fp: fp.conductor,
    "root_number": lambda fp: fp.root_number,
    # sum of Im(mu_j): blind to the factorial formula, which only moves real parts
    "imag_mu_sum": lambda fp: fp.h_values[1].im / 2,
}


def extension(name: str) -> Callable[[Fingerprint], object]:
    """Look up a named projection; `h:<n>` selects H*(n)."""
    if name.startswith("h:"):
        try:
            n = int(name[2:])
        except ValueError:
            raise InvalidDataError(f"bad H projection {name!r}, expected h:<n>")
        _check_depth(n)
        return _h_projection(n)
    try:
        return EXTENSIONS[name]
    except KeyError:
        raise InvalidDataError(f"unknown extension {name!r}; known: h:<n>, {', '.join(EXTENSIONS)}")
