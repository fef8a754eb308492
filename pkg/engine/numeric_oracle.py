"""Lanczos Gamma (g = 7, 9 terms) evaluated on logarithms, and the per-move ratio check."""
import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from engine.errors import NoAdmissiblePointsError, OracleOverflowError, PoleProximityError
from engine.exact_values import phase_to_float
from engine.gamma_algebra import DecoratedGamma

_logger = logging.getLogger(__name__)

LANCZOS_G = 7
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
POLE_EPS = 1e-12
# distance below which a sample point counts as sitting on a root/pole
ADMISSIBLE_EPS = 1e-6

DEFAULT_POINTS = (2.3 + 0.7j, 3.1 - 0.4j, 1.7 + 1.9j, 4.2 + 0.1j, 2.9 - 1.3j)
DEFAULT_TOLERANCE = 1e-8


def _near_pole(z: complex, eps: float) -> bool:
    nearest = round(z.real)
    return nearest <= 0 and abs(z - nearest) < eps


def log_gamma_complex(z: complex) -> complex:
    """A logarithm of Gamma(z); the branch is irrelevant because only exp() of sums is used."""
    z = complex(z)
    if _near_pole(z, POLE_EPS):
        raise PoleProximityError(f"Gamma has a pole at {z.real:.0f}; got z = {z}")
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        try:
            return math.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - log_gamma_complex(1 - z)
        except OverflowError:
            raise OracleOverflowError(f"sin(pi z) overflows at z = {z}")
    z -= 1
    x = LANCZOS_COEFFS[0]
    for i in range(1, len(LANCZOS_COEFFS)):
        x += LANCZOS_COEFFS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _exp(w: complex) -> complex:
    try:
        return cmath.exp(w)
    except OverflowError:
        raise OracleOverflowError(f"value exp({w}) is outside floating range")


def gamma_complex(z: complex) -> complex:
    return _exp(log_gamma_complex(z))


# -------------------------------
# Decorated gamma factors
# -------------------------------
def log_eval_decorated(g: DecoratedGamma, s: complex) -> complex:
    s = complex(s)
    rational = g.rational
    w = complex(rational.kappa.log_sum())
    if rational.sign < 0:
        w += 1j * math.pi
    for alpha in rational.roots:
        d = s - complex(alpha)
        if abs(d) < POLE_EPS:
            raise PoleProximityError(f"s = {s} is a root of R")
        w += cmath.log(d)
    for beta in rational.poles:
        d = s - complex(beta)
        if abs(d) < POLE_EPS:
            raise PoleProximityError(f"s = {s} is a pole of R")
        w -= cmath.log(d)
    w += s * g.gamma.Q.log_sum()
    for lam, mu in g.gamma.factors():
        w += log_gamma_complex(float(lam) * s + complex(mu))
    return w


def eval_decorated(g: DecoratedGamma, s: complex, tag_value: complex = 1.0) -> complex:
    """Value of R(s) gamma(s); tag_value is accepted for symmetry with the phase checks only."""
    return _exp(log_eval_decorated(g, s))


@dataclass(frozen=True)
class SamplePlan:
    points: Tuple[complex, ...] = DEFAULT_POINTS
    tolerance: float = DEFAULT_TOLERANCE

    def admissible(self, *objects: DecoratedGamma) -> List[complex]:
        return [s for s in self.points if all(_admissible(g, s) for g in objects)]


def _admissible(g: DecoratedGamma, s: complex) -> bool:
    for lam, mu in g.gamma.factors():
        if _near_pole(float(lam) * s + complex(mu), ADMISSIBLE_EPS):
            return False
    for z in g.rational.roots + g.rational.poles:
        if abs(s - complex(z)) < ADMISSIBLE_EPS:
            return False
    return True


@dataclass(frozen=True)
class VerifyReport:
    c: complex
    max_rel_dev: float
    omega_consistent: bool
    points_used: int
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def ok(self) -> bool:
        return self.max_rel_dev < self.tolerance and self.omega_consistent


def verify_move(
    before: DecoratedGamma,
    after: DecoratedGamma,
    plan: SamplePlan = SamplePlan(),
    tag_value: complex = 1.0,
) -> VerifyReport:
    """
    Estimate c with before(s) = c * after(s) at the first admissible point, measure how far
    the ratio drifts at the others, and check omega_after = omega_before * conj(c) / c.
    """
    points = plan.admissible(before, after)
    if len(points) < 3:
        raise NoAdmissiblePointsError(f"only {len(points)} admissible sample points, need 3")
    log_ratios = [log_eval_decorated(before, s) - log_eval_decorated(after, s) for s in points]
    base = log_ratios[0]
    deviation = max(abs(_exp(w - base) - 1) for w in log_ratios)
    c = _exp(base)
    # conj(c)/c depends only on arg(c)
    predicted = phase_to_float(before.gamma.omega, tag_value) * cmath.exp(-2j * base.imag)
    observed = phase_to_float(after.gamma.omega, tag_value)
    omega_consistent = abs(observed - predicted) <= plan.tolerance
    _logger.debug("verify_move: c=%s dev=%.3e omega_ok=%s", c, deviation, omega_consistent)
    return VerifyReport(c, deviation, omega_consistent, len(points), plan.tolerance)
